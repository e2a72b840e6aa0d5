//! Strict JSON encoding of the domain values.
//!
//! Every file carries a schema version, the characteristic (`0` for `Q`) and the
//! names of the coefficient variables; `t` is implicit. Unknown fields, unknown
//! variables, out-of-range residues and inconsistent headers are all rejected.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::algebra::{Coef, Field, Monomial, Poly, TLaurent, EXACT};
use crate::error::{Error, Result};
use crate::forms::{mask_indices, CharForm, DiffForm, HomValue, PoleIndex, PolyForm, DT};
use crate::witt::{FDecomposed, WittSymbol, WittVector};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    DiffForm(DiffForm),
    Witt(WittVector),
    Decomposed(FDecomposed),
    Laurent(TLaurent),
}

impl Value {
    pub fn field(&self) -> Field {
        match self {
            Value::DiffForm(w) => w.field(),
            Value::Witt(a) => a.field(),
            Value::Decomposed(x) => x.parts[0].1.field(),
            Value::Laurent(f) => f.field(),
        }
    }

    pub fn nvars(&self) -> usize {
        match self {
            Value::DiffForm(w) => w.nvars(),
            Value::Witt(a) => a.nvars(),
            Value::Decomposed(x) => x.parts[0].1.nvars(),
            Value::Laurent(f) => f.nvars(),
        }
    }

    fn kind(&self) -> Kind {
        match self {
            Value::DiffForm(_) => Kind::DiffForm,
            Value::Witt(_) => Kind::WittVector,
            Value::Decomposed(_) => Kind::FDecomposedWitt,
            Value::Laurent(_) => Kind::Laurent,
        }
    }
}

/// A value together with its file-level headers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub field: Field,
    pub variables: Vec<String>,
    pub value: Value,
}

/// `x1, x2, …`
pub fn default_variables(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Kind {
    DiffForm,
    WittVector,
    FDecomposedWitt,
    Laurent,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentJson {
    schema: u32,
    characteristic: u32,
    variables: Vec<String>,
    kind: Kind,
    value: Json,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoefJson {
    Int(i64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyTermJson {
    exponents: BTreeMap<String, u32>,
    coef: CoefJson,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LaurentTermJson {
    t_exp: i64,
    poly: Vec<PolyTermJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LaurentJson {
    pole_bound: i64,
    /// `null` for an exact series.
    precision: Option<i64>,
    terms: Vec<LaurentTermJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormTermJson {
    basis: Vec<String>,
    coef: LaurentJson,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormJson {
    degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    precision: Option<i64>,
    terms: Vec<FormTermJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WittJson {
    p: u32,
    n: usize,
    components: Vec<LaurentJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecomposedPartJson {
    j: u32,
    witt: WittJson,
}

#[derive(Serialize)]
struct ResidueTermJson {
    basis: Vec<String>,
    coef: Vec<PolyTermJson>,
}

#[derive(Serialize)]
struct ResidueFormJson {
    degree: usize,
    terms: Vec<ResidueTermJson>,
}

#[derive(Serialize)]
struct FrobJson {
    s: u32,
    form: ResidueFormJson,
}

#[derive(Serialize)]
struct OmegaEntryJson {
    index: String,
    plain: ResidueFormJson,
    dpart: ResidueFormJson,
    frob: Vec<FrobJson>,
}

#[derive(Serialize)]
struct OmegaCharFormJson {
    level: u32,
    entries: Vec<OmegaEntryJson>,
}

#[derive(Serialize)]
struct WittPartJson {
    s: u32,
    coef: Vec<PolyTermJson>,
}

#[derive(Serialize)]
struct WittEntryJson {
    index: String,
    parts: Vec<WittPartJson>,
}

#[derive(Serialize)]
struct WittCharFormJson {
    level: u32,
    witt_length: usize,
    entries: Vec<WittEntryJson>,
}

fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

struct Ctx<'a> {
    field: Field,
    vars: &'a [String],
}

impl Ctx<'_> {
    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn var_index(&self, name: &str) -> Result<usize> {
        self.vars.iter().position(|v| v == name).ok_or_else(|| input(format!("unknown variable `{name}`")))
    }

    fn coef_to_json(&self, c: &Coef) -> CoefJson {
        match c {
            Coef::Mod(v) => CoefJson::Int(*v as i64),
            Coef::Rat(q) => match (q.is_integer(), q.to_integer().to_i64()) {
                (true, Some(v)) => CoefJson::Int(v),
                _ => CoefJson::Text(q.to_string()),
            },
        }
    }

    fn coef_from_json(&self, c: &CoefJson) -> Result<Coef> {
        match (self.field, c) {
            (Field::Prime(p), CoefJson::Int(v)) => {
                if *v < 0 || *v >= p as i64 {
                    return Err(input(format!("coefficient {v} is not a residue in 0..{p}")));
                }
                Ok(Coef::Mod(*v as u32))
            }
            (Field::Prime(_), CoefJson::Text(s)) => Err(input(format!("coefficient `{s}` must be an integer residue"))),
            (Field::Rational, CoefJson::Int(v)) => Ok(Field::Rational.from_i64(*v)),
            (Field::Rational, CoefJson::Text(s)) => {
                let q = BigRational::from_str(s.trim()).map_err(|_| input(format!("bad rational `{s}`")))?;
                Ok(Coef::Rat(q))
            }
        }
    }

    fn poly_to_json(&self, p: &Poly) -> Vec<PolyTermJson> {
        p.terms()
            .map(|(m, c)| PolyTermJson {
                exponents: m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e != 0)
                    .map(|(i, &e)| (self.vars[i].clone(), e))
                    .collect(),
                coef: self.coef_to_json(c),
            })
            .collect()
    }

    fn poly_from_json(&self, terms: &[PolyTermJson]) -> Result<Poly> {
        let mut out = Poly::zero(self.field, self.nvars());
        for t in terms {
            let mut m = Monomial::from_elem(0, self.nvars());
            for (name, &e) in &t.exponents {
                m[self.var_index(name)?] = e;
            }
            out.add_term(m, self.coef_from_json(&t.coef)?);
        }
        Ok(out)
    }

    fn laurent_to_json(&self, f: &TLaurent) -> LaurentJson {
        LaurentJson {
            pole_bound: f.pole_bound(),
            precision: (!f.is_exact()).then(|| f.precision()),
            terms: f.terms().map(|(e, p)| LaurentTermJson { t_exp: e, poly: self.poly_to_json(p) }).collect(),
        }
    }

    fn laurent_from_json(&self, j: &LaurentJson) -> Result<TLaurent> {
        if j.pole_bound < 0 {
            return Err(input("pole_bound must be non-negative"));
        }
        let precision = match j.precision {
            None => EXACT,
            Some(n) if n < 0 => return Err(input("precision must be non-negative: the polar part is exact")),
            Some(n) if n >= EXACT => return Err(input("precision too large; use null for exact series")),
            Some(n) => n,
        };
        let mut out = TLaurent::zero(self.field, self.nvars(), precision);
        for t in &j.terms {
            if t.t_exp < -j.pole_bound {
                return Err(input(format!("t-exponent {} is below the declared pole bound {}", t.t_exp, j.pole_bound)));
            }
            if t.t_exp >= precision {
                return Err(input(format!("t-exponent {} is beyond the precision {precision}", t.t_exp)));
            }
            out.add_term(t.t_exp, &self.poly_from_json(&t.poly)?);
        }
        Ok(out)
    }

    /// Names of the one-form basis: `dt`, then `d<var>`.
    fn basis_names(&self, mask: u64, with_dt: bool) -> Vec<String> {
        mask_indices(mask)
            .into_iter()
            .map(|b| match (with_dt, b) {
                (true, 0) => "dt".to_string(),
                (true, b) => format!("d{}", self.vars[b - 1]),
                (false, b) => format!("d{}", self.vars[b]),
            })
            .collect()
    }

    fn basis_mask(&self, names: &[String]) -> Result<u64> {
        let mut mask = 0u64;
        for name in names {
            let bit = if name == "dt" {
                DT
            } else {
                let v = name.strip_prefix('d').ok_or_else(|| input(format!("bad basis element `{name}`")))?;
                1u64 << (self.var_index(v)? + 1)
            };
            if mask & bit != 0 {
                return Err(input(format!("repeated basis element `{name}`")));
            }
            mask |= bit;
        }
        Ok(mask)
    }

    fn form_to_json(&self, w: &DiffForm) -> FormJson {
        let precision = w.precision();
        FormJson {
            degree: w.degree(),
            precision: (precision < EXACT && w.terms().all(|(_, c)| c.precision() > precision)).then_some(precision),
            terms: w
                .terms()
                .map(|(m, c)| FormTermJson { basis: self.basis_names(m, true), coef: self.laurent_to_json(c) })
                .collect(),
        }
    }

    fn form_from_json(&self, j: &FormJson) -> Result<DiffForm> {
        if j.degree > self.nvars() + 1 {
            return Err(input(format!("degree {} exceeds the number of basis differentials", j.degree)));
        }
        let mut out = DiffForm::zero(self.field, self.nvars(), j.degree);
        for t in &j.terms {
            if t.basis.len() != j.degree {
                return Err(input(format!("basis {:?} does not have degree {}", t.basis, j.degree)));
            }
            let mask = self.basis_mask(&t.basis)?;
            let mask_sorted_names = self.basis_names(mask, true);
            if mask_sorted_names != t.basis {
                return Err(input(format!("basis {:?} must be listed in the order {:?}", t.basis, mask_sorted_names)));
            }
            out.add_term(mask, &self.laurent_from_json(&t.coef)?);
        }
        Ok(match j.precision {
            Some(n) if n < 0 => return Err(input("precision must be non-negative")),
            Some(n) => out.truncate(n),
            None => out,
        })
    }

    fn witt_to_json(&self, a: &WittVector) -> WittJson {
        WittJson { p: a.p(), n: a.len(), components: a.components().iter().map(|c| self.laurent_to_json(c)).collect() }
    }

    fn witt_from_json(&self, j: &WittJson) -> Result<WittVector> {
        match self.field {
            Field::Prime(q) if q != j.p => {
                return Err(input(format!("Witt vector for p = {} in a file of characteristic {q}", j.p)));
            }
            _ => {}
        }
        Field::from_characteristic(j.p).map_err(|_| input(format!("unsupported prime {}", j.p)))?;
        if j.n == 0 || j.n != j.components.len() {
            return Err(input(format!("declared length {} but {} components", j.n, j.components.len())));
        }
        if j.n > crate::witt::MAX_WITT_LENGTH {
            return Err(input(format!("Witt length {} is not supported", j.n)));
        }
        let comps = j.components.iter().map(|c| self.laurent_from_json(c)).collect::<Result<Vec<_>>>()?;
        WittVector::new(j.p, comps)
    }

    fn residue_to_json(&self, w: &PolyForm) -> ResidueFormJson {
        ResidueFormJson {
            degree: w.degree(),
            terms: w
                .terms()
                .map(|(m, c)| ResidueTermJson { basis: self.basis_names(m, false), coef: self.poly_to_json(c) })
                .collect(),
        }
    }

    fn index_name(&self, i: &PoleIndex) -> String {
        match i {
            PoleIndex::T => "t".to_string(),
            PoleIndex::X(k) => self.vars[*k].clone(),
        }
    }
}

fn check_variables(vars: &[String]) -> Result<()> {
    for (i, v) in vars.iter().enumerate() {
        let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok || v == "t" {
            return Err(input(format!("bad variable name `{v}`")));
        }
        if vars[..i].contains(v) {
            return Err(input(format!("variable `{v}` declared twice")));
        }
    }
    Ok(())
}

impl Document {
    /// Wrap a value with the default variable names.
    pub fn new(value: Value) -> Document {
        Document { field: value.field(), variables: default_variables(value.nvars()), value }
    }

    pub fn to_json(&self) -> Json {
        let ctx = Ctx { field: self.field, vars: &self.variables };
        let value = match &self.value {
            Value::DiffForm(w) => serde_json::to_value(ctx.form_to_json(w)),
            Value::Witt(a) => serde_json::to_value(ctx.witt_to_json(a)),
            Value::Decomposed(x) => serde_json::to_value(
                x.parts.iter().map(|(j, b)| DecomposedPartJson { j: *j, witt: ctx.witt_to_json(b) }).collect::<Vec<_>>(),
            ),
            Value::Laurent(f) => serde_json::to_value(ctx.laurent_to_json(f)),
        }
        .expect("plain data serializes");
        serde_json::to_value(DocumentJson {
            schema: SCHEMA_VERSION,
            characteristic: self.field.characteristic(),
            variables: self.variables.clone(),
            kind: self.value.kind(),
            value,
        })
        .expect("plain data serializes")
    }

    pub fn encode(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("plain data serializes")
    }

    pub fn from_json(json: Json) -> Result<Document> {
        let doc: DocumentJson = serde_json::from_value(json).map_err(|e| input(e.to_string()))?;
        if doc.schema != SCHEMA_VERSION {
            return Err(input(format!("schema version {} is not supported (expected {SCHEMA_VERSION})", doc.schema)));
        }
        let field = Field::from_characteristic(doc.characteristic)
            .map_err(|_| input(format!("unsupported characteristic {}", doc.characteristic)))?;
        check_variables(&doc.variables)?;
        let ctx = Ctx { field, vars: &doc.variables };
        let strict = |e: serde_json::Error| input(e.to_string());
        let value = match doc.kind {
            Kind::DiffForm => Value::DiffForm(ctx.form_from_json(&serde_json::from_value(doc.value).map_err(strict)?)?),
            Kind::WittVector => Value::Witt(ctx.witt_from_json(&serde_json::from_value(doc.value).map_err(strict)?)?),
            Kind::FDecomposedWitt => {
                let parts: Vec<DecomposedPartJson> = serde_json::from_value(doc.value).map_err(strict)?;
                let parts = parts
                    .iter()
                    .map(|p| Ok((p.j, ctx.witt_from_json(&p.witt)?)))
                    .collect::<Result<Vec<_>>>()?;
                Value::Decomposed(FDecomposed::new(parts)?)
            }
            Kind::Laurent => Value::Laurent(ctx.laurent_from_json(&serde_json::from_value(doc.value).map_err(strict)?)?),
        };
        Ok(Document { field, variables: doc.variables, value })
    }

    pub fn decode(text: &str) -> Result<Document> {
        let json: Json = serde_json::from_str(text).map_err(|e| input(e.to_string()))?;
        Document::from_json(json)
    }

    /// Decode and insist on a characteristic.
    pub fn decode_expecting(text: &str, field: Field) -> Result<Document> {
        let doc = Document::decode(text)?;
        if doc.field != field {
            return Err(input(format!(
                "file declares characteristic {} but {} was requested",
                doc.field.characteristic(),
                field.characteristic()
            )));
        }
        Ok(doc)
    }
}

/// JSON for a characteristic form of `Ω^j`.
pub fn omega_charform_json(c: &CharForm<HomValue>, vars: &[String]) -> Json {
    let ctx = Ctx { field: Field::Rational, vars };
    let entries = c
        .entries()
        .map(|(i, v)| OmegaEntryJson {
            index: ctx.index_name(i),
            plain: ctx.residue_to_json(&v.plain),
            dpart: ctx.residue_to_json(&v.dpart),
            frob: v.frob.iter().map(|(s, w)| FrobJson { s: *s, form: ctx.residue_to_json(w) }).collect(),
        })
        .collect();
    serde_json::to_value(OmegaCharFormJson { level: c.level, entries }).expect("plain data serializes")
}

/// JSON for a characteristic form of `W_n`.
pub fn witt_charform_json(c: &CharForm<WittSymbol>, vars: &[String]) -> Json {
    let ctx = Ctx { field: Field::Rational, vars };
    let witt_length = c.entries().map(|(_, s)| s.witt_length).next().unwrap_or(0);
    let entries = c
        .entries()
        .map(|(i, s)| WittEntryJson {
            index: ctx.index_name(i),
            parts: s.parts.iter().map(|(k, q)| WittPartJson { s: *k, coef: ctx.poly_to_json(q) }).collect(),
        })
        .collect();
    serde_json::to_value(WittCharFormJson { level: c.level, witt_length, entries }).expect("plain data serializes")
}

/// JSON for an `H^1` characteristic form (plain coefficients).
pub fn poly_charform_json(c: &CharForm<Poly>, vars: &[String]) -> Json {
    let ctx = Ctx { field: Field::Rational, vars };
    let entries: Vec<Json> = c
        .entries()
        .map(|(i, q)| serde_json::json!({ "index": ctx.index_name(i), "coef": ctx.poly_to_json(q) }))
        .collect();
    serde_json::json!({ "level": c.level, "entries": entries })
}

/// Exact integer as JSON, falling back to a decimal string outside `i64`.
pub fn bigint_json(v: &BigInt) -> Json {
    match v.to_i64() {
        Some(x) => Json::from(x),
        None => Json::from(v.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{const_term, term};
    use crate::forms::dvar;

    #[test]
    fn form_round_trip() {
        let f = Field::Prime(5);
        let w = DiffForm::term(DT, term(f, &[1], 3, -3)).add(&DiffForm::term(dvar(0), term(f, &[2], 1, -2)));
        let doc = Document::new(Value::DiffForm(w));
        assert_eq!(Document::decode(&doc.encode()).unwrap(), doc);
    }

    #[test]
    fn truncated_series_round_trip() {
        let f = Field::Rational;
        let s = const_term(f, 1, 1, -1).add(&TLaurent::from_poly(Poly::var(f, 1, 0).scale_int(-7), 2, 5));
        let doc = Document::new(Value::Laurent(s));
        assert_eq!(Document::decode(&doc.encode()).unwrap(), doc);
    }

    #[test]
    fn rejects_bad_headers() {
        let f = Field::Prime(3);
        let doc = Document::new(Value::Laurent(const_term(f, 0, 2, -1)));
        let text = doc.encode();
        assert!(Document::decode_expecting(&text, Field::Prime(5)).is_err());
        let mut json = doc.to_json();
        json["extra"] = Json::from(1);
        assert!(Document::from_json(json).is_err());
        let bad = text.replace("\"coef\": 2", "\"coef\": 4");
        assert!(Document::decode(&bad).is_err());
    }
}
