use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::report::{CaseRecord, Mismatch, Suite, SuiteParams};
use super::sample;
use crate::algebra::{Field, Poly, TLaurent, Valuation, EXACT};
use crate::codec::{self, Document, Value};
use crate::dilatation::{
    additive_decompose, delta_capped, fsat_conductor, model_for, oracle_charform, oracle_member, psi_extract, ModelOptions,
    OracleCharForm, Section,
};
use crate::error::{Error, Result};
use crate::forms::{
    charform_omega, diagonal_decomposition, omega_conductor, omega_fas_member, pole_membership, restrict_to_curve,
    xi, DiffForm, PoleKind, PolyForm,
};
use crate::witt::{
    bk_log_member, charform_witt, decomposed_fsat_bound, matsuda_member, FDecomposed, WittVector,
};

/// Properties checked by the `algebra` suite, one per trial in rotation.
pub const CHECKS: [&str; 14] = [
    "poly_ring",
    "laurent_ring",
    "frobenius",
    "ghost_hom",
    "fv_is_p",
    "v_projection",
    "witt_ring",
    "d_squared",
    "xi_injective",
    "non_vanishing",
    "filtration_sandwich",
    "member_monotone",
    "precision_independence",
    "delta_additive",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Case {
    Form(DiffForm),
    Witt { x: FDecomposed, reduced: bool },
    Curve { a: Section, phi: TLaurent, c: i64, m: u32 },
    Check { check: &'static str, objects: Vec<Value>, ints: Vec<i64> },
}

fn section_value(a: &Section) -> Value {
    match a {
        Section::Form(w) => Value::DiffForm(w.clone()),
        Section::Witt(x) => Value::Witt(x.clone()),
        Section::Function(f) => Value::Laurent(f.clone()),
    }
}

fn value_section(v: Value) -> Result<Section> {
    match v {
        Value::DiffForm(w) => Ok(Section::Form(w)),
        Value::Witt(x) => Ok(Section::Witt(x)),
        Value::Laurent(f) => Ok(Section::Function(f)),
        Value::Decomposed(_) => Err(Error::Input("expected a section, found a decomposition".into())),
    }
}

fn doc(v: Value) -> serde_json::Value {
    Document::new(v).to_json()
}

impl Case {
    pub(crate) fn record(&self) -> CaseRecord {
        match self {
            Case::Form(w) => CaseRecord { kind: "form".into(), objects: vec![doc(Value::DiffForm(w.clone()))], ints: vec![] },
            Case::Witt { x, reduced } => CaseRecord {
                kind: "witt".into(),
                objects: vec![doc(Value::Decomposed(x.clone()))],
                ints: vec![*reduced as i64],
            },
            Case::Curve { a, phi, c, m } => CaseRecord {
                kind: "curve".into(),
                objects: vec![doc(section_value(a)), doc(Value::Laurent(phi.clone()))],
                ints: vec![*c, *m as i64],
            },
            Case::Check { check, objects, ints } => CaseRecord {
                kind: format!("check:{check}"),
                objects: objects.iter().cloned().map(doc).collect(),
                ints: ints.clone(),
            },
        }
    }

    pub(crate) fn from_record(r: &CaseRecord) -> Result<Case> {
        let mut objects = r
            .objects
            .iter()
            .map(|j| Ok(Document::from_json(j.clone())?.value))
            .collect::<Result<Vec<Value>>>()?
            .into_iter();
        let bad = || Error::Input(format!("malformed `{}` case", r.kind));
        let case = match r.kind.as_str() {
            "form" => match objects.next() {
                Some(Value::DiffForm(w)) => Case::Form(w),
                _ => return Err(bad()),
            },
            "witt" => match (objects.next(), r.ints.first()) {
                (Some(Value::Decomposed(x)), Some(&flag)) => Case::Witt { x, reduced: flag != 0 },
                _ => return Err(bad()),
            },
            "curve" => match (objects.next(), objects.next(), r.ints.as_slice()) {
                (Some(a), Some(Value::Laurent(phi)), &[c, m]) => {
                    Case::Curve { a: value_section(a)?, phi, c, m: u32::try_from(m).map_err(|_| bad())? }
                }
                _ => return Err(bad()),
            },
            kind => {
                let name = kind.strip_prefix("check:").ok_or_else(bad)?;
                let check = CHECKS.into_iter().find(|c| *c == name).ok_or_else(bad)?;
                Case::Check { check, objects: objects.collect(), ints: r.ints.clone() }
            }
        };
        Ok(case)
    }
}

/// Outcome of one trial.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct TrialResult {
    pub mismatches: Vec<Mismatch>,
    pub counters: BTreeMap<String, u64>,
}

impl TrialResult {
    fn count(&mut self, key: &str) {
        *self.counters.entry(key.to_string()).or_insert(0) += 1;
    }

    fn fail(&mut self, check: &str, level: Option<u32>, expected: impl ToString, found: impl ToString) {
        self.mismatches.push(Mismatch {
            check: check.to_string(),
            level,
            expected: expected.to_string(),
            found: found.to_string(),
        });
    }

    fn expect_eq<T: PartialEq + ToString>(&mut self, check: &str, level: Option<u32>, expected: T, found: T) {
        if expected != found {
            self.fail(check, level, expected, found);
        }
    }

    /// Record an error as a mismatch and hand back `None`.
    fn ok<T>(&mut self, check: &str, level: Option<u32>, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(check, level, "no error", format!("error: {e}"));
                None
            }
        }
    }
}

fn field(params: &SuiteParams) -> Field {
    Field::Prime(params.p)
}

fn degrees(params: &SuiteParams, suite: Suite) -> Vec<usize> {
    match (suite, params.degree) {
        (Suite::Topforms, _) => vec![params.dim],
        (_, Some(j)) => vec![j],
        (_, None) => (1..=params.dim).collect(),
    }
}

fn witt_lengths(params: &SuiteParams) -> Vec<usize> {
    match params.witt_length {
        Some(n) => vec![n],
        None => vec![1, 2],
    }
}

/// The cases every run starts with, independent of the seed.
pub(crate) fn sweep(suite: Suite, params: &SuiteParams) -> Vec<Case> {
    let f = field(params);
    match suite {
        Suite::Fas | Suite::Charform | Suite::Kernel | Suite::Topforms => degrees(params, suite)
            .into_iter()
            .flat_map(|j| sample::form_sweep(f, params.dim, j, params.sweep_pole))
            .map(Case::Form)
            .collect(),
        Suite::Witt => witt_lengths(params)
            .into_iter()
            .flat_map(|n| sample::witt_sweep(params.p, n, params.dim - 1, params.sweep_pole, params.max_pole))
            .map(|x| Case::Witt { x, reduced: true })
            .collect(),
        Suite::Bk | Suite::Algebra => Vec::new(),
    }
}

/// Random case number `k` (counted after the sweep), drawn from its own stream.
pub(crate) fn random_case(suite: Suite, params: &SuiteParams, rng: &mut ChaCha8Rng, k: usize) -> Result<Case> {
    let f = field(params);
    Ok(match suite {
        Suite::Fas | Suite::Charform | Suite::Kernel | Suite::Topforms => {
            let js = degrees(params, suite);
            let j = js[rng.gen_range(0..js.len())];
            Case::Form(sample::form(rng, f, params.dim, j, params.max_pole))
        }
        Suite::Witt => {
            let ns = witt_lengths(params);
            let n = ns[rng.gen_range(0..ns.len())];
            let nvars = params.dim - 1;
            // every fourth draw is an unrestricted presentation
            if k % 4 == 3 {
                Case::Witt { x: sample::general_decomposition(rng, params.p, n, nvars, params.max_pole), reduced: false }
            } else {
                Case::Witt { x: sample::reduced_decomposition(rng, params.p, n, nvars, params.max_pole), reduced: true }
            }
        }
        Suite::Bk => random_curve_case(params, rng, k)?,
        Suite::Algebra => {
            let check = CHECKS[k % CHECKS.len()];
            let (objects, ints) = draw_check(check, params.p, rng);
            Case::Check { check, objects, ints }
        }
    })
}

fn curve_conductor(a: &Section) -> Result<u32> {
    match a {
        Section::Form(w) => omega_conductor(w),
        Section::Witt(x) => fsat_conductor(x),
        Section::Function(_) => Err(Error::Input("functions have no conductor here".into())),
    }
}

fn random_curve_case(params: &SuiteParams, rng: &mut ChaCha8Rng, k: usize) -> Result<Case> {
    let f = field(params);
    let nvars = params.dim - 1;
    if nvars == 0 {
        return Err(Error::Input("the bk suite needs dim = 2".into()));
    }
    let a = if k.is_multiple_of(2) {
        Section::Form(sample::form(rng, f, params.dim, 1, params.max_pole))
    } else {
        let ns = witt_lengths(params);
        let n = ns[rng.gen_range(0..ns.len())];
        Section::Witt(sample::witt(rng, f, params.p, n, nvars, params.max_pole))
    };
    let mut phi = TLaurent::zero(f, 0, EXACT);
    for e in 1..=2 {
        phi.add_term(e, &Poly::from_int(f, 0, rng.gen_range(0..params.p as i64)));
    }
    let c = sample::coef(rng, f);
    let cond = curve_conductor(&a)?;
    let m = cond.max(1) + rng.gen_range(0..=1);
    Ok(Case::Curve { a, phi, c, m })
}

/// Run one case.
pub(crate) fn evaluate(suite: Suite, params: &SuiteParams, case: &Case) -> TrialResult {
    let mut out = TrialResult::default();
    match case {
        Case::Form(w) => eval_form(suite, params, w, &mut out),
        Case::Witt { x, reduced } => eval_witt(params, x, *reduced, &mut out),
        Case::Curve { a, phi, c, m } => eval_curve(a, phi, *c, *m, &mut out),
        Case::Check { check, objects, ints } => eval_check(check, params.p, objects, ints, &mut out),
    }
    out
}

fn charform_text(c: &OracleCharForm, nvars: usize) -> String {
    let vars = codec::default_variables(nvars);
    match c {
        OracleCharForm::Omega(c) => codec::omega_charform_json(c, &vars).to_string(),
        OracleCharForm::Witt(c) => codec::witt_charform_json(c, &vars).to_string(),
    }
}

fn is_zero_charform(c: &OracleCharForm) -> bool {
    match c {
        OracleCharForm::Omega(c) => c.is_zero(),
        OracleCharForm::Witt(c) => c.is_zero(),
    }
}

fn has_frobenius(c: &OracleCharForm) -> bool {
    match c {
        OracleCharForm::Omega(c) => c.entries().any(|(_, v)| !v.frob.is_empty()),
        OracleCharForm::Witt(c) => c.entries().any(|(_, v)| v.parts.keys().any(|&s| s > 0)),
    }
}

fn eval_form(suite: Suite, params: &SuiteParams, w: &DiffForm, out: &mut TrialResult) {
    let opts = ModelOptions::default();
    let a = Section::Form(w.clone());
    for n in params.min_level..=params.max_level {
        let lv = Some(n);
        let Some(closed) = out.ok("omega_fas_member", lv, omega_fas_member(w, n)) else { continue };
        match suite {
            Suite::Fas => {
                if let Some(oracle) = out.ok("as_member", lv, oracle_member(&a, n, &opts)) {
                    out.expect_eq("as_member = omega_fas_member", lv, closed, oracle);
                }
            }
            Suite::Topforms => {
                let plain = pole_membership(w, n as i64, PoleKind::Plain);
                let log = pole_membership(w, n as i64, PoleKind::Log);
                out.expect_eq("plain = log on top forms", lv, plain, log);
                if let Some(oracle) = out.ok("as_member", lv, oracle_member(&a, n, &opts)) {
                    out.expect_eq("as_member = omega_fas_member", lv, closed, oracle);
                }
            }
            Suite::Charform if closed && n >= 2 => {
                out.count("members");
                let Some(model) = out.ok("model", lv, model_for(&a, n, &opts)) else { continue };
                let Some(expected) = out.ok("charform_omega", lv, charform_omega(w, n)) else { continue };
                let Some(found) = out.ok("oracle_charform", lv, oracle_charform(&a, &model)) else { continue };
                let expected = OracleCharForm::Omega(expected);
                if expected != found {
                    out.fail("oracle_charform = charform_omega", lv, charform_text(&expected, w.nvars()), charform_text(&found, w.nvars()));
                }
                if has_frobenius(&expected) {
                    out.count(&format!("frobenius_terms_n{n}"));
                }
            }
            Suite::Kernel if closed && n >= 2 => {
                out.count("members");
                let Some(c) = out.ok("charform_omega", lv, charform_omega(w, n)) else { continue };
                let Some(lower) = out.ok("omega_fas_member", lv, omega_fas_member(w, n - 1)) else { continue };
                out.expect_eq("charform = 0 iff member at n-1", lv, lower, c.is_zero());
                let Some(model) = out.ok("model", lv, model_for(&a, n, &opts)) else { continue };
                let Some(psi) = out.ok("psi_extract", lv, psi_extract(&a, &model)) else { continue };
                out.ok("additive_decompose", lv, additive_decompose(&psi, &model));
                let Some(olower) = out.ok("as_member", lv, oracle_member(&a, n - 1, &opts)) else { continue };
                out.expect_eq("psi = 0 iff oracle member at n-1", lv, olower, psi.is_zero());
            }
            _ => {}
        }
    }
}

fn eval_witt(params: &SuiteParams, x: &FDecomposed, reduced: bool, out: &mut TrialResult) {
    let opts = ModelOptions::default();
    let Some(a) = out.ok("recombine", None, x.recombine()) else { return };
    let bound = decomposed_fsat_bound(x);
    let s = Section::Witt(a.clone());
    let nvars = a.nvars();
    for r in params.min_level..=params.max_level {
        let lv = Some(r);
        let Some(member) = out.ok("as_member", lv, oracle_member(&s, r, &opts)) else { continue };
        if reduced {
            out.expect_eq("as_member = presented bound", lv, r >= bound, member);
        } else if r >= bound {
            out.expect_eq("presented bound implies as_member", lv, true, member);
        }
        if !(member && r >= 2 && r >= bound) {
            continue;
        }
        out.count("members");
        let Some(model) = out.ok("model", lv, model_for(&s, r, &opts)) else { continue };
        let Some(expected) = out.ok("charform_witt", lv, charform_witt(x, r)) else { continue };
        let Some(found) = out.ok("oracle_charform", lv, oracle_charform(&s, &model)) else { continue };
        let expected = OracleCharForm::Witt(expected);
        if expected != found {
            out.fail("oracle_charform = charform_witt", lv, charform_text(&expected, nvars), charform_text(&found, nvars));
        }
        if has_frobenius(&expected) {
            out.count(&format!("frobenius_terms_r{r}"));
        }
        let Some(lower) = out.ok("as_member", lv, oracle_member(&s, r - 1, &opts)) else { continue };
        out.expect_eq("charform = 0 iff member at r-1", lv, lower, is_zero_charform(&expected));
    }
}

fn restricted_conductor(a: &Section, curve: &TLaurent) -> Result<u32> {
    let phi = std::slice::from_ref(curve);
    match a {
        Section::Form(w) => omega_conductor(&restrict_to_curve(w, phi)?),
        Section::Witt(x) => fsat_conductor(&x.restrict_to_curve(phi)?),
        Section::Function(_) => Err(Error::Input("functions have no conductor here".into())),
    }
}

fn eval_curve(a: &Section, phi: &TLaurent, c: i64, m: u32, out: &mut TrialResult) {
    let Some(cond) = out.ok("conductor", None, curve_conductor(a)) else { return };
    out.expect_eq("contact order >= conductor", None, true, m >= cond);
    let f = phi.field();
    let perturb = |m: u32| phi.add(&TLaurent::monomial(Poly::from_int(f, 0, c), m as i64));
    let Some(c1) = out.ok("restricted conductor", None, restricted_conductor(a, phi)) else { return };
    let Some(c2) = out.ok("restricted conductor", None, restricted_conductor(a, &perturb(m))) else { return };
    out.expect_eq("restricted conductors agree", Some(cond), c1, c2);
    if cond >= 2 {
        out.count("controls");
        if let Ok(c3) = restricted_conductor(a, &perturb(cond - 1)) {
            if c3 != c1 {
                out.count("controls_differing");
            }
        }
    }
}

fn form_as_value(w: &PolyForm) -> Value {
    let f = w.field();
    let mut out = DiffForm::zero(f, w.nvars(), w.degree());
    for (mask, c) in w.terms() {
        out.add_term(mask << 1, &TLaurent::monomial(c.clone(), 0));
    }
    Value::DiffForm(out)
}

fn value_as_polyform(v: &Value) -> Result<PolyForm> {
    let Value::DiffForm(w) = v else { return Err(Error::Input("expected a form".into())) };
    let mut out = PolyForm::zero(w.field(), w.nvars(), w.degree());
    for (mask, c) in w.terms() {
        if mask & 1 != 0 || c.terms().any(|(e, _)| e != 0) {
            return Err(Error::Input("expected a t-free, dt-free form".into()));
        }
        out.add_term(mask >> 1, &c.coefficient(0)?);
    }
    Ok(out)
}

fn draw_check(check: &str, p: u32, rng: &mut ChaCha8Rng) -> (Vec<Value>, Vec<i64>) {
    let fp = Field::Prime(p);
    let lap = |rng: &mut ChaCha8Rng, field| Value::Laurent(sample::laurent(rng, field, 1, 3, -4, 3));
    match check {
        "poly_ring" => {
            let v = (0..3).map(|_| Value::Laurent(TLaurent::monomial(sample::poly(rng, fp, 2, 3, 3), 0))).collect();
            (v, vec![])
        }
        "laurent_ring" | "frobenius" => ((0..3).map(|_| lap(rng, fp)).collect(), vec![]),
        "ghost_hom" => {
            let n = rng.gen_range(1..=3usize);
            let v = (0..2).map(|_| Value::Witt(sample::witt(rng, Field::Rational, p, n, 1, 2))).collect();
            (v, vec![])
        }
        "fv_is_p" | "v_projection" | "witt_ring" => {
            let n = rng.gen_range(1..=3usize);
            let v = (0..3).map(|_| Value::Witt(sample::witt(rng, fp, p, n, 1, 3))).collect();
            (v, vec![])
        }
        "d_squared" => {
            let j1 = rng.gen_range(0..=1usize);
            let j2 = rng.gen_range(0..=1usize);
            let v = vec![
                Value::DiffForm(form_any_degree(rng, fp, 3, j1)),
                Value::DiffForm(form_any_degree(rng, fp, 3, j2)),
            ];
            (v, vec![])
        }
        "xi_injective" => {
            let j = rng.gen_range(1..=2usize);
            let beta = sample::poly_form(rng, fp, 2, j, 0.3);
            let alpha = sample::poly_form(rng, fp, 2, j - 1, 0.3);
            (vec![form_as_value(&beta), form_as_value(&alpha)], vec![])
        }
        "non_vanishing" => {
            let j = rng.gen_range(1..=2usize);
            (vec![form_as_value(&sample::poly_form(rng, fp, 2, j, 0.2))], vec![])
        }
        "filtration_sandwich" => {
            let n = rng.gen_range(1..=3usize);
            let r = rng.gen_range(1..=12i64);
            (vec![Value::Witt(sample::witt(rng, fp, p, n, 1, 6))], vec![r])
        }
        "member_monotone" | "precision_independence" => {
            let n = rng.gen_range(2..=5i64);
            let v = if rng.gen_bool(0.5) {
                let dim = rng.gen_range(1..=2);
                let j = rng.gen_range(1..=dim);
                Value::DiffForm(sample::form(rng, fp, dim, j, 4))
            } else {
                let len = rng.gen_range(1..=2usize);
                Value::Witt(sample::witt(rng, fp, p, len, 1, 4))
            };
            (vec![v], vec![n])
        }
        "delta_additive" => {
            let n = rng.gen_range(1..=4i64);
            let a = sample::form(rng, fp, 2, 1, 4);
            let b = sample::form(rng, fp, 2, 1, 4);
            (vec![Value::DiffForm(a), Value::DiffForm(b)], vec![n])
        }
        _ => unreachable!("unknown check {check}"),
    }
}

fn form_any_degree(rng: &mut ChaCha8Rng, f: Field, dim: usize, j: usize) -> DiffForm {
    if j == 0 {
        DiffForm::term(0, sample::laurent(rng, f, dim - 1, 3, -3, 3))
    } else {
        sample::form(rng, f, dim, j, 3)
    }
}

fn laurents(objects: &[Value]) -> Result<Vec<TLaurent>> {
    objects
        .iter()
        .map(|v| match v {
            Value::Laurent(f) => Ok(f.clone()),
            _ => Err(Error::Input("expected a series".into())),
        })
        .collect()
}

fn witts(objects: &[Value]) -> Result<Vec<WittVector>> {
    objects
        .iter()
        .map(|v| match v {
            Value::Witt(a) => Ok(a.clone()),
            _ => Err(Error::Input("expected a Witt vector".into())),
        })
        .collect()
}

fn forms(objects: &[Value]) -> Result<Vec<DiffForm>> {
    objects
        .iter()
        .map(|v| match v {
            Value::DiffForm(w) => Ok(w.clone()),
            _ => Err(Error::Input("expected a form".into())),
        })
        .collect()
}

fn eval_check(check: &str, p: u32, objects: &[Value], ints: &[i64], out: &mut TrialResult) {
    if let Err(e) = run_check(check, p, objects, ints, out) {
        out.fail(check, None, "no error", format!("error: {e}"));
    }
}

fn sign(j: usize) -> i64 {
    if j.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn run_check(check: &str, p: u32, objects: &[Value], ints: &[i64], out: &mut TrialResult) -> Result<()> {
    let level = ints.first().map(|&n| n as u32);
    match check {
        "poly_ring" => {
            let s = laurents(objects)?;
            let (a, b, c) = (s[0].coefficient(0)?, s[1].coefficient(0)?, s[2].coefficient(0)?);
            let ok = a.add(&b).add(&c) == a.add(&b.add(&c))
                && a.mul(&b).mul(&c) == a.mul(&b.mul(&c))
                && a.mul(&b) == b.mul(&a)
                && a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c));
            out.expect_eq(check, None, true, ok);
        }
        "laurent_ring" => {
            let s = laurents(objects)?;
            let (a, b, c) = (&s[0], &s[1], &s[2]);
            let ok = a.mul(b)?.mul(c)? == a.mul(&b.mul(c)?)?
                && a.mul(b)? == b.mul(a)?
                && a.mul(&b.add(c))? == a.mul(b)?.add(&a.mul(c)?);
            out.expect_eq(check, None, true, ok);
            if let (Valuation::Finite(va), Valuation::Finite(vb)) = (a.valuation(), b.valuation()) {
                out.expect_eq("valuation additive", None, format!("{:?}", Valuation::Finite(va + vb)), format!("{:?}", a.mul(b)?.valuation()));
            }
        }
        "frobenius" => {
            let s = laurents(objects)?;
            let (a, b) = (&s[0], &s[1]);
            let fa = a.frobenius_power(1)?;
            let ok = a.add(b).frobenius_power(1)? == fa.add(&b.frobenius_power(1)?)
                && a.mul(b)?.frobenius_power(1)? == fa.mul(&b.frobenius_power(1)?)?;
            out.expect_eq(check, None, true, ok);
            out.expect_eq("pth_root of a p-th power", None, true, fa.pth_root()?.as_ref() == Some(a));
        }
        "ghost_hom" => {
            let w = witts(objects)?;
            let (a, b) = (&w[0], &w[1]);
            let (ga, gb) = (a.ghost()?, b.ghost()?);
            let sum: Vec<TLaurent> = ga.iter().zip(&gb).map(|(x, y)| x.add(y)).collect();
            let prod = ga.iter().zip(&gb).map(|(x, y)| x.mul(y)).collect::<Result<Vec<_>>>()?;
            out.expect_eq("ghost(a+b)", None, true, a.add(b)?.ghost()? == sum);
            out.expect_eq("ghost(ab)", None, true, a.mul(b)?.ghost()? == prod);
        }
        "fv_is_p" => {
            let a = &witts(objects)?[0];
            let pa = a.scalar_mul(p)?;
            out.expect_eq("F(V(a)) = p·a", None, true, a.verschiebung().frobenius(1)? == pa);
            out.expect_eq("V(F(a)) = p·a", None, true, a.frobenius(1)?.verschiebung() == pa);
        }
        "v_projection" => {
            let w = witts(objects)?;
            let (a, b) = (&w[0], &w[1]);
            let lhs = a.frobenius(1)?.mul(b)?.verschiebung();
            let rhs = a.mul(&b.verschiebung())?;
            out.expect_eq("V(F(a)·b) = a·V(b)", None, true, lhs == rhs);
        }
        "witt_ring" => {
            let w = witts(objects)?;
            let (a, b, c) = (&w[0], &w[1], &w[2]);
            let zero = WittVector::zero(p, a.len(), a.field(), a.nvars());
            out.expect_eq("a + 0 = a", None, true, &a.add(&zero)? == a);
            out.expect_eq("a - a = 0", None, true, a.sub(a)?.is_zero());
            out.expect_eq("commutative", None, true, a.add(b)? == b.add(a)?);
            out.expect_eq("associative", None, true, a.add(b)?.add(c)? == a.add(&b.add(c)?)?);
            out.expect_eq("distributive", None, true, a.mul(&b.add(c)?)? == a.mul(b)?.add(&a.mul(c)?)?);
        }
        "d_squared" => {
            let w = forms(objects)?;
            let (a, b) = (&w[0], &w[1]);
            out.expect_eq("d∘d = 0", None, true, a.exterior_derivative()?.exterior_derivative()?.is_zero());
            let lhs = a.wedge(b)?.exterior_derivative()?;
            let rhs = a
                .exterior_derivative()?
                .wedge(b)?
                .add(&a.wedge(&b.exterior_derivative()?)?.map_coefficients(a.field(), a.nvars(), |c| Ok(c.scale_int(sign(a.degree()))))?);
            out.expect_eq("Leibniz", None, true, lhs == rhs);
        }
        "xi_injective" => {
            let beta = value_as_polyform(&objects[0])?;
            let alpha = value_as_polyform(&objects[1])?;
            let v = xi(&beta, &alpha);
            let zero = v.plain.is_zero() && v.dpart.is_zero();
            out.expect_eq(check, None, beta.is_zero() && alpha.is_zero(), zero);
        }
        "non_vanishing" => {
            let beta = value_as_polyform(&objects[0])?;
            out.expect_eq(check, None, beta.is_zero(), diagonal_decomposition(&beta).gamma_is_zero());
        }
        "filtration_sandwich" => {
            let a = &witts(objects)?[0];
            let r = ints[0] as u32;
            let (lo, mid, hi) = (bk_log_member(a, r - 1), matsuda_member(a, r), bk_log_member(a, r));
            out.expect_eq("log(r-1) ⇒ matsuda(r)", level, true, !lo || mid);
            out.expect_eq("matsuda(r) ⇒ log(r)", level, true, !mid || hi);
        }
        "member_monotone" => {
            let a = value_section(objects[0].clone())?;
            let opts = ModelOptions::default();
            let mut prev = false;
            for n in 0..=6 {
                let m = oracle_member(&a, n, &opts)?;
                out.expect_eq(check, Some(n), true, !prev || m);
                prev = m;
            }
        }
        "precision_independence" => {
            let a = value_section(objects[0].clone())?;
            let n = ints[0] as u32;
            let plain = ModelOptions::default();
            let guarded = ModelOptions { guard: 5, ..ModelOptions::default() };
            let (m0, m5) = (oracle_member(&a, n, &plain)?, oracle_member(&a, n, &guarded)?);
            out.expect_eq("as_member at N and N+5", level, m0, m5);
            if m0 {
                let c0 = oracle_charform(&a, &model_for(&a, n, &plain)?)?;
                let c5 = oracle_charform(&a, &model_for(&a, n, &guarded)?)?;
                out.expect_eq("oracle_charform at N and N+5", level, true, c0 == c5);
            }
            let d0 = delta_capped(&a, &model_for(&a, n, &plain)?, 1)?;
            let d5 = delta_capped(&a, &model_for(&a, n, &guarded)?, 1)?;
            out.expect_eq("Δ below t^1 at N and N+5", level, true, d0 == d5);
        }
        "delta_additive" => {
            let w = forms(objects)?;
            let n = ints[0] as u32;
            let sum = w[0].add(&w[1]);
            let pole = w[0].pole_bound().max(w[1].pole_bound());
            let model = crate::dilatation::DilatationModel::build(sum.field(), sum.nvars() + 1, n, pole)?;
            let d = |x: &DiffForm| -> Result<DiffForm> {
                match delta_capped(&Section::Form(x.clone()), &model, 2)?.value {
                    Section::Form(v) => Ok(v),
                    _ => unreachable!(),
                }
            };
            let (da, db, ds) = (d(&w[0])?, d(&w[1])?, d(&sum)?);
            let cap = da.precision().min(db.precision()).min(ds.precision());
            out.expect_eq("Δ(a+b) = Δa + Δb", level, true, ds.truncate(cap) == da.add(&db).truncate(cap));
        }
        _ => return Err(Error::Input(format!("unknown check `{check}`"))),
    }
    Ok(())
}
