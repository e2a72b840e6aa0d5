use std::collections::BTreeMap;

use super::delta::{delta_capped, Section};
use super::model::DilatationModel;
use crate::algebra::{Field, Monomial, Poly};
use crate::error::{Error, Result};
use crate::forms::{mask_indices, CharForm, HomValue, PoleIndex, PolyForm, DT};
use crate::witt::WittSymbol;

/// `ψ`: the restriction of `Δ` to the exceptional fiber `t = 0`, a section over
/// `k[x, τ, τ_1..τ_{d-1}]`. Fiber variables keep their ambient indices, and the
/// fiber form bit `k` is `d(var k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fiber {
    /// Forms and functions (a function is a form of degree 0).
    Form(PolyForm),
    Witt(Vec<Poly>),
}

impl Fiber {
    pub fn is_zero(&self) -> bool {
        match self {
            Fiber::Form(w) => w.is_zero(),
            Fiber::Witt(c) => c.iter().all(|p| p.is_zero()),
        }
    }
}

/// A decomposed additive element, keyed by the pole basis element each `τ` variable
/// stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdditiveElement {
    Omega(BTreeMap<PoleIndex, HomValue>),
    Witt(BTreeMap<PoleIndex, WittSymbol>),
}

/// The oracle characteristic form, in the family of the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleCharForm {
    Omega(CharForm<HomValue>),
    Witt(CharForm<WittSymbol>),
}

/// `ψ = Δ|_{t=0}` with `dt ↦ 0`. Needs `n >= 2`, where the clearing unit is 1 on the fiber.
pub fn psi_extract(a: &Section, model: &DilatationModel) -> Result<Fiber> {
    if model.level < 2 {
        return Err(Error::UnsupportedLevel(model.level));
    }
    let d = delta_capped(a, model, 1)?;
    if d.value.precision() < 1 {
        return Err(Error::PrecisionUnderflow(d.value.precision()));
    }
    if !d.value.is_regular() {
        return Err(Error::NotMember(model.level));
    }
    Ok(match &d.value {
        Section::Function(f) => Fiber::Form(PolyForm::function(f.coefficient(0)?)),
        Section::Form(w) => {
            let mut out = PolyForm::zero(model.field, model.ambient_nvars(), w.degree());
            for (mask, c) in w.terms() {
                if mask & DT == 0 {
                    out.add_term(mask >> 1, &c.coefficient(0)?);
                }
            }
            Fiber::Form(out)
        }
        Section::Witt(x) => Fiber::Witt(x.components().iter().map(|c| c.coefficient(0)).collect::<Result<_>>()?),
    })
}

struct Shape<'a> {
    model: &'a DilatationModel,
}

impl Shape<'_> {
    fn index_of_var(&self, v: usize) -> Option<PoleIndex> {
        let m = self.model;
        if v == m.tau_var() {
            Some(PoleIndex::T)
        } else if v >= m.dim && v < m.ambient_nvars() {
            Some(PoleIndex::X(v - m.dim))
        } else {
            None
        }
    }

    /// `p^s` for the allowed exponents, `s = 0` only in characteristic 0.
    fn frobenius_exponent(&self, e: u32) -> Option<u32> {
        match self.model.field {
            Field::Rational => (e == 1).then_some(0),
            Field::Prime(p) => (0..=self.model.s_max).find(|&s| p.checked_pow(s) == Some(e)),
        }
    }

    /// Split one monomial into `(pole index, s, x-part)`; it must contain exactly one
    /// `τ` variable, raised to `p^s`.
    fn split(&self, m: &Monomial) -> Result<(PoleIndex, u32, Monomial)> {
        let x = self.model.input_nvars();
        let taus: Vec<usize> = (x..m.len()).filter(|&v| m[v] != 0).collect();
        let bad = || Error::NotAdditive(format!("monomial with exponents {:?}", m.as_slice()));
        if taus.len() != 1 {
            return Err(bad());
        }
        let v = taus[0];
        let s = self.frobenius_exponent(m[v]).ok_or_else(bad)?;
        let index = self.index_of_var(v).ok_or_else(bad)?;
        Ok((index, s, m[..x].iter().copied().collect()))
    }

    fn is_tau_free(&self, c: &Poly) -> bool {
        let x = self.model.input_nvars();
        c.terms().all(|(m, _)| m[x..].iter().all(|&e| e == 0))
    }
}

/// Write `ψ` as a sum of the admitted shapes `τ_i β`, `α dτ_i`, `τ_i^{p^s} β` (forms)
/// or `V^{n-1}(τ_i^{p^s} c)` (Witt vectors). Anything else is an error.
pub fn additive_decompose(psi: &Fiber, model: &DilatationModel) -> Result<AdditiveElement> {
    let shape = Shape { model };
    let (field, x) = (model.field, model.input_nvars());
    match psi {
        Fiber::Form(w) => {
            let j = w.degree();
            let mut out: BTreeMap<PoleIndex, HomValue> = BTreeMap::new();
            let x_bits = (1u64 << x) - 1;
            for (mask, c) in w.terms() {
                let tau_bits: Vec<usize> = mask_indices(mask & !x_bits);
                match tau_bits.len() {
                    0 => {
                        for (m, coef) in c.terms() {
                            let (index, s, xm) = shape.split(m)?;
                            let beta = PolyForm::term(mask, Poly::monomial(field, xm, coef.clone()));
                            let value = out.entry(index).or_insert_with(|| HomValue::zero(field, x, j));
                            if s == 0 {
                                value.plain = value.plain.add(&beta);
                            } else {
                                value.add_frob(s, &beta);
                            }
                        }
                    }
                    1 => {
                        let index = shape
                            .index_of_var(tau_bits[0])
                            .ok_or_else(|| Error::NotAdditive(format!("differential of variable {}", tau_bits[0])))?;
                        if !shape.is_tau_free(c) {
                            return Err(Error::NotAdditive(format!("{c} multiplies a dτ")));
                        }
                        let alpha = PolyForm::term(mask & x_bits, c.restrict_to_prefix(x));
                        let value = out.entry(index).or_insert_with(|| HomValue::zero(field, x, j));
                        value.dpart = value.dpart.add(&alpha);
                    }
                    _ => return Err(Error::NotAdditive("product of two τ differentials".into())),
                }
            }
            out.retain(|_, v| !crate::forms::Symbol::is_zero(v));
            Ok(AdditiveElement::Omega(out))
        }
        Fiber::Witt(components) => {
            let n = components.len();
            if components[..n - 1].iter().any(|c| !c.is_zero()) {
                return Err(Error::NotAdditive("nonzero lower Witt component".into()));
            }
            let mut out: BTreeMap<PoleIndex, WittSymbol> = BTreeMap::new();
            for (m, coef) in components[n - 1].terms() {
                let (index, s, xm) = shape.split(m)?;
                out.entry(index).or_insert_with(|| WittSymbol::new(n)).add(s, &Poly::monomial(field, xm, coef.clone()));
            }
            out.retain(|_, v| !v.parts.is_empty());
            Ok(AdditiveElement::Witt(out))
        }
    }
}

/// `χ`: attach each decomposed piece to `dz_i / z^n`.
pub fn chi(e: &AdditiveElement, level: u32) -> OracleCharForm {
    match e {
        AdditiveElement::Omega(m) => OracleCharForm::Omega(CharForm::from_entries(level, m.clone())),
        AdditiveElement::Witt(m) => OracleCharForm::Witt(CharForm::from_entries(level, m.clone())),
    }
}

/// `χ ∘ ψ` on a member at level `n >= 2`.
pub fn oracle_charform(a: &Section, model: &DilatationModel) -> Result<OracleCharForm> {
    let psi = psi_extract(a, model)?;
    Ok(chi(&additive_decompose(&psi, model)?, model.level))
}
