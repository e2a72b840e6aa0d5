use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::filtration::omega_fas_member;
use super::form::{mask_indices, DiffForm, PolyForm, DT};
use crate::algebra::Field;
use crate::error::{Error, Result};

/// Which pole one-form `dz_i / z^n` a characteristic-form entry sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PoleIndex {
    /// `dt / t^n`
    T,
    /// `dx_{i+1} / t^n` (0-based)
    X(usize),
}

pub trait Symbol: Clone + PartialEq {
    fn is_zero(&self) -> bool;
}

/// `Σ_i (dz_i / z^level) ⊗ symbol_i`, with zero symbols never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharForm<S> {
    pub level: u32,
    entries: BTreeMap<PoleIndex, S>,
}

impl<S: Symbol> CharForm<S> {
    pub fn new(level: u32) -> CharForm<S> {
        CharForm { level, entries: BTreeMap::new() }
    }

    pub fn from_entries(level: u32, entries: impl IntoIterator<Item = (PoleIndex, S)>) -> CharForm<S> {
        let mut c = CharForm::new(level);
        for (i, s) in entries {
            c.set(i, s);
        }
        c
    }

    pub fn set(&mut self, index: PoleIndex, s: S) {
        if s.is_zero() {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, s);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&PoleIndex, &S)> {
        self.entries.iter()
    }

    pub fn get(&self, index: &PoleIndex) -> Option<&S> {
        self.entries.get(index)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// An element of `Ω^j_D ⊕ Ω^{j-1}_D·d ⊕ ⊕_s Ω^j_D·Frob^s`: the value of the
/// characteristic form on one pole basis element. `frob` is keyed by `s >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomValue {
    pub plain: PolyForm,
    pub dpart: PolyForm,
    pub frob: BTreeMap<u32, PolyForm>,
}

impl HomValue {
    pub fn zero(field: Field, nvars: usize, degree: usize) -> HomValue {
        HomValue {
            plain: PolyForm::zero(field, nvars, degree),
            dpart: PolyForm::zero(field, nvars, degree.saturating_sub(1)),
            frob: BTreeMap::new(),
        }
    }

    pub fn add_frob(&mut self, s: u32, w: &PolyForm) {
        let sum = match self.frob.remove(&s) {
            Some(old) => old.add(w),
            None => w.clone(),
        };
        if !sum.is_zero() {
            self.frob.insert(s, sum);
        }
    }
}

impl Symbol for HomValue {
    fn is_zero(&self) -> bool {
        self.plain.is_zero() && self.dpart.is_zero() && self.frob.is_empty()
    }
}

/// Koszul boundary `∂^j_n`: writes `ω ∈ Ω^j(nD)` as `Σ_i (dz_i / z^n) ⊗ (form on D)`.
///
/// Each term `f dz_K / t^n` contributes `Σ_s (-1)^{s-1} dz_{k_s}/t^n ⊗ f̄ dz_{K∖k_s}`;
/// a `dt` left in the remainder restricts to zero on `D`.
pub fn koszul_partial(w: &DiffForm, n: u32) -> Result<BTreeMap<PoleIndex, PolyForm>> {
    let j = w.degree();
    if j == 0 {
        return Err(Error::UnsupportedDegree(0));
    }
    let n = n as i64;
    if !w.valuation().at_least(-n) {
        return Err(Error::PoleTooDeep { found: -w.valuation().finite().unwrap_or(0), allowed: n });
    }
    let (field, nvars) = (w.field(), w.nvars());
    let mut out: BTreeMap<PoleIndex, PolyForm> = BTreeMap::new();
    let mut push = |index: PoleIndex, mask: u64, coef: &crate::algebra::Poly, sign: i64| {
        let entry = out.entry(index).or_insert_with(|| PolyForm::zero(field, nvars, j - 1));
        entry.add_term(mask, &coef.scale_int(sign));
    };
    for (mask, c) in w.terms() {
        let fbar = c.coefficient(-n)?;
        if fbar.is_zero() {
            continue;
        }
        if mask & DT != 0 {
            push(PoleIndex::T, (mask & !DT) >> 1, &fbar, 1);
            continue;
        }
        for (pos, k) in mask_indices(mask).into_iter().enumerate() {
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            push(PoleIndex::X(k - 1), (mask & !(1u64 << k)) >> 1, &fbar, sign);
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// `ξ(β, α) = (β + dα) + (-1)^{j-1} (α·d)` for `β` of degree `j`, `α` of degree `j-1`.
pub fn xi(beta: &PolyForm, alpha: &PolyForm) -> HomValue {
    let j = beta.degree();
    assert_eq!(alpha.degree() + 1, j, "ξ needs deg α = deg β - 1");
    let sign = if (j - 1).is_multiple_of(2) { 1 } else { -1 };
    HomValue {
        plain: beta.add(&alpha.exterior_derivative()),
        dpart: alpha.scale_int(sign),
        frob: BTreeMap::new(),
    }
}

/// Closed-form characteristic form of `ω ∈ F^AS(X, nD)`, `n >= 2`:
/// `(id ⊗ ξ)(∂^{j+1}_n(dω), ∂^j_n(ω))`, plus `dt/t^2 ⊗ (res(t^2 ω)·Frob)` when
/// `n = p = 2`.
pub fn charform_omega(w: &DiffForm, n: u32) -> Result<CharForm<HomValue>> {
    let j = w.degree();
    if n < 2 {
        return Err(Error::UnsupportedLevel(n));
    }
    if !omega_fas_member(w, n)? {
        return Err(Error::NotMember(n));
    }
    let (field, nvars) = (w.field(), w.nvars());
    let beta = koszul_partial(&w.exterior_derivative()?, n)?;
    let alpha = koszul_partial(w, n)?;
    let mut keys: Vec<PoleIndex> = beta.keys().chain(alpha.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    let mut out = CharForm::new(n);
    for i in keys {
        let b = beta.get(&i).cloned().unwrap_or_else(|| PolyForm::zero(field, nvars, j));
        let a = alpha.get(&i).cloned().unwrap_or_else(|| PolyForm::zero(field, nvars, j - 1));
        out.set(i, xi(&b, &a));
    }
    if n == 2 && field == Field::Prime(2) {
        let mut residue = PolyForm::zero(field, nvars, j);
        for (mask, c) in w.terms() {
            if mask & DT == 0 {
                residue.add_term(mask >> 1, &c.coefficient(-2)?);
            }
        }
        let mut value = out.get(&PoleIndex::T).cloned().unwrap_or_else(|| HomValue::zero(field, nvars, j));
        value.add_frob(1, &residue);
        out.set(PoleIndex::T, value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{term, Poly};
    use crate::forms::dvar;

    fn xbar(f: Field, e: u32, c: i64) -> Poly {
        Poly::monomial(f, [e].into_iter().collect(), f.from_i64(c))
    }

    #[test]
    fn koszul_two_form_in_three_dims() {
        // ∂(f dx∧dy / t^n) = dx/t^n ⊗ f̄ dȳ − dy/t^n ⊗ f̄ dx̄
        let f = Field::Prime(5);
        let c = term(f, &[1, 0], 1, -2);
        let w = DiffForm::term(dvar(0) | dvar(1), c);
        let k = koszul_partial(&w, 2).unwrap();
        let fx = Poly::var(f, 2, 0);
        assert_eq!(k[&PoleIndex::X(0)], PolyForm::term(0b10, fx.clone()));
        assert_eq!(k[&PoleIndex::X(1)], PolyForm::term(0b01, fx.neg()));
    }

    #[test]
    fn p5_dt_example() {
        // x dt/t^3 + x^2 dx/t^2 at n = 3 → dt/t^3 ⊗ (3x̄² dx̄ + (x̄·d))
        let f = Field::Prime(5);
        let w = DiffForm::term(DT, term(f, &[1], 1, -3)).add(&DiffForm::term(dvar(0), term(f, &[2], 1, -2)));
        let c = charform_omega(&w, 3).unwrap();
        let v = c.get(&PoleIndex::T).unwrap();
        assert_eq!(v.plain, PolyForm::term(1, xbar(f, 2, 3)));
        assert_eq!(v.dpart, PolyForm::function(xbar(f, 1, 1)));
        assert!(c.get(&PoleIndex::X(0)).is_none());
    }

    #[test]
    fn p2_level2_frobenius_term() {
        let f = Field::Prime(2);
        let w = DiffForm::term(dvar(0), term(f, &[1], 1, -2));
        let c = charform_omega(&w, 2).unwrap();
        let vx = c.get(&PoleIndex::X(0)).unwrap();
        assert_eq!(vx.plain, PolyForm::term(1, xbar(f, 0, 1)));
        assert_eq!(vx.dpart, PolyForm::function(xbar(f, 1, 1)));
        let vt = c.get(&PoleIndex::T).unwrap();
        assert!(vt.plain.is_zero() && vt.dpart.is_zero());
        assert_eq!(vt.frob[&1], PolyForm::term(1, xbar(f, 1, 1)));
    }

    #[test]
    fn level_one_rejected() {
        let f = Field::Prime(3);
        let w = DiffForm::term(DT, term(f, &[0], 1, -1));
        assert_eq!(charform_omega(&w, 1), Err(Error::UnsupportedLevel(1)));
    }
}
