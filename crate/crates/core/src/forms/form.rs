use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Field, Poly, TLaurent, Valuation, EXACT};
use crate::error::{Error, Result};

/// Sign of `dA ∧ dB` relative to the sorted basis element `d(A ∪ B)`; zero when the
/// index sets overlap.
pub fn wedge_sign(a: u64, b: u64) -> i64 {
    if a & b != 0 {
        return 0;
    }
    let mut inversions = 0u32;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += (b & ((1u64 << i) - 1)).count_ones();
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Bit positions of a basis mask, in increasing order.
pub fn mask_indices(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut rest = mask;
    while rest != 0 {
        out.push(rest.trailing_zeros() as usize);
        rest &= rest - 1;
    }
    out
}

/// A `j`-form `Σ c_K dK` whose coefficients are truncated Laurent series in `t`.
///
/// Basis bit 0 is `dt`; bit `k >= 1` is the differential of coefficient variable
/// `k - 1`. `precision` remembers how far the form is known even when a coefficient
/// cancels to zero and is dropped.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffForm {
    field: Field,
    nvars: usize,
    degree: usize,
    terms: BTreeMap<u64, TLaurent>,
    precision: i64,
}

pub const DT: u64 = 1;

/// Basis bit of `d(var_i)` in a [`DiffForm`].
pub fn dvar(i: usize) -> u64 {
    1u64 << (i + 1)
}

impl DiffForm {
    pub fn zero(field: Field, nvars: usize, degree: usize) -> DiffForm {
        assert!(nvars < 63, "too many variables");
        DiffForm { field, nvars, degree, terms: BTreeMap::new(), precision: EXACT }
    }

    pub fn from_terms(field: Field, nvars: usize, degree: usize, terms: impl IntoIterator<Item = (u64, TLaurent)>) -> DiffForm {
        let mut w = DiffForm::zero(field, nvars, degree);
        for (m, c) in terms {
            w.add_term(m, &c);
        }
        w
    }

    /// `c · dK` where `K` is given as a mask.
    pub fn term(mask: u64, c: TLaurent) -> DiffForm {
        let mut w = DiffForm::zero(c.field(), c.nvars(), mask.count_ones() as usize);
        w.add_term(mask, &c);
        w
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn precision(&self) -> i64 {
        self.terms.values().map(|c| c.precision()).fold(self.precision, i64::min)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &TLaurent)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coefficient(&self, mask: u64) -> Option<&TLaurent> {
        self.terms.get(&mask)
    }

    /// Number of basis differentials, `1 + nvars`.
    pub fn basis_len(&self) -> usize {
        self.nvars + 1
    }

    pub fn add_term(&mut self, mask: u64, c: &TLaurent) {
        assert_eq!(mask.count_ones() as usize, self.degree, "basis element of wrong degree");
        assert!(mask >> self.basis_len() == 0, "basis element out of range");
        assert!(c.field() == self.field && c.nvars() == self.nvars, "coefficient from another ring");
        self.precision = self.precision.min(c.precision());
        let sum = match self.terms.remove(&mask) {
            Some(old) => old.add(c),
            None => c.clone(),
        };
        self.precision = self.precision.min(sum.precision());
        if !sum.is_zero() {
            self.terms.insert(mask, sum);
        }
    }

    fn check(&self, other: &DiffForm) {
        assert!(
            self.field == other.field && self.nvars == other.nvars,
            "forms over different rings"
        );
    }

    pub fn add(&self, other: &DiffForm) -> DiffForm {
        self.check(other);
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut out = self.clone();
        out.precision = out.precision.min(other.precision);
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        out
    }

    pub fn neg(&self) -> DiffForm {
        DiffForm {
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &DiffForm) -> DiffForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &TLaurent) -> Result<DiffForm> {
        self.scale_trunc(c, EXACT)
    }

    pub fn scale_trunc(&self, c: &TLaurent, cap: i64) -> Result<DiffForm> {
        let mut out = DiffForm::zero(self.field, self.nvars, self.degree);
        out.precision = self.precision.min(cap);
        for (m, a) in &self.terms {
            out.add_term(*m, &a.mul_trunc(c, cap)?);
        }
        Ok(out)
    }

    pub fn truncate(&self, precision: i64) -> DiffForm {
        let mut out = DiffForm::zero(self.field, self.nvars, self.degree);
        out.precision = self.precision.min(precision);
        for (m, c) in &self.terms {
            out.add_term(*m, &c.truncate(precision));
        }
        out
    }

    pub fn wedge(&self, other: &DiffForm) -> Result<DiffForm> {
        self.wedge_trunc(other, EXACT)
    }

    pub fn wedge_trunc(&self, other: &DiffForm, cap: i64) -> Result<DiffForm> {
        self.check(other);
        let mut out = DiffForm::zero(self.field, self.nvars, self.degree + other.degree);
        out.precision = self.precision.min(other.precision).min(cap);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let s = wedge_sign(*ma, *mb);
                if s == 0 {
                    continue;
                }
                let prod = ca.mul_trunc(cb, cap)?;
                out.add_term(ma | mb, &if s < 0 { prod.neg() } else { prod });
            }
        }
        Ok(out)
    }

    /// `d` over the prime field: `d(c t^e dK) = e c t^{e-1} dt∧dK + Σ ∂c/∂x_i t^e dx_i∧dK`.
    pub fn exterior_derivative(&self) -> Result<DiffForm> {
        let mut out = DiffForm::zero(self.field, self.nvars, self.degree + 1);
        out.precision = if self.precision >= EXACT { EXACT } else { self.precision - 1 };
        for (m, c) in &self.terms {
            if m & DT == 0 {
                let dc = c.t_derivative()?;
                let s = wedge_sign(DT, *m);
                out.add_term(m | DT, &if s < 0 { dc.neg() } else { dc });
            }
            for i in 0..self.nvars {
                let b = dvar(i);
                if m & b != 0 {
                    continue;
                }
                let dc = c.partial_derivative(i);
                let s = wedge_sign(b, *m);
                out.add_term(m | b, &if s < 0 { dc.neg() } else { dc });
            }
        }
        Ok(out)
    }

    /// Smallest coefficient valuation.
    pub fn valuation(&self) -> Valuation {
        self.terms.values().map(|c| c.valuation()).min().unwrap_or(Valuation::Infinity)
    }

    pub fn pole_bound(&self) -> i64 {
        self.terms.values().map(|c| c.pole_bound()).max().unwrap_or(0)
    }

    /// Apply a map to every coefficient, keeping the basis.
    pub fn map_coefficients(&self, field: Field, nvars: usize, f: impl Fn(&TLaurent) -> Result<TLaurent>) -> Result<DiffForm> {
        let mut out = DiffForm::zero(field, nvars, self.degree);
        out.precision = self.precision;
        for (m, c) in &self.terms {
            out.add_term(*m, &f(c)?);
        }
        Ok(out)
    }

    /// Re-index into a ring with `nvars` variables; variable `i` becomes `map[i]`
    /// and `dx_i` follows it.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> DiffForm {
        let mut out = DiffForm::zero(self.field, nvars, self.degree);
        out.precision = self.precision;
        for (m, c) in &self.terms {
            let mut new_mask = m & DT;
            for i in mask_indices(m & !DT) {
                new_mask |= dvar(map[i - 1]);
            }
            out.add_term(new_mask, &c.embed(nvars, map));
        }
        out
    }
}

/// A form `Σ f_K dK` with polynomial coefficients and no `dt`: bit `k` is `d(var_k)`.
/// Used for forms on the divisor and for fiber elements of the oracle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyForm {
    field: Field,
    nvars: usize,
    degree: usize,
    terms: BTreeMap<u64, Poly>,
}

impl PolyForm {
    pub fn zero(field: Field, nvars: usize, degree: usize) -> PolyForm {
        PolyForm { field, nvars, degree, terms: BTreeMap::new() }
    }

    pub fn term(mask: u64, c: Poly) -> PolyForm {
        let mut w = PolyForm::zero(c.field(), c.nvars(), mask.count_ones() as usize);
        w.add_term(mask, &c);
        w
    }

    /// The function `f` seen as a 0-form.
    pub fn function(f: Poly) -> PolyForm {
        PolyForm::term(0, f)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Poly)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coefficient(&self, mask: u64) -> Poly {
        self.terms.get(&mask).cloned().unwrap_or_else(|| Poly::zero(self.field, self.nvars))
    }

    pub fn add_term(&mut self, mask: u64, c: &Poly) {
        assert_eq!(mask.count_ones() as usize, self.degree, "basis element of wrong degree");
        assert!(mask >> self.nvars == 0, "basis element out of range");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(old) => {
                old.add_assign(c);
                if old.is_zero() {
                    self.terms.remove(&mask);
                }
            }
            None => {
                self.terms.insert(mask, c.clone());
            }
        }
    }

    pub fn add(&self, other: &PolyForm) -> PolyForm {
        assert!(self.field == other.field && self.nvars == other.nvars && self.degree == other.degree);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        out
    }

    pub fn neg(&self) -> PolyForm {
        PolyForm { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &PolyForm) -> PolyForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Poly) -> PolyForm {
        let mut out = PolyForm::zero(self.field, self.nvars, self.degree);
        for (m, a) in &self.terms {
            out.add_term(*m, &a.mul(c));
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> PolyForm {
        self.scale(&Poly::from_int(self.field, self.nvars, n))
    }

    pub fn wedge(&self, other: &PolyForm) -> PolyForm {
        let mut out = PolyForm::zero(self.field, self.nvars, self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let s = wedge_sign(*ma, *mb);
                if s != 0 {
                    out.add_term(ma | mb, &ca.mul(cb).scale_int(s));
                }
            }
        }
        out
    }

    pub fn exterior_derivative(&self) -> PolyForm {
        let mut out = PolyForm::zero(self.field, self.nvars, self.degree + 1);
        for (m, c) in &self.terms {
            for i in 0..self.nvars {
                let b = 1u64 << i;
                let s = wedge_sign(b, *m);
                if s != 0 {
                    out.add_term(m | b, &c.partial_derivative(i).scale_int(s));
                }
            }
        }
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(&Poly) -> Result<Poly>) -> Result<PolyForm> {
        let mut out = PolyForm::zero(self.field, self.nvars, self.degree);
        for (m, c) in &self.terms {
            out.add_term(*m, &f(c)?);
        }
        Ok(out)
    }

    /// Apply `Frob^s`: raise coefficients to the `p^s` power (and fix the basis).
    pub fn frobenius_coefficients(&self, s: u32) -> Result<PolyForm> {
        self.map_coefficients(|c| c.frobenius_power(s))
    }
}

/// Convert a `dt`-free [`DiffForm`] basis mask into a [`PolyForm`] mask.
pub fn residue_mask(mask: u64) -> Result<u64> {
    if mask & DT != 0 {
        return Err(Error::Incompatible("basis element contains dt".into()));
    }
    Ok(mask >> 1)
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{c}]")?;
            for i in mask_indices(*m) {
                if i == 0 {
                    write!(f, " dt")?;
                } else {
                    write!(f, " dv{}", i - 1)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{c}]")?;
            for i in mask_indices(*m) {
                write!(f, " dv{i}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::term;

    #[test]
    fn sign_of_swapped_pair() {
        assert_eq!(wedge_sign(0b10, 0b01), -1);
        assert_eq!(wedge_sign(0b01, 0b10), 1);
        assert_eq!(wedge_sign(0b01, 0b01), 0);
    }

    #[test]
    fn dx_wedge_dt() {
        let f = Field::Prime(5);
        let one = term(f, &[0], 1, 0);
        let dx = DiffForm::term(dvar(0), one.clone());
        let dt = DiffForm::term(DT, one.clone());
        assert_eq!(dx.wedge(&dt).unwrap(), DiffForm::term(DT | dvar(0), one.neg()));
    }

    #[test]
    fn derivative_example() {
        // d(x t^-2) = t^-2 dx - 2 x t^-3 dt
        let f = Field::Prime(5);
        let w = DiffForm::term(0, term(f, &[1], 1, -2));
        let dw = w.exterior_derivative().unwrap();
        let expect = DiffForm::term(dvar(0), term(f, &[0], 1, -2)).add(&DiffForm::term(DT, term(f, &[1], -2, -3)));
        assert_eq!(dw, expect);
    }
}
