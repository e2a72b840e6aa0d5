use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use super::field::{Coef, Field};
use crate::error::{Error, Result};

/// Exponent vector; its length equals the number of variables of the ring.
pub type Monomial = SmallVec<[u32; 4]>;

/// Sparse multivariate polynomial over a [`Field`]. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, Coef>,
}

impl Poly {
    pub fn zero(field: Field, nvars: usize) -> Poly {
        Poly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, nvars: usize, c: Coef) -> Poly {
        let mut p = Poly::zero(field, nvars);
        p.add_term(Monomial::from_elem(0, nvars), c);
        p
    }

    pub fn one(field: Field, nvars: usize) -> Poly {
        Poly::constant(field, nvars, field.one())
    }

    pub fn from_int(field: Field, nvars: usize, v: i64) -> Poly {
        Poly::constant(field, nvars, field.from_i64(v))
    }

    pub fn var(field: Field, nvars: usize, i: usize) -> Poly {
        let mut m = Monomial::from_elem(0, nvars);
        m[i] = 1;
        Poly::monomial(field, m, field.one())
    }

    pub fn monomial(field: Field, exps: Monomial, c: Coef) -> Poly {
        let mut p = Poly::zero(field, exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coef)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Coef)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &[u32]) -> Coef {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Constant term if the polynomial is a constant, `None` otherwise.
    pub fn as_constant(&self) -> Option<Coef> {
        match self.terms.len() {
            0 => Some(self.field.zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Coef) {
        debug_assert_eq!(m.len(), self.nvars);
        if self.field.is_zero(&c) {
            return;
        }
        let f = self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = f.add(e.get(), &c);
                if f.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, other: &Poly) {
        assert!(
            self.field == other.field && self.nvars == other.nvars,
            "polynomials from different rings"
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn add_assign(&mut self, other: &Poly) {
        self.check(other);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn neg(&self) -> Poly {
        let f = self.field;
        Poly {
            field: f,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Coef) -> Poly {
        let f = self.field;
        let mut out = Poly::zero(f, self.nvars);
        if f.is_zero(c) {
            return out;
        }
        for (m, a) in &self.terms {
            out.add_term(m.clone(), f.mul(a, c));
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> Poly {
        self.scale(&self.field.from_i64(n))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check(other);
        let f = self.field;
        let mut out = Poly::zero(f, self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb.iter()).map(|(a, b)| a + b).collect();
                out.add_term(m, f.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.field, self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m[i]).max()
    }

    /// `∂/∂x_i`, with the exponent reduced in the coefficient field.
    pub fn partial_derivative(&self, i: usize) -> Poly {
        let f = self.field;
        let mut out = Poly::zero(f, self.nvars);
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[i] -= 1;
            out.add_term(m2, f.scale_int(c, m[i] as i64));
        }
        out
    }

    /// Raise to the `p^j`-th power. Over `F_p` coefficients are fixed by Frobenius, so
    /// only exponents move.
    pub fn frobenius_power(&self, j: u32) -> Result<Poly> {
        let p = match self.field {
            Field::Prime(p) => p,
            Field::Rational => return Err(Error::NeedsPositiveCharacteristic),
        };
        let q = p.pow(j);
        let mut out = Poly::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.iter().map(|e| e * q).collect(), c.clone());
        }
        Ok(out)
    }

    /// The `p`-th root when every exponent is divisible by `p`.
    pub fn pth_root(&self) -> Result<Option<Poly>> {
        let p = match self.field {
            Field::Prime(p) => p,
            Field::Rational => return Err(Error::NeedsPositiveCharacteristic),
        };
        let mut out = Poly::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            if m.iter().any(|e| e % p != 0) {
                return Ok(None);
            }
            out.add_term(m.iter().map(|e| e / p).collect(), c.clone());
        }
        Ok(Some(out))
    }

    /// Re-index variables into a ring with `nvars` variables; old variable `i`
    /// becomes `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Poly {
        assert_eq!(map.len(), self.nvars);
        let mut out = Poly::zero(self.field, nvars);
        for (m, c) in &self.terms {
            let mut m2 = Monomial::from_elem(0, nvars);
            for (i, &e) in m.iter().enumerate() {
                m2[map[i]] += e;
            }
            out.add_term(m2, c.clone());
        }
        out
    }

    /// Keep the first `nvars` variables, dropping monomials that involve any other.
    pub fn restrict_to_prefix(&self, nvars: usize) -> Poly {
        let mut out = Poly::zero(self.field, nvars);
        for (m, c) in &self.terms {
            if m[nvars..].iter().all(|&e| e == 0) {
                out.add_term(m[..nvars].iter().copied().collect(), c.clone());
            }
        }
        out
    }

    pub fn map_coefficients(&self, field: Field, f: impl Fn(&Coef) -> Result<Coef>) -> Result<Poly> {
        let mut out = Poly::zero(field, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
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
            write!(f, "{c}")?;
            for (i, e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*v{i}")?,
                    _ => write!(f, "*v{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(f: Field) -> Poly {
        Poly::var(f, 2, 0)
    }

    #[test]
    fn derivative_of_p_power_vanishes() {
        let f = Field::Prime(3);
        assert!(x(f).pow(3).partial_derivative(0).is_zero());
        assert_eq!(x(f).pow(4).partial_derivative(0), x(f).pow(3));
    }

    #[test]
    fn freshman_dream() {
        let f = Field::Prime(5);
        let y = Poly::var(f, 2, 1);
        let s = x(f).add(&y);
        assert_eq!(s.pow(5), x(f).pow(5).add(&y.pow(5)));
        assert_eq!(s.frobenius_power(1).unwrap(), s.pow(5));
    }

    #[test]
    fn pth_root_round_trip() {
        let f = Field::Prime(2);
        let p = x(f).pow(2).add(&Poly::one(f, 2));
        assert_eq!(p.pth_root().unwrap().unwrap(), x(f).add(&Poly::one(f, 2)));
        assert!(x(f).pth_root().unwrap().is_none());
        assert!(x(Field::Rational).pth_root().is_err());
    }
}
