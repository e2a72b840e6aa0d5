use std::collections::BTreeMap;
use std::fmt;

use super::field::Field;
use super::poly::{Monomial, Poly};
use crate::error::{Error, Result};

/// Precision of a series that is an exact Laurent polynomial.
pub const EXACT: i64 = i64::MAX / 8;

fn shifted(prec: i64, by: i64) -> i64 {
    if prec >= EXACT {
        EXACT
    } else {
        (prec + by).min(EXACT)
    }
}

/// t-adic valuation; the zero series has valuation `Infinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    /// `v >= bound`, with `Infinity` above every bound.
    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinity => true,
        }
    }
}

/// Truncated Laurent series `Σ c_e t^e` with polynomial coefficients, known modulo
/// `t^precision`. The polar part is always exact: `precision >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TLaurent {
    field: Field,
    nvars: usize,
    terms: BTreeMap<i64, Poly>,
    precision: i64,
}

impl TLaurent {
    pub fn zero(field: Field, nvars: usize, precision: i64) -> TLaurent {
        TLaurent { field, nvars, terms: BTreeMap::new(), precision }
    }

    pub fn from_poly(poly: Poly, exponent: i64, precision: i64) -> TLaurent {
        let mut s = TLaurent::zero(poly.field(), poly.nvars(), precision);
        s.add_term(exponent, &poly);
        s
    }

    /// `c · t^k` with an exact polynomial coefficient.
    pub fn monomial(poly: Poly, k: i64) -> TLaurent {
        TLaurent::from_poly(poly, k, EXACT)
    }

    pub fn t_power(field: Field, nvars: usize, k: i64) -> TLaurent {
        TLaurent::monomial(Poly::one(field, nvars), k)
    }

    pub fn one(field: Field, nvars: usize) -> TLaurent {
        TLaurent::t_power(field, nvars, 0)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision >= EXACT
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Poly)> {
        self.terms.iter().map(|(e, p)| (*e, p))
    }

    pub fn valuation(&self) -> Valuation {
        match self.terms.keys().next() {
            Some(&e) => Valuation::Finite(e),
            None => Valuation::Infinity,
        }
    }

    /// Largest exponent stored; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Smallest `M >= 0` with every stored exponent `>= -M`.
    pub fn pole_bound(&self) -> i64 {
        match self.valuation() {
            Valuation::Finite(v) if v < 0 => -v,
            _ => 0,
        }
    }

    /// Lower bound for the valuation of the true series: the precision stands in
    /// for a series that is zero as far as it is known.
    fn effective_valuation(&self) -> i64 {
        self.valuation().finite().unwrap_or(self.precision)
    }

    pub fn coefficient(&self, e: i64) -> Result<Poly> {
        if e >= self.precision {
            return Err(Error::BeyondPrecision { exponent: e, precision: self.precision });
        }
        Ok(self.terms.get(&e).cloned().unwrap_or_else(|| Poly::zero(self.field, self.nvars)))
    }

    pub fn add_term(&mut self, e: i64, c: &Poly) {
        if e >= self.precision || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                old.add_assign(c);
                if old.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn truncate(&self, precision: i64) -> TLaurent {
        let precision = precision.min(self.precision);
        TLaurent {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.range(..precision).map(|(e, p)| (*e, p.clone())).collect(),
            precision,
        }
    }

    fn check(&self, other: &TLaurent) {
        assert!(
            self.field == other.field && self.nvars == other.nvars,
            "series over different rings"
        );
    }

    pub fn add(&self, other: &TLaurent) -> TLaurent {
        self.check(other);
        let mut out = self.truncate(other.precision);
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn neg(&self) -> TLaurent {
        TLaurent {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, p)| (*e, p.neg())).collect(),
            precision: self.precision,
        }
    }

    pub fn sub(&self, other: &TLaurent) -> TLaurent {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Poly) -> TLaurent {
        let mut out = TLaurent::zero(self.field, self.nvars, self.precision);
        for (e, p) in &self.terms {
            out.add_term(*e, &p.mul(c));
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> TLaurent {
        self.scale(&Poly::from_int(self.field, self.nvars, n))
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> TLaurent {
        TLaurent {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, p)| (e + k, p.clone())).collect(),
            precision: shifted(self.precision, k),
        }
    }

    pub fn mul(&self, other: &TLaurent) -> Result<TLaurent> {
        self.mul_trunc(other, EXACT)
    }

    /// Product, computing only exponents below `cap`.
    pub fn mul_trunc(&self, other: &TLaurent, cap: i64) -> Result<TLaurent> {
        self.check(other);
        let natural = shifted(self.precision, other.effective_valuation())
            .min(shifted(other.precision, self.effective_valuation()));
        if natural < 0 {
            return Err(Error::PrecisionUnderflow(natural));
        }
        let precision = natural.min(cap);
        let mut out = TLaurent::zero(self.field, self.nvars, precision);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if e >= precision {
                    break;
                }
                out.add_term(e, &ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn pow_trunc(&self, e: u32, cap: i64) -> Result<TLaurent> {
        let mut acc = TLaurent::one(self.field, self.nvars).truncate(cap);
        for _ in 0..e {
            acc = acc.mul_trunc(self, cap)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32) -> Result<TLaurent> {
        self.pow_trunc(e, EXACT)
    }

    /// Inverse of a series whose `t^0` coefficient is a nonzero constant and which has
    /// no polar part, via the geometric-series recursion.
    pub fn unit_inverse(&self) -> Result<TLaurent> {
        let c0 = self
            .terms
            .get(&0)
            .and_then(|p| p.as_constant())
            .filter(|c| !self.field.is_zero(c))
            .ok_or(Error::NotAUnit)?;
        if self.valuation() != Valuation::Finite(0) {
            return Err(Error::NotAUnit);
        }
        if self.is_exact() {
            return Err(Error::Incompatible(
                "unit_inverse needs a finite precision; truncate first".into(),
            ));
        }
        let f = self.field;
        let inv0 = f.inv(&c0)?;
        let n = self.precision;
        let mut b: Vec<Poly> = Vec::with_capacity(n.max(0) as usize);
        for k in 0..n {
            if k == 0 {
                b.push(Poly::constant(f, self.nvars, inv0.clone()));
                continue;
            }
            let mut acc = Poly::zero(f, self.nvars);
            for (&i, ai) in self.terms.range(1..=k) {
                acc.add_assign(&ai.mul(&b[(k - i) as usize]));
            }
            b.push(acc.scale(&f.neg(&inv0)));
        }
        let mut out = TLaurent::zero(f, self.nvars, n);
        for (k, c) in b.into_iter().enumerate() {
            out.add_term(k as i64, &c);
        }
        Ok(out)
    }

    /// `d/dt`; loses one digit of precision.
    pub fn t_derivative(&self) -> Result<TLaurent> {
        let precision = shifted(self.precision, -1);
        if precision < 0 {
            return Err(Error::PrecisionUnderflow(precision));
        }
        let mut out = TLaurent::zero(self.field, self.nvars, precision);
        for (e, p) in &self.terms {
            out.add_term(e - 1, &p.scale_int(*e));
        }
        Ok(out)
    }

    pub fn partial_derivative(&self, i: usize) -> TLaurent {
        let mut out = TLaurent::zero(self.field, self.nvars, self.precision);
        for (e, p) in &self.terms {
            out.add_term(*e, &p.partial_derivative(i));
        }
        out
    }

    /// `p^j`-th power, which over `F_p` multiplies every exponent (of `t` and of the
    /// variables) by `p^j`.
    pub fn frobenius_power(&self, j: u32) -> Result<TLaurent> {
        let p = match self.field {
            Field::Prime(p) => p as i64,
            Field::Rational => return Err(Error::NeedsPositiveCharacteristic),
        };
        let q = p.pow(j);
        let precision = if self.is_exact() { EXACT } else { self.precision * q };
        let mut out = TLaurent::zero(self.field, self.nvars, precision);
        for (e, c) in &self.terms {
            out.add_term(e * q, &c.frobenius_power(j)?);
        }
        Ok(out)
    }

    /// The `p`-th root, when every exponent is divisible by `p`.
    pub fn pth_root(&self) -> Result<Option<TLaurent>> {
        let p = match self.field {
            Field::Prime(p) => p as i64,
            Field::Rational => return Err(Error::NeedsPositiveCharacteristic),
        };
        let precision = if self.is_exact() { EXACT } else { (self.precision + p - 1).div_euclid(p) };
        let mut out = TLaurent::zero(self.field, self.nvars, precision);
        for (e, c) in &self.terms {
            if e.rem_euclid(p) != 0 {
                return Ok(None);
            }
            match c.pth_root()? {
                Some(r) => out.add_term(e / p, &r),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    pub fn map_polys(&self, field: Field, nvars: usize, f: impl Fn(&Poly) -> Result<Poly>) -> Result<TLaurent> {
        let mut out = TLaurent::zero(field, nvars, self.precision);
        for (e, p) in &self.terms {
            out.add_term(*e, &f(p)?);
        }
        Ok(out)
    }

    pub fn embed(&self, nvars: usize, map: &[usize]) -> TLaurent {
        self.map_polys(self.field, nvars, |p| Ok(p.embed(nvars, map))).expect("embedding cannot fail")
    }

    /// Evaluate a polynomial (over the same field, one variable per entry of `values`)
    /// at series in a ring with `nvars` variables, computing only exponents below `cap`.
    pub fn eval_poly(poly: &Poly, values: &[TLaurent], nvars: usize, cap: i64) -> Result<TLaurent> {
        assert_eq!(poly.nvars(), values.len());
        let field = poly.field();
        let poles: Vec<i64> = values.iter().map(|v| v.pole_bound()).collect();
        let pole_of = |m: &Monomial| -> i64 { m.iter().zip(&poles).map(|(&e, &q)| e as i64 * q).sum() };
        let max_pole = poly.terms().map(|(m, _)| pole_of(m)).max().unwrap_or(0);
        let cache_cap = shifted(cap, max_pole);
        let mut powers: Vec<Vec<TLaurent>> =
            values.iter().map(|v| vec![TLaurent::one(field, nvars), v.truncate(cache_cap)]).collect();
        let mut out = TLaurent::zero(field, nvars, cap);
        for (m, c) in poly.terms() {
            let mut remaining = pole_of(m);
            let mut term = TLaurent::monomial(Poly::constant(field, nvars, c.clone()), 0);
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                remaining -= e as i64 * poles[i];
                let pw = power_cached(&mut powers[i], e as usize, cache_cap)?;
                term = term.mul_trunc(&pw, shifted(cap, remaining))?;
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Substitute series in `t` (over a ring with no variables) for the coefficient
    /// variables.
    pub fn substitute_vars(&self, values: &[TLaurent]) -> Result<TLaurent> {
        let mut out = TLaurent::zero(self.field, 0, self.precision);
        for (e, p) in &self.terms {
            let v = TLaurent::eval_poly(p, values, 0, EXACT)?;
            out = out.add(&v.shift(*e));
        }
        Ok(out.truncate(self.precision))
    }
}

fn power_cached(cache: &mut Vec<TLaurent>, e: usize, cap: i64) -> Result<TLaurent> {
    while cache.len() <= e {
        let next = cache[cache.len() - 1].mul_trunc(&cache[1], cap)?;
        cache.push(next);
    }
    Ok(cache[e].clone())
}

impl fmt::Display for TLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, p) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({p})*t^{e}")?;
        }
        if first {
            write!(f, "0")?;
        }
        if !self.is_exact() {
            write!(f, " + O(t^{})", self.precision)?;
        }
        Ok(())
    }
}

/// Shorthand for a constant monomial `c t^k` over a ring with `nvars` variables.
pub fn const_term(field: Field, nvars: usize, c: i64, k: i64) -> TLaurent {
    TLaurent::monomial(Poly::from_int(field, nvars, c), k)
}

/// Monomial `c · x^m · t^k`.
pub fn term(field: Field, exps: &[u32], c: i64, k: i64) -> TLaurent {
    let m: Monomial = exps.iter().copied().collect();
    TLaurent::monomial(Poly::monomial(field, m, field.from_i64(c)), k)
}
