use std::fmt;

use super::universal::witt_polys;
use crate::algebra::{Field, TLaurent, EXACT};
use crate::error::{Error, Result};

/// A truncated `p`-typical Witt vector `(a_0, …, a_{n-1})` with Laurent-series
/// components. Components live over `F_p`, or over `Q` for ghost-component checks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WittVector {
    p: u32,
    components: Vec<TLaurent>,
}

impl WittVector {
    pub fn new(p: u32, components: Vec<TLaurent>) -> Result<WittVector> {
        let first = components.first().ok_or(Error::UnsupportedWittLength(0))?;
        let (field, nvars) = (first.field(), first.nvars());
        if components.iter().any(|c| c.field() != field || c.nvars() != nvars) {
            return Err(Error::Incompatible("Witt components from different rings".into()));
        }
        match field {
            Field::Prime(q) if q != p => {
                return Err(Error::Incompatible(format!("Witt vector for p = {p} over F_{q}")));
            }
            _ => {}
        }
        Ok(WittVector { p, components })
    }

    pub fn zero(p: u32, n: usize, field: Field, nvars: usize) -> WittVector {
        WittVector { p, components: vec![TLaurent::zero(field, nvars, EXACT); n] }
    }

    /// `[x] = (x, 0, …, 0)`.
    pub fn teichmuller(p: u32, n: usize, x: TLaurent) -> Result<WittVector> {
        let mut c = vec![TLaurent::zero(x.field(), x.nvars(), EXACT); n];
        c[0] = x;
        WittVector::new(p, c)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn field(&self) -> Field {
        self.components[0].field()
    }

    pub fn nvars(&self) -> usize {
        self.components[0].nvars()
    }

    pub fn components(&self) -> &[TLaurent] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &TLaurent {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &WittVector) -> Result<()> {
        if self.p != other.p
            || self.len() != other.len()
            || self.field() != other.field()
            || self.nvars() != other.nvars()
        {
            return Err(Error::Incompatible("Witt vectors of different shape".into()));
        }
        Ok(())
    }

    fn apply(&self, other: &WittVector, which: Op, cap: i64) -> Result<WittVector> {
        self.check(other)?;
        let n = self.len();
        let polys = witt_polys(self.p, n, self.field())?;
        let table = match which {
            Op::Add => &polys.sum,
            Op::Sub => &polys.diff,
            Op::Mul => &polys.prod,
        };
        let values: Vec<TLaurent> = self.components.iter().chain(other.components.iter()).cloned().collect();
        let components = table
            .iter()
            .map(|poly| TLaurent::eval_poly(poly, &values, self.nvars(), cap))
            .collect::<Result<Vec<_>>>()?;
        Ok(WittVector { p: self.p, components })
    }

    pub fn add(&self, other: &WittVector) -> Result<WittVector> {
        self.apply(other, Op::Add, EXACT)
    }

    pub fn sub(&self, other: &WittVector) -> Result<WittVector> {
        self.apply(other, Op::Sub, EXACT)
    }

    pub fn mul(&self, other: &WittVector) -> Result<WittVector> {
        self.apply(other, Op::Mul, EXACT)
    }

    /// Difference, computing only exponents below `cap` in each component.
    pub fn sub_trunc(&self, other: &WittVector, cap: i64) -> Result<WittVector> {
        self.apply(other, Op::Sub, cap)
    }

    pub fn neg(&self) -> Result<WittVector> {
        WittVector::zero(self.p, self.len(), self.field(), self.nvars()).sub(self)
    }

    /// `m · a` by repeated addition.
    pub fn scalar_mul(&self, m: u32) -> Result<WittVector> {
        let mut acc = WittVector::zero(self.p, self.len(), self.field(), self.nvars());
        for _ in 0..m {
            acc = acc.add(self)?;
        }
        Ok(acc)
    }

    /// Verschiebung `V(a) = (0, a_0, …, a_{n-2})`.
    pub fn verschiebung(&self) -> WittVector {
        let mut c = Vec::with_capacity(self.len());
        c.push(TLaurent::zero(self.field(), self.nvars(), EXACT));
        c.extend(self.components[..self.len() - 1].iter().cloned());
        WittVector { p: self.p, components: c }
    }

    pub fn verschiebung_power(&self, k: usize) -> WittVector {
        (0..k).fold(self.clone(), |a, _| a.verschiebung())
    }

    /// `F^j`: componentwise `p^j`-th power (characteristic `p` only).
    pub fn frobenius(&self, j: u32) -> Result<WittVector> {
        let components = self.components.iter().map(|c| c.frobenius_power(j)).collect::<Result<_>>()?;
        Ok(WittVector { p: self.p, components })
    }

    /// `[c]·a = (c a_0, c^p a_1, c^{p²} a_2, …)`.
    pub fn teichmuller_scale(&self, c: &TLaurent, cap: i64) -> Result<WittVector> {
        let mut components = Vec::with_capacity(self.len());
        let mut power = c.clone();
        for (i, a) in self.components.iter().enumerate() {
            if i > 0 {
                power = power.pow_trunc(self.p, cap)?;
            }
            components.push(a.mul_trunc(&power, cap)?);
        }
        Ok(WittVector { p: self.p, components })
    }

    /// Ghost components `w_i = Σ_{j<=i} p^j a_j^{p^{i-j}}` (characteristic 0 only).
    pub fn ghost(&self) -> Result<Vec<TLaurent>> {
        if self.field() != Field::Rational {
            return Err(Error::Incompatible("ghost components need characteristic 0".into()));
        }
        let p = self.p as i64;
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let mut w = TLaurent::zero(Field::Rational, self.nvars(), EXACT);
            for j in 0..=i {
                let term = self.components[j].pow(self.p.pow((i - j) as u32))?.scale_int(p.pow(j as u32));
                w = w.add(&term);
            }
            out.push(w);
        }
        Ok(out)
    }

    pub fn map_components(&self, f: impl Fn(&TLaurent) -> Result<TLaurent>) -> Result<WittVector> {
        let components = self.components.iter().map(f).collect::<Result<Vec<_>>>()?;
        WittVector::new(self.p, components)
    }

    pub fn truncate(&self, precision: i64) -> WittVector {
        WittVector { p: self.p, components: self.components.iter().map(|c| c.truncate(precision)).collect() }
    }

    /// Componentwise restriction to the curve `x_i = φ_i(t)`.
    pub fn restrict_to_curve(&self, phi: &[TLaurent]) -> Result<WittVector> {
        self.map_components(|c| c.substitute_vars(phi))
    }
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Sub,
    Mul,
}

impl fmt::Display for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::const_term;

    #[test]
    fn one_plus_one_in_w2_f2() {
        let f = Field::Prime(2);
        let one = WittVector::new(2, vec![const_term(f, 0, 1, 0), TLaurent::zero(f, 0, EXACT)]).unwrap();
        let two = one.add(&one).unwrap();
        assert!(two.component(0).is_zero());
        assert_eq!(two.component(1), &const_term(f, 0, 1, 0));
    }

    #[test]
    fn negation_round_trip() {
        let f = Field::Prime(2);
        let a = WittVector::new(2, vec![const_term(f, 0, 1, -1), const_term(f, 0, 1, 2)]).unwrap();
        assert!(a.add(&a.neg().unwrap()).unwrap().is_zero());
    }
}
