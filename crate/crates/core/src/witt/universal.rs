use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::{Coef, Field, Poly};
use crate::error::{Error, Result};

/// Largest Witt length for which universal polynomials are built.
pub const MAX_WITT_LENGTH: usize = 4;

/// Universal sum, difference and product polynomials of `W_n`, in the variables
/// `X_0..X_{n-1}` (indices `0..n`) and `Y_0..Y_{n-1}` (indices `n..2n`).
#[derive(Debug)]
pub struct WittPolys {
    pub p: u32,
    pub n: usize,
    pub sum: Vec<Poly>,
    pub diff: Vec<Poly>,
    pub prod: Vec<Poly>,
}

type Key = (u32, usize, Field);

fn cache() -> &'static Mutex<HashMap<Key, Arc<WittPolys>>> {
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<WittPolys>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Universal polynomials for `W_n` with prime `p`, with coefficients in `field`
/// (`Q` for ghost checks, `F_p` for arithmetic in characteristic `p`).
pub fn witt_polys(p: u32, n: usize, field: Field) -> Result<Arc<WittPolys>> {
    if n == 0 || n > MAX_WITT_LENGTH {
        return Err(Error::UnsupportedWittLength(n));
    }
    if !matches!(field, Field::Rational) && field != Field::Prime(p) {
        return Err(Error::Incompatible(format!("Witt vectors for p = {p} over {field}")));
    }
    let key = (p, n, field);
    if let Some(w) = cache().lock().expect("cache poisoned").get(&key) {
        return Ok(w.clone());
    }
    let built = Arc::new(match field {
        Field::Rational => build_rational(p, n)?,
        Field::Prime(_) => {
            let q = witt_polys(p, n, Field::Rational)?;
            let reduce = |v: &Vec<Poly>| -> Result<Vec<Poly>> {
                v.iter()
                    .map(|poly| {
                        poly.map_coefficients(field, |c| match c {
                            Coef::Rat(r) => field.from_integral_rational(r),
                            Coef::Mod(_) => unreachable!(),
                        })
                    })
                    .collect()
            };
            WittPolys { p, n, sum: reduce(&q.sum)?, diff: reduce(&q.diff)?, prod: reduce(&q.prod)? }
        }
    });
    cache().lock().expect("cache poisoned").entry(key).or_insert(built.clone());
    Ok(built)
}

fn ghost_poly(p: u32, n: usize, k: usize, offset: usize) -> Poly {
    let q = Field::Rational;
    let mut w = Poly::zero(q, 2 * n);
    for i in 0..=k {
        let term = Poly::var(q, 2 * n, offset + i)
            .pow(p.pow((k - i) as u32))
            .scale(&q.from_bigint(&BigInt::from(p).pow(i as u32)));
        w.add_assign(&term);
    }
    w
}

/// `(target_k − Σ_{i<k} p^i prev_i^{p^{k−i}}) / p^k`, asserting the division is exact.
fn ghost_step(p: u32, k: usize, target: Poly, prev: &[Poly]) -> Result<Poly> {
    let q = Field::Rational;
    let mut acc = target;
    for (i, prev_i) in prev.iter().enumerate().take(k) {
        let t = prev_i.pow(p.pow((k - i) as u32)).scale(&q.from_bigint(&BigInt::from(p).pow(i as u32)));
        acc = acc.sub(&t);
    }
    let denom = BigRational::from_integer(BigInt::from(p).pow(k as u32));
    let out = acc.scale(&Coef::Rat(denom.recip()));
    for (_, c) in out.terms() {
        if let Coef::Rat(r) = c {
            if !r.is_integer() {
                return Err(Error::InexactWittDivision);
            }
        }
    }
    Ok(out)
}

fn build_rational(p: u32, n: usize) -> Result<WittPolys> {
    let (mut sum, mut diff, mut prod) = (Vec::new(), Vec::new(), Vec::new());
    for k in 0..n {
        let wx = ghost_poly(p, n, k, 0);
        let wy = ghost_poly(p, n, k, n);
        sum.push(ghost_step(p, k, wx.add(&wy), &sum)?);
        diff.push(ghost_step(p, k, wx.sub(&wy), &diff)?);
        prod.push(ghost_step(p, k, wx.mul(&wy), &prod)?);
    }
    Ok(WittPolys { p, n, sum, diff, prod })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_sum_polynomial_p2() {
        // S_1 = X_1 + Y_1 − X_0 Y_0 over Z; mod 2 the sign disappears
        let w = witt_polys(2, 2, Field::Rational).unwrap();
        let q = Field::Rational;
        let expect = Poly::var(q, 4, 1)
            .add(&Poly::var(q, 4, 3))
            .sub(&Poly::var(q, 4, 0).mul(&Poly::var(q, 4, 2)));
        assert_eq!(w.sum[1], expect);
    }

    #[test]
    fn reduction_is_cached() {
        let a = witt_polys(3, 2, Field::Prime(3)).unwrap();
        let b = witt_polys(3, 2, Field::Prime(3)).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn length_bounds() {
        assert!(witt_polys(2, 0, Field::Rational).is_err());
        assert!(witt_polys(2, MAX_WITT_LENGTH + 1, Field::Rational).is_err());
        assert!(witt_polys(3, 1, Field::Prime(5)).is_err());
    }
}
