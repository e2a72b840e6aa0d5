use super::vector::WittVector;
use crate::algebra::Valuation;
use crate::error::{Error, Result};

fn ord_p(p: u32, r: u32) -> u32 {
    if r == 0 {
        return u32::MAX;
    }
    let (mut r, mut k) = (r, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    k
}

fn weighted_ok(p: u32, n: usize, i: usize, v: Valuation, bound: i64) -> bool {
    match v {
        Valuation::Infinity => true,
        Valuation::Finite(v) => (p as i64).pow((n - 1 - i) as u32) * v >= bound,
    }
}

/// Non-log (Matsuda) filtration: `p^{n-1-i} v(a_i) >= -r` for every `i`, with the
/// bound tightened to `-r + 1` at `i = n - 1 - min(n, ord_p r)`.
pub fn matsuda_member(a: &WittVector, r: u32) -> bool {
    let (p, n) = (a.p(), a.len());
    let m = ord_p(p, r).min(n as u32) as usize;
    let special = (m < n).then(|| n - 1 - m);
    (0..n).all(|i| {
        let bound = if Some(i) == special { -(r as i64) + 1 } else { -(r as i64) };
        weighted_ok(p, n, i, a.component(i).valuation(), bound)
    })
}

/// Logarithmic (Brylinski–Kato) filtration: `p^{n-1-i} v(a_i) >= -r` for every `i`.
pub fn bk_log_member(a: &WittVector, r: u32) -> bool {
    let (p, n) = (a.p(), a.len());
    (0..n).all(|i| weighted_ok(p, n, i, a.component(i).valuation(), -(r as i64)))
}

fn pole_weight(a: &WittVector) -> u32 {
    let (p, n) = (a.p() as i64, a.len());
    (0..n)
        .map(|i| p.pow((n - 1 - i) as u32) * a.component(i).pole_bound())
        .max()
        .unwrap_or(0) as u32
}

pub fn matsuda_conductor(a: &WittVector) -> u32 {
    (0..=pole_weight(a) + 1)
        .find(|&r| matsuda_member(a, r))
        .expect("the log filtration at the pole weight is inside the next Matsuda step")
}

pub fn bk_log_conductor(a: &WittVector) -> u32 {
    (0..=pole_weight(a)).find(|&r| bk_log_member(a, r)).expect("pole weight suffices")
}

/// A presentation `Σ_j F^j(β_j)` of a Witt vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FDecomposed {
    pub parts: Vec<(u32, WittVector)>,
}

impl FDecomposed {
    pub fn new(parts: Vec<(u32, WittVector)>) -> Result<FDecomposed> {
        let first = &parts.first().ok_or_else(|| Error::Input("empty decomposition".into()))?.1;
        for (_, b) in &parts {
            if b.p() != first.p() || b.len() != first.len() || b.field() != first.field() || b.nvars() != first.nvars() {
                return Err(Error::Incompatible("decomposition parts of different shape".into()));
            }
        }
        Ok(FDecomposed { parts })
    }

    pub fn p(&self) -> u32 {
        self.parts[0].1.p()
    }

    pub fn witt_length(&self) -> usize {
        self.parts[0].1.len()
    }

    /// `Σ_j F^j(β_j)`.
    pub fn recombine(&self) -> Result<WittVector> {
        let mut acc: Option<WittVector> = None;
        for (j, b) in &self.parts {
            let t = b.frobenius(*j)?;
            acc = Some(match acc {
                None => t,
                Some(a) => a.add(&t)?,
            });
        }
        Ok(acc.expect("nonempty"))
    }
}

/// Upper bound for the F-saturated conductor read off a presentation.
pub fn decomposed_fsat_bound(x: &FDecomposed) -> u32 {
    x.parts.iter().map(|(_, b)| matsuda_conductor(b)).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{const_term, Field, TLaurent, EXACT};

    fn w(p: u32, comps: &[(i64, i64)]) -> WittVector {
        let f = Field::Prime(p);
        WittVector::new(
            p,
            comps
                .iter()
                .map(|&(c, e)| if c == 0 { TLaurent::zero(f, 0, EXACT) } else { const_term(f, 0, c, e) })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn matsuda_examples() {
        let a = w(3, &[(1, -1), (0, 0)]);
        assert!(!matsuda_member(&a, 3));
        assert!(matsuda_member(&a, 4));
        assert!(matsuda_member(&w(2, &[(0, 0), (1, -2)]), 2));
        assert!(!matsuda_member(&w(2, &[(1, -1), (0, 0)]), 2));
    }

    #[test]
    fn frobenius_image_conductors() {
        let beta = w(3, &[(1, -1), (0, 0)]);
        let a = beta.frobenius(1).unwrap();
        assert_eq!(a, w(3, &[(1, -3), (0, 0)]));
        assert_eq!(matsuda_conductor(&a), 9);
        let x = FDecomposed::new(vec![(1, beta)]).unwrap();
        assert_eq!(decomposed_fsat_bound(&x), 4);
    }

    #[test]
    fn level_zero_means_integral() {
        assert!(matsuda_member(&w(2, &[(1, 0), (1, 3)]), 0));
        assert!(!matsuda_member(&w(2, &[(1, 0), (1, -1)]), 0));
    }
}
