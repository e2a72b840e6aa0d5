use super::form::{DiffForm, DT};
use crate::algebra::Field;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoleKind {
    /// `Ω^j(nD)`: every coefficient has valuation `>= -n`.
    Plain,
    /// `Ω^j(log D)((n-1)D)`: `dt`-terms may reach `-n`, the others only `-(n-1)`.
    Log,
}

pub fn pole_membership(w: &DiffForm, n: i64, kind: PoleKind) -> bool {
    w.terms().all(|(mask, c)| {
        let bound = match kind {
            PoleKind::Plain => -n,
            PoleKind::Log if mask & DT != 0 => -n,
            PoleKind::Log => -(n - 1),
        };
        c.valuation().at_least(bound)
    })
}

/// The branch used at level `n`: plain when `p > 0` divides `n`, logarithmic otherwise.
pub fn fas_kind(field: Field, n: u32) -> PoleKind {
    match field {
        Field::Prime(p) if n.is_multiple_of(p) => PoleKind::Plain,
        _ => PoleKind::Log,
    }
}

/// Membership in `F^AS(X, nD)` for `F = Ω^j`, `j >= 1`. Level 0 is the sheaf of
/// regular forms.
pub fn omega_fas_member(w: &DiffForm, n: u32) -> Result<bool> {
    if w.degree() == 0 {
        return Err(Error::UnsupportedDegree(0));
    }
    if n == 0 {
        return Ok(pole_membership(w, 0, PoleKind::Plain));
    }
    Ok(pole_membership(w, n as i64, fas_kind(w.field(), n)))
}

/// Smallest `n >= 0` with `w ∈ F^AS(X, nD)`.
pub fn omega_conductor(w: &DiffForm) -> Result<u32> {
    let limit = w.pole_bound() as u32 + 1;
    for n in 0..=limit {
        if omega_fas_member(w, n)? {
            return Ok(n);
        }
    }
    unreachable!("every form lies in the logarithmic piece one above its pole order")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::term;
    use crate::forms::dvar;

    #[test]
    fn dx_over_t_squared() {
        for (p, expect) in [(5, 3), (2, 2)] {
            let w = DiffForm::term(dvar(0), term(Field::Prime(p), &[0], 1, -2));
            assert_eq!(omega_conductor(&w).unwrap(), expect, "p = {p}");
        }
    }

    #[test]
    fn zero_form_rejected() {
        let w = DiffForm::term(0, term(Field::Prime(3), &[1], 1, -1));
        assert!(omega_fas_member(&w, 2).is_err());
    }
}
