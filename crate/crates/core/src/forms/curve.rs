use super::form::{mask_indices, DiffForm, DT};
use crate::algebra::{TLaurent, Valuation};
use crate::error::{Error, Result};

/// Pull a form back along the curve `x_i = φ_i(t)`: coefficients are evaluated at
/// `φ` and `dx_i ↦ φ_i' dt`. Each `φ_i` is a series in `t` alone with positive
/// valuation, so the curve meets `D` transversally at the origin.
pub fn restrict_to_curve(w: &DiffForm, phi: &[TLaurent]) -> Result<DiffForm> {
    if phi.len() != w.nvars() {
        return Err(Error::Incompatible(format!("{} curve coordinates for {} variables", phi.len(), w.nvars())));
    }
    for f in phi {
        if f.nvars() != 0 || f.field() != w.field() {
            return Err(Error::Incompatible("curve coordinates must be series in t only".into()));
        }
        if f.valuation() < Valuation::Finite(1) {
            return Err(Error::BadCurve);
        }
    }
    let dphi: Vec<TLaurent> = phi.iter().map(|f| f.t_derivative()).collect::<Result<_>>()?;
    let mut out = DiffForm::zero(w.field(), 0, w.degree());
    for (mask, c) in w.terms() {
        let c = c.substitute_vars(phi)?;
        match mask.count_ones() {
            0 => out.add_term(0, &c),
            1 if mask == DT => out.add_term(DT, &c),
            1 => {
                let i = mask_indices(mask)[0] - 1;
                out.add_term(DT, &c.mul(&dphi[i])?);
            }
            // dt ∧ dt = 0 on a curve
            _ => {}
        }
    }
    Ok(out)
}
