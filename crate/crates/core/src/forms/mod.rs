//! Differential forms with poles along `D = {t = 0}`: pole filtrations, the closed
//! form conductor, Koszul boundaries and the characteristic form.

mod charform;
mod curve;
mod diagonal;
mod filtration;
mod form;

pub use charform::{charform_omega, koszul_partial, xi, CharForm, HomValue, PoleIndex, Symbol};
pub use curve::restrict_to_curve;
pub use diagonal::{diagonal_decomposition, DiagonalParts};
pub use filtration::{fas_kind, omega_conductor, omega_fas_member, pole_membership, PoleKind};
pub use form::{dvar, mask_indices, residue_mask, wedge_sign, DiffForm, PolyForm, DT};
