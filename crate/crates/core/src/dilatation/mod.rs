//! An independent membership oracle: build the chart of the dilatation by explicit
//! substitution, compute `p₂*a − p₁*a` and read off regularity and the fiber value.

mod delta;
mod fiber;
mod model;

pub use delta::{
    as_member, delta, delta_capped, expand_delta, fsat_conductor, fsat_member, model_for, oracle_conductor,
    oracle_member, Delta, Section,
};
pub use fiber::{additive_decompose, chi, oracle_charform, psi_extract, AdditiveElement, Fiber, OracleCharForm};
pub use model::{precision_policy, DilatationModel, ModelOptions, DEFAULT_S_MAX};
