//! Truncated `p`-typical Witt vectors over Laurent series, their Matsuda and
//! Brylinski–Kato filtrations, and closed-form characteristic forms.

mod charform;
mod filtration;
mod universal;
mod vector;

pub use charform::{charform_h1, charform_witt, fd, WittSymbol};
pub use filtration::{
    bk_log_conductor, bk_log_member, decomposed_fsat_bound, matsuda_conductor, matsuda_member, FDecomposed,
};
pub use universal::{witt_polys, WittPolys, MAX_WITT_LENGTH};
pub use vector::WittVector;
