//! Coefficient fields, sparse polynomials and truncated Laurent series in `t`.

mod field;
mod laurent;
mod poly;

pub use field::{Coef, Field, SUPPORTED_PRIMES};
pub use laurent::{const_term, term, TLaurent, Valuation, EXACT};
pub use poly::{Monomial, Poly};
