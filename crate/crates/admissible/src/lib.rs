//! Analysis of polynomials stable on the upper half-space that vanish at a
//! boundary point: the branch `z = -φ(x)` through the zero, the structure of
//! `Im φ`, and generators of the ideal of bounded numerators `q` with
//! `q/p` bounded near the zero.

pub mod gaussian;
pub mod poly;
pub mod parse;
pub mod series;
pub mod upoly;
pub mod forms;
pub mod branch;
pub mod gcd;
pub mod roots;
pub mod constructions;
pub mod puiseux;
pub mod closure;
pub mod ideal;
pub mod oracle;
pub mod render;

pub use gaussian::GaussianRational;
pub use parse::{parse_poly, ParseError};
pub use poly::{Monomial, MultiPoly};
pub use series::TruncatedSeries;
