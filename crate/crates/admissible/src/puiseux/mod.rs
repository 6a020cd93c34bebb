//! Bivariate Newton–Puiseux expansion, contact order of a stable
//! two-variable polynomial, and real polynomial models of series with an
//! isolated zero.

pub mod field;
pub mod model;
pub mod newton;
pub mod weierstrass;

pub use field::{FieldError, QuadGauss};
pub use model::{polynomial_model, BranchExponents, ModelOptions, PolynomialModel};
pub use newton::{branch_residual, newton_puiseux, PuiseuxBranch};

use crate::branch::{classify, solve_branch, BranchError, PhiKind, SanityViolation};
use crate::poly::MultiPoly;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PuiseuxError {
    #[error("f is identically zero")]
    Zero,
    #[error("f does not vanish at the origin")]
    NotVanishing,
    #[error("f(0, y) vanishes identically")]
    NotYRegular,
    #[error("truncation insufficient: {0}")]
    InsufficientOrder(String),
    #[error("{0}")]
    Field(#[from] FieldError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("f is not positive off the origin: f({0:.4e}, {1:.4e}) = {2:.4e}")]
    NotIsolated(f64, f64, f64),
    #[error("all coefficients real through order {0}")]
    AllRealUpToOrder(u32),
    #[error(transparent)]
    Branch(#[from] BranchError),
    #[error(transparent)]
    Sanity(#[from] SanityViolation),
    #[error("numeric check failed: {0}")]
    Numeric(String),
}

/// First index `K` with `Im a_K ≠ 0` in the branch `y = -Σ a_k x^k` of
/// `p2(x, y) = 0`; `K` is even and `Im a_K > 0` for stable input.
pub fn contact_order(p2: &MultiPoly, order: u32) -> Result<u32, PuiseuxError> {
    if p2.nvars() != 2 {
        return Err(PuiseuxError::Precondition(format!("expected two variables, got {}", p2.nvars())));
    }
    let sol = solve_branch(p2, order)?;
    let c = classify(&sol)?;
    match c.kind {
        PhiKind::AllRealUpToOrder { order } => Err(PuiseuxError::AllRealUpToOrder(order)),
        PhiKind::FirstImagTerm => Ok(2 * c.l),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    #[test]
    fn contact_orders() {
        assert_eq!(contact_order(&parse_poly("x+y-2*i*x*y").unwrap(), 8), Ok(2));
        assert_eq!(contact_order(&parse_poly("x+y").unwrap(), 8), Err(PuiseuxError::AllRealUpToOrder(8)));
        assert!(matches!(contact_order(&parse_poly("x+y+i*x^3").unwrap(), 8), Err(PuiseuxError::Sanity(_))));
    }
}
