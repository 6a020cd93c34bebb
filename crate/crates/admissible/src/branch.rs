//! The branch `z = -φ(x)` of `p(x, z) = 0` through a smooth zero at the
//! origin, solved degree by degree, and its classification by the first
//! homogeneous part with non-real coefficients.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::forms::{definiteness, Definiteness};
use crate::gaussian::GaussianRational;
use crate::poly::{Monomial, MultiPoly};
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BranchError {
    #[error("p has no variables")]
    NoVariables,
    #[error("p(0) = {0} is not zero")]
    NotVanishing(String),
    #[error("the derivative in {0} vanishes at the origin")]
    Singular(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchSolution {
    /// φ in the non-distinguished variables.
    pub phi: TruncatedSeries,
    /// ∇φ(0).
    pub grad0: Vec<BigRational>,
    /// `p(x, -φ(x))` has no terms of total degree below this.
    pub residual_order: u32,
    /// The distinguished (last) variable.
    pub zvar: String,
}

impl BranchSolution {
    pub fn order(&self) -> u32 {
        self.phi.order()
    }
    /// Homogeneous parts `φ_0, ..., φ_N`.
    pub fn parts(&self) -> Vec<MultiPoly> {
        self.phi.homogeneous_parts()
    }
}

/// Split `p` by powers of its last variable.
fn z_coeffs(p: &MultiPoly) -> (Vec<String>, Vec<MultiPoly>) {
    let n = p.nvars();
    let xv: Vec<String> = p.vars()[..n - 1].to_vec();
    let coeffs = p.coeffs_in(n - 1);
    let mut out = vec![];
    for c in coeffs {
        let mut q = MultiPoly::zero(&xv);
        for (m, a) in c.terms() {
            q.add_term(Monomial(m.0[..n - 1].to_vec()), a.clone());
        }
        out.push(q);
    }
    (xv, out)
}

fn parts_of(p: &MultiPoly, n: u32) -> Vec<MultiPoly> {
    p.homogeneous_parts(n)
}

/// Solve `p(x, -φ(x)) ≡ 0` through total degree `order`.
pub fn solve_branch(p: &MultiPoly, order: u32) -> Result<BranchSolution, BranchError> {
    if p.nvars() == 0 {
        return Err(BranchError::NoVariables);
    }
    let zvar = p.vars()[p.nvars() - 1].clone();
    let c0 = p.constant_term();
    if !c0.is_zero() {
        return Err(BranchError::NotVanishing(c0.to_string()));
    }
    let (xv, cz) = z_coeffs(p);
    let pivot = cz.get(1).map(|c| c.constant_term()).unwrap_or_else(GaussianRational::zero);
    if pivot.is_zero() {
        return Err(BranchError::Singular(zvar));
    }
    let n = order as usize;
    let dz = cz.len() - 1;
    // homogeneous parts of each z-coefficient
    let cparts: Vec<Vec<MultiPoly>> = cz.iter().map(|c| parts_of(c, order)).collect();
    // wp[j][k] = degree-k part of w^j, w = -φ
    let zero = MultiPoly::zero(&xv);
    let mut wp: Vec<Vec<MultiPoly>> = vec![vec![zero.clone(); n + 1]; dz + 1];
    wp[0][0] = MultiPoly::one(&xv);
    let pinv = pivot.inv();
    for k in 1..=n {
        // parts of w^j at degree k for j >= 2 only involve w_1..w_{k-1}
        for j in 2..=dz {
            let mut acc = zero.clone();
            for m in 1..k {
                if wp[1][m].is_zero() || wp[j - 1][k - m].is_zero() {
                    continue;
                }
                acc = &acc + &(&wp[1][m] * &wp[j - 1][k - m]);
            }
            wp[j][k] = acc;
        }
        let mut res = zero.clone();
        for j in 0..=dz {
            for a in 0..=k {
                if j == 1 && a == 0 {
                    continue;
                }
                let ca = &cparts[j][a];
                let wj = &wp[j][k - a];
                if ca.is_zero() || wj.is_zero() {
                    continue;
                }
                res = &res + &(ca * wj);
            }
        }
        wp[1][k] = res.scale(&-pinv.clone());
    }
    let mut phi = zero.clone();
    for k in 1..=n {
        phi = &phi - &wp[1][k];
    }
    let phi = TruncatedSeries::new(phi, order);
    let grad0: Vec<BigRational> = (0..xv.len())
        .map(|i| {
            let mut e = vec![0; xv.len()];
            e[i] = 1;
            phi.poly().coeff(&e).re
        })
        .collect();
    let sol = BranchSolution { phi, grad0, residual_order: order + 1, zvar };
    let r = residual(p, &sol);
    assert!(r.order().is_none_or(|o| o > order), "branch residual check failed");
    Ok(sol)
}

/// `p(x, -φ(x))` truncated at the branch order.
pub fn residual(p: &MultiPoly, sol: &BranchSolution) -> MultiPoly {
    let w = -sol.phi.poly();
    p.substitute_trunc(&sol.zvar, &w, sol.order())
}

/// Coefficients `u_k(x)` of the unit `u = p / (z + φ)` in powers of `z`,
/// truncated at the branch order.
pub fn unit_factor(p: &MultiPoly, sol: &BranchSolution) -> Vec<MultiPoly> {
    let (_, cz) = z_coeffs(p);
    let d = cz.len() - 1;
    let phi = sol.phi.poly();
    let mut u = vec![MultiPoly::zero(phi.vars()); d];
    u[d - 1] = cz[d].clone();
    for k in (1..d).rev() {
        u[k - 1] = (&cz[k] - &u[k].mul_trunc(phi, sol.order())).truncate(sol.order());
    }
    u
}

#[derive(Clone, Debug, PartialEq)]
pub enum PhiKind {
    /// Every coefficient through `order` is real.
    AllRealUpToOrder { order: u32 },
    FirstImagTerm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhiClassification {
    pub kind: PhiKind,
    /// Half the index of the first non-real homogeneous part (0 when all real).
    pub l: u32,
    /// `Im φ_{2L}`; zero when all real.
    pub im_part: MultiPoly,
    pub definite: bool,
    /// Zero components of ∇φ(0).
    pub zero_gradient_components: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("sanity violation ({check}): {witness}")]
pub struct SanityViolation {
    pub check: String,
    pub witness: String,
}

fn violation(check: &str, witness: String) -> SanityViolation {
    SanityViolation { check: check.to_string(), witness }
}

/// Directions sampled for non-negativity when there are more than two variables.
pub const SPHERE_SAMPLES: usize = 10_000;

pub fn classify(sol: &BranchSolution) -> Result<PhiClassification, SanityViolation> {
    let parts = sol.parts();
    for (i, g) in sol.grad0.iter().enumerate() {
        if g.is_negative() {
            return Err(violation("gradient", format!("component {} of the gradient is {}", i, g)));
        }
    }
    let t: Vec<usize> = (0..sol.grad0.len()).filter(|&i| sol.grad0[i].is_zero()).collect();
    if !t.is_empty() {
        let vars = sol.phi.vars().to_vec();
        for (m, c) in sol.phi.poly().terms() {
            if m.0.iter().enumerate().all(|(i, &k)| k == 0 || t.contains(&i)) {
                let mono = MultiPoly::monomial(&vars, m.0.clone(), c.clone());
                return Err(violation("zero-gradient subspace", format!("phi restricted to the subspace has term {}", mono)));
            }
        }
    }
    let first = parts.iter().position(|q| !q.is_real());
    let Some(k) = first else {
        return Ok(PhiClassification {
            kind: PhiKind::AllRealUpToOrder { order: sol.order() },
            l: 0,
            im_part: MultiPoly::zero(sol.phi.vars()),
            definite: false,
            zero_gradient_components: t,
        });
    };
    let im = parts[k].im_part();
    if k % 2 == 1 {
        return Err(violation("parity", format!("first non-real part has odd degree {}: Im = {}", k, im)));
    }
    let def = definiteness(&im, SPHERE_SAMPLES, 0x5eed).map_err(|e| violation("im part", e.to_string()))?;
    if def == Definiteness::Indefinite {
        return Err(violation("non-negativity", format!("Im phi_{} = {} takes negative values", k, im)));
    }
    Ok(PhiClassification {
        kind: PhiKind::FirstImagTerm,
        l: k as u32 / 2,
        im_part: im,
        definite: def == Definiteness::PositiveDefinite,
        zero_gradient_components: t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    #[test]
    fn definite_example_branch() {
        let p = parse_poly("x+y+z-2*i*(x*y+x*z+y*z)-3*x*y*z").unwrap();
        let sol = solve_branch(&p, 3).unwrap();
        let parts = sol.parts();
        assert_eq!(parts[1].to_string(), "x+y");
        assert_eq!(parts[2].to_string(), "2*i*x^2+2*i*x*y+2*i*y^2");
        let c = classify(&sol).unwrap();
        assert_eq!(c.l, 1);
        assert!(c.definite);
        assert_eq!(c.im_part.to_string(), "2*x^2+2*x*y+2*y^2");
    }

    #[test]
    fn solved_form() {
        let p = parse_poly("z+x").unwrap();
        for n in [1, 5, 9] {
            let sol = solve_branch(&p, n).unwrap();
            assert_eq!(sol.phi.poly().to_string(), "x");
            assert_eq!(classify(&sol).unwrap().kind, PhiKind::AllRealUpToOrder { order: n });
        }
    }

    #[test]
    fn preconditions() {
        assert!(matches!(solve_branch(&parse_poly("1+z").unwrap(), 3), Err(BranchError::NotVanishing(_))));
        assert!(matches!(solve_branch(&parse_poly("z^2+x").unwrap(), 3), Err(BranchError::Singular(_))));
    }

    #[test]
    fn unit_reconstructs_p() {
        let p = parse_poly("x+y+z-2*i*(x*y+x*z+y*z)-3*x*y*z+z^2").unwrap();
        let sol = solve_branch(&p, 6).unwrap();
        let u = unit_factor(&p, &sol);
        let vars = p.vars().to_vec();
        let z = MultiPoly::var(&vars, "z");
        let mut uz = MultiPoly::zero(&vars);
        for (k, uk) in u.iter().enumerate() {
            uz = &uz + &(&uk.align(&vars) * &z.pow(k as u32));
        }
        let prod = (&uz * &(&z + &sol.phi.poly().align(&vars))).truncate(6);
        assert_eq!(prod, p);
    }
}
