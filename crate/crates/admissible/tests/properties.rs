use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use admissible::branch::{residual, solve_branch};
use admissible::closure::monomialize;
use admissible::constructions::random_stable;
use admissible::gaussian::GaussianRational;
use admissible::puiseux::newton::{newton_puiseux, series_order};
use admissible::puiseux::branch_residual;
use admissible::{parse_poly, MultiPoly};

fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (-20i64..20, 1i64..6, -20i64..20, 1i64..6).prop_map(|(a, b, c, d)| {
        GaussianRational::new(BigRational::new(a.into(), b.into()), BigRational::new(c.into(), d.into()))
    })
}

fn poly3() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0u32..4, 0u32..4, 0u32..3), gaussian()), 0..8).prop_map(|terms| {
        let v = admissible::poly::vars(&["x", "y", "z"]);
        let mut p = MultiPoly::zero(&v);
        for ((a, b, c), k) in terms {
            p = &p + &MultiPoly::monomial(&v, vec![a, b, c], k);
        }
        p
    })
}

/// `e ∈ conv(points) + R²₊`, checked over pairs of points: in the plane a
/// point of the region dominates a point on a segment between two points.
fn dominated_by_hull(points: &[(u32, u32)], e: (u32, u32)) -> bool {
    let r = |n: i64| BigRational::from_integer(n.into());
    for p in points {
        for q in points {
            // λp + (1-λ)q ≤ e componentwise for some λ in [0, 1]
            let (mut lo, mut hi) = (r(0), r(1));
            for (pc, qc, ec) in [(p.0, q.0, e.0), (p.1, q.1, e.1)] {
                let (a, b) = (r(pc as i64 - qc as i64), r(ec as i64 - qc as i64));
                if a.is_zero() {
                    if b.is_negative() {
                        lo = r(2);
                    }
                } else if a.is_positive() {
                    hi = hi.min(&b / &a);
                } else {
                    lo = lo.max(&b / &a);
                }
            }
            if lo <= hi {
                return true;
            }
        }
    }
    false
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_form_parses_back(p in poly3()) {
        let s = p.to_string();
        let q = parse_poly(&s).unwrap();
        prop_assert_eq!(q.align(p.vars()), p);
    }

    #[test]
    fn reflection_is_an_involution(p in poly3()) {
        prop_assert_eq!(p.reflect().reflect(), p.clone());
        prop_assert_eq!(&p.re_part() + &p.im_part().scale(&GaussianRational::i()), p);
    }

    #[test]
    fn halfspaces_match_the_hull(
        pts in prop::collection::btree_set((0u32..5, 0u32..5), 1..6),
        probe in (0u32..10, 0u32..10),
    ) {
        let v = admissible::poly::vars(&["x", "y"]);
        let mut g = MultiPoly::zero(&v);
        for &(a, b) in &pts {
            g = &g + &MultiPoly::monomial(&v, vec![2 * a, 2 * b], GaussianRational::from_int(1));
        }
        prop_assume!(!pts.contains(&(0, 0)));
        let ic = monomialize(&g).unwrap();
        prop_assume!(ic.linear_change.is_none());
        let even: Vec<(u32, u32)> = pts.iter().map(|&(a, b)| (2 * a, 2 * b)).collect();
        prop_assert_eq!(ic.contains_exponent(probe), dominated_by_hull(&even, probe));
    }

    #[test]
    fn branch_residual_vanishes(seed in 0u64..10_000, n in 4u32..10) {
        let p = random_stable(seed);
        let sol = solve_branch(&p, n).unwrap();
        let r = residual(&p, &sol);
        prop_assert!(r.order().is_none_or(|o| o > n));
    }

    #[test]
    fn puiseux_residual_vanishes(a in 1i64..4, b in -3i64..4, c in 1i64..4, s in 2u32..5) {
        // a smooth branch times a cusp-like factor
        let src = format!("(y - {}*x - ({})*x^2)*(y^2 - {}*x^{}*(1 + x))", a, b, c, 2 * s + 1);
        let f = parse_poly(&src).unwrap();
        let order = 8;
        let branches = newton_puiseux(&f, None, order).unwrap();
        let degree: u32 = branches.iter().map(|b| b.r).sum();
        prop_assert_eq!(degree, 3);
        for b in &branches {
            let res = branch_residual(&f, b, order);
            prop_assert!(series_order(&res).is_none(), "{}: {:?}", src, res);
        }
    }
}
