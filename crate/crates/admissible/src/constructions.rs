//! Stable polynomials with a boundary zero at the origin: transfer from the
//! polydisk, the diagonal Möbius substitution that degenerates the imaginary
//! part, and iterated composition of a Pick function in the last slot.

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::branch::{classify, solve_branch, BranchError, PhiKind, SanityViolation};
use crate::gaussian::GaussianRational;
use crate::gcd::RationalFunction;
use crate::parse::parse_poly;
use crate::poly::MultiPoly;
use crate::roots::poly_roots;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConstructionError {
    #[error("polynomial is identically zero")]
    Degenerate,
    #[error("the result has no linear term in its last variable")]
    NoLinearTerm,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("branch: {0}")]
    Branch(#[from] BranchError),
    #[error("{0}")]
    Sanity(#[from] SanityViolation),
}

/// Output names for `n` transferred variables: `x, y, z` style with the last one `z`.
pub fn halfplane_names(n: usize) -> Vec<String> {
    match n {
        0 => vec![],
        1 => vec!["z".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        _ => {
            let mut v: Vec<String> = (1..n).map(|k| format!("x{}", k)).collect();
            v.push("z".into());
            v
        }
    }
}

/// Transfer a polynomial on the polydisk to the upper half-space via
/// `z_j = (i - w_j)/(i + w_j)`, clearing `(i + w_j)^{deg_j}`. The point
/// `(1, ..., 1)` maps to the origin. The result is scaled so that the
/// coefficient of the last variable's linear term is 1.
pub fn polydisk_to_halfplane(p_disk: &MultiPoly) -> Result<MultiPoly, ConstructionError> {
    if p_disk.is_zero() {
        return Err(ConstructionError::Degenerate);
    }
    let p_disk = p_disk.compact_vars();
    let n = p_disk.nvars();
    let names = halfplane_names(n);
    let degs: Vec<u32> = (0..n).map(|j| p_disk.degree_in(j)).collect();
    let i = GaussianRational::i();
    let plus: Vec<MultiPoly> = names.iter().map(|w| &MultiPoly::var(&names, w) + &MultiPoly::constant(&names, i.clone())).collect();
    let minus: Vec<MultiPoly> = names.iter().map(|w| &MultiPoly::constant(&names, i.clone()) - &MultiPoly::var(&names, w)).collect();
    let mut pow_plus: Vec<Vec<MultiPoly>> = vec![];
    let mut pow_minus: Vec<Vec<MultiPoly>> = vec![];
    for j in 0..n {
        let (mut a, mut b) = (vec![MultiPoly::one(&names)], vec![MultiPoly::one(&names)]);
        for k in 1..=degs[j] as usize {
            a.push(&a[k - 1] * &plus[j]);
            b.push(&b[k - 1] * &minus[j]);
        }
        pow_plus.push(a);
        pow_minus.push(b);
    }
    let mut out = MultiPoly::zero(&names);
    for (m, c) in p_disk.terms() {
        let mut t = MultiPoly::constant(&names, c.clone());
        for j in 0..n {
            let k = m.0[j] as usize;
            t = &(&t * &pow_minus[j][k]) * &pow_plus[j][degs[j] as usize - k];
        }
        out = &out + &t;
    }
    if out.is_zero() {
        return Err(ConstructionError::Degenerate);
    }
    normalize_by_last_linear(&out)
}

/// Divide by the coefficient of the linear term in the last variable.
pub fn normalize_by_last_linear(p: &MultiPoly) -> Result<MultiPoly, ConstructionError> {
    let n = p.nvars();
    let mut e = vec![0; n];
    e[n - 1] = 1;
    let c = p.coeff(&e);
    if c.is_zero() {
        return Err(ConstructionError::NoLinearTerm);
    }
    Ok(p.scale(&c.inv()))
}

/// `(2i + x + y)^m q2((i(x+y) + 2xy)/(2i + x + y), z)` for a bivariate
/// `q2(a, b)` whose first variable is substituted and second becomes `z`.
pub fn mobius_lift(q2: &MultiPoly, m: u32) -> Result<MultiPoly, ConstructionError> {
    if q2.nvars() != 2 {
        return Err(ConstructionError::Precondition(format!("expected a bivariate polynomial, got {}", q2)));
    }
    if !q2.constant_term().is_zero() {
        return Err(ConstructionError::Precondition("q2(0,0) must vanish".into()));
    }
    if q2.derivative(1).constant_term().is_zero() {
        return Err(ConstructionError::Precondition("the derivative in the second variable vanishes at 0".into()));
    }
    if q2.degree_in(0) > m {
        return Err(ConstructionError::Precondition(format!("m = {} is below the degree in the first variable", m)));
    }
    let k = crate::puiseux::contact_order(q2, 16).map_err(|e| ConstructionError::Precondition(e.to_string()))?;
    if k <= 2 {
        return Err(ConstructionError::Precondition(format!("contact order {} must exceed 2", k)));
    }
    let v = crate::poly::vars(&["x", "y", "z"]);
    let x = MultiPoly::var(&v, "x");
    let y = MultiPoly::var(&v, "y");
    let i = MultiPoly::constant(&v, GaussianRational::i());
    let s = &x + &y;
    let num = &(&i * &s) + (&(&x * &y).scale(&GaussianRational::from_int(2)));
    let den = &i.scale(&GaussianRational::from_int(2)) + &s;
    let q = q2.rename(&["a".to_string(), "z".to_string()]);
    let q = q.align(&crate::poly::vars(&["a", "z"]));
    let cs = q.coeffs_in(q.var_index("a").unwrap());
    let mut out = MultiPoly::zero(&v);
    let mut npow = MultiPoly::one(&v);
    for (k, c) in cs.iter().enumerate() {
        let c3 = c.compact_vars().align(&v);
        let c3 = if c3.vars().is_empty() { MultiPoly::constant(&v, c.constant_term()) } else { c3 };
        let t = &(&c3 * &npow) * &den.pow(m - k as u32);
        out = &out + &t;
        npow = &npow * &num;
    }
    if out.is_zero() {
        return Err(ConstructionError::Degenerate);
    }
    Ok(out)
}

/// Stable base whose iterates give the square-power family: the definite
/// three-variable example without its cubic term.
pub fn square_power_base() -> MultiPoly {
    parse_poly("x+y+z-2*i*(x*y+x*z+y*z)").unwrap()
}

/// The definite three-variable example transferred from `3 - z1 - z2 - z3`.
pub fn definite_example() -> MultiPoly {
    parse_poly("x+y+z-2*i*(x*y+x*z+y*z)-3*x*y*z").unwrap()
}

/// `g = Re p / Im p`, equal to `i(p + p̄)/(p - p̄)`, as a reduced quotient.
pub fn pick_function(p: &MultiPoly) -> RationalFunction {
    RationalFunction::new(p.re_part(), p.im_part())
}

/// Compose the Pick function of `base` with itself `l` times in the last
/// slot and convert `A/B` back to the polynomial `B - iA`, scaled so its
/// `z` coefficient is 1.
pub fn square_power_from_base(base: &MultiPoly, l: u32) -> Result<MultiPoly, ConstructionError> {
    if l == 0 {
        return Err(ConstructionError::Precondition("L must be at least 1".into()));
    }
    if l > 4 {
        return Err(ConstructionError::Precondition("L is capped at 4".into()));
    }
    let zname = base.vars().last().cloned().unwrap();
    let zi = base.nvars() - 1;
    let g = pick_function(base);
    let (num, den) = if g.num.degree_in(zi) <= 1 && g.den.degree_in(zi) <= 1 {
        mobius_power(&g, zi, l)
    } else {
        let mut acc = g.clone();
        for _ in 1..l {
            acc = acc.substitute(&zname, &g);
        }
        (acc.num, acc.den)
    };
    let vars = num.vars().to_vec();
    let p = &den - &num.scale(&GaussianRational::i());
    let p = p.align(&vars);
    normalize_by_last_linear(&p)
}

/// `l`-fold self-composition in slot `zi` of `(a0 + a1 z)/(b0 + b1 z)`, as
/// a product of coefficient matrices with the common content removed at
/// each step. A common factor of two polynomials linear in `z` that are not
/// proportional is free of `z`, so it divides all four coefficients.
fn mobius_power(g: &RationalFunction, zi: usize, l: u32) -> (MultiPoly, MultiPoly) {
    let vars = g.num.vars().to_vec();
    let lin = |p: &MultiPoly| {
        let mut c = p.align(&vars).coeffs_in(zi);
        c.resize(2, MultiPoly::zero(&vars));
        (c[0].clone(), c[1].clone())
    };
    let (a0, a1) = lin(&g.num);
    let (b0, b1) = lin(&g.den);
    let (mut n0, mut n1) = (a0.clone(), a1.clone());
    let (mut d0, mut d1) = (b0.clone(), b1.clone());
    for _ in 1..l {
        // g(N/D) = (a0 D + a1 N)/(b0 D + b1 N)
        let m0 = &(&a0 * &d0) + &(&a1 * &n0);
        let m1 = &(&a0 * &d1) + &(&a1 * &n1);
        let e0 = &(&b0 * &d0) + &(&b1 * &n0);
        let e1 = &(&b0 * &d1) + &(&b1 * &n1);
        let c = [&m0, &m1, &e0, &e1].iter().fold(MultiPoly::zero(&vars), |acc, q| crate::gcd::gcd(&acc, q));
        let div = |q: &MultiPoly| if crate::gcd::is_unit_gcd(&c) { q.clone() } else { q.div_exact(&c).unwrap() };
        (n0, n1, d0, d1) = (div(&m0), div(&m1), div(&e0), div(&e1));
    }
    let z = MultiPoly::var(&vars, &vars[zi]);
    (&n0 + &(&n1 * &z), &d0 + &(&d1 * &z))
}

pub fn square_power_family(l: u32) -> Result<MultiPoly, ConstructionError> {
    square_power_from_base(&square_power_base(), l)
}

/// Disk polynomial `p0((z1+z2)/2, z3)` with `p0(a, b) = a^2 - ab - 3a - b + 4`.
pub fn averaged_disk_example() -> MultiPoly {
    let p0 = parse_poly("x^2-x*y-3*x-y+4").unwrap();
    let v = crate::poly::vars(&["z1", "z2", "z3"]);
    let half = GaussianRational::from_rat(crate::gaussian::rat(1, 2));
    let a = (&MultiPoly::var(&v, "z1") + &MultiPoly::var(&v, "z2")).scale(&half);
    let b = MultiPoly::var(&v, "z3");
    p0.compose(&[a, b])
}

/// A named input reproduced by the `examples` command.
#[derive(Clone, Debug)]
pub struct NamedExample {
    pub name: &'static str,
    pub summary: &'static str,
    pub p: MultiPoly,
}

fn transferred(src: &str) -> MultiPoly {
    polydisk_to_halfplane(&parse_poly(src).unwrap()).unwrap()
}

/// The built-in examples in a fixed order.
pub fn example_catalogue() -> Vec<NamedExample> {
    let mut out = vec![
        NamedExample { name: "definite", summary: "transfer of 3 - z1 - z2 - z3", p: transferred("3-z1-z2-z3") },
        NamedExample { name: "linear-form", summary: "transfer of 2 - z1*z2 - z3", p: transferred("2-z1*z2-z3") },
        NamedExample {
            name: "averaged",
            summary: "transfer of p0((z1+z2)/2, z3), p0(a, b) = a^2 - ab - 3a - b + 4",
            p: polydisk_to_halfplane(&averaged_disk_example()).unwrap(),
        },
    ];
    for (l, name) in [(1, "p1"), (2, "p2"), (3, "p3")] {
        out.push(NamedExample { name, summary: "iterated Pick composition of x+y+z-2i(xy+xz+yz)", p: square_power_family(l).unwrap() });
    }
    out
}

/// A stable polynomial on the upper half-space vanishing at the origin:
/// the transfer of `Σ a_j - Σ a_j m_j(z)` for random monomials `m_j` of
/// degree at most 2 with positive weights `a_j`, which has no zeros in the
/// open polydisk. Every variable occurs and the last occurs linearly. Odd
/// seeds with two or three variables are additionally composed once with
/// their own Pick function.
pub fn random_stable(seed: u64) -> MultiPoly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=3usize);
    let names: Vec<String> = (1..=n).map(|k| format!("z{}", k)).collect();
    loop {
        let count = rng.gen_range(n..=n + 2);
        let mut monos: Vec<Vec<u32>> = vec![];
        let mut last = vec![0; n];
        last[n - 1] = 1;
        monos.push(last);
        while monos.len() < count {
            let mut e = vec![0u32; n - 1];
            let deg = rng.gen_range(1..=2u32);
            for _ in 0..deg {
                e[rng.gen_range(0..n - 1)] += 1;
            }
            e.push(if rng.gen_bool(0.3) { 1 } else { 0 });
            if e.iter().sum::<u32>() <= 2 && !monos.contains(&e) {
                monos.push(e);
            }
        }
        if (0..n).any(|j| monos.iter().all(|m| m[j] == 0)) {
            continue;
        }
        let w: Vec<i64> = monos.iter().map(|_| rng.gen_range(1..=4)).collect();
        let total: i64 = w.iter().sum();
        let mut terms = vec![(vec![0; n], GaussianRational::from_int(total))];
        terms.extend(monos.into_iter().zip(&w).map(|(m, &a)| (m, GaussianRational::from_int(-a))));
        let disk = MultiPoly::from_terms(&names, terms);
        let Ok(p) = polydisk_to_halfplane(&disk) else { continue };
        if seed % 2 == 1 && p.degree_in(p.nvars() - 1) == 1 {
            if let Ok(q) = square_power_from_base(&p, 2) {
                return q;
            }
        }
        return p;
    }
}

/// Locate trouble: a point with `x` in the open upper half-space and a root
/// `z` of `p(x, ·)` with `Im z > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityWitness {
    pub x: Vec<Complex64>,
    pub z: Complex64,
}

/// Sampled stability check: for random `x` in the upper half-space with
/// `|x_j| <= 1/2`, every root in the last variable must have `Im <= 0`.
pub fn stability_spot_check(p: &MultiPoly, samples: usize, seed: u64) -> Result<(), StabilityWitness> {
    let n = p.nvars();
    let cz = p.coeffs_in(n - 1);
    let fc: Vec<Vec<(Vec<u32>, Complex64)>> = cz.iter().map(|c| c.float_coeffs()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x: Vec<Complex64> = (0..n - 1)
            .map(|_| {
                let r: f64 = rng.gen_range(0.0..0.5);
                let th: f64 = rng.gen_range(0.02..std::f64::consts::PI - 0.02);
                Complex64::from_polar(r, th)
            })
            .collect();
        let mut pt = x.clone();
        pt.push(Complex64::new(0.0, 0.0));
        let coeffs: Vec<Complex64> = fc.iter().map(|c| crate::poly::eval_float_terms(c, &pt)).collect();
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for z in poly_roots(&coeffs) {
            if z.im > 1e-9 * (1.0 + z.norm()) && scale > 0.0 {
                return Err(StabilityWitness { x, z });
            }
        }
    }
    Ok(())
}

/// First non-real index and positivity data of a construction output.
pub fn index_and_definite(p: &MultiPoly, order: u32) -> Result<(u32, bool), ConstructionError> {
    let sol = solve_branch(p, order)?;
    let c = classify(&sol)?;
    match c.kind {
        PhiKind::AllRealUpToOrder { .. } => Ok((0, false)),
        PhiKind::FirstImagTerm => Ok((2 * c.l, c.definite)),
    }
}

/// Value of a disk polynomial at the preimage of half-plane point `w`,
/// times the cleared factor, for the transfer correspondence check.
pub fn disk_value_times_factor(p_disk: &MultiPoly, w: &[GaussianRational]) -> GaussianRational {
    let p_disk = p_disk.compact_vars();
    let i = GaussianRational::i();
    let zpt: Vec<GaussianRational> = w.iter().map(|wj| &(&i - wj) / &(&i + wj)).collect();
    let mut val = p_disk.eval_exact(&zpt);
    for (j, wj) in w.iter().enumerate() {
        val = &val * &(&i + wj).pow(p_disk.degree_in(j));
    }
    val
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transfer_examples() {
        let p = polydisk_to_halfplane(&parse_poly("3-z1-z2-z3").unwrap()).unwrap();
        assert_eq!(p, definite_example());
        let q = polydisk_to_halfplane(&parse_poly("2-x*y-z").unwrap()).unwrap();
        assert_eq!(q.to_string(), "x+y+z-2*i*x*z-2*i*y*z-x*y*z");
        let r = polydisk_to_halfplane(&parse_poly("2-z1-z2").unwrap()).unwrap();
        assert_eq!(r.to_string(), "x+y-2*i*x*y");
    }

    #[test]
    fn pick_function_is_real() {
        let g = pick_function(&definite_example());
        assert!(g.num.is_real() && g.den.is_real());
    }
}
