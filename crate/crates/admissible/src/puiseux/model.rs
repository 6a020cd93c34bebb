//! A real polynomial `g ≍ f` near an isolated zero of a real series `f`,
//! built from truncated Puiseux branches, and the exponent `K` with
//! `f ≳ |(x, y)|^K`.

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};

use super::field::QuadGauss;
use super::newton::{newton_puiseux, PuiseuxBranch};
use super::weierstrass::weierstrass;
use super::PuiseuxError;
use crate::forms::{comparability_ratio, dyadic_radii, is_positive_definite, ComparabilityReport, HomogeneousForm};
use crate::gaussian::GaussianRational;
use crate::poly::MultiPoly;
use crate::upoly::Field;

#[derive(Clone, Debug)]
pub struct ModelOptions {
    /// Terms of total degree above this are unknown; `None` treats `f` as exact.
    pub known_through: Option<u32>,
    /// Initial branch truncation.
    pub n0: u32,
    /// Largest branch truncation tried.
    pub max_n: u32,
    pub angles: usize,
}

impl Default for ModelOptions {
    fn default() -> Self {
        ModelOptions { known_through: None, n0: 8, max_n: 64, angles: 720 }
    }
}

/// Exponents of one branch orbit; index `n - 1` holds instance `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchExponents {
    pub r: u32,
    pub m_plus: Vec<u32>,
    pub m_minus: Vec<u32>,
    pub m: Vec<u32>,
    /// `Σ_n (M_n + 1)`.
    pub k_j: u32,
}

#[derive(Clone, Debug)]
pub struct PolynomialModel {
    pub g: MultiPoly,
    /// Sharp exponent: `g` and `f` are bounded below by `c|(x, y)|^K`.
    pub k: u32,
    /// The branch-count bound `Σ_j K_j`, when branches were used.
    pub k_lemma: Option<u32>,
    pub branch_data: Vec<BranchExponents>,
    /// Branch truncation order; 0 when the lowest form is already definite.
    pub n_used: u32,
    /// `x ↦ x + shear·y` was applied before expanding.
    pub shear: i64,
    pub comparability: Option<ComparabilityReport>,
    /// Exact order of `g_N - W` in `x`.
    pub agreement_order: Option<u32>,
}

fn eval_real(p: &MultiPoly) -> impl Fn(f64, f64) -> f64 + '_ {
    let fc = p.float_coeffs();
    move |x, y| {
        let mut s = 0.0;
        for (e, c) in &fc {
            s += c.re * x.powi(e[0] as i32) * y.powi(e[1] as i32);
        }
        s
    }
}

fn check_isolated(f: &MultiPoly, angles: usize) -> Result<(), PuiseuxError> {
    let ev = eval_real(f);
    for r in dyadic_radii(4, 9) {
        for k in 0..angles {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / angles as f64;
            let (x, y) = (r * th.cos(), r * th.sin());
            let v = ev(x, y);
            if v <= 0.0 {
                return Err(PuiseuxError::NotIsolated(x, y, v));
            }
        }
    }
    Ok(())
}

fn shear(f: &MultiPoly, k: i64) -> MultiPoly {
    let v = f.vars().to_vec();
    let x = MultiPoly::var(&v, &v[0]);
    let y = MultiPoly::var(&v, &v[1]);
    f.compose(&[&x + &y.scale(&GaussianRational::from_int(k)), y])
}

fn first_nonreal(c: &[QuadGauss]) -> Option<u32> {
    c.iter().position(|a| !a.is_real()).map(|m| m as u32)
}

fn exponents(b: &PuiseuxBranch) -> Result<BranchExponents, PuiseuxError> {
    let (mut mp, mut mm, mut m) = (vec![], vec![], vec![]);
    for n in 1..=b.r {
        let plus = first_nonreal(&b.instance(n, false)?);
        let minus = first_nonreal(&b.instance(n, true)?);
        let (Some(p), Some(q)) = (plus, minus) else {
            return Err(PuiseuxError::InsufficientOrder(format!("a branch instance is real through order {}", b.order)));
        };
        mp.push(p);
        mm.push(q);
        m.push(p.max(q));
    }
    let k_j = m.iter().map(|v| v + 1).sum();
    Ok(BranchExponents { r: b.r, m_plus: mp, m_minus: mm, m, k_j })
}

type TY = BTreeMap<(u32, u32), QuadGauss>;

fn ty_mul(a: &TY, b: &TY) -> TY {
    let mut out = TY::new();
    for (&(i, j), u) in a {
        for (&(k, l), v) in b {
            let e = out.entry((i + k, j + l)).or_insert_with(|| QuadGauss::from_int(0));
            *e = Field::add(e, &Field::mul(u, v));
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// `∏_n (y - ψ(μ^n t))` with `t^r` replaced by `x`.
fn orbit_product(b: &PuiseuxBranch, n_trunc: u32) -> Result<TY, PuiseuxError> {
    let mut acc: TY = [((0, 0), QuadGauss::from_int(1))].into_iter().collect();
    for n in 1..=b.r {
        let inst = b.instance(n, false)?;
        let mut fac = TY::new();
        fac.insert((0, 1), QuadGauss::from_int(1));
        for (m, c) in inst.iter().enumerate().take(n_trunc as usize + 1) {
            if !c.is_zero() {
                fac.insert((m as u32, 0), c.neg());
            }
        }
        acc = ty_mul(&acc, &fac);
    }
    let mut out = TY::new();
    for ((i, j), v) in acc {
        if i % b.r != 0 {
            return Err(PuiseuxError::Numeric(format!("orbit product keeps t^{} with r = {}", i, b.r)));
        }
        out.insert((i / b.r, j), v);
    }
    Ok(out)
}

fn ty_to_real(p: &TY, vars: &[String]) -> Result<MultiPoly, PuiseuxError> {
    let mut terms = vec![];
    for (&(i, j), v) in p {
        let g = v.to_gauss().filter(|g| g.is_real()).ok_or_else(|| PuiseuxError::Numeric(format!("g_N has non-real coefficient {} at x^{} y^{}", v, i, j)))?;
        terms.push((vec![i, j], g));
    }
    Ok(MultiPoly::from_terms(vars, terms))
}

/// Order in `t` of `g(±t^r, arc(t))`, computed through `t^limit`.
fn order_along(g: &MultiPoly, r: u32, negative: bool, arc: &[QuadGauss], limit: usize) -> Option<usize> {
    let len = limit + 1;
    let mul = |a: &[QuadGauss], b: &[QuadGauss]| {
        let mut out = vec![QuadGauss::from_int(0); len];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(len - i) {
                out[i + j] = Field::add(&out[i + j], &Field::mul(x, y));
            }
        }
        out
    };
    let mut ya = arc.to_vec();
    ya.resize(len, QuadGauss::from_int(0));
    ya.truncate(len);
    let maxj = g.degree_in(1) as usize;
    let mut pows = vec![{
        let mut one = vec![QuadGauss::from_int(0); len];
        one[0] = QuadGauss::from_int(1);
        one
    }];
    for k in 1..=maxj {
        let next = mul(&pows[k - 1], &ya);
        pows.push(next);
    }
    let mut acc = vec![QuadGauss::from_int(0); len];
    for (m, c) in g.terms() {
        let sh = (m.0[0] * r) as usize;
        if sh >= len {
            continue;
        }
        let sign = if negative && m.0[0] % 2 == 1 { -1 } else { 1 };
        let cq = QuadGauss::from_gauss(c * &GaussianRational::from_int(sign));
        for t in 0..len - sh {
            let v = &pows[m.0[1] as usize][t];
            if !v.is_zero() {
                acc[t + sh] = Field::add(&acc[t + sh], &Field::mul(&cq, v));
            }
        }
    }
    acc.iter().position(|a| !a.is_zero())
}

/// Worst decay exponent of `g` over the real arcs traced by the real parts
/// of the branch instances, and the `y`-axis.
fn sharp_exponent(g: &MultiPoly, branches: &[PuiseuxBranch], data: &[BranchExponents], w: u32, bound: u32) -> Result<u32, PuiseuxError> {
    // along x = 0, g = y^w
    let mut worst = num_rational::BigRational::from_integer(w.into());
    for (b, e) in branches.iter().zip(data) {
        for n in 1..=b.r {
            for negative in [false, true] {
                let inst = b.instance(n, negative)?;
                let cut = if negative { e.m_minus[(n - 1) as usize] } else { e.m_plus[(n - 1) as usize] } as usize;
                let arc: Vec<QuadGauss> = inst.iter().take(cut).map(|c| c.re()).collect();
                let lead = arc.iter().position(|c| !c.is_zero());
                let limit = (b.r * (bound + 1)) as usize;
                let Some(ord) = order_along(g, b.r, negative, &arc, limit) else {
                    return Err(PuiseuxError::Numeric(format!("g vanishes along a real arc through t^{}", limit)));
                };
                // |(x, y)| ~ |x|^{min(1, a)} along y ~ x^a
                let x_ord = num_rational::BigRational::new((ord as i64).into(), (b.r as i64).into());
                let a = match lead {
                    Some(l) if (l as u32) < b.r => num_rational::BigRational::new((l as i64).into(), (b.r as i64).into()),
                    _ => num_rational::BigRational::from_integer(1.into()),
                };
                let rho_ord = x_ord / a;
                if rho_ord > worst {
                    worst = rho_ord;
                }
            }
        }
    }
    let k = worst.ceil().to_integer().to_u32().unwrap();
    Ok(k)
}

/// Smallest `c` ratio trend of `g/|(x,y)|^K` across shrinking radii; `None`
/// when the lower bound holds.
fn lower_bound_failure(g: &MultiPoly, k: u32, angles: usize) -> Option<String> {
    let ev = eval_real(g);
    let mut mins = vec![];
    for r in dyadic_radii(4, 10) {
        let mut lo = f64::INFINITY;
        for a in 0..angles {
            let th = 2.0 * std::f64::consts::PI * (a as f64 + 0.25) / angles as f64;
            lo = lo.min(ev(r * th.cos(), r * th.sin()) / r.powi(k as i32));
        }
        if lo <= 0.0 {
            return Some(format!("g ≤ 0 on the circle of radius {:.3e}", r));
        }
        mins.push((r, lo));
    }
    for w in mins.windows(3) {
        if w[1].1 * 2.0 <= w[0].1 && w[2].1 * 2.0 <= w[1].1 {
            return Some(format!("g/|(x,y)|^{} decays near radius {:.3e}", k, w[2].0));
        }
    }
    None
}

fn comparability(f: &MultiPoly, g: &MultiPoly, angles: usize) -> Result<ComparabilityReport, PuiseuxError> {
    let (fe, ge) = (eval_real(f), eval_real(g));
    comparability_ratio(&fe, &ge, &dyadic_radii(4, 10), angles).map_err(|e| PuiseuxError::Numeric(e.to_string()))
}

/// Real polynomial `g ≍ f` and exponent `K` for a real `f(x, y)` with an
/// isolated zero at the origin.
pub fn polynomial_model(f: &MultiPoly, opts: &ModelOptions) -> Result<PolynomialModel, PuiseuxError> {
    if f.nvars() != 2 {
        return Err(PuiseuxError::Precondition(format!("expected two variables, got {}", f.nvars())));
    }
    if !f.is_real() {
        return Err(PuiseuxError::Precondition("f must have real coefficients".into()));
    }
    if f.is_zero() {
        return Err(PuiseuxError::Zero);
    }
    if !f.constant_term().is_zero() {
        return Err(PuiseuxError::NotVanishing);
    }
    let f = match opts.known_through {
        Some(n) => f.truncate(n),
        None => f.clone(),
    };
    check_isolated(&f, opts.angles)?;
    let low = f.order().unwrap();
    let form = f.homogeneous_part(low);
    if let Ok(h) = HomogeneousForm::from_poly(&form) {
        if is_positive_definite(&h).unwrap_or(false) {
            return Ok(PolynomialModel {
                comparability: Some(comparability(&f, &form, opts.angles)?),
                g: form,
                k: low,
                k_lemma: None,
                branch_data: vec![],
                n_used: 0,
                shear: 0,
                agreement_order: None,
            });
        }
    }
    let vars = f.vars().to_vec();
    let mut sh = 0;
    let mut fs = f.clone();
    while fs.terms().all(|(m, _)| m.0[0] != 0) {
        sh += 1;
        fs = shear(&f, sh);
        if sh > 16 {
            return Err(PuiseuxError::NotYRegular);
        }
    }
    let w = fs.terms().filter(|(m, _)| m.0[0] == 0).map(|(m, _)| m.0[1]).min().unwrap();
    let mut n = opts.n0;
    let (branches, data, k_lemma) = loop {
        let branches = newton_puiseux(&fs, opts.known_through, n)?;
        let data = branches.iter().map(exponents).collect::<Result<Vec<_>, _>>();
        match data {
            Ok(data) => {
                let k_lemma: u32 = data.iter().map(|d| d.k_j).sum();
                let need = (k_lemma + 1).max(opts.n0);
                if need <= n {
                    break (branches, data, k_lemma);
                }
                n = need;
            }
            Err(PuiseuxError::InsufficientOrder(_)) if n < opts.max_n => n *= 2,
            Err(e) => return Err(e),
        }
        if n > opts.max_n {
            return Err(PuiseuxError::InsufficientOrder(format!("branches not separated by order {}", opts.max_n)));
        }
    };
    let branches_used = branches;
    let mut gty: TY = [((0, 0), QuadGauss::from_int(1))].into_iter().collect();
    for b in &branches_used {
        gty = ty_mul(&gty, &orbit_product(b, n)?);
    }
    let g_s = ty_to_real(&gty, &vars)?;
    // exact agreement with the Weierstrass polynomial beyond K
    let xprec = k_lemma + 2;
    let wp = weierstrass(&fs, xprec)?;
    if wp.degree as u32 != w {
        return Err(PuiseuxError::Numeric(format!("Weierstrass degree {} differs from {}", wp.degree, w)));
    }
    let wpoly = wp.w.to_poly(&vars);
    let diff = &g_s.align(&vars) - &wpoly;
    let agreement = diff.terms().map(|(m, _)| m.0[0]).min().unwrap_or(xprec).min(xprec);
    if agreement <= k_lemma {
        return Err(PuiseuxError::InsufficientOrder(format!("g_N - W has x-order {} ≤ {}", agreement, k_lemma)));
    }
    let k = sharp_exponent(&g_s, &branches_used, &data, w, k_lemma)?;
    let g = if sh == 0 { g_s } else { shear(&g_s, -sh) };
    let report = comparability(&f, &g, opts.angles)?;
    if !report.is_comparable() {
        return Err(PuiseuxError::Numeric(format!("g is not comparable to f: {:?}", report.verdict)));
    }
    if let Some(why) = lower_bound_failure(&g, k, opts.angles) {
        return Err(PuiseuxError::Numeric(why));
    }
    Ok(PolynomialModel {
        g,
        k,
        k_lemma: Some(k_lemma),
        branch_data: data,
        n_used: n,
        shear: sh,
        comparability: Some(report),
        agreement_order: Some(agreement),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    #[test]
    fn definite_lowest_form() {
        let r = polynomial_model(&parse_poly("x^2+y^2+x^3").unwrap(), &ModelOptions::default()).unwrap();
        assert_eq!(r.g.to_string(), "x^2+y^2");
        assert_eq!(r.k, 2);
        assert!(r.branch_data.is_empty());
    }

    #[test]
    fn degenerate_quartic_contact() {
        // (y - x)^2 + x^4: branches y = x ± i x^2
        let f = parse_poly("(y-x)^2 + x^4").unwrap();
        let r = polynomial_model(&f, &ModelOptions::default()).unwrap();
        assert_eq!(r.k, 4);
        assert_eq!(r.k_lemma, Some(6));
        assert_eq!(r.g, f);
    }

    #[test]
    fn rejects_non_isolated() {
        let f = parse_poly("(y-x)^2").unwrap();
        assert!(matches!(polynomial_model(&f, &ModelOptions::default()), Err(PuiseuxError::NotIsolated(..)) | Err(PuiseuxError::InsufficientOrder(_))));
    }
}
