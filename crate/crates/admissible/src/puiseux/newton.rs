//! Newton–Puiseux expansion of the roots `y = ψ(x^{1/r})` of `f(x, y) = 0`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::field::{gauss_sqrt, root_of_unity, FieldError, QuadGauss};
use super::PuiseuxError;
use crate::gaussian::GaussianRational;
use crate::poly::MultiPoly;
use crate::roots::{poly_roots, rationalize};
use crate::upoly::{Field, UPoly};

type Bi = BTreeMap<(u32, u32), QuadGauss>;

/// One conjugacy orbit of roots: `y = ψ(μ^n x^{1/r})`, `n = 1..r`.
#[derive(Clone, Debug, PartialEq)]
pub struct PuiseuxBranch {
    pub r: u32,
    /// `psi[m]` multiplies `t^m`, `t = x^{1/r}`, for `m = 0..=order`.
    pub psi: Vec<QuadGauss>,
    pub order: u32,
    pub conjugate_partner: Option<usize>,
}

impl PuiseuxBranch {
    pub fn radicand(&self) -> u64 {
        self.psi.iter().map(|c| c.d).find(|&d| d != 1).unwrap_or(1)
    }
    /// Coefficients of the instance `ψ(μ^n t)`, optionally on the side
    /// `x < 0` where `t = |x|^{1/r} e^{iπ/r}`.
    pub fn instance(&self, n: u32, negative_side: bool) -> Result<Vec<QuadGauss>, FieldError> {
        let mu = root_of_unity(self.r, n)?;
        let rot = if negative_side { Field::mul(&mu, &root_of_unity(2 * self.r, 1)?) } else { mu };
        let d = self.radicand();
        if !QuadGauss::compatible(d, rot.d) {
            return Err(FieldError::NestedExtension(d, rot.d));
        }
        let mut out = vec![];
        let mut pw = QuadGauss::from_int(1);
        for c in &self.psi {
            out.push(Field::mul(c, &pw));
            pw = Field::mul(&pw, &rot);
        }
        Ok(out)
    }
}

struct Stage {
    f: Bi,
    r: u32,
    prefix: Vec<(u32, QuadGauss)>,
    mu: u32,
    gamma: BigRational,
    p: Option<BigRational>,
}

fn ri(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn to_bi(f: &MultiPoly) -> Bi {
    let mut out = Bi::new();
    for (m, c) in f.terms() {
        out.insert((m.0[0], m.0[1]), QuadGauss::from_gauss(c.clone()));
    }
    out
}

fn binom(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `F(s, c s^σ + w)`, dropping terms whose weight `i + σ j` is at least `bound`.
fn shift(f: &Bi, c: &QuadGauss, sigma: u32, bound: Option<&BigRational>) -> Bi {
    let maxj = f.keys().map(|k| k.1).max().unwrap_or(0);
    let mut cp = vec![QuadGauss::from_int(1)];
    for k in 1..=maxj as usize {
        cp.push(Field::mul(&cp[k - 1], c));
    }
    let mut out = Bi::new();
    for (&(i, j), a) in f {
        let w = ri(i as i64 + sigma as i64 * j as i64);
        if let Some(b) = bound {
            if &w >= b {
                continue;
            }
        }
        for k in 0..=j {
            let coef = Field::mul(&Field::mul(a, &cp[k as usize]), &QuadGauss::from_gauss(GaussianRational::from_rat(BigRational::from_integer(binom(j, k)))));
            let key = (i + sigma * k, j - k);
            let e = out.entry(key).or_insert_with(QuadGauss::from_int_zero);
            *e = Field::add(e, &coef);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

impl QuadGauss {
    fn from_int_zero() -> Self {
        QuadGauss::from_int(0)
    }
}

fn scale_i(f: &Bi, q: u32) -> Bi {
    f.iter().map(|(&(i, j), v)| ((i * q, j), v.clone())).collect()
}

/// Roots with multiplicity, in ascending `(Re, Im)` order.
pub fn exact_roots(p: &UPoly<QuadGauss>) -> Result<Vec<(QuadGauss, u32)>, PuiseuxError> {
    let mut out = vec![];
    for (k, fac) in p.squarefree() {
        for r in simple_roots(&fac)? {
            out.push((r, k as u32));
        }
    }
    out.sort_by(|a, b| a.0.key().partial_cmp(&b.0.key()).unwrap_or(std::cmp::Ordering::Equal));
    Ok(out)
}

fn quadratic_roots(f: &UPoly<QuadGauss>) -> Result<Vec<QuadGauss>, PuiseuxError> {
    let (a, b, c) = (&f.c[2], &f.c[1], &f.c[0]);
    let disc = Field::sub(&Field::mul(b, b), &Field::mul(&QuadGauss::from_int(4), &Field::mul(a, c)));
    let dg = disc.to_gauss().ok_or_else(|| PuiseuxError::Unsupported(format!("discriminant {} lies in an extension", disc)))?;
    let s = gauss_sqrt(&dg)?;
    for v in [a, b, c] {
        if !QuadGauss::compatible(v.d, s.d) {
            return Err(FieldError::NestedExtension(v.d, s.d).into());
        }
    }
    let two_a = Field::mul(&QuadGauss::from_int(2), a);
    let nb = b.neg();
    Ok(vec![Field::div(&Field::add(&nb, &s), &two_a), Field::div(&Field::sub(&nb, &s), &two_a)])
}

fn guess_gauss(z: Complex64) -> Option<GaussianRational> {
    let re = rationalize(z.re, 1_000_000, 1e-9)?;
    let im = rationalize(z.im, 1_000_000, 1e-9)?;
    Some(GaussianRational::new(re, im))
}

fn simple_roots(f: &UPoly<QuadGauss>) -> Result<Vec<QuadGauss>, PuiseuxError> {
    let mut f = f.monic();
    let mut out = vec![];
    loop {
        match f.degree().unwrap_or(0) {
            0 => return Ok(out),
            1 => {
                out.push(Field::div(&f.c[0].neg(), &f.c[1]));
                return Ok(out);
            }
            2 => {
                out.extend(quadratic_roots(&f)?);
                return Ok(out);
            }
            _ => {
                if f.c.iter().any(|c| !c.is_gauss()) {
                    return Err(PuiseuxError::Unsupported(format!("degree {} factor over an extension", f.c.len() - 1)));
                }
                let fc: Vec<Complex64> = f.c.iter().map(|c| c.to_c64()).collect();
                let mut found = None;
                for z in poly_roots(&fc) {
                    if let Some(g) = guess_gauss(z) {
                        let cand = QuadGauss::from_gauss(g);
                        if f.eval(&cand).is_zero() {
                            found = Some(cand);
                            break;
                        }
                    }
                }
                let Some(root) = found else {
                    return Err(PuiseuxError::Unsupported(format!("irreducible factor of degree {} without Gaussian-rational roots", f.c.len() - 1)));
                };
                let lin = UPoly::new(vec![root.neg(), QuadGauss::from_int(1)]);
                f = f.div_exact(&lin).unwrap();
                out.push(root);
            }
        }
    }
}

/// A `q`-th root of `xi`; any choice gives the same orbit.
fn qth_root(xi: &QuadGauss, q: u32) -> Result<QuadGauss, PuiseuxError> {
    if q == 1 {
        return Ok(xi.clone());
    }
    let g = xi.to_gauss().ok_or_else(|| PuiseuxError::Unsupported(format!("root of {} in an extension", xi)))?;
    if q == 2 {
        return Ok(gauss_sqrt(&g)?);
    }
    if q.is_multiple_of(2) {
        let s = gauss_sqrt(&g)?;
        if let Ok(r) = qth_root(&s, q / 2) {
            return Ok(r);
        }
    }
    let z = g.to_c64();
    let mut cands: Vec<Complex64> = (0..q)
        .map(|k| Complex64::from_polar(z.norm().powf(1.0 / q as f64), (z.arg() + 2.0 * std::f64::consts::PI * k as f64) / q as f64))
        .collect();
    cands.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    for c in cands {
        if let Some(gc) = guess_gauss(c) {
            let cand = QuadGauss::from_gauss(gc);
            if cand.pow(q) == *xi {
                return Ok(cand);
            }
        }
    }
    Err(PuiseuxError::Unsupported(format!("{}-th root of {}", q, xi)))
}

struct Ctx {
    n: u32,
    out: Vec<PuiseuxBranch>,
}

fn finish(ctx: &mut Ctx, st: &Stage) {
    let mut psi = vec![QuadGauss::from_int(0); ctx.n as usize + 1];
    for (e, c) in &st.prefix {
        if *e <= ctx.n {
            psi[*e as usize] = c.clone();
        }
    }
    ctx.out.push(PuiseuxBranch { r: st.r, psi, order: ctx.n, conjugate_partner: None });
}

fn explore(ctx: &mut Ctx, st: Stage) -> Result<(), PuiseuxError> {
    let mu = st.mu;
    let Some(i0) = st.f.keys().filter(|k| k.1 == mu).map(|k| k.0).min() else {
        return Err(PuiseuxError::InsufficientOrder("lost the Newton polygon vertex".into()));
    };
    // lower convex chain from (i0, mu) to the w = 0 axis
    let mut edges: Vec<((u32, u32), (u32, u32), BigRational)> = vec![];
    let (mut iv, mut jv) = (i0, mu);
    let mut tail_open = false;
    while jv > 0 {
        let mut best: Option<(BigRational, u32, u32)> = None;
        for &(i, j) in st.f.keys() {
            if j >= jv {
                continue;
            }
            let s = BigRational::new(BigInt::from(i as i64 - iv as i64), BigInt::from((jv - j) as i64));
            let better = match &best {
                None => true,
                Some((bs, _, bj)) => s < *bs || (s == *bs && j < *bj),
            };
            if better {
                best = Some((s, i, j));
            }
        }
        match best {
            None => {
                tail_open = true;
                break;
            }
            Some((s, i, j)) => {
                if let Some(p) = &st.p {
                    let h = ri(iv as i64) + &s * ri(jv as i64);
                    if &h >= p {
                        tail_open = true;
                        break;
                    }
                }
                edges.push(((iv, jv), (i, j), s));
                iv = i;
                jv = j;
            }
        }
    }
    if tail_open {
        // remaining roots of the vertex (iv, jv) are not resolved by known terms
        if jv != 1 {
            return Err(PuiseuxError::InsufficientOrder(format!("{} roots agree through the known terms; raise the order", jv)));
        }
        let next_lower = st.p.as_ref().map(|p| p - ri(iv as i64));
        if edges.is_empty() {
            match next_lower {
                None => {
                    finish(ctx, &st);
                    return Ok(());
                }
                Some(b) if b > ri(ctx.n as i64) => {
                    finish(ctx, &st);
                    return Ok(());
                }
                Some(b) => {
                    return Err(PuiseuxError::InsufficientOrder(format!("branch known only below exponent {}; raise the order", b)));
                }
            }
        }
    }
    for (a, b, s) in edges {
        let (pn, q) = (s.numer().to_u32().unwrap(), s.denom().to_u32().unwrap());
        let ne = (a.1 - b.1) / q;
        let mut coeffs = vec![QuadGauss::from_int(0); ne as usize + 1];
        for k in 0..=ne {
            let key = (a.0 + pn * k, a.1 - q * k);
            if let Some(v) = st.f.get(&key) {
                coeffs[(ne - k) as usize] = v.clone();
            }
        }
        let psi_poly = UPoly::new(coeffs);
        let roots = exact_roots(&psi_poly)?;
        for (xi, mult) in roots {
            let c = qth_root(&xi, q)?;
            let (f, r, gamma, p, prefix) = if q > 1 {
                (
                    scale_i(&st.f, q),
                    st.r * q,
                    &st.gamma * ri(q as i64),
                    st.p.as_ref().map(|p| p * ri(q as i64)),
                    st.prefix.iter().map(|(e, v)| (e * q, v.clone())).collect::<Vec<_>>(),
                )
            } else {
                (st.f.clone(), st.r, st.gamma.clone(), st.p.clone(), st.prefix.clone())
            };
            let sigma = pn;
            let sig = ri(sigma as i64);
            // precision functional moves from weight gamma to weight sigma
            let p_new = p.map(|p| {
                if gamma.is_zero() || sig >= gamma {
                    p
                } else {
                    p * &sig / &gamma
                }
            });
            if mult == 1 && sigma > ctx.n && p_new.is_none() {
                let st2 = Stage { f: BTreeMap::new(), r, prefix, mu: 1, gamma: sig, p: None };
                finish(ctx, &st2);
                continue;
            }
            // in the simple-root phase, only weights up to the target matter
            let vertex_i = a.0 * q;
            let _ = vertex_i;
            let prune = if mult == 1 {
                let h = ri((a.0 * if q > 1 { q } else { 1 }) as i64 + (sigma as i64) * a.1 as i64);
                let cap = h + ri(ctx.n as i64 + 1);
                Some(match &p_new {
                    Some(p) if p < &cap => p.clone(),
                    _ => cap,
                })
            } else {
                p_new.clone()
            };
            let f2 = shift(&f, &c, sigma, prune.as_ref());
            let mut prefix2 = prefix;
            prefix2.push((sigma, c));
            let st2 = Stage { f: f2, r, prefix: prefix2, mu: mult, gamma: sig, p: p_new };
            if mult == 1 && sigma > ctx.n {
                if let Some(p) = &st2.p {
                    let _ = p;
                }
                finish(ctx, &st2);
                continue;
            }
            explore(ctx, st2)?;
        }
    }
    Ok(())
}

/// Branches of `f(x, y) = 0` at the origin, `f` a polynomial in `(x, y)`.
/// With `known_through = Some(N_f)`, terms of total degree above `N_f` are
/// treated as unknown and branch coefficients are only reported when
/// determined by the known terms.
pub fn newton_puiseux(f: &MultiPoly, known_through: Option<u32>, order: u32) -> Result<Vec<PuiseuxBranch>, PuiseuxError> {
    if f.nvars() != 2 {
        return Err(PuiseuxError::Unsupported(format!("expected two variables, got {:?}", f.vars())));
    }
    if f.is_zero() {
        return Err(PuiseuxError::Zero);
    }
    if !f.constant_term().is_zero() {
        return Err(PuiseuxError::NotVanishing);
    }
    let mut bi = to_bi(f);
    if let Some(n) = known_through {
        bi.retain(|k, _| k.0 + k.1 <= n);
    }
    let w = bi.keys().filter(|k| k.0 == 0).map(|k| k.1).min().ok_or(PuiseuxError::NotYRegular)?;
    let st = Stage { f: bi, r: 1, prefix: vec![], mu: w, gamma: BigRational::zero(), p: known_through.map(|n| ri(n as i64 + 1)) };
    // initial functional has weight 1 on both exponents
    let st = Stage { gamma: ri(1), ..st };
    let mut ctx = Ctx { n: order, out: vec![] };
    explore(&mut ctx, st)?;
    let mut branches = ctx.out;
    if f.is_real() {
        pair_conjugates(&mut branches);
    }
    Ok(branches)
}

/// Link each branch to the branch holding its complex conjugate orbit.
pub fn pair_conjugates(branches: &mut [PuiseuxBranch]) {
    let n = branches.len();
    for j in 0..n {
        let conj: Vec<QuadGauss> = branches[j].psi.iter().map(|c| c.conj()).collect();
        let mut partner = None;
        'search: for k in 0..n {
            if branches[k].r != branches[j].r {
                continue;
            }
            for m in 1..=branches[k].r {
                if let Ok(inst) = branches[k].instance(m, false) {
                    if inst == conj {
                        partner = Some(k);
                        break 'search;
                    }
                }
            }
        }
        branches[j].conjugate_partner = partner;
    }
}

/// `f(t^r, ψ(t))` through `t^limit`.
pub fn branch_residual(f: &MultiPoly, b: &PuiseuxBranch, limit: u32) -> Vec<QuadGauss> {
    let len = limit as usize + 1;
    let mul = |a: &[QuadGauss], c: &[QuadGauss]| {
        let mut out = vec![QuadGauss::from_int(0); len];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in c.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] = Field::add(&out[i + j], &Field::mul(x, y));
            }
        }
        out
    };
    let mut psi = b.psi.clone();
    psi.resize(len, QuadGauss::from_int(0));
    psi.truncate(len);
    let maxj = f.degree_in(1) as usize;
    let mut pows = vec![{
        let mut one = vec![QuadGauss::from_int(0); len];
        one[0] = QuadGauss::from_int(1);
        one
    }];
    for k in 1..=maxj {
        let next = mul(&pows[k - 1], &psi);
        pows.push(next);
    }
    let mut acc = vec![QuadGauss::from_int(0); len];
    for (m, c) in f.terms() {
        let shift = (m.0[0] * b.r) as usize;
        if shift >= len {
            continue;
        }
        let cq = QuadGauss::from_gauss(c.clone());
        for t in 0..len - shift {
            let v = &pows[m.0[1] as usize][t];
            if !v.is_zero() {
                acc[t + shift] = Field::add(&acc[t + shift], &Field::mul(&cq, v));
            }
        }
    }
    acc
}

/// Lowest index with a nonzero entry.
pub fn series_order(v: &[QuadGauss]) -> Option<usize> {
    v.iter().position(|c| !c.is_zero())
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

pub fn is_positive_rational(q: &BigRational) -> bool {
    q.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn g(re: i64, im: i64) -> QuadGauss {
        QuadGauss::from_gauss(GaussianRational::from_ints(re, im))
    }

    #[test]
    fn cusp() {
        let f = parse_poly("y^2 - x^3").unwrap();
        let b = newton_puiseux(&f, None, 6).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].r, 2);
        let mut expect = vec![g(0, 0); 7];
        expect[3] = g(1, 0);
        assert_eq!(b[0].psi, expect);
        assert!(series_order(&branch_residual(&f, &b[0], 6)).is_none());
    }

    #[test]
    fn geometric_branch() {
        // (1 - 2ix) y - x
        let f = parse_poly("y - 2*i*x*y - x").unwrap();
        let b = newton_puiseux(&f, None, 4).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].r, 1);
        assert_eq!(b[0].psi[..4], [g(0, 0), g(1, 0), g(0, 2), g(-4, 0)]);
    }

    #[test]
    fn conjugate_pair() {
        let f = parse_poly("(y-x)^2 + x^4").unwrap();
        let b = newton_puiseux(&f, None, 5).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].conjugate_partner, Some(1));
        assert_eq!(b[1].conjugate_partner, Some(0));
        for br in &b {
            assert!(series_order(&branch_residual(&f, br, 5)).is_none());
        }
    }

    #[test]
    fn unresolved_roots_need_more_order() {
        let f = parse_poly("(y-x)^2 + x^9").unwrap();
        assert!(matches!(newton_puiseux(&f, Some(8), 4), Err(PuiseuxError::InsufficientOrder(_))));
        assert_eq!(newton_puiseux(&f, Some(9), 4).unwrap().len(), 1);
    }
}
