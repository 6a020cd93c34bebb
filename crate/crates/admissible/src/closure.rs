//! Integral closure `IC(g) = {q : |q| ≲ g near 0}` for a real bivariate `g`
//! that a linear change of coordinates makes comparable to a sum of even
//! monomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::forms::{comparability_ratio, dyadic_radii, ComparabilityReport};
use crate::gaussian::GaussianRational;
use crate::poly::{vars, MultiPoly};

/// `a·α_u + b·α_v ≥ c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Halfspace {
    pub fn slack(&self, e: (u32, u32)) -> i64 {
        self.a * e.0 as i64 + self.b * e.1 as i64 - self.c
    }
}

/// `(u, v) = M (x, y)`.
pub type Matrix = [[BigRational; 2]; 2];

#[derive(Clone, Debug)]
pub struct MonomialIdealIC {
    /// `None` for the identity frame.
    pub linear_change: Option<Matrix>,
    /// Vertices of the Newton polygon, by increasing `α_u`.
    pub newton_points: Vec<(u32, u32)>,
    pub halfspace: Vec<Halfspace>,
    /// Source variables `(x, y)` of `g`.
    pub vars: Vec<String>,
    pub comparability: Option<ComparabilityReport>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClosureError {
    #[error("no coordinate frame makes g comparable to a sum of even monomials")]
    NoMonomializationFound,
    #[error("expected a real polynomial in two variables")]
    NotBivariateReal,
    #[error("no generators within degree bound {0}")]
    DegreeBound(u32),
}

/// A curve `u = σ_u s^A, v = σ_v s^B` along which `|q|/g → ∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveWitness {
    pub weights: (u32, u32),
    pub coeffs: (BigRational, BigRational),
    /// Order of `q` along the curve.
    pub q_order: u32,
    /// Order of `g` along the curve.
    pub g_order: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub enum IcVerdict {
    /// Every term lies in the Newton polyhedron; per-term minimal slack.
    Member { slack: Vec<((u32, u32), i64)> },
    NotMember { witness: CurveWitness },
    Indeterminate { reason: String },
}

impl IcVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, IcVerdict::Member { .. })
    }
}

fn r(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn det(m: &Matrix) -> BigRational {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

fn inverse(m: &Matrix) -> Matrix {
    let d = det(m);
    [[&m[1][1] / &d, -&m[0][1] / &d], [-&m[1][0] / &d, &m[0][0] / &d]]
}

fn identity() -> Matrix {
    [[r(1), r(0)], [r(0), r(1)]]
}

fn lin(vs: &[String], a: &BigRational, b: &BigRational) -> MultiPoly {
    let x = MultiPoly::var(vs, &vs[0]).scale_rat(a);
    let y = MultiPoly::var(vs, &vs[1]).scale_rat(b);
    &x + &y
}

impl MonomialIdealIC {
    fn matrix(&self) -> Matrix {
        self.linear_change.clone().unwrap_or_else(identity)
    }
    /// The frame coordinates `u, v` as linear forms in `x, y`.
    pub fn frame_forms(&self) -> (MultiPoly, MultiPoly) {
        let m = self.matrix();
        (lin(&self.vars, &m[0][0], &m[0][1]), lin(&self.vars, &m[1][0], &m[1][1]))
    }
    /// `q` written in the frame variables `u, v`.
    pub fn to_frame(&self, q: &MultiPoly) -> MultiPoly {
        to_frame(q, &self.vars, &self.matrix())
    }
    pub fn contains_exponent(&self, e: (u32, u32)) -> bool {
        self.halfspace.iter().all(|h| h.slack(e) >= 0)
    }
    /// Monomials of at least this degree all lie in the polyhedron; `None`
    /// when the polyhedron misses an axis.
    pub fn saturation_degree(&self) -> Option<u32> {
        let first = self.newton_points.first()?;
        let last = self.newton_points.last()?;
        if first.0 != 0 || last.1 != 0 {
            return None;
        }
        Some(first.1.max(last.0))
    }
    /// Order of `Σ u^a v^b` over the vertices along weights `(A, B)`.
    pub fn weighted_order(&self, w: (u32, u32)) -> u32 {
        self.newton_points.iter().map(|p| w.0 * p.0 + w.1 * p.1).min().unwrap_or(0)
    }
    fn is_identity(&self) -> bool {
        self.linear_change.is_none()
    }
}

fn to_frame(q: &MultiPoly, vs: &[String], m: &Matrix) -> MultiPoly {
    let uv = vars(&["u", "v"]);
    let inv = inverse(m);
    let x = lin(&uv, &inv[0][0], &inv[0][1]);
    let y = lin(&uv, &inv[1][0], &inv[1][1]);
    let q = q.align(&MultiPoly::union_vars(q.vars(), vs));
    if q.vars() != vs {
        // q mentions variables beyond x, y; keep as is
        return q;
    }
    q.compose(&[x, y]).align(&uv)
}

/// Lower-left convex chain of the exponent set.
fn newton_vertices(pts: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut p = pts.to_vec();
    p.sort();
    p.dedup_by_key(|e| e.0);
    // keep, for each α_u, the least α_v; dedup_by_key keeps the first (smallest α_v)
    let mut chain: Vec<(u32, u32)> = vec![];
    for q in p {
        if let Some(last) = chain.last() {
            if q.1 >= last.1 {
                continue;
            }
        }
        while chain.len() >= 2 {
            let (a, b) = (chain[chain.len() - 2], chain[chain.len() - 1]);
            // drop b unless it lies strictly below the segment a–q
            let cross = (b.0 as i64 - a.0 as i64) * (q.1 as i64 - a.1 as i64) - (b.1 as i64 - a.1 as i64) * (q.0 as i64 - a.0 as i64);
            if cross <= 0 {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(q);
    }
    chain
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::Integer::gcd(&a, &b)
}

fn halfspaces(v: &[(u32, u32)]) -> Vec<Halfspace> {
    let mut out = vec![Halfspace { a: 1, b: 0, c: v[0].0 as i64 }, Halfspace { a: 0, b: 1, c: v[v.len() - 1].1 as i64 }];
    for w in v.windows(2) {
        let (p, q) = (w[0], w[1]);
        let a = p.1 as i64 - q.1 as i64;
        let b = q.0 as i64 - p.0 as i64;
        let g = gcd(a, b);
        let (a, b) = (a / g, b / g);
        out.push(Halfspace { a, b, c: a * p.0 as i64 + b * p.1 as i64 });
    }
    out
}

fn eval_real(p: &MultiPoly) -> impl Fn(f64, f64) -> f64 {
    let fc = p.float_coeffs();
    move |x, y| fc.iter().map(|(e, c)| c.re * x.powi(e[0] as i32) * y.powi(e[1] as i32)).sum()
}

/// Real eigenframe of the quadratic part, when its eigenvectors are rational.
fn eigenframe(g: &MultiPoly) -> Option<Matrix> {
    let q = g.homogeneous_part(2);
    let a = q.coeff(&[2, 0]).re;
    let b = q.coeff(&[1, 1]).re;
    let c = q.coeff(&[0, 2]).re;
    if b.is_zero() {
        return None;
    }
    let disc = (&a - &c) * (&a - &c) + &b * &b;
    let s = crate::puiseux::field::rat_sqrt(&disc)?;
    let two = r(2);
    let l1 = (&a + &c + &s) / &two;
    // (A - λ) e = 0 with A = [[a, b/2], [b/2, c]]
    let e1 = positive_first((&b / &two, &l1 - &a));
    let e2 = positive_first((-&e1.1, e1.0.clone()));
    Some([[e1.0, e1.1], [e2.0, e2.1]])
}

fn positive_first(e: (BigRational, BigRational)) -> (BigRational, BigRational) {
    let neg = if e.0.is_zero() { e.1.is_negative() } else { e.0.is_negative() };
    if neg {
        (-e.0, -e.1)
    } else {
        e
    }
}

fn candidate_frames(g: &MultiPoly) -> Vec<Option<Matrix>> {
    let mut out = vec![None];
    if let Some(m) = eigenframe(g) {
        out.push(Some(m));
    }
    out.push(Some([[r(1), r(-1)], [r(1), r(1)]]));
    out.push(Some([[r(1), r(1)], [r(1), r(-1)]]));
    out
}

fn try_frame(g: &MultiPoly, m: Option<Matrix>) -> Option<MonomialIdealIC> {
    let vs = g.vars().to_vec();
    let mat = m.clone().unwrap_or_else(identity);
    let gf = to_frame(g, &vs, &mat);
    let pts: Vec<(u32, u32)> = gf.terms().map(|(e, _)| (e.0[0], e.0[1])).collect();
    if pts.is_empty() {
        return None;
    }
    let verts = newton_vertices(&pts);
    for &(a, b) in &verts {
        let c = gf.coeff(&[a, b]);
        if a % 2 == 1 || b % 2 == 1 || !c.is_real() || !c.re.is_positive() {
            return None;
        }
    }
    let ic = MonomialIdealIC { linear_change: m, newton_points: verts.clone(), halfspace: halfspaces(&verts), vars: vs.clone(), comparability: None };
    let (u, v) = ic.frame_forms();
    let mut model = MultiPoly::zero(&vs);
    for &(a, b) in &verts {
        model = &model + &(&u.pow(a) * &v.pow(b));
    }
    // a sum of even monomials with positive coefficients is comparable to
    // the sum over its Newton vertices
    let even_positive = gf.terms().all(|(e, c)| e.0.iter().all(|k| k % 2 == 0) && c.is_real() && c.re.is_positive());
    if model == *g || even_positive {
        return Some(ic);
    }
    let rep = comparability_ratio(&eval_real(g), &eval_real(&model), &dyadic_radii(4, 10), 720).ok()?;
    if !rep.is_comparable() {
        return None;
    }
    Some(MonomialIdealIC { comparability: Some(rep), ..ic })
}

/// Find a frame `(u, v)` with `g ≍ Σ u^{a_i} v^{b_i}` over the Newton vertices.
pub fn monomialize(g: &MultiPoly) -> Result<MonomialIdealIC, ClosureError> {
    if g.nvars() != 2 || !g.is_real() {
        return Err(ClosureError::NotBivariateReal);
    }
    for m in candidate_frames(g) {
        if let Some(ic) = try_frame(g, m) {
            return Ok(ic);
        }
    }
    Err(ClosureError::NoMonomializationFound)
}

/// Weighted-lowest part of `qf` at `σ_u = t, σ_v = 1`, with its weight.
fn lowest_along(qf: &MultiPoly, w: (u32, u32), su: &BigRational) -> Option<(u32, GaussianRational)> {
    let mut best: Option<u32> = None;
    for (e, _) in qf.terms() {
        let wt = w.0 * e.0[0] + w.1 * e.0[1];
        best = Some(best.map_or(wt, |b| b.min(wt)));
    }
    let mut order = best?;
    loop {
        let mut sum = GaussianRational::zero();
        let mut any = false;
        for (e, c) in qf.terms() {
            if w.0 * e.0[0] + w.1 * e.0[1] == order {
                any = true;
                let f = GaussianRational::from_rat(num_traits::pow(su.clone(), e.0[0] as usize));
                sum += &(c * &f);
            }
        }
        if any && !sum.is_zero() {
            return Some((order, sum));
        }
        // cancellation at this weight: look at the next weight up
        let next = qf.terms().map(|(e, _)| w.0 * e.0[0] + w.1 * e.0[1]).filter(|&x| x > order).min()?;
        order = next;
    }
}

fn facet_directions(ic: &MonomialIdealIC, big: u32) -> Vec<(u32, u32)> {
    let mut out = vec![];
    for h in &ic.halfspace {
        if h.a > 0 && h.b > 0 {
            out.push((h.a as u32, h.b as u32));
        }
    }
    out.push((1, big));
    out.push((big, 1));
    out
}

/// Decide `q ∈ IC(g)` in the monomial frame. With `known_through = Some(n)`,
/// terms of `q` above total degree `n` are unknown.
pub fn ic_membership(q: &MultiPoly, ic: &MonomialIdealIC, known_through: Option<u32>) -> IcVerdict {
    let q = match known_through {
        Some(n) => q.truncate(n),
        None => q.clone(),
    };
    let qf = ic.to_frame(&q);
    if qf.nvars() != 2 {
        return IcVerdict::Indeterminate { reason: format!("q involves variables beyond {:?}", ic.vars) };
    }
    let deg = qf.total_degree().unwrap_or(0);
    let mut slack = vec![];
    let mut outside = MultiPoly::zero(qf.vars());
    for (e, c) in qf.terms() {
        let ex = (e.0[0], e.0[1]);
        let s = ic.halfspace.iter().map(|h| h.slack(ex)).min().unwrap();
        slack.push((ex, s));
        if s < 0 {
            outside.add_term(e.clone(), c.clone());
        }
    }
    if outside.is_zero() {
        if let Some(n) = known_through {
            let ok = ic.saturation_degree().is_some_and(|d| n + 1 >= d);
            if !ok {
                return IcVerdict::Indeterminate { reason: format!("terms above degree {} are unknown and may leave the polyhedron", n) };
            }
        }
        return IcVerdict::Member { slack };
    }
    let big = deg.max(ic.newton_points.iter().map(|p| p.0 + p.1).max().unwrap_or(0)) + 1;
    for w in facet_directions(ic, big) {
        let g_order = ic.weighted_order(w);
        for k in 0..=(deg as i64 + 1) {
            let su = if k % 2 == 0 { r(k / 2 + 1) } else { r(-(k / 2 + 1)) };
            let Some((ord, _)) = lowest_along(&qf, w, &su) else { continue };
            if ord < g_order {
                if let Some(n) = known_through {
                    if w.0.min(w.1) * (n + 1) < g_order {
                        continue;
                    }
                }
                return IcVerdict::NotMember { witness: CurveWitness { weights: w, coeffs: (su, BigRational::one()), q_order: ord, g_order } };
            }
            break;
        }
    }
    IcVerdict::Indeterminate { reason: "terms outside the polyhedron cancel along every facet curve".into() }
}

/// Generators of `IC(g)`: the minimal monomials of the polyhedron in the
/// frame mapped back to `x, y`; when the polyhedron meets both axes, the
/// generators of degree at least `D` are replaced by all of `(x, y)^D`.
pub fn ic_generators(ic: &MonomialIdealIC, degree_bound: u32) -> Result<Vec<MultiPoly>, ClosureError> {
    let mut minimal: Vec<(u32, u32)> = vec![];
    let amax = ic.newton_points.last().unwrap().0;
    let mut prev: Option<u32> = None;
    for a in 0..=amax {
        let mut b = 0i64;
        for h in &ic.halfspace {
            if h.b > 0 {
                let need = h.c - h.a * a as i64;
                b = b.max((need + h.b - 1).div_euclid(h.b));
            } else if h.a > 0 && (h.a * a as i64) < h.c {
                b = i64::MAX;
            }
        }
        if b == i64::MAX {
            continue;
        }
        let b = b as u32;
        if prev.is_none_or(|p| b < p) {
            minimal.push((a, b));
            prev = Some(b);
        }
    }
    if minimal.iter().any(|&(a, b)| a + b > degree_bound) {
        return Err(ClosureError::DegreeBound(degree_bound));
    }
    minimal.sort_by_key(|&(a, b)| (a + b, std::cmp::Reverse(a)));
    let (u, v) = ic.frame_forms();
    let vs = ic.vars.clone();
    let mut out = vec![];
    match ic.saturation_degree() {
        Some(d) => {
            let low: Vec<(u32, u32)> = minimal.iter().copied().filter(|&(a, b)| a + b < d).collect();
            for &(a, b) in &low {
                out.push(&u.pow(a) * &v.pow(b));
            }
            for k in (0..=d).rev() {
                let mono = (k, d - k);
                if ic.is_identity() && low.iter().any(|&(a, b)| a <= mono.0 && b <= mono.1) {
                    continue;
                }
                out.push(MultiPoly::monomial(&vs, vec![mono.0, mono.1], GaussianRational::one()));
            }
        }
        None => {
            for &(a, b) in &minimal {
                out.push(&u.pow(a) * &v.pow(b));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    #[test]
    fn hull_and_halfspaces() {
        let v = newton_vertices(&[(0, 4), (1, 2), (2, 2), (2, 0), (3, 1)]);
        assert_eq!(v, vec![(0, 4), (2, 0)]);
        let h = halfspaces(&v);
        assert!(h.contains(&Halfspace { a: 2, b: 1, c: 4 }));
    }

    #[test]
    fn averaged_model_shape() {
        let g = parse_poly("(x-y)^2+(x^2+y^2)*(x+y)^2").unwrap();
        let ic = monomialize(&g).unwrap();
        assert_eq!(ic.newton_points, vec![(0, 4), (2, 0)]);
        let (u, v) = ic.frame_forms();
        assert_eq!(u.to_string(), "x-y");
        assert_eq!(v.to_string(), "x+y");
        assert!(ic_membership(&parse_poly("(x-y)*(x+y)^2").unwrap(), &ic, None).is_member());
        assert!(!ic_membership(&parse_poly("(x+y)^3").unwrap(), &ic, None).is_member());
        match ic_membership(&parse_poly("(x-y)*(x+y)").unwrap(), &ic, None) {
            IcVerdict::NotMember { witness } => {
                assert_eq!(witness.weights, (2, 1));
                assert_eq!((witness.q_order, witness.g_order), (3, 4));
            }
            other => panic!("{:?}", other),
        }
        let gens: Vec<String> = ic_generators(&ic, 8).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(gens[..2], ["x^2-2*x*y+y^2".to_string(), "x^3+x^2*y-x*y^2-y^3".to_string()]);
        assert_eq!(gens.len(), 7);
    }

    #[test]
    fn definite_and_line() {
        let ic = monomialize(&parse_poly("x^2+y^2").unwrap()).unwrap();
        assert!(ic.linear_change.is_none());
        let gens: Vec<String> = ic_generators(&ic, 8).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(gens, ["x^2", "x*y", "y^2"]);
        let line = monomialize(&parse_poly("(x+y)^2").unwrap()).unwrap();
        let gens: Vec<String> = ic_generators(&line, 8).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(gens, ["x^2+2*x*y+y^2"]);
    }
}
