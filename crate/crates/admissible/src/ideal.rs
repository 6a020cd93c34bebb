//! The ideal of admissible numerators `{q : q/p bounded near 0}` of a stable
//! `p(x, z)` with a smooth zero at the origin, and membership with witnesses.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::branch::{classify, solve_branch, BranchError, BranchSolution, PhiClassification, PhiKind, SanityViolation};
use crate::closure::{ic_generators, ic_membership, monomialize, ClosureError, IcVerdict, MonomialIdealIC};
use crate::gaussian::GaussianRational;
use crate::poly::{Monomial, MultiPoly};
use crate::puiseux::{polynomial_model, ModelOptions, PolynomialModel, PuiseuxError};
use crate::series::TruncatedSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealCase {
    Principal,
    Definite,
    LinearForm,
    IsolatedDegenerate,
}

impl IdealCase {
    pub fn name(&self) -> &'static str {
        match self {
            IdealCase::Principal => "Principal",
            IdealCase::Definite => "Definite",
            IdealCase::LinearForm => "LinearForm",
            IdealCase::IsolatedDegenerate => "IsolatedDegenerate",
        }
    }
}

#[derive(Clone, Debug)]
pub struct IdealOptions {
    pub order: u32,
    pub seed: u64,
}

impl Default for IdealOptions {
    fn default() -> Self {
        IdealOptions { order: 12, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct IdealDescription {
    pub case: IdealCase,
    pub generators: Vec<MultiPoly>,
    /// Real polynomial in the `x` variables; the first generator is `z + H`
    /// except in the linear-form case, where it is the real part of `p`.
    pub h: MultiPoly,
    /// `L` (definite), the power of the linear form, or `K`.
    pub l_or_k: u32,
    pub g: Option<MultiPoly>,
    pub p: MultiPoly,
    pub branch: BranchSolution,
    pub classification: PhiClassification,
    /// `ℓ` and the exponent `2m` with `Im φ = ℓ^{2m}·(positive unit)`.
    pub linear_form: Option<(MultiPoly, u32)>,
    pub model: Option<PolynomialModel>,
    pub ic: Option<MonomialIdealIC>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IdealError {
    #[error(transparent)]
    Branch(#[from] BranchError),
    #[error(transparent)]
    Sanity(#[from] SanityViolation),
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error(transparent)]
    Puiseux(#[from] PuiseuxError),
    #[error(transparent)]
    Closure(#[from] ClosureError),
}

fn xvars(p: &MultiPoly) -> Vec<String> {
    p.vars()[..p.nvars() - 1].to_vec()
}

/// Monomials of total degree `k` in `n` variables, in canonical order.
pub fn monomials_of_degree(vars: &[String], k: u32) -> Vec<MultiPoly> {
    fn rec(n: usize, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 1 {
            cur.push(k);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=k).rev() {
            cur.push(a);
            rec(n - 1, k - a, cur, out);
            cur.pop();
        }
    }
    let mut exps = vec![];
    rec(vars.len(), k, &mut vec![], &mut exps);
    exps.into_iter().map(|e| MultiPoly::monomial(vars, e, GaussianRational::one())).collect()
}

fn z_plus(p: &MultiPoly, h: &MultiPoly) -> MultiPoly {
    let vars = p.vars().to_vec();
    let z = MultiPoly::var(&vars, &vars[vars.len() - 1]);
    &z + &h.align(&vars)
}

/// `c·ℓ^{2m}` with `ℓ` real linear, for a real form `f`.
fn linear_power(f: &MultiPoly) -> Option<(MultiPoly, u32)> {
    let deg = f.total_degree()?;
    if deg == 0 || deg % 2 == 1 {
        return None;
    }
    // ℓ from the gcd of f with its derivatives down to a linear factor
    let mut cand = f.clone();
    for _ in 1..deg {
        let idx = (0..cand.nvars()).find(|&i| cand.mentions(i))?;
        cand = crate::gcd::gcd(&cand, &cand.derivative(idx));
    }
    if cand.total_degree() != Some(1) || !cand.is_real() {
        return None;
    }
    let l = cand;
    let q = f.div_exact(&l.pow(deg))?;
    if q.total_degree() != Some(0) || !q.constant_term().re.is_positive() {
        return None;
    }
    Some((l, deg))
}

fn divisible_by(f: &MultiPoly, l: &MultiPoly, k: u32) -> bool {
    let lk = l.pow(k);
    let top = f.total_degree().unwrap_or(0);
    (0..=top).all(|d| {
        let part = f.homogeneous_part(d);
        part.is_zero() || part.div_exact(&lk).is_some()
    })
}

fn real_part_series(sol: &BranchSolution) -> MultiPoly {
    sol.phi.poly().re_part()
}

fn im_part_series(sol: &BranchSolution) -> MultiPoly {
    sol.phi.poly().im_part()
}

/// Generators and metadata of the admissible-numerator ideal of `p`.
pub fn numerator_ideal(p: &MultiPoly, opts: &IdealOptions) -> Result<IdealDescription, IdealError> {
    let sol = solve_branch(p, opts.order)?;
    let cls = classify(&sol)?;
    let xv = xvars(p);
    let base = |case, generators, h, l_or_k| IdealDescription {
        case,
        generators,
        h,
        l_or_k,
        g: None,
        p: p.clone(),
        branch: sol.clone(),
        classification: cls.clone(),
        linear_form: None,
        model: None,
        ic: None,
    };
    if let PhiKind::AllRealUpToOrder { .. } = cls.kind {
        let h = real_part_series(&sol);
        return Ok(base(IdealCase::Principal, vec![p.clone()], h, 0));
    }
    let two_l = 2 * cls.l;
    let re = real_part_series(&sol);
    if cls.definite {
        let h = re.truncate(two_l - 1);
        let mut gens = vec![z_plus(p, &h)];
        gens.extend(monomials_of_degree(&xv, two_l).into_iter().map(|m| m.align(p.vars())));
        return Ok(base(IdealCase::Definite, gens, h, cls.l));
    }
    let im = im_part_series(&sol);
    if let Some((l, k)) = linear_power(&cls.im_part) {
        if divisible_by(&im, &l, k) {
            let h = re.truncate(k - 1);
            let rp = p.re_part();
            // Re p generates together with ℓ^k when it reduces to 0 mod ℓ^k on z = -Re φ
            let zname = p.vars()[p.nvars() - 1].clone();
            let red = rp.substitute_trunc(&zname, &re.scale(&GaussianRational::from_int(-1)).align(p.vars()), opts.order).truncate(opts.order);
            let zc = rp.derivative(p.nvars() - 1).constant_term();
            let first = if !zc.is_zero() && divisible_by(&red.compact_vars_to(&xv), &l, k) { rp } else { z_plus(p, &h) };
            let mut d = base(IdealCase::LinearForm, vec![first, l.pow(k).align(p.vars())], h, k);
            d.linear_form = Some((l, k));
            return Ok(d);
        }
    }
    if xv.len() != 2 {
        return Err(IdealError::OutOfScope(format!("degenerate Im φ in {} variables; only two are supported", xv.len())));
    }
    let lopts = ModelOptions { known_through: Some(opts.order), ..Default::default() };
    let loc = polynomial_model(&im, &lopts)?;
    let k = loc.k;
    let h = re.truncate(k - 1);
    let ic = monomialize(&loc.g)?;
    let mut gens = vec![z_plus(p, &h)];
    gens.extend(ic_generators(&ic, 4 * k + 4)?.into_iter().map(|g| g.align(p.vars())));
    let mut d = base(IdealCase::IsolatedDegenerate, gens, h, k);
    d.g = Some(loc.g.clone());
    d.model = Some(loc);
    d.ic = Some(ic);
    Ok(d)
}

trait CompactTo {
    fn compact_vars_to(&self, vars: &[String]) -> MultiPoly;
}

impl CompactTo for MultiPoly {
    /// Drop variables outside `vars`, which must not appear in any term.
    fn compact_vars_to(&self, vars: &[String]) -> MultiPoly {
        let idx: Vec<usize> = vars.iter().map(|v| self.var_index(v).expect("variable present")).collect();
        let mut out = MultiPoly::zero(vars);
        for (m, c) in self.terms() {
            out.add_term(Monomial(idx.iter().map(|&i| m.0[i]).collect()), c.clone());
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    InIdeal,
    NotInIdeal,
    Indeterminate,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::InIdeal => "InIdeal",
            Verdict::NotInIdeal => "NotInIdeal",
            Verdict::Indeterminate => "Indeterminate",
        }
    }
}

/// A path `x(t)` (polynomial in `t`), with `z` on the real slice
/// `z = -Re φ(x)` or, in the principal case, `z = -φ(x) + i t^e`. Along it
/// `|q|` divided by `|Im φ|` (or `|p|` in the principal case) grows as
/// `t → 0`; `ratios` holds samples at `t = 4^-k`.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessPath {
    pub x: Vec<MultiPoly>,
    pub z_imag_exponent: Option<u32>,
    pub description: String,
    pub ratios: Vec<(f64, f64)>,
}

#[derive(Clone, Debug)]
pub struct MembershipVerdict {
    pub verdict: Verdict,
    /// `q(x, -H(x))`.
    pub reduced_numerator: TruncatedSeries,
    pub witness: Option<WitnessPath>,
    pub certificate: String,
}

fn tvar() -> Vec<String> {
    crate::poly::vars(&["t"])
}

fn eval_path(path: &[MultiPoly], t: f64) -> Vec<Complex64> {
    path.iter().map(|c| c.eval_c64(&[Complex64::new(t, 0.0)])).collect()
}

fn eval_series(f: &MultiPoly, x: &[Complex64]) -> Complex64 {
    f.eval_c64(x)
}

/// Ratio samples along `x(t)`, `z = -A(x)` (+ `i t^e`), against `|B(x)|` or `|p|`.
fn path_ratios(desc: &IdealDescription, q: &MultiPoly, path: &[MultiPoly], imag: Option<u32>) -> Vec<(f64, f64)> {
    let re = real_part_series(&desc.branch);
    let im = im_part_series(&desc.branch);
    let vars = desc.p.vars().to_vec();
    let q = q.align(&MultiPoly::union_vars(q.vars(), &vars)).align(&vars);
    let xv = xvars(&desc.p);
    let (re, im) = (re.align(&xv), im.align(&xv));
    let mut out = vec![];
    for k in 1..=6 {
        let t = 4f64.powi(-k);
        let x = eval_path(path, t);
        let mut pt = x.clone();
        let ratio = match imag {
            None => {
                pt.push(-eval_series(&re, &x));
                let qv = q.eval_c64(&pt).norm();
                let b = eval_series(&im, &x).norm();
                qv / b
            }
            Some(e) => {
                let phi = desc.branch.phi.poly().align(&xv);
                pt.push(-eval_series(&phi, &x) + Complex64::new(0.0, t.powi(e as i32)));
                q.eval_c64(&pt).norm() / desc.p.eval_c64(&pt).norm()
            }
        };
        out.push((t, ratio));
    }
    out
}

fn grows(r: &[(f64, f64)]) -> bool {
    r.windows(3).any(|w| w[1].1 >= 2.0 * w[0].1 && w[2].1 >= 2.0 * w[1].1) && r.last().is_some_and(|l| l.1.is_finite())
}

fn direction_candidates(n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![1; n]];
    let vals = [1i64, -1, 2, 0, -2, 3];
    let mut idx = vec![0usize; n];
    loop {
        let v: Vec<i64> = idx.iter().map(|&i| vals[i]).collect();
        if v.iter().any(|&a| a != 0) && !out.contains(&v) {
            out.push(v);
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            idx[k] += 1;
            if idx[k] < vals.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn ray(d: &[i64]) -> Vec<MultiPoly> {
    let tv = tvar();
    d.iter().map(|&a| MultiPoly::var(&tv, "t").scale(&GaussianRational::from_int(a))).collect()
}

/// Ray `x = t·d` on which the lowest part of `q0` does not vanish.
fn ray_witness(desc: &IdealDescription, q: &MultiPoly, q0: &MultiPoly, imag: Option<u32>) -> Option<WitnessPath> {
    let low = q0.order()?;
    let part = q0.homogeneous_part(low);
    for d in direction_candidates(q0.nvars()) {
        let pt: Vec<GaussianRational> = d.iter().map(|&a| GaussianRational::from_int(a)).collect();
        if part.eval_exact(&pt).is_zero() {
            continue;
        }
        let path = ray(&d);
        let ratios = path_ratios(desc, q, &path, imag.map(|_| low + 1));
        if grows(&ratios) {
            return Some(WitnessPath { x: path, z_imag_exponent: imag.map(|_| low + 1), description: format!("x = t*{:?}", d), ratios });
        }
    }
    None
}

fn reduced(desc: &IdealDescription, q: &MultiPoly, order: u32) -> MultiPoly {
    let vars = desc.p.vars().to_vec();
    let q = q.align(&MultiPoly::union_vars(q.vars(), &vars));
    if q.vars() != vars.as_slice() {
        return q;
    }
    let zname = vars[vars.len() - 1].clone();
    let xv = xvars(&desc.p);
    let minus_h = desc.h.align(&xv).scale(&GaussianRational::from_int(-1)).align(&vars);
    q.substitute_trunc(&zname, &minus_h, order).truncate(order).compact_vars_to(&xv)
}

/// Decide `q ∈ I_p^∞` from the description of the ideal.
pub fn membership(desc: &IdealDescription, q: &MultiPoly, opts: &IdealOptions) -> MembershipVerdict {
    let n = opts.order;
    let vars = desc.p.vars().to_vec();
    let qa = q.align(&MultiPoly::union_vars(q.vars(), &vars));
    if qa.vars() != vars.as_slice() {
        return MembershipVerdict {
            verdict: Verdict::Indeterminate,
            reduced_numerator: TruncatedSeries::new(q.clone(), n),
            witness: None,
            certificate: format!("q uses variables outside {:?}", vars),
        };
    }
    let xv = xvars(&desc.p);
    match desc.case {
        IdealCase::Principal => {
            let zname = vars[vars.len() - 1].clone();
            let minus_phi = desc.branch.phi.poly().align(&xv).scale(&GaussianRational::from_int(-1)).align(&vars);
            let q0 = qa.substitute_trunc(&zname, &minus_phi, n).truncate(n).compact_vars_to(&xv);
            let rn = TruncatedSeries::new(q0.clone(), n);
            if q0.is_zero() {
                return MembershipVerdict { verdict: Verdict::InIdeal, reduced_numerator: rn, witness: None, certificate: format!("q(x, -φ(x)) vanishes through order {}", n) };
            }
            let w = ray_witness(desc, &qa, &q0, Some(0));
            let verdict = if w.is_some() { Verdict::NotInIdeal } else { Verdict::Indeterminate };
            MembershipVerdict { verdict, reduced_numerator: rn, witness: w, certificate: format!("q(x, -φ(x)) has order {}", q0.order().unwrap()) }
        }
        IdealCase::Definite => {
            let two_l = 2 * desc.l_or_k;
            let q0 = reduced(desc, &qa, n);
            let rn = TruncatedSeries::new(q0.clone(), n);
            match q0.order() {
                Some(k) if k < two_l => {
                    let w = ray_witness(desc, &qa, &q0, None);
                    let verdict = if w.is_some() { Verdict::NotInIdeal } else { Verdict::Indeterminate };
                    MembershipVerdict { verdict, reduced_numerator: rn, witness: w, certificate: format!("q(x, -H(x)) has a term of degree {} < {}", k, two_l) }
                }
                _ => MembershipVerdict { verdict: Verdict::InIdeal, reduced_numerator: rn, witness: None, certificate: format!("q(x, -H(x)) has order at least {}", two_l) },
            }
        }
        IdealCase::LinearForm => {
            let (l, k) = desc.linear_form.clone().unwrap();
            let re = real_part_series(&desc.branch);
            let zname = vars[vars.len() - 1].clone();
            let minus_a = re.align(&xv).scale(&GaussianRational::from_int(-1)).align(&vars);
            let q0 = qa.substitute_trunc(&zname, &minus_a, n).truncate(n).compact_vars_to(&xv);
            let rn = TruncatedSeries::new(q0.clone(), n);
            if divisible_by(&q0, &l, k) {
                return MembershipVerdict { verdict: Verdict::InIdeal, reduced_numerator: rn, witness: None, certificate: format!("q(x, -Re φ(x)) is divisible by ({})^{} through order {}", l, k, n) };
            }
            let w = linear_form_witness(desc, &qa, &l);
            let verdict = if w.is_some() { Verdict::NotInIdeal } else { Verdict::Indeterminate };
            MembershipVerdict { verdict, reduced_numerator: rn, witness: w, certificate: format!("q(x, -Re φ(x)) is not divisible by ({})^{}", l, k) }
        }
        IdealCase::IsolatedDegenerate => {
            let q0 = reduced(desc, &qa, n);
            let rn = TruncatedSeries::new(q0.clone(), n);
            let ic = desc.ic.as_ref().unwrap();
            match ic_membership(&q0, ic, Some(n)) {
                IcVerdict::Member { .. } => MembershipVerdict { verdict: Verdict::InIdeal, reduced_numerator: rn, witness: None, certificate: "every term of q(x, -H(x)) lies in the Newton polyhedron of g".into() },
                IcVerdict::NotMember { witness } => {
                    let (u, v) = (witness.coeffs.0.clone(), witness.coeffs.1.clone());
                    let m = ic.linear_change.clone();
                    let tv = tvar();
                    let t = MultiPoly::var(&tv, "t");
                    let uc = t.pow(witness.weights.0).scale_rat(&u);
                    let vc = t.pow(witness.weights.1).scale_rat(&v);
                    let path = match m {
                        None => vec![uc, vc],
                        Some(m) => {
                            let d = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
                            let x = &uc.scale_rat(&(&m[1][1] / &d)) - &vc.scale_rat(&(&m[0][1] / &d));
                            let y = &vc.scale_rat(&(&m[0][0] / &d)) - &uc.scale_rat(&(&m[1][0] / &d));
                            vec![x, y]
                        }
                    };
                    let ratios = path_ratios(desc, &qa, &path, None);
                    let description = format!("u = {}*t^{}, v = {}*t^{}: q ~ t^{}, g ~ t^{}", u, witness.weights.0, v, witness.weights.1, witness.q_order, witness.g_order);
                    MembershipVerdict {
                        verdict: Verdict::NotInIdeal,
                        reduced_numerator: rn,
                        witness: Some(WitnessPath { x: path, z_imag_exponent: None, description, ratios }),
                        certificate: "a term of q(x, -H(x)) lies outside the Newton polyhedron of g".into(),
                    }
                }
                IcVerdict::Indeterminate { reason } => MembershipVerdict { verdict: Verdict::Indeterminate, reduced_numerator: rn, witness: None, certificate: reason },
            }
        }
    }
}

/// Paths `x = t·d + t^j·n` hugging the zero line of `ℓ`.
fn linear_form_witness(desc: &IdealDescription, q: &MultiPoly, l: &MultiPoly) -> Option<WitnessPath> {
    let xv = xvars(&desc.p);
    let l = l.align(&xv);
    let coef: Vec<GaussianRational> = (0..xv.len()).map(|i| {
        let mut e = vec![0; xv.len()];
        e[i] = 1;
        l.coeff(&e)
    }).collect();
    let tv = tvar();
    let t = MultiPoly::var(&tv, "t");
    // kernel directions of ℓ from pairs of coordinates, and the normal
    let normal: Vec<GaussianRational> = coef.clone();
    let mut kernels = vec![];
    for i in 0..xv.len() {
        for j in 0..xv.len() {
            if i < j && !(coef[i].is_zero() && coef[j].is_zero()) {
                let mut d = vec![GaussianRational::zero(); xv.len()];
                d[i] = coef[j].clone();
                d[j] = -&coef[i];
                kernels.push(d);
            }
        }
        if coef[i].is_zero() {
            let mut d = vec![GaussianRational::zero(); xv.len()];
            d[i] = GaussianRational::one();
            kernels.push(d);
        }
    }
    for d in kernels {
        for j in 1..=4u32 {
            let path: Vec<MultiPoly> = (0..xv.len()).map(|i| &t.scale(&d[i]) + &t.pow(j + 1).scale(&normal[i])).collect();
            let ratios = path_ratios(desc, q, &path, None);
            if grows(&ratios) {
                return Some(WitnessPath { x: path, z_imag_exponent: None, description: format!("along the zero set of {} with offset t^{}", l, j + 1), ratios });
            }
        }
    }
    None
}
