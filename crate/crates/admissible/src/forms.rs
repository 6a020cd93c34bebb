//! Real binary forms: exact definiteness via Sturm sequences, and a sampled
//! two-sided comparability test `c f <= g <= C f` near the origin.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gaussian::rat_to_f64;
use crate::poly::MultiPoly;
use crate::upoly::{count_real_roots, UPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("the zero form has no definiteness")]
    ZeroForm,
    #[error("not a real homogeneous binary form: {0}")]
    NotBinaryForm(String),
}

/// `Σ coeffs[k] x^k y^(degree-k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousForm {
    pub degree: u32,
    pub coeffs: Vec<BigRational>,
}

impl HomogeneousForm {
    pub fn new(degree: u32, coeffs: Vec<BigRational>) -> Self {
        assert_eq!(coeffs.len(), degree as usize + 1);
        HomogeneousForm { degree, coeffs }
    }

    /// Read a homogeneous real polynomial in at most two variables; the first
    /// variable of `p` plays the role of `x`.
    pub fn from_poly(p: &MultiPoly) -> Result<Self, FormError> {
        if p.nvars() > 2 {
            let used = (0..p.nvars()).filter(|&i| p.mentions(i)).count();
            if used > 2 {
                return Err(FormError::NotBinaryForm(p.to_string()));
            }
            return Self::from_poly(&p.compact_vars());
        }
        if !p.is_real() {
            return Err(FormError::NotBinaryForm(p.to_string()));
        }
        let Some(d) = p.total_degree() else {
            return Err(FormError::ZeroForm);
        };
        if p.order() != Some(d) {
            return Err(FormError::NotBinaryForm(p.to_string()));
        }
        let mut coeffs = vec![BigRational::zero(); d as usize + 1];
        for (m, c) in p.terms() {
            let k = if p.nvars() >= 1 { m.0[0] } else { 0 };
            coeffs[k as usize] = c.re.clone();
        }
        Ok(HomogeneousForm { degree: d, coeffs })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `f(1, t)` as a polynomial in `t`.
    pub fn dehomog_x(&self) -> UPoly<BigRational> {
        UPoly::new(self.coeffs.iter().rev().cloned().collect())
    }
    /// `f(t, 1)` as a polynomial in `t`.
    pub fn dehomog_y(&self) -> UPoly<BigRational> {
        UPoly::new(self.coeffs.clone())
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let d = self.degree as i32;
        self.coeffs.iter().enumerate().map(|(k, c)| rat_to_f64(c) * x.powi(k as i32) * y.powi(d - k as i32)).sum()
    }
}

/// Exact test of `f(x, y) > 0` for all `(x, y) != 0`.
pub fn is_positive_definite(f: &HomogeneousForm) -> Result<bool, FormError> {
    if f.is_zero() {
        return Err(FormError::ZeroForm);
    }
    if f.degree % 2 == 1 {
        return Ok(false);
    }
    let lead_x = &f.coeffs[f.degree as usize];
    let lead_y = &f.coeffs[0];
    if !lead_x.is_positive() || !lead_y.is_positive() {
        return Ok(false);
    }
    // f(1,t) and f(t,1) root-free; with f(1,0), f(0,1) > 0 this covers every direction
    Ok(count_real_roots(&f.dehomog_x()) == 0 && count_real_roots(&f.dehomog_y()) == 0)
}

/// Exact test of `f(x, y) >= 0` everywhere.
pub fn is_nonnegative(f: &HomogeneousForm) -> Result<bool, FormError> {
    if f.is_zero() {
        return Err(FormError::ZeroForm);
    }
    if f.degree % 2 == 1 {
        return Ok(false);
    }
    for u in [f.dehomog_x(), f.dehomog_y()] {
        // a sign change needs a root of odd multiplicity
        if count_real_roots(&u.odd_part()) > 0 {
            return Ok(false);
        }
        let mut t = 0i64;
        loop {
            let v = u.eval(&BigRational::from_integer(BigInt::from(t)));
            if !v.is_zero() {
                if v.is_negative() {
                    return Ok(false);
                }
                break;
            }
            t += 1;
        }
    }
    Ok(true)
}

/// Sign behaviour of a real homogeneous form in any number of variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    /// Nonnegative with nontrivial zeros.
    Semidefinite,
    Indefinite,
}

/// Definiteness of a homogeneous real polynomial. Exact for one or two
/// variables; sampled on `samples` seeded random directions otherwise.
pub fn definiteness(p: &MultiPoly, samples: usize, seed: u64) -> Result<Definiteness, FormError> {
    let pc = p.compact_vars();
    if pc.is_zero() {
        return Err(FormError::ZeroForm);
    }
    if !pc.is_real() || pc.order() != pc.total_degree() {
        return Err(FormError::NotBinaryForm(p.to_string()));
    }
    if pc.nvars() <= 2 {
        let f = HomogeneousForm::from_poly(&pc)?;
        if pc.nvars() == 1 {
            let d = f.degree;
            let c = pc.terms().next().unwrap().1.re.clone();
            return Ok(if d % 2 == 0 && c.is_positive() { Definiteness::PositiveDefinite } else { Definiteness::Indefinite });
        }
        if is_positive_definite(&f)? {
            return Ok(Definiteness::PositiveDefinite);
        }
        return Ok(if is_nonnegative(&f)? { Definiteness::Semidefinite } else { Definiteness::Indefinite });
    }
    let cf = pc.float_coeffs();
    let n = pc.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut minv = f64::INFINITY;
    let mut maxv = 0f64;
    for _ in 0..samples {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt().max(1e-12);
        v.iter_mut().for_each(|a| *a /= norm);
        let pt: Vec<num_complex::Complex64> = v.iter().map(|&a| num_complex::Complex64::new(a, 0.0)).collect();
        let val = crate::poly::eval_float_terms(&cf, &pt).re;
        minv = minv.min(val);
        maxv = maxv.max(val.abs());
    }
    let tol = 1e-9 * maxv.max(1e-300);
    Ok(if minv > tol {
        Definiteness::PositiveDefinite
    } else if minv >= -tol {
        Definiteness::Semidefinite
    } else {
        Definiteness::Indefinite
    })
}

/// Per-radius extremes of `g/f` on a circle.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioLevel {
    pub radius: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Comparable,
    /// The ratio degenerates; the reason names the observed trend.
    Fail(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparabilityReport {
    pub levels: Vec<RatioLevel>,
    pub min: f64,
    pub max: f64,
    pub verdict: Verdict,
}

impl ComparabilityReport {
    /// Multiplicative width `max/min` over all radii.
    pub fn width(&self) -> f64 {
        self.max / self.min
    }
    pub fn is_comparable(&self) -> bool {
        self.verdict == Verdict::Comparable
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ComparabilityError {
    #[error("f vanishes at sample point ({0}, {1})")]
    ZeroDenominator(f64, f64),
    #[error("no radii given")]
    NoRadii,
}

/// Ratios below this are treated as degenerate.
const DEGENERATE: f64 = 1e-12;

/// Sample `g/f` on circles of the given radii with `n_angles` equally spaced
/// directions. Fails when the per-radius spread, maximum, or inverse minimum
/// grows at least twofold across three consecutive radii, or when the ratio
/// collapses towards zero.
pub fn comparability_ratio(
    f: &dyn Fn(f64, f64) -> f64,
    g: &dyn Fn(f64, f64) -> f64,
    radii: &[f64],
    n_angles: usize,
) -> Result<ComparabilityReport, ComparabilityError> {
    if radii.is_empty() {
        return Err(ComparabilityError::NoRadii);
    }
    let mut rs = radii.to_vec();
    rs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut levels = vec![];
    for &r in &rs {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in 0..n_angles {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n_angles as f64;
            let (x, y) = (r * th.cos(), r * th.sin());
            let fv = f(x, y);
            if fv == 0.0 {
                return Err(ComparabilityError::ZeroDenominator(x, y));
            }
            let q = g(x, y) / fv;
            lo = lo.min(q);
            hi = hi.max(q);
        }
        levels.push(RatioLevel { radius: r, min: lo, max: hi });
    }
    let min = levels.iter().map(|l| l.min).fold(f64::INFINITY, f64::min);
    let max = levels.iter().map(|l| l.max).fold(f64::NEG_INFINITY, f64::max);
    let mut verdict = Verdict::Comparable;
    if min <= DEGENERATE * max.abs().max(1.0) || min <= 0.0 {
        verdict = Verdict::Fail(format!("ratio degenerates (min {:.3e})", min));
    } else {
        for w in levels.windows(3) {
            let spread = |l: &RatioLevel| l.max / l.min;
            let grows = |a: f64, b: f64, c: f64| b >= 2.0 * a && c >= 2.0 * b;
            if grows(spread(&w[0]), spread(&w[1]), spread(&w[2])) {
                verdict = Verdict::Fail(format!("ratio spread diverges near radius {:.3e}", w[2].radius));
                break;
            }
            if grows(w[0].max, w[1].max, w[2].max) {
                verdict = Verdict::Fail(format!("ratio blows up near radius {:.3e}", w[2].radius));
                break;
            }
            if grows(1.0 / w[0].min, 1.0 / w[1].min, 1.0 / w[2].min) {
                verdict = Verdict::Fail(format!("ratio collapses near radius {:.3e}", w[2].radius));
                break;
            }
        }
    }
    Ok(ComparabilityReport { levels, min, max, verdict })
}

/// Radii `2^-a, ..., 2^-b`.
pub fn dyadic_radii(a: i32, b: i32) -> Vec<f64> {
    (a..=b).map(|k| 2f64.powi(-k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn form(s: &str) -> HomogeneousForm {
        HomogeneousForm::from_poly(&parse_poly(s).unwrap()).unwrap()
    }

    #[test]
    fn definiteness_examples() {
        assert!(is_positive_definite(&form("x^2+x*y+y^2")).unwrap());
        assert!(!is_positive_definite(&form("(x-y)^2")).unwrap());
        assert!(is_nonnegative(&form("(x-y)^2")).unwrap());
        assert!(!is_nonnegative(&form("x^2-y^2")).unwrap());
        assert!(!is_positive_definite(&form("x^3")).unwrap());
        assert_eq!(is_positive_definite(&HomogeneousForm::new(2, vec![BigRational::zero(); 3])), Err(FormError::ZeroForm));
    }

    #[test]
    fn comparability_examples() {
        let f = |x: f64, y: f64| x * x + y * y;
        let g = |x: f64, y: f64| x * x + 2.0 * y * y;
        let rep = comparability_ratio(&f, &g, &dyadic_radii(4, 10), 720).unwrap();
        assert!(rep.is_comparable());
        assert!(rep.width() <= 2.0 + 1e-9);
        let g2 = |x: f64, _y: f64| x * x;
        let rep2 = comparability_ratio(&f, &g2, &dyadic_radii(4, 10), 720).unwrap();
        assert!(!rep2.is_comparable());
    }
}
