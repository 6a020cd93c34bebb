//! Floating-point polynomial roots (Aberth–Ehrlich) and rational
//! reconstruction of floating values.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

/// All complex roots of `Σ c[k] t^k` (trailing zero coefficients dropped).
pub fn poly_roots(c: &[Complex64]) -> Vec<Complex64> {
    let mut c = c.to_vec();
    while c.last().is_some_and(|a| a.norm() == 0.0) {
        c.pop();
    }
    let mut zeros = 0;
    while c.first().is_some_and(|a| a.norm() == 0.0) && c.len() > 1 {
        c.remove(0);
        zeros += 1;
    }
    let n = c.len().saturating_sub(1);
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    if n == 0 {
        return out;
    }
    let lead = c[n];
    let a: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    // Cauchy bound for initial circle
    let bound = 1.0 + a[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let r0 = bound.min(1e6) * 0.5 + 0.1;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    let eval = |t: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for k in (0..=n).rev() {
            dp = dp * t + p;
            p = p * t + a[k];
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        s += 1.0 / d;
                    }
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    out.extend(z);
    out
}

/// Best rational approximation with denominator at most `max_den`
/// (continued fractions), if it lies within `tol` of `v`.
pub fn rationalize(v: f64, max_den: i64, tol: f64) -> Option<BigRational> {
    if !v.is_finite() {
        return None;
    }
    let sign = if v < 0.0 { -1i64 } else { 1 };
    let mut x = v.abs();
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    for _ in 0..64 {
        let a = x.floor();
        if a > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let approx = h1 as f64 / k1 as f64;
        if (approx - v.abs()).abs() <= tol * v.abs().max(1.0) {
            return Some(BigRational::new(BigInt::from(sign as i128 * h1), BigInt::from(k1)));
        }
        let frac = x - a;
        if frac < 1e-300 {
            break;
        }
        x = 1.0 / frac;
    }
    if k1 != 0 && ((h1 as f64 / k1 as f64) - v.abs()).abs() <= tol * v.abs().max(1.0) {
        return Some(BigRational::new(BigInt::from(sign as i128 * h1), BigInt::from(k1)));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_cubic() {
        // (t-1)(t+2)(t-i)
        let c = [Complex64::new(0.0, 2.0), Complex64::new(-2.0, -1.0), Complex64::new(1.0, -1.0), Complex64::new(1.0, 0.0)];
        let mut r = poly_roots(&c);
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] - Complex64::new(-2.0, 0.0)).norm() < 1e-10);
        assert!((r[1] - Complex64::new(0.0, 1.0)).norm() < 1e-10);
        assert!((r[2] - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn rationalize_values() {
        assert_eq!(rationalize(0.375, 1000, 1e-12), Some(BigRational::new(3.into(), 8.into())));
        assert_eq!(rationalize(-4.0, 1000, 1e-12), Some(BigRational::new((-4).into(), 1.into())));
        assert!(rationalize(std::f64::consts::PI, 100, 1e-12).is_none());
    }
}
