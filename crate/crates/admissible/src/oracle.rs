//! Numeric estimate of `sup |q/p|` on shrinking shells around the origin.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::poly::MultiPoly;

#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Outer radius.
    pub eps: f64,
    /// Number of refinements; shell `k` has radius `eps·4^{-k}`.
    pub grid: u32,
    pub seed: u64,
    /// Cap on the total number of samples.
    pub max_points: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { eps: 0.125, grid: 3, seed: 0, max_points: 100_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    /// Largest `|q/p|` per shell, outermost first.
    pub shell_max: Vec<f64>,
    /// The same, restricted to real points.
    pub real_shell_max: Vec<f64>,
    pub sup: f64,
    /// The shell maxima grow: see [`grows`].
    pub divergent: bool,
    pub real_divergent: bool,
}

/// Least-squares slope of `log max` against `log(1/radius)` over shells
/// shrinking by 4, at least 0.4, with the innermost maximum at least twice
/// the outermost. Single noisy shells do not decide either way.
pub fn grows(v: &[f64]) -> bool {
    if v.len() < 2 || v.iter().any(|x| x.is_nan() || *x <= 0.0) {
        return v.iter().any(|x| x.is_infinite());
    }
    let n = v.len() as f64;
    let xs: Vec<f64> = (0..v.len()).map(|k| k as f64 * 4f64.ln()).collect();
    let ys: Vec<f64> = v.iter().map(|x| x.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den >= 0.4 && v[v.len() - 1] >= 2.0 * v[0]
}

fn directions(n: usize, rng: &mut ChaCha8Rng, extra: usize) -> Vec<Vec<f64>> {
    let mut out = vec![];
    if n == 2 {
        for k in 0..256 {
            let th = 2.0 * std::f64::consts::PI * k as f64 / 256.0;
            out.push(vec![th.cos(), th.sin()]);
        }
    } else {
        let total = 3usize.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let v: Vec<f64> = (0..n)
                .map(|_| {
                    let d = (c % 3) as f64 - 1.0;
                    c /= 3;
                    d
                })
                .collect();
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm > 0.0 {
                out.push(v.iter().map(|a| a / norm).collect());
            }
        }
    }
    for _ in 0..extra {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-9 {
            out.push(v.iter().map(|a| a / norm).collect());
        }
    }
    out
}

/// Sample `|q/p|` with `p, q` in `(x, z)`, on real slices `z = -h(x) + δ`
/// and at interior points of the upper half-space, on shells of radius
/// `eps·4^{-k}`, `k = 0..=grid`.
pub fn boundedness_oracle(p: &MultiPoly, q: &MultiPoly, h: &MultiPoly, cfg: &OracleConfig) -> OracleReport {
    let vars = p.vars().to_vec();
    let q = q.align(&MultiPoly::union_vars(q.vars(), &vars));
    let n = vars.len() - 1;
    let xv = vars[..n].to_vec();
    let h = h.align(&MultiPoly::union_vars(h.vars(), &xv));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let shells = cfg.grid as usize + 1;
    let dirs = directions(n, &mut rng, 256);
    let per_shell = cfg.max_points / shells;
    let offsets = [0.0, 1.0, -1.0];
    let mut shell_max = vec![];
    let mut real_max = vec![];
    for k in 0..shells {
        let rad = cfg.eps * 4f64.powi(-(k as i32));
        let mut pts: Vec<(Vec<Complex64>, bool)> = vec![];
        for d in &dirs {
            for frac in [1.0, 0.5] {
                let x: Vec<Complex64> = d.iter().map(|a| Complex64::new(a * rad * frac, 0.0)).collect();
                let hz = h.eval_c64(&x);
                for &o in &offsets {
                    let mut pt = x.clone();
                    pt.push(-hz + Complex64::new(o * (rad * frac).powi(4), 0.0));
                    pts.push((pt, true));
                }
            }
        }
        let interior = per_shell.saturating_sub(pts.len()).min(20_000);
        for _ in 0..interior {
            let d = &dirs[rng.gen_range(0..dirs.len())];
            let r = rad * rng.gen_range(0.5..1.0);
            let mut pt: Vec<Complex64> = d.iter().map(|a| Complex64::new(a * r, r * rng.gen_range(0.0..1.0f64).powi(3))).collect();
            let hz = h.eval_c64(&pt);
            pt.push(-hz + Complex64::new(0.0, r * rng.gen_range(0.0..1.0f64).powi(3)));
            pts.push((pt, false));
        }
        pts.truncate(per_shell.max(1));
        let vals: Vec<(f64, bool)> = pts
            .par_iter()
            .filter_map(|(pt, real)| {
                let pv = p.eval_c64(pt);
                if pv.norm() == 0.0 || !pv.is_finite() {
                    return None;
                }
                Some(((q.eval_c64(pt) / pv).norm(), *real))
            })
            .collect();
        shell_max.push(vals.iter().map(|v| v.0).fold(0.0, f64::max));
        real_max.push(vals.iter().filter(|v| v.1).map(|v| v.0).fold(0.0, f64::max));
    }
    let sup = shell_max.iter().cloned().fold(0.0, f64::max);
    OracleReport { divergent: grows(&shell_max), real_divergent: grows(&real_max), shell_max, real_shell_max: real_max, sup }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    #[test]
    fn definite_example_flags() {
        let p = parse_poly("x+y+z-2*i*(x*y+x*z+y*z)-3*x*y*z").unwrap();
        let h = parse_poly("x+y").unwrap();
        let cfg = OracleConfig::default();
        assert!(!boundedness_oracle(&p, &parse_poly("x+y+z").unwrap(), &h, &cfg).divergent);
        assert!(!boundedness_oracle(&p, &parse_poly("x*y").unwrap(), &h, &cfg).divergent);
        assert!(boundedness_oracle(&p, &parse_poly("1").unwrap(), &h, &cfg).divergent);
        assert!(boundedness_oracle(&p, &parse_poly("x").unwrap(), &h, &cfg).divergent);
    }
}
