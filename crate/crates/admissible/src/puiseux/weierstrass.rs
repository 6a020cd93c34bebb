//! Weierstrass preparation `f = U·W` in `Q(i)[[x]][y]` by Hensel lifting
//! modulo a power of `x`.

use num_traits::Zero;

use super::PuiseuxError;
use crate::gaussian::GaussianRational;
use crate::poly::MultiPoly;
use crate::upoly::{Field, UPoly};

type G = GaussianRational;

/// Polynomial in `y` per power of `x`: `c[k]` is the coefficient of `x^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct XSeries {
    pub c: Vec<UPoly<G>>,
}

impl XSeries {
    pub fn from_poly(f: &MultiPoly, xprec: u32) -> Self {
        let mut rows: Vec<Vec<G>> = vec![vec![]; xprec as usize];
        for (m, a) in f.terms() {
            let (i, j) = (m.0[0] as usize, m.0[1] as usize);
            if i < xprec as usize {
                let row = &mut rows[i];
                if row.len() <= j {
                    row.resize(j + 1, G::zero());
                }
                row[j] = a.clone();
            }
        }
        XSeries { c: rows.into_iter().map(UPoly::new).collect() }
    }

    pub fn to_poly(&self, vars: &[String]) -> MultiPoly {
        let mut terms = vec![];
        for (i, row) in self.c.iter().enumerate() {
            for (j, a) in row.c.iter().enumerate() {
                if !a.is_zero() {
                    terms.push((vec![i as u32, j as u32], a.clone()));
                }
            }
        }
        MultiPoly::from_terms(vars, terms)
    }
}

/// Result of preparation through `x^{xprec - 1}`.
#[derive(Clone, Debug)]
pub struct Weierstrass {
    /// Monic of degree `degree` in `y`, lower coefficients vanishing at `x = 0`.
    pub w: XSeries,
    pub unit: XSeries,
    pub degree: usize,
}

fn shift_down(p: &UPoly<G>, w: usize) -> UPoly<G> {
    UPoly::new(p.c.iter().skip(w).cloned().collect())
}

fn mod_yw(p: &UPoly<G>, w: usize) -> UPoly<G> {
    UPoly::new(p.c.iter().take(w).cloned().collect())
}

fn mul_mod(a: &UPoly<G>, b: &UPoly<G>, w: usize) -> UPoly<G> {
    mod_yw(&a.mul(b), w)
}

/// Inverse of `u` modulo `y^w`, `u(0) ≠ 0`.
fn inverse_mod(u: &UPoly<G>, w: usize) -> UPoly<G> {
    let u0 = u.c[0].clone();
    let inv0 = Field::div(&G::from_int(1), &u0);
    let mut out = vec![G::zero(); w];
    for n in 0..w {
        let mut acc = if n == 0 { G::from_int(1) } else { G::zero() };
        for k in 1..=n {
            if let Some(uk) = u.c.get(k) {
                acc = &acc - &(uk * &out[n - k]);
            }
        }
        out[n] = &acc * &inv0;
    }
    UPoly::new(out)
}

/// Prepare `f(x, y)` with `f(0, y) = y^w·(unit)` through `x^{xprec-1}`.
pub fn weierstrass(f: &MultiPoly, xprec: u32) -> Result<Weierstrass, PuiseuxError> {
    let fs = XSeries::from_poly(f, xprec);
    let Some(f0) = fs.c.first().filter(|p| !p.is_zero()) else {
        return Err(PuiseuxError::NotYRegular);
    };
    let w = f0.c.iter().position(|a| !a.is_zero()).unwrap();
    let u0 = shift_down(f0, w);
    let u0inv = inverse_mod(&u0, w.max(1));
    let mut yw = vec![G::zero(); w + 1];
    yw[w] = G::from_int(1);
    let mut wser = vec![UPoly::new(yw)];
    let mut user = vec![u0.clone()];
    for k in 1..xprec as usize {
        // e_k = [x^k](f - U W)
        let mut e = fs.c[k].clone();
        for a in 1..k {
            e = e.sub(&user[a].mul(&wser[k - a]));
        }
        let dw = if w == 0 { UPoly::zero() } else { mul_mod(&e, &u0inv, w) };
        let rest = e.sub(&u0.mul(&dw));
        if rest.c.iter().take(w).any(|a| !a.is_zero()) {
            return Err(PuiseuxError::Numeric("Hensel step left a remainder below y^w".into()));
        }
        user.push(shift_down(&rest, w));
        wser.push(dw);
    }
    Ok(Weierstrass { w: XSeries { c: wser }, unit: XSeries { c: user }, degree: w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    #[test]
    fn product_is_recovered() {
        let f = parse_poly("(y^2 - x*y + 3*x^3 + i*x^2)*(1 + y + 2*x - i*x*y)").unwrap();
        let wp = weierstrass(&f, 6).unwrap();
        assert_eq!(wp.degree, 2);
        let vars = f.vars().to_vec();
        let w = wp.w.to_poly(&vars);
        assert_eq!(w, parse_poly("y^2 - x*y + 3*x^3 + i*x^2").unwrap());
        let u = wp.unit.to_poly(&vars);
        let prod = &u * &w;
        let diff = &prod - &f;
        assert!(diff.terms().all(|(m, _)| m.0[0] >= 6));
    }
}
