//! Multivariate power series truncated at a total degree.

use std::fmt;

use num_traits::{One, Zero};

use crate::gaussian::GaussianRational;
use crate::poly::MultiPoly;

/// Default truncation order for series computations.
pub const DEFAULT_ORDER: u32 = 12;

/// A power series known exactly through total degree `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    poly: MultiPoly,
    order: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("series has zero constant term and cannot be inverted")]
    NotInvertible,
}

impl TruncatedSeries {
    pub fn new(poly: MultiPoly, order: u32) -> Self {
        TruncatedSeries { poly: poly.truncate(order), order }
    }
    pub fn zero(vars: &[String], order: u32) -> Self {
        Self::new(MultiPoly::zero(vars), order)
    }
    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }
    pub fn into_poly(self) -> MultiPoly {
        self.poly
    }
    pub fn order(&self) -> u32 {
        self.order
    }
    pub fn vars(&self) -> &[String] {
        self.poly.vars()
    }
    pub fn with_order(&self, order: u32) -> Self {
        assert!(order <= self.order, "cannot raise the known order");
        Self::new(self.poly.clone(), order)
    }
    pub fn add(&self, o: &TruncatedSeries) -> TruncatedSeries {
        Self::new(&self.poly + &o.poly, self.order.min(o.order))
    }
    pub fn sub(&self, o: &TruncatedSeries) -> TruncatedSeries {
        Self::new(&self.poly - &o.poly, self.order.min(o.order))
    }
    pub fn mul(&self, o: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order.min(o.order);
        TruncatedSeries { poly: self.poly.mul_trunc(&o.poly, n), order: n }
    }
    pub fn scale(&self, c: &GaussianRational) -> TruncatedSeries {
        TruncatedSeries { poly: self.poly.scale(c), order: self.order }
    }
    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries { poly: -&self.poly, order: self.order }
    }
    pub fn homogeneous_parts(&self) -> Vec<MultiPoly> {
        self.poly.homogeneous_parts(self.order)
    }
    pub fn reflect(&self) -> TruncatedSeries {
        TruncatedSeries { poly: self.poly.reflect(), order: self.order }
    }
    /// Coefficientwise imaginary part, `(f(x) - conj f(conj x)) / 2i`.
    pub fn im_series(&self) -> TruncatedSeries {
        TruncatedSeries { poly: self.poly.im_part(), order: self.order }
    }
    pub fn re_series(&self) -> TruncatedSeries {
        TruncatedSeries { poly: self.poly.re_part(), order: self.order }
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn invert(&self) -> Result<TruncatedSeries, SeriesError> {
        let c0 = self.poly.constant_term();
        if c0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let c0inv = c0.inv();
        let parts = self.homogeneous_parts();
        let vars = self.vars().to_vec();
        let mut inv_parts: Vec<MultiPoly> = vec![MultiPoly::constant(&vars, c0inv.clone())];
        for k in 1..=self.order as usize {
            let mut acc = MultiPoly::zero(&vars);
            for j in 1..=k {
                if parts[j].is_zero() || inv_parts[k - j].is_zero() {
                    continue;
                }
                acc = &acc + &(&parts[j] * &inv_parts[k - j]);
            }
            inv_parts.push(acc.scale(&-c0inv.clone()));
        }
        let mut out = MultiPoly::zero(&vars);
        for p in inv_parts {
            out = &out + &p;
        }
        Ok(TruncatedSeries { poly: out, order: self.order })
    }

    /// Substitute `var := repl` in the polynomial `p`, truncating at the series order.
    pub fn substitute_into(p: &MultiPoly, var: &str, repl: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::new(p.substitute_trunc(var, &repl.poly, repl.order), repl.order)
    }

    pub fn is_one(&self) -> bool {
        self.poly == MultiPoly::one(self.vars())
    }
    pub fn constant_term(&self) -> GaussianRational {
        self.poly.constant_term()
    }
    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }
    pub fn one(vars: &[String], order: u32) -> Self {
        TruncatedSeries { poly: MultiPoly::constant(vars, GaussianRational::one()), order }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+O({})", self.poly, self.order + 1)
    }
}
