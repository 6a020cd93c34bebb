//! Dense univariate polynomials over an exact field, with Sturm chains for
//! rational coefficients.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::gaussian::GaussianRational;

pub trait Field: Clone + PartialEq + Debug + Zero + One {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_i64(n: i64) -> Self;
}

impl Field for BigRational {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl Field for GaussianRational {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        GaussianRational::from_int(n)
    }
}

/// Coefficient `c[k]` multiplies `t^k`; no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly<F: Field> {
    pub c: Vec<F>,
}

impl<F: Field> UPoly<F> {
    pub fn new(mut c: Vec<F>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }
    pub fn zero() -> Self {
        UPoly { c: vec![] }
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }
    pub fn lead(&self) -> F {
        self.c.last().cloned().unwrap_or_else(F::zero)
    }
    pub fn eval(&self, t: &F) -> F {
        let mut acc = F::zero();
        for a in self.c.iter().rev() {
            acc = Field::add(&Field::mul(&acc, t), a);
        }
        acc
    }
    pub fn derivative(&self) -> Self {
        UPoly::new(self.c.iter().enumerate().skip(1).map(|(k, a)| a.mul(&F::from_i64(k as i64))).collect())
    }
    pub fn scale(&self, s: &F) -> Self {
        UPoly::new(self.c.iter().map(|a| a.mul(s)).collect())
    }
    pub fn neg(&self) -> Self {
        UPoly::new(self.c.iter().map(|a| a.neg()).collect())
    }
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        UPoly::new(self.c.iter().map(|a| a.div(&l)).collect())
    }
    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        UPoly::new(
            (0..n)
                .map(|k| {
                    let a = self.c.get(k).cloned().unwrap_or_else(F::zero);
                    let b = o.c.get(k).cloned().unwrap_or_else(F::zero);
                    Field::add(&a, &b)
                })
                .collect(),
        )
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = Field::add(&out[i + j], &Field::mul(a, b));
            }
        }
        UPoly::new(out)
    }
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.c.len() - 1;
        let lead = d.lead();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![F::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = r[k + dd].div(&lead);
            if !coef.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] = Field::sub(&r[k + j], &Field::mul(&coef, b));
                }
            }
            q[k] = coef;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }
    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }
    /// Yun's square-free decomposition: `self = lc * Π f_k^k`, returned as
    /// `(k, f_k)` for nonconstant factors.
    pub fn squarefree(&self) -> Vec<(usize, Self)> {
        let mut out = vec![];
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.divrem(&a0).0;
        let mut c = df.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut k = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((k, a.clone()));
            }
            b = b.divrem(&a).0;
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
            k += 1;
        }
        out
    }
    /// Product of the square-free factors of odd multiplicity.
    pub fn odd_part(&self) -> Self {
        let mut acc = UPoly::new(vec![F::one()]);
        for (k, f) in self.squarefree() {
            if k % 2 == 1 {
                acc = acc.mul(&f);
            }
        }
        acc
    }
}

fn sign(r: &BigRational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Sturm chain of a squarefree-reduced rational polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    pub seq: Vec<UPoly<BigRational>>,
}

impl SturmChain {
    /// Build the chain of `p / gcd(p, p')` so that distinct roots are counted.
    pub fn new(p: &UPoly<BigRational>) -> Self {
        assert!(!p.is_zero(), "Sturm chain of the zero polynomial");
        let g = p.gcd(&p.derivative());
        let p0 = p.divrem(&g).0;
        let mut seq = vec![p0.clone(), p0.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].divrem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        SturmChain { seq }
    }

    fn variations(signs: impl Iterator<Item = i32>) -> usize {
        let mut last = 0;
        let mut v = 0;
        for s in signs {
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    pub fn variations_at(&self, t: &BigRational) -> usize {
        Self::variations(self.seq.iter().map(|p| sign(&p.eval(t))))
    }
    pub fn variations_at_pos_inf(&self) -> usize {
        Self::variations(self.seq.iter().map(|p| sign(&p.lead())))
    }
    pub fn variations_at_neg_inf(&self) -> usize {
        Self::variations(self.seq.iter().map(|p| {
            let s = sign(&p.lead());
            if p.degree().unwrap_or(0) % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }
    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        self.variations_at_neg_inf() - self.variations_at_pos_inf()
    }
    /// Number of distinct roots in `(a, b]`.
    pub fn count_in(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }
}

/// Distinct real roots of a nonzero rational polynomial.
pub fn count_real_roots(p: &UPoly<BigRational>) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    SturmChain::new(p).count_real_roots()
}

/// Distinct nonzero real roots.
pub fn count_nonzero_real_roots(p: &UPoly<BigRational>) -> usize {
    let mut c = p.c.clone();
    while c.first().is_some_and(Zero::is_zero) {
        c.remove(0);
    }
    count_real_roots(&UPoly::new(c))
}

pub fn rpoly(c: &[i64]) -> UPoly<BigRational> {
    UPoly::new(c.iter().map(|&a| BigRational::from_integer(BigInt::from(a))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_counts() {
        // (t-1)(t-2)(t+3)
        let p = rpoly(&[6, -7, 0, 1]);
        assert_eq!(count_real_roots(&p), 3);
        assert_eq!(count_real_roots(&rpoly(&[1, 0, 1])), 0);
        // (t-1)^2 (t^2+1)
        assert_eq!(count_real_roots(&rpoly(&[1, -2, 2, -2, 1])), 1);
        let ch = SturmChain::new(&p);
        assert_eq!(ch.count_in(&BigRational::from_integer(0.into()), &BigRational::from_integer(5.into())), 2);
    }

    #[test]
    fn squarefree_parts() {
        // (t-1)^2 (t+1)^3 t
        let f = rpoly(&[1, -1]).mul(&rpoly(&[1, -1])).mul(&rpoly(&[1, 1]).mul(&rpoly(&[1, 1])).mul(&rpoly(&[1, 1]))).mul(&rpoly(&[0, 1]));
        let sf = f.squarefree();
        let ks: Vec<usize> = sf.iter().map(|(k, _)| *k).collect();
        assert_eq!(ks, vec![1, 2, 3]);
        assert_eq!(f.odd_part().degree(), Some(2));
    }
}
