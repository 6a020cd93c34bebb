//! Elements `a + b√D` of Q(i)(√D) for one squarefree integer `D > 1`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::gaussian::GaussianRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadGauss {
    pub a: GaussianRational,
    pub b: GaussianRational,
    /// Radicand; 1 when `b` is zero and no extension is in play.
    pub d: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("two distinct square roots (√{0} and √{1}) would be needed")]
    NestedExtension(u64, u64),
    #[error("square root outside Q(i)(√D): {0}")]
    NoSquareRoot(String),
    #[error("root of unity of order {0} unsupported")]
    RootOfUnity(u32),
}

fn merge_d(x: u64, y: u64) -> u64 {
    match (x, y) {
        (1, d) | (d, 1) => d,
        (a, b) if a == b => a,
        (a, b) => panic!("{}", FieldError::NestedExtension(a, b)),
    }
}

fn mk(a: GaussianRational, b: GaussianRational, d: u64) -> QuadGauss {
    let d = if b.is_zero() { 1 } else { d };
    QuadGauss { a, b, d }
}

impl QuadGauss {
    pub fn new(a: GaussianRational, b: GaussianRational, d: u64) -> Self {
        mk(a, b, d)
    }
    pub fn from_gauss(a: GaussianRational) -> Self {
        QuadGauss { a, b: GaussianRational::zero(), d: 1 }
    }
    pub fn from_int(n: i64) -> Self {
        Self::from_gauss(GaussianRational::from_int(n))
    }
    pub fn sqrt_d(d: u64) -> Self {
        QuadGauss { a: GaussianRational::zero(), b: GaussianRational::one(), d }
    }
    pub fn is_gauss(&self) -> bool {
        self.b.is_zero()
    }
    pub fn to_gauss(&self) -> Option<GaussianRational> {
        if self.b.is_zero() {
            Some(self.a.clone())
        } else {
            None
        }
    }
    /// Compatibility check for mixing with radicand `d`.
    pub fn compatible(d1: u64, d2: u64) -> bool {
        d1 == 1 || d2 == 1 || d1 == d2
    }
    pub fn is_real(&self) -> bool {
        self.a.is_real() && self.b.is_real()
    }
    /// Complex conjugation (√D is real).
    pub fn conj(&self) -> Self {
        mk(self.a.conj(), self.b.conj(), self.d)
    }
    pub fn re(&self) -> Self {
        mk(GaussianRational::from_rat(self.a.re.clone()), GaussianRational::from_rat(self.b.re.clone()), self.d)
    }
    pub fn to_c64(&self) -> Complex64 {
        self.a.to_c64() + self.b.to_c64() * (self.d as f64).sqrt()
    }
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = <Self as One>::one();
        for _ in 0..e {
            acc = crate::upoly::Field::mul(&acc, self);
        }
        acc
    }
    fn norm_to_gauss(&self) -> GaussianRational {
        // (a + b√d)(a - b√d)
        let d = GaussianRational::from_int(self.d as i64);
        &(&self.a * &self.a) - &(&(&self.b * &self.b) * &d)
    }
    pub fn key(&self) -> (f64, f64) {
        let c = self.to_c64();
        (c.re, c.im)
    }
}

impl Zero for QuadGauss {
    fn zero() -> Self {
        Self::from_int(0)
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadGauss {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl std::ops::Add for QuadGauss {
    type Output = QuadGauss;
    fn add(self, o: QuadGauss) -> QuadGauss {
        crate::upoly::Field::add(&self, &o)
    }
}

impl std::ops::Mul for QuadGauss {
    type Output = QuadGauss;
    fn mul(self, o: QuadGauss) -> QuadGauss {
        crate::upoly::Field::mul(&self, &o)
    }
}

impl crate::upoly::Field for QuadGauss {
    fn add(&self, o: &Self) -> Self {
        mk(&self.a + &o.a, &self.b + &o.b, merge_d(self.d, o.d))
    }
    fn sub(&self, o: &Self) -> Self {
        mk(&self.a - &o.a, &self.b - &o.b, merge_d(self.d, o.d))
    }
    fn mul(&self, o: &Self) -> Self {
        let d = merge_d(self.d, o.d);
        if self.b.is_zero() && o.b.is_zero() {
            return mk(&self.a * &o.a, GaussianRational::zero(), d);
        }
        let dd = GaussianRational::from_int(d as i64);
        mk(&(&self.a * &o.a) + &(&(&self.b * &o.b) * &dd), &(&self.a * &o.b) + &(&self.b * &o.a), d)
    }
    fn div(&self, o: &Self) -> Self {
        if o.b.is_zero() {
            return mk(&self.a / &o.a, &self.b / &o.a, merge_d(self.d, o.d));
        }
        let n = o.norm_to_gauss();
        let conj = QuadGauss { a: o.a.clone(), b: -&o.b, d: o.d };
        let num = crate::upoly::Field::mul(self, &conj);
        mk(&num.a / &n, &num.b / &n, num.d)
    }
    fn neg(&self) -> Self {
        QuadGauss { a: -&self.a, b: -&self.b, d: self.d }
    }
    fn from_i64(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl fmt::Display for QuadGauss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "({})*sqrt({})", self.b, self.d)
        } else {
            write!(f, "{}+({})*sqrt({})", self.a, self.b, self.d)
        }
    }
}

fn isqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Exact rational square root.
pub fn rat_sqrt(r: &BigRational) -> Option<BigRational> {
    Some(BigRational::new(isqrt_exact(r.numer())?, isqrt_exact(r.denom())?))
}

/// `r = k^2 * D` with `D` squarefree, for positive rational `r`.
pub fn squarefree_split(r: &BigRational) -> Option<(BigRational, u64)> {
    assert!(r.is_positive());
    let m = r.numer() * r.denom();
    let mut m = m.to_u64()?;
    let mut k: u64 = 1;
    let mut d: u64 = 1;
    let mut p = 2u64;
    while p * p <= m {
        if p > 10_000_000 {
            return None;
        }
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        k *= p.pow(e / 2);
        if e % 2 == 1 {
            d *= p;
        }
        p += 1;
    }
    d *= m;
    // sqrt(n/den) = sqrt(n*den)/den = k sqrt(d)/den
    let kk = BigRational::new(BigInt::from(k), r.denom().clone());
    Some((kk, d))
}

/// A square root of `z ∈ Q(i)`, possibly in `Q(i)(√D)`.
pub fn gauss_sqrt(z: &GaussianRational) -> Result<QuadGauss, FieldError> {
    if z.is_zero() {
        return Ok(QuadGauss::zero());
    }
    let n = z.norm_sqr();
    let s = rat_sqrt(&n).ok_or_else(|| FieldError::NoSquareRoot(z.to_string()))?;
    let two = BigRational::from_integer(BigInt::from(2));
    let x = (&z.re + &s) / &two;
    let y = (&s - &z.re) / &two;
    let part = |v: &BigRational| -> Result<(BigRational, u64), FieldError> {
        if v.is_zero() {
            Ok((BigRational::zero(), 1))
        } else {
            squarefree_split(v).ok_or_else(|| FieldError::NoSquareRoot(z.to_string()))
        }
    };
    let (kx, dx) = part(&x)?;
    let (ky, dy) = part(&y)?;
    let ky = if z.im.is_negative() { -ky } else { ky };
    let d = if x.is_zero() { dy } else { dx };
    if !x.is_zero() && !y.is_zero() && dx != dy {
        return Err(FieldError::NoSquareRoot(z.to_string()));
    }
    let coef = GaussianRational::new(kx, ky);
    if d == 1 {
        Ok(QuadGauss::from_gauss(coef))
    } else {
        Ok(QuadGauss { a: GaussianRational::zero(), b: coef, d })
    }
}

/// `e^{2πi k / r}` for `r ∈ {1, 2, 3, 4, 6}` and `e^{iπ/r}` via `root_of_unity(2r, 1)`.
pub fn root_of_unity(r: u32, k: u32) -> Result<QuadGauss, FieldError> {
    let k = k % r;
    let g = |re: BigRational, im: BigRational| QuadGauss::from_gauss(GaussianRational::new(re, im));
    let h = BigRational::new(BigInt::one(), BigInt::from(2));
    let z = BigRational::zero;
    let one = BigRational::one;
    let base = match r {
        1 => g(one(), z()),
        2 => g(-one(), z()),
        4 => g(z(), one()),
        3 => QuadGauss { a: GaussianRational::new(-h.clone(), z()), b: GaussianRational::new(z(), h.clone()), d: 3 },
        6 => QuadGauss { a: GaussianRational::new(h.clone(), z()), b: GaussianRational::new(z(), h.clone()), d: 3 },
        8 => QuadGauss { a: GaussianRational::zero(), b: GaussianRational::new(h.clone(), h.clone()), d: 2 },
        12 => QuadGauss { a: GaussianRational::new(z(), h.clone()), b: GaussianRational::new(h.clone(), z()), d: 3 },
        _ => return Err(FieldError::RootOfUnity(r)),
    };
    Ok(base.pow(k))
}

pub fn gcd_u32(a: u32, b: u32) -> u32 {
    a.gcd(&b)
}
