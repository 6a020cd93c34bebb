//! Sparse multivariate polynomials over the Gaussian rationals.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors ordered by total
//! degree, then lexicographically descending. The distinguished variable `z`
//! always sorts last among the variables, so a printed polynomial reads
//! `x^2+x*y+y^2` and `x+y+z`.

use std::collections::BTreeMap;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::gaussian::{coeff_parts, GaussianRational};

/// Exponent vector. Ordered by total degree ascending, then lex descending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }
    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }
    pub fn div(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| o.0.cmp(&self.0))
    }
}
impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Sort key placing `x, y` first, indexed families next and `z` last.
pub fn var_rank(name: &str) -> (u32, String) {
    let r = match name {
        "x" => 0,
        "y" => 1,
        "u" => 30,
        "v" => 31,
        "s" => 32,
        "t" => 33,
        "w" => 34,
        "z" => 100,
        _ => {
            if let Some(k) = name.strip_prefix('x').and_then(|d| d.parse::<u32>().ok()) {
                10 + k
            } else if let Some(k) = name.strip_prefix('z').and_then(|d| d.parse::<u32>().ok()) {
                60 + k
            } else {
                50
            }
        }
    };
    (r, name.to_string())
}

pub fn sort_vars(vars: &mut Vec<String>) {
    vars.sort_by_key(|v| var_rank(v));
    vars.dedup();
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl MultiPoly {
    pub fn zero(vars: &[String]) -> Self {
        MultiPoly { vars: vars.to_vec(), terms: BTreeMap::new() }
    }
    pub fn constant(vars: &[String], c: GaussianRational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial::one(vars.len()), c);
        p
    }
    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, GaussianRational::one())
    }
    /// The variable `name`, which must be in `vars`.
    pub fn var(vars: &[String], name: &str) -> Self {
        let idx = vars.iter().position(|v| v == name).expect("unknown variable");
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        let mut p = Self::zero(vars);
        p.add_term(Monomial(e), GaussianRational::one());
        p
    }
    pub fn monomial(vars: &[String], exps: Vec<u32>, c: GaussianRational) -> Self {
        assert_eq!(exps.len(), vars.len());
        let mut p = Self::zero(vars);
        p.add_term(Monomial(exps), c);
        p
    }
    pub fn from_terms(vars: &[String], terms: impl IntoIterator<Item = (Vec<u32>, GaussianRational)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }
    pub fn into_terms(self) -> BTreeMap<Monomial, GaussianRational> {
        self.terms
    }
    pub fn nterms(&self) -> usize {
        self.terms.len()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coeff(&self, exps: &[u32]) -> GaussianRational {
        self.terms.get(&Monomial(exps.to_vec())).cloned().unwrap_or_else(GaussianRational::zero)
    }
    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(&vec![0; self.vars.len()])
    }
    /// Leading term in the graded order (highest degree, lex-smallest).
    pub fn leading(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }
    /// Lowest total degree of a nonzero term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }
    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0)
    }
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }
    pub fn mentions(&self, idx: usize) -> bool {
        self.terms.keys().any(|m| m.0[idx] > 0)
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Re-express over `vars`, which must contain every variable used.
    pub fn align(&self, vars: &[String]) -> MultiPoly {
        if vars == self.vars.as_slice() {
            return self.clone();
        }
        let map: Vec<Option<usize>> = self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let mut out = MultiPoly::zero(vars);
        for (m, c) in &self.terms {
            let mut e = vec![0; vars.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    let j = map[i].unwrap_or_else(|| panic!("variable {} missing from target", self.vars[i]));
                    e[j] = k;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    pub fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
        let mut v: Vec<String> = a.iter().chain(b.iter()).cloned().collect();
        sort_vars(&mut v);
        v
    }

    fn unify(a: &MultiPoly, b: &MultiPoly) -> (MultiPoly, MultiPoly) {
        let vars = Self::union_vars(&a.vars, &b.vars);
        (a.align(&vars), b.align(&vars))
    }

    /// Drop variables that no term uses.
    pub fn compact_vars(&self) -> MultiPoly {
        let keep: Vec<String> =
            (0..self.vars.len()).filter(|&i| self.mentions(i)).map(|i| self.vars[i].clone()).collect();
        self.align_subset(&keep)
    }

    fn align_subset(&self, keep: &[String]) -> MultiPoly {
        let idx: Vec<usize> = keep.iter().map(|k| self.var_index(k).unwrap()).collect();
        let mut out = MultiPoly::zero(keep);
        for (m, c) in &self.terms {
            out.add_term(Monomial(idx.iter().map(|&i| m.0[i]).collect()), c.clone());
        }
        out
    }

    /// Rename variables positionally.
    pub fn rename(&self, names: &[String]) -> MultiPoly {
        assert_eq!(names.len(), self.vars.len());
        let mut v = MultiPoly { vars: names.to_vec(), terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            v.add_term(m.clone(), c.clone());
        }
        let mut sorted = names.to_vec();
        sort_vars(&mut sorted);
        v.align(&sorted)
    }

    pub fn scale(&self, c: &GaussianRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }
    pub fn scale_rat(&self, r: &BigRational) -> MultiPoly {
        self.scale(&GaussianRational::from_rat(r.clone()))
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Product dropping every term of total degree above `order`.
    pub fn mul_trunc(&self, o: &MultiPoly, order: u32) -> MultiPoly {
        if self.vars != o.vars {
            let (a, b) = Self::unify(self, o);
            return a.mul_trunc(&b, order);
        }
        let mut out = MultiPoly::zero(&self.vars);
        for (m1, c1) in &self.terms {
            let d1 = m1.degree();
            if d1 > order {
                break;
            }
            for (m2, c2) in &o.terms {
                if d1 + m2.degree() > order {
                    break;
                }
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn truncate(&self, order: u32) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() <= order).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn homogeneous_part(&self, k: u32) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() == k).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn homogeneous_parts(&self, max: u32) -> Vec<MultiPoly> {
        let mut parts = vec![MultiPoly::zero(&self.vars); max as usize + 1];
        for (m, c) in &self.terms {
            let d = m.degree();
            if d <= max {
                parts[d as usize].terms.insert(m.clone(), c.clone());
            }
        }
        parts
    }

    /// Coefficientwise complex conjugate: `p̄(x) = conj(p(conj x))`.
    pub fn reflect(&self) -> MultiPoly {
        self.map_coeffs(|c| c.conj())
    }
    /// Coefficientwise real part.
    pub fn re_part(&self) -> MultiPoly {
        self.map_coeffs(|c| GaussianRational::from_rat(c.re.clone()))
    }
    /// Coefficientwise imaginary part.
    pub fn im_part(&self) -> MultiPoly {
        self.map_coeffs(|c| GaussianRational::from_rat(c.im.clone()))
    }
    pub fn map_coeffs(&self, f: impl Fn(&GaussianRational) -> GaussianRational) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn derivative(&self, idx: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let k = m.0[idx];
            if k > 0 {
                let mut e = m.0.clone();
                e[idx] = k - 1;
                out.add_term(Monomial(e), c.scale(&BigRational::from_integer((k as i64).into())));
            }
        }
        out
    }

    /// Coefficients of `self` as a polynomial in variable `idx`; entry `k`
    /// multiplies `var^k` and no longer mentions the variable.
    pub fn coeffs_in(&self, idx: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(idx) as usize;
        let mut out = vec![MultiPoly::zero(&self.vars); deg + 1];
        if self.is_zero() {
            return vec![];
        }
        for (m, c) in &self.terms {
            let k = m.0[idx] as usize;
            let mut e = m.0.clone();
            e[idx] = 0;
            out[k].terms.insert(Monomial(e), c.clone());
        }
        out
    }

    /// Inverse of [`coeffs_in`].
    pub fn from_coeffs_in(vars: &[String], idx: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = MultiPoly::zero(vars);
        for (k, ck) in coeffs.iter().enumerate() {
            for (m, c) in ck.terms() {
                let mut e = m.0.clone();
                e[idx] += k as u32;
                out.add_term(Monomial(e), c.clone());
            }
        }
        out
    }

    /// Exact substitution of `var := repl`. `repl` may use other variables.
    pub fn substitute(&self, var: &str, repl: &MultiPoly) -> MultiPoly {
        self.substitute_impl(var, repl, None)
    }

    /// Substitution truncated at total degree `order`.
    pub fn substitute_trunc(&self, var: &str, repl: &MultiPoly, order: u32) -> MultiPoly {
        self.substitute_impl(var, repl, Some(order))
    }

    fn substitute_impl(&self, var: &str, repl: &MultiPoly, order: Option<u32>) -> MultiPoly {
        let Some(idx) = self.var_index(var) else {
            return self.clone();
        };
        let vars = Self::union_vars(&self.vars, &repl.vars);
        let repl = repl.align(&vars);
        let coeffs: Vec<MultiPoly> = self.coeffs_in(idx).into_iter().map(|c| c.align(&vars)).collect();
        let mul = |a: &MultiPoly, b: &MultiPoly| match order {
            Some(n) => a.mul_trunc(b, n),
            None => a * b,
        };
        // Horner in the substituted variable
        let mut acc = MultiPoly::zero(&vars);
        for c in coeffs.iter().rev() {
            acc = &mul(&acc, &repl) + c;
        }
        let acc = match order {
            Some(n) => acc.truncate(n),
            None => acc,
        };
        let jdx = vars.iter().position(|v| v == var);
        if let Some(j) = jdx {
            if !repl.mentions(j) {
                let keep: Vec<String> = vars.iter().filter(|v| v.as_str() != var).cloned().collect();
                return acc.align_subset(&keep);
            }
        }
        acc
    }

    /// Simultaneous substitution of every variable; `repls[i]` replaces `vars[i]`.
    pub fn compose(&self, repls: &[MultiPoly]) -> MultiPoly {
        assert_eq!(repls.len(), self.vars.len());
        let mut tv: Vec<String> = vec![];
        for r in repls {
            tv = Self::union_vars(&tv, &r.vars);
        }
        let repls: Vec<MultiPoly> = repls.iter().map(|r| r.align(&tv)).collect();
        let mut powers: Vec<Vec<MultiPoly>> = repls.iter().map(|r| vec![MultiPoly::one(&tv), r.clone()]).collect();
        let mut out = MultiPoly::zero(&tv);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(&tv, c.clone());
            for (i, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &repls[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][k as usize];
            }
            out = &out + &t;
        }
        out
    }

    pub fn eval_exact(&self, pt: &[GaussianRational]) -> GaussianRational {
        assert_eq!(pt.len(), self.vars.len());
        let mut pows: Vec<Vec<GaussianRational>> = pt.iter().map(|v| vec![GaussianRational::one(), v.clone()]).collect();
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while pows[i].len() <= k as usize {
                    let n = &pows[i][pows[i].len() - 1] * &pt[i];
                    pows[i].push(n);
                }
                t = &t * &pows[i][k as usize];
            }
            acc += &t;
        }
        acc
    }

    /// Floating evaluation with cached powers.
    pub fn eval_c64(&self, pt: &[Complex64]) -> Complex64 {
        let cf = self.float_coeffs();
        eval_float_terms(&cf, pt)
    }

    pub fn float_coeffs(&self) -> Vec<(Vec<u32>, Complex64)> {
        self.terms.iter().map(|(m, c)| (m.0.clone(), c.to_c64())).collect()
    }

    /// Exact division by `d`; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        if self.vars != d.vars {
            let (a, b) = Self::unify(self, d);
            return a.div_exact(&b);
        }
        let (lm, lc) = d.leading().expect("division by zero polynomial");
        let (lm, lc_inv) = (lm.clone(), lc.inv());
        let mut rem = self.clone();
        let mut q = MultiPoly::zero(&self.vars);
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(m) {
                return None;
            }
            let tm = m.div(&lm);
            let tc = c * &lc_inv;
            for (dm, dc) in d.terms() {
                rem.add_term(dm.mul(&tm), -(dc * &tc));
            }
            q.add_term(tm, tc);
        }
        Some(q)
    }

    pub fn to_string_with(&self) -> String {
        self.to_string()
    }
}

pub(crate) fn eval_float_terms(cf: &[(Vec<u32>, Complex64)], pt: &[Complex64]) -> Complex64 {
    let maxdeg = cf.iter().flat_map(|(e, _)| e.iter().copied()).max().unwrap_or(0) as usize;
    let pows: Vec<Vec<Complex64>> = pt
        .iter()
        .map(|&v| {
            let mut p = Vec::with_capacity(maxdeg + 1);
            p.push(Complex64::new(1.0, 0.0));
            for k in 1..=maxdeg {
                let prev = p[k - 1];
                p.push(prev * v);
            }
            p
        })
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for (e, c) in cf {
        let mut t = *c;
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                t *= pows[i][k as usize];
            }
        }
        acc += t;
    }
    acc
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        if self.vars != o.vars {
            let (a, b) = MultiPoly::unify(self, o);
            return &a + &b;
        }
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}
impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        if self.vars != o.vars {
            let (a, b) = MultiPoly::unify(self, o);
            return &a - &b;
        }
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}
impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        if self.vars != o.vars {
            let (a, b) = MultiPoly::unify(self, o);
            return &a * &b;
        }
        let mut out = MultiPoly::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}
impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.map_coeffs(|c| -c)
    }
}
impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: MultiPoly) -> MultiPoly {
        &self + &o
    }
}
impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: MultiPoly) -> MultiPoly {
        &self - &o
    }
}
impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: MultiPoly) -> MultiPoly {
        &self * &o
    }
}
impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

fn fmt_monomial(vars: &[String], m: &Monomial) -> String {
    let mut parts = vec![];
    for (v, &k) in vars.iter().zip(&m.0) {
        match k {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{}^{}", v, k)),
        }
    }
    parts.join("*")
}

impl fmt::Display for MultiPoly {
    /// Canonical compact form, e.g. `x+y+z-2*i*x*y-3*x*y*z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut s = String::new();
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let mono = fmt_monomial(&self.vars, m);
            let (neg, body) = coeff_parts(c, !mono.is_empty());
            if neg {
                s.push('-');
            } else if n > 0 {
                s.push('+');
            }
            s.push_str(&body);
            if !body.is_empty() && !mono.is_empty() {
                s.push('*');
            }
            s.push_str(&mono);
        }
        write!(f, "{}", s)
    }
}

/// Variable list helper: `vars(&["x","y","z"])`.
pub fn vars(names: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    sort_vars(&mut v);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::rat;

    fn xyz() -> Vec<String> {
        vars(&["x", "y", "z"])
    }

    #[test]
    fn order_and_print() {
        let v = xyz();
        let x = MultiPoly::var(&v, "x");
        let y = MultiPoly::var(&v, "y");
        let p = &(&x * &x + &x * &y) + &(&y * &y);
        assert_eq!(p.to_string(), "x^2+x*y+y^2");
        let q = &(&x - &y).pow(2) - &MultiPoly::constant(&v, GaussianRational::new(rat(1, 2), rat(1, 1)));
        assert_eq!(q.to_string(), "(-1/2-i)+x^2-2*x*y+y^2");
    }

    #[test]
    fn substitute_and_divide() {
        let v = xyz();
        let x = MultiPoly::var(&v, "x");
        let z = MultiPoly::var(&v, "z");
        let p = &(&z * &z) - &(&x * &x);
        let s = p.substitute("z", &x);
        assert!(s.is_zero());
        let q = p.div_exact(&(&z - &x)).unwrap();
        assert_eq!(q, &z + &x);
        assert!(p.div_exact(&(&z - &(&x * &x))).is_none());
    }
}
