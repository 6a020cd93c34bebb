//! Multivariate polynomial GCD over Q(i) by recursive primitive
//! pseudo-remainder sequences, and reduced rational functions.

use num_traits::Zero;

use crate::poly::MultiPoly;

/// Scale so that the leading term (graded order) has coefficient 1.
pub fn normalize(p: &MultiPoly) -> MultiPoly {
    match p.leading() {
        Some((_, c)) => p.scale(&c.inv()),
        None => p.clone(),
    }
}

fn is_constant(p: &MultiPoly) -> bool {
    p.terms().all(|(m, _)| m.degree() == 0)
}

type Coeffs = Vec<MultiPoly>;

fn coeffs(p: &MultiPoly, v: usize) -> Coeffs {
    p.coeffs_in(v)
}

fn from_coeffs(vars: &[String], v: usize, c: &[MultiPoly]) -> MultiPoly {
    MultiPoly::from_coeffs_in(vars, v, c)
}

fn trim(mut c: Coeffs) -> Coeffs {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    c
}

/// Pseudo-remainder of `a` by `b` in variable `v`.
fn prem(a: &Coeffs, b: &Coeffs) -> Coeffs {
    let db = b.len() - 1;
    let lc = &b[db];
    let mut r = a.clone();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: Coeffs = r.iter().map(|c| c * lc).collect();
        for (j, bj) in b.iter().enumerate() {
            next[j + shift] = &next[j + shift] - &(&lr * bj);
        }
        next.pop();
        r = trim(next);
    }
    r
}

fn content(c: &Coeffs) -> MultiPoly {
    let mut g = MultiPoly::zero(c[0].vars());
    for x in c {
        g = gcd(&g, x);
        if is_constant(&g) && !g.is_zero() {
            return MultiPoly::one(g.vars());
        }
    }
    g
}

fn primitive(c: &Coeffs) -> Coeffs {
    let g = content(c);
    if is_constant(&g) {
        return c.clone();
    }
    c.iter().map(|x| x.div_exact(&g).expect("content divides")).collect()
}

/// Greatest common divisor with leading coefficient 1.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.vars() != b.vars() {
        let vars = MultiPoly::union_vars(a.vars(), b.vars());
        return gcd(&a.align(&vars), &b.align(&vars));
    }
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    let vars = a.vars().to_vec();
    let Some(v) = (0..vars.len()).find(|&i| a.mentions(i) || b.mentions(i)) else {
        return MultiPoly::one(&vars);
    };
    if !a.mentions(v) {
        return gcd(a, &content(&coeffs(b, v)));
    }
    if !b.mentions(v) {
        return gcd(b, &content(&coeffs(a, v)));
    }
    let ca = coeffs(a, v);
    let cb = coeffs(b, v);
    let cont = gcd(&content(&ca), &content(&cb));
    let (mut p, mut q) = (primitive(&ca), primitive(&cb));
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_empty() {
        let r = prem(&p, &q);
        p = q;
        if r.is_empty() {
            q = vec![];
        } else if r.len() == 1 {
            // nonzero remainder free of v: primitive gcd is trivial
            p = vec![MultiPoly::one(&vars)];
            q = vec![];
        } else {
            q = primitive(&r);
        }
    }
    let g = from_coeffs(&vars, v, &primitive(&p));
    normalize(&(&g * &cont))
}

/// Quotient of polynomials kept in lowest terms.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl RationalFunction {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let vars = MultiPoly::union_vars(num.vars(), den.vars());
        let (num, den) = (num.align(&vars), den.align(&vars));
        let g = gcd(&num, &den);
        let (mut n, mut d) = if is_constant(&g) {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        // fix the scale: denominator's leading coefficient 1
        if let Some((_, c)) = d.leading() {
            let s = c.inv();
            n = n.scale(&s);
            d = d.scale(&s);
        }
        RationalFunction { num: n, den: d }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let one = MultiPoly::one(p.vars());
        RationalFunction { num: p, den: one }
    }

    /// Substitute `var := r` and reduce.
    pub fn substitute(&self, var: &str, r: &RationalFunction) -> RationalFunction {
        let (n, d) = (compose_rf(&self.num, var, r), compose_rf(&self.den, var, r));
        // both carry the factor r.den^deg; use a common degree
        let dn = self.num.var_index(var).map(|i| self.num.degree_in(i)).unwrap_or(0);
        let dd = self.den.var_index(var).map(|i| self.den.degree_in(i)).unwrap_or(0);
        let big = dn.max(dd);
        let n = &n * &r.den.pow(big - dn);
        let d = &d * &r.den.pow(big - dd);
        RationalFunction::new(n, d)
    }
}

/// Homogenized substitution: `Σ c_k(r.num)^k (r.den)^(D-k)` with `D = deg_var p`.
fn compose_rf(p: &MultiPoly, var: &str, r: &RationalFunction) -> MultiPoly {
    let Some(idx) = p.var_index(var) else {
        return p.clone();
    };
    let cs = p.coeffs_in(idx);
    let dgr = cs.len().saturating_sub(1) as u32;
    let vars = MultiPoly::union_vars(p.vars(), r.num.vars());
    let mut out = MultiPoly::zero(&vars);
    let mut npow = MultiPoly::one(&vars);
    for (k, c) in cs.iter().enumerate() {
        if !c.is_zero() {
            let t = &(&c.align(&vars) * &npow) * &r.den.align(&vars).pow(dgr - k as u32);
            out = &out + &t;
        }
        npow = &npow * &r.num.align(&vars);
    }
    out
}

pub fn is_unit_gcd(g: &MultiPoly) -> bool {
    is_constant(g) && !g.constant_term().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    #[test]
    fn gcd_of_products() {
        let a = parse_poly("(x+y*z-1)*(x^2+i*z)*(y-2)").unwrap();
        let b = parse_poly("(x+y*z-1)*(y-2)^2*(x+z)").unwrap();
        let g = gcd(&a, &b);
        let expect = normalize(&parse_poly("(x+y*z-1)*(y-2)").unwrap().align(g.vars()));
        assert_eq!(g, expect);
        let one = gcd(&parse_poly("x+1").unwrap(), &parse_poly("y+1").unwrap());
        assert!(is_unit_gcd(&one));
    }

    #[test]
    fn rational_reduce_and_compose() {
        let r = RationalFunction::new(parse_poly("x^2-y^2").unwrap(), parse_poly("2*x+2*y").unwrap());
        assert_eq!(r.den.to_string(), "1");
        assert_eq!(r.num.to_string(), "1/2*x-1/2*y");
        // z/(1+z) with z := x/(1-x) gives x
        let f = RationalFunction::new(parse_poly("z").unwrap(), parse_poly("1+z").unwrap());
        let g = RationalFunction::new(parse_poly("x").unwrap(), parse_poly("1-x").unwrap());
        let h = f.substitute("z", &g);
        assert_eq!(h.num.compact_vars().to_string(), "x");
        assert_eq!(h.den.compact_vars().to_string(), "1");
    }
}
