//! Dense univariate polynomials over ℚ and factorization into irreducibles.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Rational, VarId};

pub const DEFAULT_FACTOR_DEGREE_CAP: usize = 8;

/// Coefficients from the constant term upwards, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Univariate {
    coeffs: Vec<Rational>,
}

impl Univariate {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Univariate { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Univariate::new(
            cs.iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Univariate { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Univariate::new(vec![Rational::one()])
    }

    /// `t`.
    pub fn x() -> Self {
        Univariate::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial at 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        Univariate::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Univariate::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Univariate::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn div_rem(&self, d: &Univariate) -> (Univariate, Univariate) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let ld = d.lead();
        if r.len() < d.coeffs.len() {
            return (Univariate::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &ld;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        (Univariate::new(q), Univariate::new(r))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Univariate) -> Univariate {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·other = g` monic.
    pub fn ext_gcd(&self, other: &Univariate) -> (Univariate, Univariate, Univariate) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Univariate::one(), Univariate::zero());
        let (mut t0, mut t1) = (Univariate::zero(), Univariate::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = Rational::one() / r0.lead();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn pow(&self, e: u32) -> Univariate {
        let mut acc = Univariate::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Reads `p` as a polynomial in the single variable `v`.
    pub fn from_polynomial(p: &Polynomial, v: VarId) -> Option<Univariate> {
        let mut coeffs = vec![Rational::zero(); p.total_degree() as usize + 1];
        for (m, c) in p.terms() {
            if m.vars().any(|w| w != v) {
                return None;
            }
            coeffs[m.exponent(v) as usize] += c;
        }
        Some(Univariate::new(coeffs))
    }

    pub fn to_polynomial(&self, v: VarId) -> Polynomial {
        Polynomial::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::from_pairs([(v, k as u32)]), c.clone())),
        )
    }

    /// Evaluates at a multivariate polynomial; `reduce` is applied after every
    /// Horner step to keep sizes bounded.
    pub fn eval_poly(
        &self,
        x: &Polynomial,
        reduce: impl Fn(Polynomial) -> Polynomial,
    ) -> Polynomial {
        let mut acc = Polynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = reduce(&(&acc * x) + &Polynomial::constant(c.clone()));
        }
        acc
    }
}

impl Add for &Univariate {
    type Output = Univariate;
    fn add(self, rhs: &Univariate) -> Univariate {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = Rational::zero();
        Univariate::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&z) + rhs.coeffs.get(k).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Sub for &Univariate {
    type Output = Univariate;
    fn sub(self, rhs: &Univariate) -> Univariate {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = Rational::zero();
        Univariate::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&z) - rhs.coeffs.get(k).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Mul for &Univariate {
    type Output = Univariate;
    fn mul(self, rhs: &Univariate) -> Univariate {
        if self.is_zero() || rhs.is_zero() {
            return Univariate::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Univariate::new(out)
    }
}

pub fn squarefree_part(f: &Univariate) -> Univariate {
    if f.degree() == 0 {
        return f.monic();
    }
    f.div_rem(&f.gcd(&f.derivative())).0.monic()
}

/// Yun's algorithm: `f = c · ∏ a_k^k` with squarefree, coprime `a_k`.
pub fn squarefree_decomposition(f: &Univariate) -> Vec<(Univariate, u32)> {
    let mut out = Vec::new();
    if f.degree() == 0 {
        return out;
    }
    let f = f.monic();
    let d = f.derivative();
    let a0 = f.gcd(&d);
    let mut b = f.div_rem(&a0).0;
    let mut c = d.div_rem(&a0).0;
    let mut dd = &c - &b.derivative();
    let mut k = 1;
    while b.degree() > 0 {
        let a = b.gcd(&dd);
        if a.degree() > 0 {
            out.push((a.clone(), k));
        }
        b = b.div_rem(&a).0;
        c = dd.div_rem(&a).0;
        dd = &c - &b.derivative();
        k += 1;
    }
    out
}

/// Integer coefficients with content one and positive leading coefficient.
fn primitive(f: &Univariate) -> Vec<BigInt> {
    let lcm = f
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f
        .coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().is_some_and(|c| c.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    ints.into_iter().map(|c| c / &g * &sign).collect()
}

fn from_ints(cs: &[BigInt]) -> Univariate {
    Univariate::new(
        cs.iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect(),
    )
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// A monic rational root, if any.
fn rational_root(f: &[BigInt]) -> Option<Rational> {
    if f[0].is_zero() {
        return Some(Rational::zero());
    }
    let uf = from_ints(f);
    for p in divisors(&f[0]) {
        for q in divisors(f.last().unwrap()) {
            for s in [1, -1] {
                let r = Rational::new(&p * s, q.clone());
                if uf.eval(&r).is_zero() {
                    return Some(r);
                }
            }
        }
    }
    None
}

fn lagrange(points: &[(Rational, Rational)]) -> Univariate {
    let mut out = Univariate::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = Univariate::one();
        let mut denom = Rational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                basis = &basis * &Univariate::new(vec![-xj.clone(), Rational::one()]);
                denom *= xi - xj;
            }
        }
        out = &out + &basis.scale(&(yi / denom));
    }
    out
}

/// Kronecker's method: a factor of exact degree `d` of the primitive,
/// squarefree integer polynomial `f`.
fn kronecker_factor(f: &[BigInt], d: usize) -> Option<Univariate> {
    let uf = from_ints(f);
    let mut points: Vec<(Rational, BigInt)> = Vec::new();
    let mut k: i64 = 0;
    while points.len() <= d {
        let a = Rational::from_integer(BigInt::from(k));
        let v = uf.eval(&a);
        if !v.is_zero() {
            points.push((a, v.to_integer()));
        }
        k = if k <= 0 { 1 - k } else { -k };
    }
    let choices: Vec<Vec<BigInt>> = points
        .iter()
        .enumerate()
        .map(|(i, (_, v))| {
            let ds = divisors(v);
            if i == 0 {
                ds
            } else {
                ds.iter().flat_map(|x| [x.clone(), -x.clone()]).collect()
            }
        })
        .collect();
    let total: f64 = choices.iter().map(|c| c.len() as f64).product();
    if total > 2e6 {
        return None;
    }
    let mut idx = vec![0usize; choices.len()];
    loop {
        let pts: Vec<(Rational, Rational)> = points
            .iter()
            .zip(&idx)
            .enumerate()
            .map(|(i, ((a, _), &j))| (a.clone(), Rational::from_integer(choices[i][j].clone())))
            .collect();
        let g = lagrange(&pts);
        if g.degree() == d && g.coeffs.iter().all(|c| c.is_integer()) {
            let (_, r) = uf.div_rem(&g);
            if r.is_zero() {
                return Some(g.monic());
            }
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return None;
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Monic irreducible factors of a squarefree polynomial.
fn factor_squarefree(f: &Univariate, cap: usize) -> Result<Vec<Univariate>> {
    let mut out = Vec::new();
    let mut stack = vec![f.monic()];
    while let Some(g) = stack.pop() {
        let n = g.degree();
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(g);
            continue;
        }
        let prim = primitive(&g);
        if let Some(r) = rational_root(&prim) {
            let lin = Univariate::new(vec![-r, Rational::one()]);
            stack.push(g.div_rem(&lin).0);
            out.push(lin);
            continue;
        }
        let mut split = None;
        for d in 2..=(n / 2).min(cap) {
            if let Some(h) = kronecker_factor(&prim, d) {
                split = Some(h);
                break;
            }
        }
        match split {
            Some(h) => {
                stack.push(g.div_rem(&h).0);
                stack.push(h);
            }
            None if n > cap => return Err(Error::FactorDegreeExceeded { degree: n, cap }),
            None => out.push(g),
        }
    }
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| cmp_coeffs(a, b)));
    Ok(out)
}

fn cmp_coeffs(a: &Univariate, b: &Univariate) -> std::cmp::Ordering {
    for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => {}
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Factorization over ℚ into monic irreducibles with multiplicities.
pub fn factor(f: &Univariate, cap: usize) -> Result<Vec<(Univariate, u32)>> {
    let mut out = Vec::new();
    for (a, k) in squarefree_decomposition(f) {
        for p in factor_squarefree(&a, cap)? {
            out.push((p, k));
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| cmp_coeffs(&a.0, &b.0))
    });
    Ok(out)
}

/// CRT idempotents of `ℚ[t]/(f)` for the coprime factorization
/// `f = ∏ q_k`: `e_k ≡ 1 mod q_k`, `e_k ≡ 0 mod q_j` for `j ≠ k`.
pub fn crt_idempotents(parts: &[Univariate]) -> Vec<Univariate> {
    let f = parts.iter().fold(Univariate::one(), |acc, q| &acc * q);
    parts
        .iter()
        .map(|q| {
            let cof = f.div_rem(q).0;
            let (_, s, _) = cof.ext_gcd(q);
            (&cof * &s).div_rem(&f).1
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(cs: &[i64]) -> Univariate {
        Univariate::from_ints(cs)
    }

    #[test]
    fn gcd_and_division() {
        let a = u(&[-1, 0, 1]);
        let b = u(&[1, 1]);
        assert_eq!(a.gcd(&b), b);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, u(&[-1, 1]));
        assert!(r.is_zero());
        let (g, s, t) = u(&[-1, 1]).ext_gcd(&u(&[1, 1]));
        assert_eq!(g, Univariate::one());
        assert_eq!(
            &(&s * &u(&[-1, 1])) + &(&t * &u(&[1, 1])),
            Univariate::one()
        );
    }

    #[test]
    fn squarefree() {
        let f = &u(&[-1, 1]).pow(3) * &u(&[1, 1]);
        assert_eq!(squarefree_part(&f), u(&[-1, 0, 1]));
        let dec = squarefree_decomposition(&f);
        assert_eq!(dec, vec![(u(&[1, 1]), 1), (u(&[-1, 1]), 3)]);
    }

    #[test]
    fn factors_over_q() {
        let fs = factor(&u(&[-1, 0, 0, 1]), 8).unwrap();
        assert_eq!(fs, vec![(u(&[-1, 1]), 1), (u(&[1, 1, 1]), 1)]);
        // x^4 + 4 = (x^2 - 2x + 2)(x^2 + 2x + 2), no rational roots.
        let fs = factor(&u(&[4, 0, 0, 0, 1]), 8).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|(p, _)| p.degree() == 2));
        // x^4 + 1 is irreducible.
        assert_eq!(factor(&u(&[1, 0, 0, 0, 1]), 8).unwrap().len(), 1);
        assert!(matches!(
            factor(&u(&[1, 0, 0, 0, 1]), 3),
            Err(Error::FactorDegreeExceeded { degree: 4, cap: 3 })
        ));
    }

    #[test]
    fn idempotents_of_y2_minus_1() {
        let es = crt_idempotents(&[u(&[-1, 1]), u(&[1, 1])]);
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(es[0], Univariate::new(vec![half.clone(), half.clone()]));
        assert_eq!(es[1], Univariate::new(vec![half.clone(), -half]));
    }
}
