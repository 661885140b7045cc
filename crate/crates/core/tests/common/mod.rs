//! Independent oracles shared by the integration tests. Nothing here calls
//! the Gröbner engine.
#![allow(dead_code)]

use num_traits::{One, Zero};
use sigma_groups::{Monomial, Polynomial, Rational, VarId};

/// All monomials in `vars` of total degree at most `d`.
pub fn monomials_upto(vars: &[VarId], d: u32) -> Vec<Monomial> {
    fn go(vars: &[VarId], d: u32, acc: &mut Vec<(VarId, u32)>, out: &mut Vec<Monomial>) {
        match vars.split_first() {
            None => out.push(Monomial::from_pairs(
                acc.iter().copied().filter(|&(_, e)| e > 0),
            )),
            Some((&v, rest)) => {
                for e in 0..=d {
                    acc.push((v, e));
                    go(rest, d - e, acc, out);
                    acc.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(vars, d, &mut Vec::new(), &mut out);
    out
}

/// Row echelon rank over ℚ by plain Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / rows[r][c].clone();
        let pivot: Vec<Rational> = rows[r].iter().map(|x| x * &inv).collect();
        for row in rows.iter_mut().skip(r + 1) {
            if !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

fn vector(p: &Polynomial, index: &[Monomial]) -> Option<Vec<Rational>> {
    let mut v = vec![Rational::zero(); index.len()];
    for (m, c) in p.terms() {
        let k = index.iter().position(|x| x == m)?;
        v[k] = c.clone();
    }
    Some(v)
}

/// `f ∈ ⟨gens⟩` certified by a representation `Σ h_k g_k` with every
/// product of degree at most `d`.
pub fn member_at_degree(f: &Polynomial, gens: &[Polynomial], vars: &[VarId], d: u32) -> bool {
    if f.is_zero() {
        return true;
    }
    if f.total_degree() > d {
        return false;
    }
    let index = monomials_upto(vars, d);
    let mut rows = Vec::new();
    for g in gens {
        let gd = g.total_degree();
        if gd > d {
            continue;
        }
        for m in monomials_upto(vars, d - gd) {
            rows.push(vector(&g.mul_monomial(&m), &index).expect("degree bounded"));
        }
    }
    let before = rank(rows.clone());
    rows.push(vector(f, &index).expect("degree bounded"));
    rank(rows) == before
}

/// Dimensions of the truncations of the σ-ideal generated by one linear
/// form `Σ c_t σ^t(y)` in one additive coordinate: level `i` has `i + 1`
/// coordinates and the shifts of the form that fit are independent.
pub fn linear_dims(coeffs: &[i64], depth: u32) -> Vec<usize> {
    let order = coeffs.iter().rposition(|&c| c != 0).expect("nonzero form") as u32;
    (0..=depth)
        .map(|i| {
            let n = i as usize + 1;
            let rows: Vec<Vec<Rational>> = (0..=i.saturating_sub(order))
                .filter(|&t| t + order <= i)
                .map(|t| {
                    let mut row = vec![Rational::zero(); n];
                    for (k, &c) in coeffs.iter().enumerate() {
                        if c != 0 {
                            row[t as usize + k] = Rational::from_integer(c.into());
                        }
                    }
                    row
                })
                .collect();
            n - if rows.is_empty() { 0 } else { rank(rows) }
        })
        .collect()
}
