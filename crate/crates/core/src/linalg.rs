//! Dense linear algebra over ℚ for the Takeuchi and idempotent solvers.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::poly::{Monomial, Polynomial, Rational};

/// Reduced row echelon form in place; returns the pivot columns.
pub(crate) fn rref(rows: &mut Vec<Vec<Rational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : A x = 0}` for `A` given by rows, one vector per free
/// column, with a 1 at that column.
pub(crate) fn nullspace(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let pivots = rref(&mut rows, ncols);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (row, &pc) in rows.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

/// Coefficient vectors of `polys` over the union of their monomials.
pub(crate) struct Coordinates {
    index: BTreeMap<Monomial, usize>,
}

impl Coordinates {
    pub(crate) fn new<'a>(polys: impl IntoIterator<Item = &'a Polynomial>) -> Self {
        let mut index = BTreeMap::new();
        for p in polys {
            for (m, _) in p.terms() {
                let k = index.len();
                index.entry(m.clone()).or_insert(k);
            }
        }
        Coordinates { index }
    }

    pub(crate) fn len(&self) -> usize {
        self.index.len()
    }

    /// `None` when `p` has a monomial outside the index.
    pub(crate) fn vector(&self, p: &Polynomial) -> Option<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.len()];
        for (m, c) in p.terms() {
            v[*self.index.get(m)?] = c.clone();
        }
        Some(v)
    }
}

/// Whether `polys` are ℚ-linearly independent.
pub(crate) fn independent(polys: &[Polynomial]) -> bool {
    let coords = Coordinates::new(polys);
    let mut rows: Vec<Vec<Rational>> = polys
        .iter()
        .map(|p| coords.vector(p).expect("indexed"))
        .collect();
    rref(&mut rows, coords.len()).len() == polys.len()
}

/// Whether `p` lies in the ℚ-span of `span`.
pub(crate) fn in_span(p: &Polynomial, span: &[Polynomial]) -> bool {
    let coords = Coordinates::new(span.iter().chain(std::iter::once(p)));
    let mut rows: Vec<Vec<Rational>> = span
        .iter()
        .map(|q| coords.vector(q).expect("indexed"))
        .collect();
    let before = rref(&mut rows, coords.len()).len();
    rows.push(coords.vector(p).expect("indexed"));
    rref(&mut rows, coords.len()).len() == before
}
