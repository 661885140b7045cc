//! Finite-dimensional comodules: axiom checks, line stabilizers and the
//! splitting of torus representations into characters.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::ambient::GroupSpec;
use crate::diff::{Prolongation, DEFAULT_CAP_OFFSET, DEFAULT_LOOKAHEAD};
use crate::error::{Error, Result};
use crate::hopf::{comultiply, counit, tensor_ideal};
use crate::linalg::rref;
use crate::poly::{Coord, Monomial, Polynomial, Rational, Space, VarId};

/// `ρ(v_j) = Σ_i v_i ⊗ a_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comodule {
    pub group: GroupSpec,
    pub matrix: Vec<Vec<Polynomial>>,
}

impl Comodule {
    pub fn new(group: GroupSpec, matrix: Vec<Vec<Polynomial>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidSpec(
                "comodule matrix must be square and nonempty".into(),
            ));
        }
        for a in matrix.iter().flatten() {
            group.ambient.check_poly(a)?;
        }
        Ok(Comodule { group, matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    fn order(&self) -> u32 {
        self.matrix
            .iter()
            .flatten()
            .filter_map(Polynomial::max_shift)
            .max()
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComoduleReport {
    pub level: u32,
    pub coassociative: bool,
    pub counit: bool,
}

impl ComoduleReport {
    pub fn valid(&self) -> bool {
        self.coassociative && self.counit
    }
}

/// Both comodule axioms, modulo the group's closure ideal at `level`
/// (raised to the coefficient order when smaller).
pub fn check_comodule(c: &Comodule, level: u32) -> Result<ComoduleReport> {
    let level = level.max(c.order()).max(c.group.max_order());
    let (ideal, _) = Prolongation::new(&c.group).closure(
        level,
        DEFAULT_LOOKAHEAD,
        level + DEFAULT_CAP_OFFSET,
    )?;
    let tensor = tensor_ideal(&ideal, &ideal);
    let amb = &c.group.ambient;
    let n = c.dim();
    let mut coassociative = true;
    let mut counit_ok = true;
    for i in 0..n {
        for j in 0..n {
            let mut rhs = Polynomial::zero();
            for l in 0..n {
                rhs += &(&c.matrix[i][l].in_space(Space::Left)
                    * &c.matrix[l][j].in_space(Space::Right));
            }
            if coassociative && !tensor.contains(&(&comultiply(&c.matrix[i][j], amb) - &rhs))? {
                coassociative = false;
            }
            let delta = if i == j {
                Rational::one()
            } else {
                Rational::zero()
            };
            if counit(&c.matrix[i][j], amb) != delta {
                counit_ok = false;
            }
        }
    }
    Ok(ComoduleReport {
        level,
        coassociative,
        counit: counit_ok,
    })
}

/// Stabilizer of the span of the first `m` basis vectors: the group
/// generators together with `a_ij` for `j ≤ m < i`.
pub fn stabilizer_ideal(c: &Comodule, m: usize) -> Result<GroupSpec> {
    let n = c.dim();
    if m > n {
        return Err(Error::InvalidSpec(format!(
            "subspace dimension {m} exceeds {n}"
        )));
    }
    let mut generators = c.group.generators.clone();
    for row in &c.matrix[m..] {
        for a in &row[..m] {
            if !a.is_zero() && !generators.contains(a) {
                generators.push(a.clone());
            }
        }
    }
    GroupSpec::new(
        format!("stab({})", c.group.name),
        c.group.ambient.clone(),
        generators,
    )
}

/// A weight vector `v` with `ρ(v) = v ⊗ χ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub character: Polynomial,
    pub vector: Vec<Rational>,
}

/// Writes a torus monomial as a Laurent monomial: `y` and `iy` at the same
/// shift cancel.
fn laurent(m: &Monomial) -> Monomial {
    let mut net: BTreeMap<(u32, u16), i64> = BTreeMap::new();
    for &(v, e) in m.pairs() {
        match v.coord {
            Coord::Y(j) => *net.entry((v.shift, j)).or_default() += i64::from(e),
            Coord::InvY(j) => *net.entry((v.shift, j)).or_default() -= i64::from(e),
            _ => unreachable!("torus coordinates only"),
        }
    }
    Monomial::from_pairs(net.into_iter().filter(|&(_, e)| e != 0).map(|((s, j), e)| {
        let coord = if e > 0 { Coord::Y(j) } else { Coord::InvY(j) };
        (
            VarId {
                space: Space::Base,
                shift: s,
                coord,
            },
            e.unsigned_abs() as u32,
        )
    }))
}

/// Splits a representation of `[σ]G_m^n` into character lines: the
/// coefficient of each character `χ` in `(a_ij)` is a projector onto the
/// `χ`-weight space.
pub fn torus_decompose(c: &Comodule) -> Result<Vec<Line>> {
    let amb = &c.group.ambient;
    if !amb.is_torus() || !c.group.generators.is_empty() {
        return Err(Error::NotATorus(format!("{} on {}", c.group.name, amb)));
    }
    let n = c.dim();
    let mut parts: BTreeMap<Monomial, Vec<Vec<Rational>>> = BTreeMap::new();
    for (i, row) in c.matrix.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            for (m, coef) in a.terms() {
                let chi = laurent(m);
                let mat = parts
                    .entry(chi)
                    .or_insert_with(|| vec![vec![Rational::zero(); n]; n]);
                mat[i][j] += coef;
            }
        }
    }
    parts.retain(|_, mat| mat.iter().flatten().any(|x| !x.is_zero()));
    let mut total = vec![vec![Rational::zero(); n]; n];
    let mut lines = Vec::new();
    let projectors: Vec<&Vec<Vec<Rational>>> = parts.values().collect();
    for (k, (chi, a)) in parts.iter().enumerate() {
        for (b_idx, b) in projectors.iter().enumerate() {
            let prod = matmul(a, b);
            let expected = if b_idx == k {
                a.clone()
            } else {
                vec![vec![Rational::zero(); n]; n]
            };
            if prod != expected {
                return Err(Error::NotCharacterCoefficients(
                    Polynomial::monomial(chi.clone(), Rational::one()).to_string(),
                ));
            }
        }
        for (t, row) in total.iter_mut().zip(a) {
            for (x, y) in t.iter_mut().zip(row) {
                *x += y;
            }
        }
        // Column space of the projector.
        let mut cols: Vec<Vec<Rational>> = (0..n)
            .map(|j| a.iter().map(|r| r[j].clone()).collect())
            .collect();
        rref(&mut cols, n);
        for v in cols {
            lines.push(Line {
                character: Polynomial::monomial(chi.clone(), Rational::one()),
                vector: v,
            });
        }
    }
    let identity: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    if total != identity || lines.len() != n {
        return Err(Error::NotCharacterCoefficients(
            "projectors do not sum to the identity".into(),
        ));
    }
    Ok(lines)
}

fn matmul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|l| &a[i][l] * &b[l][j]).sum())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::AmbientSpec;
    use crate::hopf::is_hopf_ideal;
    use crate::text::parse_poly;

    fn p(s: &str) -> Polynomial {
        parse_poly(s).unwrap()
    }

    fn matrix(rows: &[&[&str]]) -> Vec<Vec<Polynomial>> {
        rows.iter()
            .map(|r| r.iter().map(|s| p(s)).collect())
            .collect()
    }

    #[test]
    fn comodule_examples() {
        let gm = GroupSpec::free("gm", AmbientSpec::gm(1));
        let diag = Comodule::new(gm.clone(), matrix(&[&["y1", "0"], &["0", "s1(y1)"]])).unwrap();
        assert!(check_comodule(&diag, 1).unwrap().valid());
        let gl = GroupSpec::free("gl2", AmbientSpec::gl(2));
        let taut =
            Comodule::new(gl.clone(), matrix(&[&["x1_1", "x1_2"], &["x2_1", "x2_2"]])).unwrap();
        assert!(check_comodule(&taut, 0).unwrap().valid());
        let bad = Comodule::new(gm.clone(), matrix(&[&["y1 + 1", "0"], &["0", "1"]])).unwrap();
        assert!(!check_comodule(&bad, 0).unwrap().counit);
        // A base change of the diagonal one, hence valid.
        let skew = Comodule::new(
            gm.clone(),
            matrix(&[&["y1", "0"], &["y1 - s1(y1)", "s1(y1)"]]),
        )
        .unwrap();
        assert!(check_comodule(&skew, 1).unwrap().valid());
        let twisted =
            Comodule::new(gm, matrix(&[&["y1", "0"], &["y1*s1(y1) - 1", "s1(y1)"]])).unwrap();
        let r = check_comodule(&twisted, 1).unwrap();
        assert!(r.counit && !r.coassociative);
    }

    #[test]
    fn stabilizers() {
        let gl = GroupSpec::free("gl2", AmbientSpec::gl(2));
        let taut = Comodule::new(gl, matrix(&[&["x1_1", "x1_2"], &["x2_1", "x2_2"]])).unwrap();
        let borel = stabilizer_ideal(&taut, 1).unwrap();
        assert_eq!(borel.generators, vec![p("x2_1")]);
        assert!(is_hopf_ideal(&borel, 0, 2).unwrap().hopf);
        let gm = GroupSpec::free("gm", AmbientSpec::gm(1));
        let diag = Comodule::new(gm.clone(), matrix(&[&["y1", "0"], &["0", "s1(y1)"]])).unwrap();
        assert_eq!(
            stabilizer_ideal(&diag, 1).unwrap(),
            GroupSpec {
                name: "stab(gm)".into(),
                ..gm
            }
        );
    }

    #[test]
    fn torus_lines() {
        let gm = GroupSpec::free("gm", AmbientSpec::gm(1));
        let diag = Comodule::new(gm.clone(), matrix(&[&["y1", "0"], &["0", "s1(y1)"]])).unwrap();
        let lines = torus_decompose(&diag).unwrap();
        let chars: Vec<Polynomial> = lines.iter().map(|l| l.character.clone()).collect();
        assert_eq!(chars.len(), 2);
        assert!(chars.contains(&p("y1")) && chars.contains(&p("s1(y1)")));
        // Basis (v1 + v2, v2).
        let changed = Comodule::new(
            gm.clone(),
            matrix(&[&["y1", "0"], &["s1(y1) - y1", "s1(y1)"]]),
        )
        .unwrap();
        assert!(check_comodule(&changed, 1).unwrap().valid());
        let mut again: Vec<Polynomial> = torus_decompose(&changed)
            .unwrap()
            .into_iter()
            .map(|l| l.character)
            .collect();
        again.sort_by_key(|c| c.to_string());
        let mut chars = chars;
        chars.sort_by_key(|c| c.to_string());
        assert_eq!(again, chars);
        let one = Comodule::new(gm, matrix(&[&["y1*s1(y1)"]])).unwrap();
        assert_eq!(torus_decompose(&one).unwrap()[0].character, p("y1*s1(y1)"));
        let ga = GroupSpec::free("ga", AmbientSpec::ga(1));
        let c = Comodule::new(ga, matrix(&[&["1"]])).unwrap();
        assert!(matches!(torus_decompose(&c), Err(Error::NotATorus(_))));
    }
}
