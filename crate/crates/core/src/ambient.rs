//! Ambient algebraic groups and group specifications.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Coord, Polynomial, Rational, Space, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorKind {
    Ga,
    Gm,
    GLn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub kind: FactorKind,
    pub n: u16,
}

/// A product of basic factors. Additive and multiplicative coordinates are
/// numbered `y1, y2, …` in factor order; the (single) general linear factor
/// uses `x{j}_{k}` and the inverse determinant `idet`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AmbientSpec {
    factors: Vec<Factor>,
}

impl AmbientSpec {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidSpec("ambient has no factors".into()));
        }
        if factors.iter().any(|f| f.n == 0) {
            return Err(Error::InvalidSpec("factor of size 0".into()));
        }
        if factors.iter().filter(|f| f.kind == FactorKind::GLn).count() > 1 {
            return Err(Error::InvalidSpec(
                "at most one GLn factor is supported".into(),
            ));
        }
        Ok(AmbientSpec { factors })
    }

    pub fn ga(n: u16) -> Self {
        AmbientSpec {
            factors: vec![Factor {
                kind: FactorKind::Ga,
                n,
            }],
        }
    }

    pub fn gm(n: u16) -> Self {
        AmbientSpec {
            factors: vec![Factor {
                kind: FactorKind::Gm,
                n,
            }],
        }
    }

    pub fn gl(n: u16) -> Self {
        AmbientSpec {
            factors: vec![Factor {
                kind: FactorKind::GLn,
                n,
            }],
        }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Kind of the factor a coordinate belongs to.
    pub fn kind_of(&self, c: Coord) -> Option<FactorKind> {
        match c {
            Coord::Y(j) | Coord::InvY(j) => {
                let mut next = 1u16;
                for f in &self.factors {
                    if f.kind == FactorKind::GLn {
                        continue;
                    }
                    if j >= next && j < next + f.n {
                        if matches!(c, Coord::InvY(_)) && f.kind != FactorKind::Gm {
                            return None;
                        }
                        return Some(f.kind);
                    }
                    next += f.n;
                }
                None
            }
            Coord::X(j, k) => self
                .gl_size()
                .filter(|&n| (1..=n).contains(&j) && (1..=n).contains(&k))
                .map(|_| FactorKind::GLn),
            Coord::InvDet => self.gl_size().map(|_| FactorKind::GLn),
            Coord::Aux(_) => None,
        }
    }

    pub fn gl_size(&self) -> Option<u16> {
        self.factors
            .iter()
            .find(|f| f.kind == FactorKind::GLn)
            .map(|f| f.n)
    }

    /// Every coordinate, inverse markers included.
    pub fn coords(&self) -> Vec<Coord> {
        let mut out = Vec::new();
        let mut next = 1u16;
        for f in &self.factors {
            match f.kind {
                FactorKind::Ga => {
                    out.extend((next..next + f.n).map(Coord::Y));
                    next += f.n;
                }
                FactorKind::Gm => {
                    for j in next..next + f.n {
                        out.push(Coord::Y(j));
                        out.push(Coord::InvY(j));
                    }
                    next += f.n;
                }
                FactorKind::GLn => {
                    for j in 1..=f.n {
                        out.extend((1..=f.n).map(|k| Coord::X(j, k)));
                    }
                    out.push(Coord::InvDet);
                }
            }
        }
        out.sort();
        out
    }

    /// Coordinates without inverse markers.
    pub fn base_coords(&self) -> Vec<Coord> {
        self.coords()
            .into_iter()
            .filter(|c| !c.is_inverse())
            .collect()
    }

    pub fn vars_at(&self, shift: u32) -> Vec<VarId> {
        self.coords()
            .into_iter()
            .map(|c| VarId::new(c, shift))
            .collect()
    }

    pub fn vars_upto(&self, level: u32) -> BTreeSet<VarId> {
        (0..=level).flat_map(|s| self.vars_at(s)).collect()
    }

    pub fn determinant(&self, shift: u32) -> Option<Polynomial> {
        let n = self.gl_size()?;
        Some(determinant(n, |j, k| {
            Polynomial::var(VarId::x(j, k, shift))
        }))
    }

    /// Rabinowitsch relations at one shift.
    pub fn relations_at(&self, shift: u32) -> Vec<Polynomial> {
        let mut out = Vec::new();
        for c in self.coords() {
            match c {
                Coord::InvY(j) => {
                    let p = &Polynomial::var(VarId::y(j, shift))
                        * &Polynomial::var(VarId::iy(j, shift));
                    out.push(&p - &Polynomial::one());
                }
                Coord::InvDet => {
                    let det = self.determinant(shift).expect("GLn factor");
                    out.push(&(&det * &Polynomial::var(VarId::idet(shift))) - &Polynomial::one());
                }
                _ => {}
            }
        }
        out
    }

    pub fn relations_upto(&self, level: u32) -> Vec<Polynomial> {
        (0..=level).flat_map(|s| self.relations_at(s)).collect()
    }

    /// Value of a coordinate at the identity element.
    pub fn identity_value(&self, c: Coord) -> Rational {
        match c {
            Coord::Y(_) if self.kind_of(c) == Some(FactorKind::Ga) => Rational::zero(),
            Coord::X(j, k) if j != k => Rational::zero(),
            _ => Rational::one(),
        }
    }

    /// Generators `v − ε(v)` of the augmentation ideal at one shift.
    pub fn augmentation_at(&self, shift: u32) -> Vec<Polynomial> {
        self.coords()
            .into_iter()
            .map(|c| {
                &Polynomial::var(VarId::new(c, shift))
                    - &Polynomial::constant(self.identity_value(c))
            })
            .collect()
    }

    pub fn augmentation_upto(&self, level: u32) -> Vec<Polynomial> {
        (0..=level).flat_map(|s| self.augmentation_at(s)).collect()
    }

    /// Commutative ambients: no general linear factor of size above one.
    pub fn is_abelian(&self) -> bool {
        self.gl_size().is_none_or(|n| n == 1)
    }

    pub fn is_torus(&self) -> bool {
        self.factors.iter().all(|f| f.kind == FactorKind::Gm)
    }

    /// Base-space variables only, with coordinates of this ambient.
    pub fn check_poly(&self, p: &Polynomial) -> Result<()> {
        for v in p.vars() {
            if v.space != Space::Base || self.kind_of(v.coord).is_none() {
                return Err(Error::InvalidSpec(format!(
                    "variable {v} is not a coordinate of the ambient {self}"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for AmbientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, factor) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{:?}({})", factor.kind, factor.n)?;
        }
        Ok(())
    }
}

/// Leibniz expansion; `n` is tiny here.
pub fn determinant(n: u16, entry: impl Fn(u16, u16) -> Polynomial) -> Polynomial {
    fn go(rows: &[u16], cols: &mut Vec<u16>, entry: &dyn Fn(u16, u16) -> Polynomial) -> Polynomial {
        let Some((&r, rest)) = rows.split_first() else {
            return Polynomial::one();
        };
        let mut acc = Polynomial::zero();
        for idx in 0..cols.len() {
            let c = cols.remove(idx);
            let minor = go(rest, cols, entry);
            let term = &entry(r, c) * &minor;
            if idx % 2 == 0 {
                acc += &term;
            } else {
                acc -= &term;
            }
            cols.insert(idx, c);
        }
        acc
    }
    let rows: Vec<u16> = (1..=n).collect();
    let mut cols = rows.clone();
    go(&rows, &mut cols, &entry)
}

/// A σ-closed subgroup presented by generators of its defining σ-ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub name: String,
    pub ambient: AmbientSpec,
    pub generators: Vec<Polynomial>,
}

impl GroupSpec {
    pub fn new(
        name: impl Into<String>,
        ambient: AmbientSpec,
        generators: Vec<Polynomial>,
    ) -> Result<Self> {
        for g in &generators {
            ambient.check_poly(g)?;
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(GroupSpec {
            name: name.into(),
            ambient,
            generators,
        })
    }

    /// The whole ambient prolongation `[σ]𝒢`.
    pub fn free(name: impl Into<String>, ambient: AmbientSpec) -> Self {
        GroupSpec {
            name: name.into(),
            ambient,
            generators: Vec::new(),
        }
    }

    /// The trivial subgroup.
    pub fn trivial(name: impl Into<String>, ambient: AmbientSpec) -> Self {
        let generators = ambient
            .base_coords()
            .into_iter()
            .map(|c| {
                &Polynomial::var(VarId::new(c, 0))
                    - &Polynomial::constant(ambient.identity_value(c))
            })
            .collect();
        GroupSpec {
            name: name.into(),
            ambient,
            generators,
        }
    }

    /// Largest shift among the generators.
    pub fn max_order(&self) -> u32 {
        self.generators
            .iter()
            .filter_map(Polynomial::max_shift)
            .max()
            .unwrap_or(0)
    }

    /// Same ambient, generators of both.
    pub fn intersect(&self, other: &GroupSpec, name: impl Into<String>) -> Result<GroupSpec> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(format!(
                "{} vs {}",
                self.ambient, other.ambient
            )));
        }
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        Ok(GroupSpec {
            name: name.into(),
            ambient: self.ambient.clone(),
            generators,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_poly;

    #[test]
    fn coordinates_are_numbered_across_factors() {
        let a = AmbientSpec::new(vec![
            Factor {
                kind: FactorKind::Ga,
                n: 1,
            },
            Factor {
                kind: FactorKind::Gm,
                n: 2,
            },
        ])
        .unwrap();
        assert_eq!(a.kind_of(Coord::Y(1)), Some(FactorKind::Ga));
        assert_eq!(a.kind_of(Coord::Y(3)), Some(FactorKind::Gm));
        assert_eq!(a.kind_of(Coord::InvY(1)), None);
        assert_eq!(a.coords().len(), 5);
        assert_eq!(a.relations_at(0).len(), 2);
    }

    #[test]
    fn gl2_augmentation_and_relations() {
        let a = AmbientSpec::gl(2);
        let aug: Vec<String> = a.augmentation_at(0).iter().map(|p| p.to_string()).collect();
        assert_eq!(aug, ["x1_1 - 1", "x1_2", "x2_1", "x2_2 - 1", "idet - 1"]);
        let rel = &a.relations_at(0)[0];
        assert_eq!(
            *rel,
            parse_poly("x1_1*x2_2*idet - x1_2*x2_1*idet - 1").unwrap()
        );
    }

    #[test]
    fn rejects_foreign_coordinates() {
        let a = AmbientSpec::ga(1);
        assert!(GroupSpec::new("g", a.clone(), vec![parse_poly("y2").unwrap()]).is_err());
        assert!(GroupSpec::new("g", a, vec![parse_poly("s3(y1)").unwrap()]).is_ok());
    }
}
