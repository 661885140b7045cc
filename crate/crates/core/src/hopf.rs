//! Comultiplication, antipode and counit of the ambient coordinate rings,
//! and the σ-Hopf ideal test for group specifications.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::ambient::{determinant, AmbientSpec, FactorKind, GroupSpec};
use crate::diff::{Prolongation, DEFAULT_CAP_OFFSET};
use crate::error::{Error, Result};
use crate::groebner::MonomialOrder;
use crate::ideal::IdealBasis;
use crate::poly::{Coord, Polynomial, Rational, Space, VarId};

fn at(space: Space, c: Coord, shift: u32) -> Polynomial {
    Polynomial::var(VarId {
        space,
        shift,
        coord: c,
    })
}

/// Δ of one coordinate, with the tensor factors in spaces `l` and `r`.
pub fn comultiply_coord(
    ambient: &AmbientSpec,
    c: Coord,
    shift: u32,
    l: Space,
    r: Space,
) -> Polynomial {
    match (ambient.kind_of(c), c) {
        (Some(FactorKind::Ga), _) => &at(l, c, shift) + &at(r, c, shift),
        (Some(FactorKind::GLn), Coord::X(j, k)) => {
            let n = ambient.gl_size().expect("GLn factor");
            let mut acc = Polynomial::zero();
            for m in 1..=n {
                acc += &(&at(l, Coord::X(j, m), shift) * &at(r, Coord::X(m, k), shift));
            }
            acc
        }
        // Group-like: y, iy, idet.
        _ => &at(l, c, shift) * &at(r, c, shift),
    }
}

/// Δ applied to the variables of `source`, landing in `l ⊗ r`. Variables
/// of other spaces are left alone.
pub fn comultiply_in(
    p: &Polynomial,
    ambient: &AmbientSpec,
    source: Space,
    l: Space,
    r: Space,
) -> Polynomial {
    p.substitute(|v| (v.space == source).then(|| comultiply_coord(ambient, v.coord, v.shift, l, r)))
}

/// Δ(p) in the tensor ring with copies `u = Left`, `v = Right`. Compatible
/// with σ since each shifted coordinate maps to the shifted image.
pub fn comultiply(p: &Polynomial, ambient: &AmbientSpec) -> Polynomial {
    comultiply_in(p, ambient, Space::Base, Space::Left, Space::Right)
}

/// S of one coordinate, within `space`.
pub fn antipode_coord(ambient: &AmbientSpec, c: Coord, shift: u32, space: Space) -> Polynomial {
    match (ambient.kind_of(c), c) {
        (Some(FactorKind::Ga), _) => -at(space, c, shift),
        (Some(FactorKind::Gm), Coord::Y(j)) => at(space, Coord::InvY(j), shift),
        (Some(FactorKind::Gm), Coord::InvY(j)) => at(space, Coord::Y(j), shift),
        (Some(FactorKind::GLn), Coord::X(j, k)) => {
            // S(x)_{jk} = idet · adj(x)_{jk} = idet · (−1)^{j+k} · minor_{kj}.
            let n = ambient.gl_size().expect("GLn factor");
            let rows: Vec<u16> = (1..=n).filter(|&a| a != k).collect();
            let cols: Vec<u16> = (1..=n).filter(|&b| b != j).collect();
            let minor = determinant(n - 1, |a, b| {
                at(
                    space,
                    Coord::X(rows[a as usize - 1], cols[b as usize - 1]),
                    shift,
                )
            });
            let signed = if (j + k) % 2 == 0 { minor } else { -minor };
            &signed * &at(space, Coord::InvDet, shift)
        }
        (Some(FactorKind::GLn), Coord::InvDet) => {
            let n = ambient.gl_size().expect("GLn factor");
            determinant(n, |a, b| at(space, Coord::X(a, b), shift))
        }
        _ => at(space, c, shift),
    }
}

pub fn antipode_in(p: &Polynomial, ambient: &AmbientSpec, space: Space) -> Polynomial {
    p.substitute(|v| (v.space == space).then(|| antipode_coord(ambient, v.coord, v.shift, space)))
}

pub fn antipode(p: &Polynomial, ambient: &AmbientSpec) -> Polynomial {
    antipode_in(p, ambient, Space::Base)
}

/// Evaluation at the identity element.
pub fn counit(p: &Polynomial, ambient: &AmbientSpec) -> Rational {
    p.evaluate(|v| ambient.identity_value(v.coord))
}

/// ε on the variables of `space` only.
pub fn counit_in(p: &Polynomial, ambient: &AmbientSpec, space: Space) -> Polynomial {
    p.substitute(|v| {
        (v.space == space).then(|| Polynomial::constant(ambient.identity_value(v.coord)))
    })
}

/// Ideal generated by `coordinate − ε(coordinate)` up to `level`.
pub fn augmentation_ideal(ambient: &AmbientSpec, level: u32) -> IdealBasis {
    IdealBasis::computed(
        ambient.vars_upto(level),
        ambient.augmentation_upto(level),
        MonomialOrder::LevelBlocks,
    )
}

/// `⟨I(u)⟩ + ⟨J(v)⟩` in the tensor ring. Both inputs are Base-space ideals;
/// their level-block bases are copied into the two spaces and united, which
/// is again a reduced Gröbner basis since the variable sets are disjoint.
pub fn tensor_ideal(left: &IdealBasis, right: &IdealBasis) -> IdealBasis {
    let l = left.reorder(MonomialOrder::LevelBlocks);
    let r = right.reorder(MonomialOrder::LevelBlocks);
    let mut universe: BTreeSet<VarId> = l
        .universe()
        .iter()
        .map(|v| v.in_space(Space::Left))
        .collect();
    universe.extend(r.universe().iter().map(|v| v.in_space(Space::Right)));
    let mut polys: Vec<Polynomial> = l
        .polynomials()
        .iter()
        .map(|g| g.in_space(Space::Left))
        .collect();
    polys.extend(r.polynomials().iter().map(|g| g.in_space(Space::Right)));
    if polys.iter().any(Polynomial::is_constant) {
        polys = vec![Polynomial::one()];
    }
    IdealBasis::from_reduced_unchecked(universe, polys, MonomialOrder::LevelBlocks)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HopfCheck {
    Counit,
    Antipode,
    Comultiplication,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HopfFailure {
    pub generator: String,
    pub check: HopfCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HopfReport {
    pub hopf: bool,
    pub level: u32,
    pub failures: Vec<HopfFailure>,
}

/// Checks the Hopf-ideal conditions on every generator against the closure
/// ideal at `level`. Only the first failing condition of a generator is
/// reported.
pub fn is_hopf_ideal(spec: &GroupSpec, level: u32, lookahead: u32) -> Result<HopfReport> {
    let order = spec.max_order();
    if level < order {
        return Err(Error::LevelTooSmall {
            n: level,
            required: order,
        });
    }
    let mut pro = Prolongation::new(spec);
    let (ideal, _) = pro.closure(level, lookahead, level + DEFAULT_CAP_OFFSET)?;
    hopf_check(spec, &ideal, level)
}

/// Hopf-ideal conditions for `spec.generators` against a given level ideal.
pub fn hopf_check(spec: &GroupSpec, ideal: &IdealBasis, level: u32) -> Result<HopfReport> {
    let amb = &spec.ambient;
    let tensor = tensor_ideal(ideal, ideal);
    let mut failures = Vec::new();
    for g in &spec.generators {
        let check = if counit(g, amb) != Rational::from_integer(0.into()) {
            Some(HopfCheck::Counit)
        } else if !ideal.contains(&antipode(g, amb))? {
            Some(HopfCheck::Antipode)
        } else if !tensor.contains(&comultiply(g, amb))? {
            Some(HopfCheck::Comultiplication)
        } else {
            None
        };
        if let Some(check) = check {
            failures.push(HopfFailure {
                generator: g.to_string(),
                check,
            });
        }
    }
    Ok(HopfReport {
        hopf: failures.is_empty(),
        level,
        failures,
    })
}
