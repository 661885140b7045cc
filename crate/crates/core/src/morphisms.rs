//! Morphisms of σ-algebraic groups given by their dual maps on coordinates.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::ambient::GroupSpec;
use crate::diff::{
    generation_identity, shift, Prolongation, DEFAULT_CAP_OFFSET, DEFAULT_LOOKAHEAD,
};
use crate::error::{Error, Result};
use crate::groebner::MonomialOrder;
use crate::hopf::{comultiply, comultiply_coord, counit, tensor_ideal};
use crate::ideal::{ideal_contained, IdealBasis};
use crate::poly::{Coord, Monomial, Polynomial, Rational, Space, VarId};

/// Three-valued answers for questions decided at a truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Truth {
    True,
    False,
    Unknown,
}

/// `φ: G → H` through `φ*(h)` for every coordinate `h` of `H`'s ambient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismSpec {
    pub source: GroupSpec,
    pub target: GroupSpec,
    /// Images of all target coordinates, inverse markers included.
    pub assignment: BTreeMap<Coord, Polynomial>,
}

fn invert_monomial(p: &Polynomial, source: &GroupSpec) -> Option<Polynomial> {
    if p.len() != 1 {
        return None;
    }
    let (m, c) = p.terms().next()?;
    let mut pairs = Vec::new();
    for &(v, e) in m.pairs() {
        let inv = match v.coord {
            Coord::Y(j)
                if source.ambient.kind_of(v.coord) == Some(crate::ambient::FactorKind::Gm) =>
            {
                Coord::InvY(j)
            }
            Coord::InvY(j) => Coord::Y(j),
            _ => return None,
        };
        pairs.push((VarId { coord: inv, ..v }, e));
    }
    Some(Polynomial::monomial(
        Monomial::from_pairs(pairs),
        Rational::from_integer(1.into()) / c,
    ))
}

/// An inverse of `f` modulo the source closure ideal: the normal form of
/// an auxiliary `w` modulo `I + ⟨w·f − 1⟩` with `w` eliminated first.
fn invert_modulo(f: &Polynomial, source: &GroupSpec) -> Result<Polynomial> {
    if let Some(inv) = invert_monomial(f, source) {
        return Ok(inv);
    }
    let level = f.max_shift().unwrap_or(0).max(source.max_order());
    let mut pro = Prolongation::new(source);
    let (ideal, _) = pro.closure(level, DEFAULT_LOOKAHEAD, level + DEFAULT_CAP_OFFSET)?;
    let w = VarId {
        space: Space::Base,
        shift: 0,
        coord: Coord::Aux(0),
    };
    let mut gens = ideal.polynomials().to_vec();
    gens.push(&(&Polynomial::var(w) * f) - &Polynomial::one());
    let elim = IdealBasis::computed(
        ideal.universe().iter().copied(),
        gens,
        MonomialOrder::Elimination([w].into_iter().collect()),
    );
    if elim.is_unit()? {
        return Err(Error::NotInvertible(f.to_string()));
    }
    let h = elim.normal_form(&Polynomial::var(w))?;
    if h.vars().contains(&w) {
        return Err(Error::NotInvertible(f.to_string()));
    }
    Ok(h)
}

impl MorphismSpec {
    /// Validates the assignment of the plain target coordinates and derives
    /// images of the inverse markers.
    pub fn new(
        source: GroupSpec,
        target: GroupSpec,
        assignment: BTreeMap<Coord, Polynomial>,
    ) -> Result<Self> {
        let mut full = BTreeMap::new();
        for c in target.ambient.base_coords() {
            let img = assignment.get(&c).ok_or_else(|| {
                Error::InvalidSpec(format!("no image assigned to target coordinate {c}"))
            })?;
            source.ambient.check_poly(img)?;
            full.insert(c, img.clone());
        }
        for c in assignment.keys() {
            if target.ambient.kind_of(*c).is_none() {
                return Err(Error::InvalidSpec(format!(
                    "{c} is not a target coordinate"
                )));
            }
        }
        for c in target.ambient.coords() {
            match c {
                Coord::InvY(j) => {
                    let img = match assignment.get(&c) {
                        Some(p) => p.clone(),
                        None => invert_modulo(&full[&Coord::Y(j)], &source)?,
                    };
                    full.insert(c, img);
                }
                Coord::InvDet => {
                    let img = match assignment.get(&c) {
                        Some(p) => p.clone(),
                        None => {
                            let n = target.ambient.gl_size().expect("GLn factor");
                            let det = crate::ambient::determinant(n, |j, k| {
                                full[&Coord::X(j, k)].clone()
                            });
                            invert_modulo(&det, &source)?
                        }
                    };
                    full.insert(c, img);
                }
                _ => {}
            }
        }
        Ok(MorphismSpec {
            source,
            target,
            assignment: full,
        })
    }

    /// The identity morphism of a group.
    pub fn identity(group: &GroupSpec) -> Self {
        let assignment = group
            .ambient
            .coords()
            .into_iter()
            .map(|c| (c, Polynomial::var(VarId::new(c, 0))))
            .collect();
        MorphismSpec {
            source: group.clone(),
            target: group.clone(),
            assignment,
        }
    }

    /// Inclusion of a subgroup into a group on the same ambient.
    pub fn inclusion(sub: &GroupSpec, group: &GroupSpec) -> Result<Self> {
        if sub.ambient != group.ambient {
            return Err(Error::AmbientMismatch(format!(
                "{} vs {}",
                sub.ambient, group.ambient
            )));
        }
        let mut phi = MorphismSpec::identity(group);
        phi.source = sub.clone();
        Ok(phi)
    }

    /// Largest shift in the assignment.
    pub fn order(&self) -> u32 {
        self.assignment
            .values()
            .filter_map(Polynomial::max_shift)
            .max()
            .unwrap_or(0)
    }

    /// `φ*` on target polynomials, σ-equivariantly.
    pub fn pullback(&self, p: &Polynomial) -> Polynomial {
        p.substitute(|v| {
            (v.space == Space::Base).then(|| shift(&self.assignment[&v.coord], v.shift))
        })
    }

    /// `ψ ∘ φ` where `self = φ: G → H` and `psi: H → K`.
    pub fn then(&self, psi: &MorphismSpec) -> MorphismSpec {
        let assignment = psi
            .assignment
            .iter()
            .map(|(c, p)| (*c, self.pullback(p)))
            .collect();
        MorphismSpec {
            source: self.source.clone(),
            target: psi.target.clone(),
            assignment,
        }
    }
}

/// Ideal of `φ(G)[i]`: the source truncation at `N` with tag relations
/// `t_h − φ*(h)` for target coordinates up to level `i`, contracted to the
/// tags and renamed to target coordinates.
pub fn image_ideal(phi: &MorphismSpec, i: u32, n: u32) -> Result<IdealBasis> {
    let mut pro = Prolongation::new(&phi.source);
    image_with(phi, &mut pro, i, n)
}

fn image_with(phi: &MorphismSpec, pro: &mut Prolongation, i: u32, n: u32) -> Result<IdealBasis> {
    let required = i + phi.order();
    if n < required {
        return Err(Error::LevelTooSmall { n, required });
    }
    let tags: Vec<VarId> = phi
        .target
        .ambient
        .vars_upto(i)
        .into_iter()
        .map(|v| v.in_space(Space::Tag))
        .collect();
    let relations: Vec<Polynomial> = tags
        .iter()
        .map(|&t| &Polynomial::var(t) - &shift(&phi.assignment[&t.coord], t.shift))
        .collect();
    let full = pro.full(n).extend(relations, tags);
    let contracted = full.restrict(|v| v.space == Space::Tag)?;
    Ok(contracted.rename(|v| v.in_space(Space::Base), MonomialOrder::LevelBlocks))
}

/// Image ideal at level `i`, raising `N` until a lookahead window agrees.
pub fn image_closure(
    phi: &MorphismSpec,
    i: u32,
    lookahead: u32,
    budget: u32,
) -> Result<IdealBasis> {
    let mut pro = Prolongation::new(&phi.source);
    image_closure_with(phi, &mut pro, i, lookahead, budget)
}

fn image_closure_with(
    phi: &MorphismSpec,
    pro: &mut Prolongation,
    i: u32,
    lookahead: u32,
    budget: u32,
) -> Result<IdealBasis> {
    let lookahead = lookahead.max(1);
    let start = i + phi.order();
    let cap = start + budget;
    let mut n = start;
    loop {
        if n + lookahead > cap {
            return Err(Error::BudgetExceeded(format!(
                "image at level {i} did not stabilize by {cap}"
            )));
        }
        let a = image_with(phi, pro, i, n)?;
        let b = image_with(phi, pro, i, n + lookahead)?;
        if a.groebner_basis() == b.groebner_basis() {
            return Ok(b);
        }
        n += 1;
    }
}

/// `ker φ = φ^{-1}(1)`.
pub fn kernel_group(phi: &MorphismSpec) -> GroupSpec {
    let amb = &phi.target.ambient;
    let mut generators = phi.source.generators.clone();
    for c in amb.base_coords() {
        let g = &phi.assignment[&c] - &Polynomial::constant(amb.identity_value(c));
        if !g.is_zero() && !generators.contains(&g) {
            generators.push(g);
        }
    }
    GroupSpec {
        name: format!("ker({})", phi.source.name),
        ambient: phi.source.ambient.clone(),
        generators,
    }
}

/// `φ^{-1}(Z)` for a subgroup `Z` of the target ambient.
pub fn preimage_group(phi: &MorphismSpec, z: &GroupSpec) -> Result<GroupSpec> {
    if z.ambient != phi.target.ambient {
        return Err(Error::AmbientMismatch(format!(
            "{} vs {}",
            z.ambient, phi.target.ambient
        )));
    }
    let mut generators = phi.source.generators.clone();
    for g in &z.generators {
        let p = phi.pullback(g);
        if !p.is_zero() && !generators.contains(&p) {
            generators.push(p);
        }
    }
    Ok(GroupSpec {
        name: format!("preimage({})", z.name),
        ambient: phi.source.ambient.clone(),
        generators,
    })
}

/// Injectivity at a truncation: `False` when the kernel's closure at
/// `bound` misses part of the augmentation ideal; `True` when every source
/// coordinate up to `bound` lies in the image subalgebra.
pub fn is_injective(phi: &MorphismSpec, bound: u32, lookahead: u32) -> Result<Truth> {
    let bound = bound.max(phi.source.max_order());
    let kernel = kernel_group(phi);
    let mut kpro = Prolongation::new(&kernel);
    let kclosure = match kpro.closure(bound, lookahead, bound + DEFAULT_CAP_OFFSET) {
        Ok((ideal, _)) => ideal,
        Err(Error::BudgetExceeded(_)) => return Ok(Truth::Unknown),
        Err(e) => return Err(e),
    };
    if !kclosure.contains_all(&phi.source.ambient.augmentation_upto(bound))? {
        return Ok(Truth::False);
    }
    let n = bound + phi.order() + lookahead.max(1);
    let mut pro = Prolongation::new(&phi.source);
    let tags: Vec<VarId> = phi
        .target
        .ambient
        .vars_upto(bound + phi.order())
        .into_iter()
        .map(|v| v.in_space(Space::Tag))
        .collect();
    let relations: Vec<Polynomial> = tags
        .iter()
        .map(|&t| &Polynomial::var(t) - &shift(&phi.assignment[&t.coord], t.shift))
        .collect();
    let full = pro.full(n).extend(relations, tags);
    for c in phi.source.ambient.base_coords() {
        for s in 0..=bound {
            let nf = full.normal_form(&Polynomial::var(VarId::new(c, s)))?;
            if nf.vars().iter().any(|v| v.space != Space::Tag) {
                return Ok(Truth::Unknown);
            }
        }
    }
    Ok(Truth::True)
}

/// Surjectivity at a truncation: compares the image ideal with the target
/// closure ideal at every level up to `bound`.
pub fn is_surjective(phi: &MorphismSpec, bound: u32, lookahead: u32) -> Result<Truth> {
    let mut spro = Prolongation::new(&phi.source);
    let mut tpro = Prolongation::new(&phi.target);
    for i in 0..=bound {
        let image = match image_closure_with(phi, &mut spro, i, lookahead, DEFAULT_CAP_OFFSET) {
            Ok(ideal) => ideal,
            Err(Error::BudgetExceeded(_)) => return Ok(Truth::Unknown),
            Err(e) => return Err(e),
        };
        let target = match tpro.closure(i, lookahead, i + DEFAULT_CAP_OFFSET) {
            Ok((ideal, _)) => ideal,
            Err(Error::BudgetExceeded(_)) => return Ok(Truth::Unknown),
            Err(e) => return Err(e),
        };
        if image.groebner_basis() != target.groebner_basis() {
            return Ok(if ideal_contained(&target, &image)? {
                Truth::False
            } else {
                Truth::Unknown
            });
        }
    }
    Ok(Truth::True)
}

#[derive(Clone, Debug)]
pub struct Factorization {
    /// `φ(G)` as a subgroup of the target ambient.
    pub image: GroupSpec,
    /// `G → φ(G)`, with the assignment of `φ`.
    pub surjection: MorphismSpec,
    /// `φ(G) → H`, the inclusion.
    pub embedding: MorphismSpec,
    /// No new image generators appeared in the last `lookahead` levels.
    pub stabilized: bool,
    /// `embedding ∘ surjection` reproduces `φ` on every coordinate.
    pub composition_ok: bool,
}

/// Factors `φ` as a surjection onto its image followed by an inclusion.
/// Image generators are collected level by level: an element of the level-`i`
/// image ideal is kept when the shifts of the generators found so far do not
/// already produce it.
pub fn factorize(phi: &MorphismSpec, bound: u32, lookahead: u32) -> Result<Factorization> {
    let amb = &phi.target.ambient;
    let mut pro = Prolongation::new(&phi.source);
    let mut generators: Vec<Polynomial> = Vec::new();
    let mut levels: Vec<IdealBasis> = Vec::new();
    let mut last_new = 0;
    let relation_set = amb.relations_upto(bound);
    for i in 0..=bound {
        let image = image_closure_with(phi, &mut pro, i, lookahead, DEFAULT_CAP_OFFSET)?;
        let mut known: Vec<Polynomial> = generators
            .iter()
            .flat_map(|g| {
                let top = g.max_shift().unwrap_or(0);
                (0..=i - top.min(i)).map(move |t| shift(g, t))
            })
            .filter(|g| g.max_shift().unwrap_or(0) <= i)
            .collect();
        known.extend(amb.relations_upto(i));
        let mut current = IdealBasis::computed(amb.vars_upto(i), known, MonomialOrder::LevelBlocks);
        // Prefer generators free of inverse markers.
        let mut candidates: Vec<&Polynomial> = image.polynomials().iter().collect();
        candidates.sort_by_key(|g| g.vars().iter().any(|v| v.coord.is_inverse()));
        for g in candidates {
            if relation_set.contains(g) || current.contains(g)? {
                continue;
            }
            generators.push(g.clone());
            last_new = i;
            let top = g.max_shift().unwrap_or(0);
            let more = (0..=i - top).map(|t| shift(g, t)).collect();
            current = current.extend(more, []);
        }
        levels.push(image);
    }
    let stabilized = bound >= last_new + lookahead.max(1)
        && (last_new + 1..=bound).all(|i| {
            generation_identity(&phi.target, &levels[i as usize - 1], &levels[i as usize], i)
        });
    let image = GroupSpec {
        name: format!("image({})", phi.source.name),
        ambient: amb.clone(),
        generators,
    };
    let surjection = MorphismSpec {
        source: phi.source.clone(),
        target: image.clone(),
        assignment: phi.assignment.clone(),
    };
    let embedding = MorphismSpec::inclusion(&image, &phi.target)?;
    let composition_ok = surjection.then(&embedding).assignment == phi.assignment;
    Ok(Factorization {
        image,
        surjection,
        embedding,
        stabilized,
        composition_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomomorphismReport {
    /// `φ*` sends the target ideal into the source ideal.
    pub maps_into_target: bool,
    pub counit: bool,
    pub comultiplication: bool,
}

/// Checks that `φ*` is a morphism of Hopf algebras on generators, modulo
/// the source closure ideal at `level`.
pub fn check_homomorphism(
    phi: &MorphismSpec,
    level: u32,
    lookahead: u32,
) -> Result<HomomorphismReport> {
    let level = level.max(phi.order()).max(phi.source.max_order());
    let mut pro = Prolongation::new(&phi.source);
    let (ideal, _) = pro.closure(level, lookahead, level + DEFAULT_CAP_OFFSET)?;
    let top = level - phi.order();
    let maps_into_target = phi
        .target
        .generators
        .iter()
        .filter(|g| g.max_shift().unwrap_or(0) <= top)
        .map(|g| ideal.contains(&phi.pullback(g)))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);
    let samb = &phi.source.ambient;
    let tamb = &phi.target.ambient;
    let counit_ok = tamb
        .base_coords()
        .iter()
        .all(|&c| counit(&phi.assignment[&c], samb) == tamb.identity_value(c));
    let tensor = tensor_ideal(&ideal, &ideal);
    let mut comult_ok = true;
    for c in tamb.base_coords() {
        let lhs = comultiply(&phi.assignment[&c], samb);
        let rhs = comultiply_coord(tamb, c, 0, Space::Left, Space::Right)
            .substitute(|v| Some(phi.assignment[&v.coord].in_space(v.space)));
        if !tensor.contains(&(&lhs - &rhs))? {
            comult_ok = false;
        }
    }
    Ok(HomomorphismReport {
        maps_into_target,
        counit: counit_ok,
        comultiplication: comult_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::AmbientSpec;
    use crate::ideal::{groebner, ideal_equal};
    use crate::text::parse_poly;

    fn p(s: &str) -> Polynomial {
        parse_poly(s).unwrap()
    }

    fn gm_map(source: &GroupSpec, image: &str) -> MorphismSpec {
        let target = GroupSpec::free("gm", AmbientSpec::gm(1));
        MorphismSpec::new(
            source.clone(),
            target,
            [(Coord::Y(1), p(image))].into_iter().collect(),
        )
        .unwrap()
    }

    #[test]
    fn inverse_images_are_derived() {
        let gm = GroupSpec::free("gm", AmbientSpec::gm(1));
        let phi = gm_map(&gm, "s1(y1)^2");
        assert_eq!(phi.assignment[&Coord::InvY(1)], p("s1(iy1)^2"));
        let mu = GroupSpec::new("mu", AmbientSpec::gm(1), vec![p("y1^2 - 1")]).unwrap();
        let phi = gm_map(&mu, "y1 + 0");
        assert_eq!(phi.assignment[&Coord::InvY(1)], p("iy1"));
    }

    #[test]
    fn shift_endomorphism() {
        let gm = GroupSpec::free("gm", AmbientSpec::gm(1));
        let phi = gm_map(&gm, "s1(y1)");
        assert!(image_ideal(&phi, 0, 1).unwrap().polynomials() == [p("y1*iy1 - 1")]);
        let k = kernel_group(&phi);
        assert_eq!(k.generators, vec![p("s1(y1) - 1")]);
        assert_eq!(is_injective(&phi, 2, 2).unwrap(), Truth::False);
        assert_eq!(is_surjective(&phi, 2, 2).unwrap(), Truth::True);
        let mu2 = GroupSpec::new("mu2", AmbientSpec::gm(1), vec![p("y1^2 - 1")]).unwrap();
        assert_eq!(
            preimage_group(&phi, &mu2).unwrap().generators,
            vec![p("s1(y1)^2 - 1")]
        );
    }

    #[test]
    fn squaring() {
        let gm = GroupSpec::free("gm", AmbientSpec::gm(1));
        let phi = gm_map(&gm, "y1^2");
        assert!(image_ideal(&phi, 0, 0).unwrap().polynomials() == [p("y1*iy1 - 1")]);
        assert_eq!(is_injective(&phi, 1, 2).unwrap(), Truth::False);
        assert_eq!(is_surjective(&phi, 2, 2).unwrap(), Truth::True);
    }

    #[test]
    fn embeddings() {
        let mu = GroupSpec::new("mu", AmbientSpec::gm(1), vec![p("y1*s1(y1)^2 - 1")]).unwrap();
        let phi = MorphismSpec::inclusion(&mu, &GroupSpec::free("gm", AmbientSpec::gm(1))).unwrap();
        assert_eq!(is_injective(&phi, 2, 2).unwrap(), Truth::True);
        let img = image_closure(&phi, 1, 2, 8).unwrap();
        let expected = groebner(
            vec![
                p("y1*s1(y1)^2 - 1"),
                p("y1*iy1 - 1"),
                p("s1(y1)*s1(iy1) - 1"),
            ],
            MonomialOrder::Grevlex,
        );
        assert!(ideal_equal(&img, &expected));
        let mu2 = GroupSpec::new("mu2", AmbientSpec::gm(1), vec![p("y1^2 - 1")]).unwrap();
        let inc =
            MorphismSpec::inclusion(&mu2, &GroupSpec::free("gm", AmbientSpec::gm(1))).unwrap();
        assert_eq!(is_surjective(&inc, 1, 2).unwrap(), Truth::False);
        assert!(check_homomorphism(&inc, 1, 2).unwrap().comultiplication);
    }

    #[test]
    fn identity_kernel_is_trivial() {
        let gm = GroupSpec::free("gm", AmbientSpec::gm(1));
        let k = kernel_group(&MorphismSpec::identity(&gm));
        assert_eq!(k.generators, vec![p("y1 - 1")]);
    }

    #[test]
    fn factorizations() {
        let gm = GroupSpec::free("gm", AmbientSpec::gm(1));
        let f = factorize(&gm_map(&gm, "s1(y1)"), 3, 2).unwrap();
        assert!(f.image.generators.is_empty());
        assert!(f.stabilized && f.composition_ok);
        let f = factorize(&gm_map(&gm, "1"), 3, 2).unwrap();
        assert_eq!(f.image.generators, vec![p("y1 - 1")]);
        let mu2 = GroupSpec::new("mu2", AmbientSpec::gm(1), vec![p("y1^2 - 1")]).unwrap();
        let f = factorize(&gm_map(&mu2, "s1(y1)"), 3, 2).unwrap();
        assert_eq!(f.image.generators, vec![p("y1^2 - 1")]);
    }
}
