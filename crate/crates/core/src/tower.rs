//! Zariski closure towers, growth groups and the numerical invariants
//! σ-dimension, order and limit degree.

use serde::Serialize;

use crate::ambient::GroupSpec;
use crate::diff::{generation_identity, Prolongation, DEFAULT_CAP_OFFSET};
use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::groebner::MonomialOrder;
use crate::ideal::{krull_dim, vecdim, IdealBasis};
use crate::poly::{Polynomial, VarId};

#[derive(Clone, Debug)]
pub struct TowerLevel {
    pub i: u32,
    /// `I(G[i])` as a level-block Gröbner basis over the shifts `0..=i`.
    pub ideal: IdealBasis,
    /// Prolongation depth at which the lookahead window agreed.
    pub prolongation: u32,
    pub dim: usize,
    /// `k[𝒢_i]`, in the shift-`i` coordinates.
    pub fiber: IdealBasis,
    pub fiber_vecdim: Extended,
    pub identity_holds: bool,
}

#[derive(Clone, Debug)]
pub struct Tower {
    pub spec: GroupSpec,
    pub lookahead: u32,
    /// Prolongation allowance above each level.
    pub budget: u32,
    pub levels: Vec<TowerLevel>,
}

impl Tower {
    pub fn level(&self, i: u32) -> Result<&TowerLevel> {
        self.levels.get(i as usize).ok_or(Error::LevelNotBuilt(i))
    }

    pub fn depth(&self) -> u32 {
        self.levels.len().saturating_sub(1) as u32
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.dim).collect()
    }
}

/// Smallest tower depth accepted by [`build_tower`].
pub fn minimum_depth(spec: &GroupSpec) -> u32 {
    spec.max_order() + 2
}

/// Default depth: enough levels after the generator order for the
/// stabilization window.
pub fn default_depth(spec: &GroupSpec, lookahead: u32) -> u32 {
    (spec.max_order() + lookahead + 1).max(minimum_depth(spec))
}

pub fn build_tower(spec: &GroupSpec, depth: u32, lookahead: u32) -> Result<Tower> {
    build_tower_with_budget(spec, depth, lookahead, DEFAULT_CAP_OFFSET)
}

pub fn build_tower_with_budget(
    spec: &GroupSpec,
    depth: u32,
    lookahead: u32,
    budget: u32,
) -> Result<Tower> {
    let required = minimum_depth(spec);
    if depth < required {
        return Err(Error::LevelTooSmall { n: depth, required });
    }
    let lookahead = lookahead.max(1);
    let mut pro = Prolongation::new(spec);
    let mut levels: Vec<TowerLevel> = Vec::new();
    for i in 0..=depth {
        let (ideal, prolongation) = pro.closure(i, lookahead, i + budget)?;
        let dim = krull_dim(&ideal)?;
        let fiber = fiber_of(spec, &ideal, i);
        let fiber_vecdim = vecdim(&fiber)?;
        let identity_holds = match levels.last() {
            None => true,
            Some(prev) => generation_identity(spec, &prev.ideal, &ideal, i),
        };
        levels.push(TowerLevel {
            i,
            ideal,
            prolongation,
            dim,
            fiber,
            fiber_vecdim,
            identity_holds,
        });
    }
    Ok(Tower {
        spec: spec.clone(),
        lookahead,
        budget,
        levels,
    })
}

/// `I(G[i])` with every coordinate of shift below `i` set to its identity
/// value: the fiber of `G[i] → G[i−1]` over the identity.
fn fiber_of(spec: &GroupSpec, ideal: &IdealBasis, i: u32) -> IdealBasis {
    let amb = &spec.ambient;
    let gens: Vec<Polynomial> = ideal
        .polynomials()
        .iter()
        .map(|g| {
            g.substitute(|v| {
                (v.shift < i).then(|| Polynomial::constant(amb.identity_value(v.coord)))
            })
        })
        .collect();
    IdealBasis::computed(amb.vars_at(i), gens, MonomialOrder::LevelBlocks)
}

pub fn kernel_fiber(tower: &Tower, i: u32) -> Result<IdealBasis> {
    Ok(tower.level(i)?.fiber.clone())
}

/// Whether `upper` (at shift `i`) is the index shift of `lower` (at `i − 1`).
fn is_shifted_copy(lower: &IdealBasis, upper: &IdealBasis) -> bool {
    let moved: Vec<Polynomial> = lower
        .polynomials()
        .iter()
        .map(|g| g.map_vars(|v| v.shifted(1)))
        .collect();
    moved.as_slice() == upper.polynomials()
}

/// Smallest `m` after which the generation identity holds and consecutive
/// kernel fibers are shifted copies, with at least `lookahead` built levels
/// beyond `m` as evidence.
pub fn stabilization_level(tower: &Tower) -> Result<u32> {
    let depth = tower.depth();
    let mut m = depth;
    while m > 0 {
        let l = &tower.levels[m as usize];
        let prev = &tower.levels[m as usize - 1];
        if l.identity_holds && is_shifted_copy(&prev.fiber, &l.fiber) {
            m -= 1;
        } else {
            break;
        }
    }
    if m + tower.lookahead > depth {
        return Err(Error::NotStabilized { levels: depth + 1 });
    }
    Ok(m)
}

/// Growth group `𝒢_m`, renamed to shift-0 coordinates.
pub fn growth_group(tower: &Tower) -> Result<IdealBasis> {
    let m = stabilization_level(tower)?;
    let fiber = &tower.levels[m as usize].fiber;
    Ok(fiber.rename(
        |v| VarId {
            shift: v.shift - m,
            ..v
        },
        MonomialOrder::Grevlex,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantsReport {
    pub m: u32,
    pub sigma_dim: u64,
    pub order: Extended,
    pub limit_degree: Extended,
    pub verified: bool,
    /// `(i, dim G[i])` on the fitted window.
    pub window: Vec<(u32, u64)>,
}

/// The longest suffix of `dims` with constant first differences.
fn fitted_window(dims: &[usize]) -> usize {
    let n = dims.len();
    if n < 2 {
        return 0;
    }
    let step = dims[n - 1] as i64 - dims[n - 2] as i64;
    let mut start = n - 2;
    while start > 0 && dims[start] as i64 - dims[start - 1] as i64 == step {
        start -= 1;
    }
    start
}

pub fn invariants(tower: &Tower) -> Result<InvariantsReport> {
    let m = stabilization_level(tower)?;
    let dims = tower.dims();
    let start = fitted_window(&dims);
    let n = dims.len();
    let d = if n >= 2 {
        dims[n - 1] as i64 - dims[n - 2] as i64
    } else {
        0
    };
    let window: Vec<(u32, u64)> = (start..n).map(|i| (i as u32, dims[i] as u64)).collect();
    let last = n - 1;
    let e = dims[last] as i64 - d * (last as i64 + 1);
    let growth = growth_group(tower)?;
    let growth_dim = krull_dim(&growth)? as i64;
    let fiber_ld = tower.levels[m as usize].fiber_vecdim;
    let verified = d >= 0 && e >= 0 && window.len() as u32 > tower.lookahead && growth_dim == d;
    let (order, limit_degree) = if d == 0 {
        (Extended::Finite(e.max(0) as u64), fiber_ld)
    } else {
        (Extended::Infinite, Extended::Infinite)
    };
    Ok(InvariantsReport {
        m,
        sigma_dim: d.max(0) as u64,
        order,
        limit_degree,
        verified,
        window,
    })
}

/// Builds a tower of default depth and extracts the invariants.
pub fn compute_invariants(spec: &GroupSpec, lookahead: u32) -> Result<(Tower, InvariantsReport)> {
    let tower = build_tower(spec, default_depth(spec, lookahead), lookahead)?;
    let report = invariants(&tower)?;
    Ok((tower, report))
}
