//! Components and σ-components of finite level algebras, found through
//! their primitive idempotents.

use num_traits::Zero;
use serde::Serialize;

use crate::ambient::GroupSpec;
use crate::diff::{shift, Prolongation, DEFAULT_CAP_OFFSET, DEFAULT_LOOKAHEAD};
use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::hopf::counit;
use crate::ideal::{vecdim, IdealBasis};
use crate::linalg::{nullspace, Coordinates};
use crate::poly::{Polynomial, Rational, VarId};
use crate::univariate::{crt_idempotents, factor, Univariate, DEFAULT_FACTOR_DEGREE_CAP};

/// Minimal monic `p` with `p(ℓ)·e ≡ 0`: the minimal polynomial of
/// multiplication by `ℓ` on `e·A`.
fn minimal_polynomial(ideal: &IdealBasis, l: &Polynomial, e: &Polynomial) -> Result<Univariate> {
    let mut powers = vec![ideal.normal_form(e)?];
    loop {
        let next = ideal.normal_form(&(l * powers.last().expect("nonempty")))?;
        powers.push(next);
        let coords = Coordinates::new(&powers);
        let columns: Vec<Vec<Rational>> = powers
            .iter()
            .map(|p| coords.vector(p).expect("indexed"))
            .collect();
        let rows: Vec<Vec<Rational>> = (0..coords.len())
            .map(|r| columns.iter().map(|c| c[r].clone()).collect())
            .collect();
        let ns = nullspace(rows, powers.len());
        if let Some(v) = ns.into_iter().next() {
            // The only kernel vector has a 1 in the last (free) slot.
            return Ok(Univariate::new(v).monic());
        }
    }
}

/// Splitting elements to try: the coordinates, then a few fixed linear
/// combinations of them.
fn probes(ideal: &IdealBasis) -> Vec<Polynomial> {
    let vars: Vec<VarId> = ideal.universe().iter().copied().collect();
    let mut out: Vec<Polynomial> = vars.iter().map(|&v| Polynomial::var(v)).collect();
    if vars.len() > 1 {
        for j in 1..=3i64 {
            let mut l = Polynomial::zero();
            for (k, &v) in vars.iter().enumerate() {
                l += &Polynomial::var(v)
                    .scale(&Rational::from_integer((k as i64 + 1).pow(j as u32).into()));
            }
            out.push(l);
        }
    }
    out
}

fn split(
    ideal: &IdealBasis,
    e: Polynomial,
    probes: &[Polynomial],
    cap: usize,
    out: &mut Vec<Polynomial>,
) -> Result<()> {
    for l in probes {
        let mp = minimal_polynomial(ideal, l, &e)?;
        let factors = factor(&mp, cap)?;
        if factors.len() < 2 {
            continue;
        }
        let parts: Vec<Univariate> = factors.iter().map(|(f, m)| f.pow(*m)).collect();
        for eps in crt_idempotents(&parts) {
            let piece = eps.eval_poly(l, |p| ideal.normal_form(&p).expect("basis present"));
            let next = ideal.normal_form(&(&piece * &e))?;
            split(ideal, next, probes, cap, out)?;
        }
        return Ok(());
    }
    out.push(e);
    Ok(())
}

/// Primitive idempotents of `A = k[x]/I` for finite-dimensional `A`.
pub fn idempotents(ideal: &IdealBasis) -> Result<Vec<Polynomial>> {
    idempotents_with_cap(ideal, DEFAULT_FACTOR_DEGREE_CAP)
}

pub fn idempotents_with_cap(ideal: &IdealBasis, cap: usize) -> Result<Vec<Polynomial>> {
    if !ideal.is_zero_dimensional()? {
        return Err(Error::Unsupported(
            "level algebra is not finite-dimensional".into(),
        ));
    }
    if ideal.is_unit()? {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    split(ideal, Polynomial::one(), &probes(ideal), cap, &mut out)?;
    out.sort_by_key(|e| e.to_string());
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Component {
    pub idempotent: String,
    pub generators: Vec<String>,
    pub vecdim: Extended,
}

#[derive(Clone, Debug)]
pub struct ComponentReport {
    pub level: u32,
    pub ideal: IdealBasis,
    pub algebra_vecdim: Extended,
    pub idempotents: Vec<Polynomial>,
    /// `I + ⟨1 − e⟩` for each primitive idempotent `e`.
    pub components: Vec<IdealBasis>,
    pub identity_component: IdealBasis,
}

impl ComponentReport {
    pub fn summary(&self) -> Result<Vec<Component>> {
        self.idempotents
            .iter()
            .zip(&self.components)
            .map(|(e, c)| {
                Ok(Component {
                    idempotent: e.to_string(),
                    generators: c.polynomials().iter().map(|g| g.to_string()).collect(),
                    vecdim: vecdim(c)?,
                })
            })
            .collect()
    }
}

fn level_ideal(spec: &GroupSpec, level: u32) -> Result<IdealBasis> {
    let (ideal, _) =
        Prolongation::new(spec).closure(level, DEFAULT_LOOKAHEAD, level + DEFAULT_CAP_OFFSET)?;
    Ok(ideal)
}

pub fn components_at_level(spec: &GroupSpec, level: u32) -> Result<ComponentReport> {
    let ideal = level_ideal(spec, level)?;
    let algebra_vecdim = vecdim(&ideal)?;
    if !algebra_vecdim.is_finite() {
        return Err(Error::Unsupported(format!(
            "level {level} algebra is positive-dimensional"
        )));
    }
    let idempotents = idempotents(&ideal)?;
    let components = idempotents
        .iter()
        .map(|e| ideal.extend(vec![&Polynomial::one() - e], []))
        .collect();
    let mut gens: Vec<Polynomial> = idempotents
        .iter()
        .filter(|e| counit(e, &spec.ambient).is_zero())
        .cloned()
        .collect();
    gens.retain(|g| !g.is_zero());
    let identity_component = ideal.extend(gens, []);
    Ok(ComponentReport {
        level,
        ideal,
        algebra_vecdim,
        idempotents,
        components,
        identity_component,
    })
}

/// Ideal of the identity component at `level`.
pub fn identity_component(spec: &GroupSpec, level: u32) -> Result<IdealBasis> {
    Ok(components_at_level(spec, level)?.identity_component)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaComponents {
    pub count: usize,
    /// Levels `(L, L+1)` of the counting window.
    pub window: (u32, u32),
    /// Count over `(L+1, L+2)` when that level was computable.
    pub next_count: Option<usize>,
    pub stable: bool,
}

/// Level-`lower` components with a component over them at `lower + 1`
/// whose ideal contains the shift of `1 − e`.
fn stable_count(lower: &ComponentReport, upper: &ComponentReport) -> Result<usize> {
    let mut count = 0;
    for e in &lower.idempotents {
        let moved = shift(&(&Polynomial::one() - e), 1);
        let mut found = false;
        for (d, comp) in upper.idempotents.iter().zip(&upper.components) {
            let over = upper.ideal.normal_form(&(&(e * d) - d))?.is_zero();
            if over && comp.contains(&moved)? {
                found = true;
                break;
            }
        }
        if found {
            count += 1;
        }
    }
    Ok(count)
}

pub fn sigma_components(spec: &GroupSpec, level: u32) -> Result<SigmaComponents> {
    let a = components_at_level(spec, level)?;
    let b = components_at_level(spec, level + 1)?;
    let count = stable_count(&a, &b)?;
    let next_count = match components_at_level(spec, level + 2) {
        Ok(c) => Some(stable_count(&b, &c)?),
        Err(Error::BudgetExceeded(_)) | Err(Error::FactorDegreeExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(SigmaComponents {
        count,
        window: (level, level + 1),
        next_count,
        stable: next_count == Some(count),
    })
}

/// Checks `e² = e`, `e_i e_j = 0` and `Σ e = 1` modulo `ideal`.
pub fn idempotents_complete(ideal: &IdealBasis, es: &[Polynomial]) -> Result<bool> {
    let mut sum = Polynomial::zero();
    for (i, a) in es.iter().enumerate() {
        if !ideal.contains(&(&(a * a) - a))? {
            return Ok(false);
        }
        for b in &es[i + 1..] {
            if !ideal.contains(&(a * b))? {
                return Ok(false);
            }
        }
        sum += a;
    }
    ideal.contains(&(&sum - &Polynomial::one()))
}
