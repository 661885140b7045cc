//! The difference layer: the shift σ, truncated prolongations of σ-ideals,
//! Zariski closure ideals and bounded ideal closures.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::ambient::GroupSpec;
use crate::error::{Error, Result};
use crate::groebner::MonomialOrder;
use crate::ideal::{eliminate, IdealBasis};
use crate::poly::{Monomial, Polynomial, VarId};
use crate::univariate::{squarefree_part, Univariate};

pub const DEFAULT_LOOKAHEAD: u32 = 2;
/// Prolongation cap above the requested level.
pub const DEFAULT_CAP_OFFSET: u32 = 8;

/// σ^t: every shift index increased by `t`.
pub fn shift(p: &Polynomial, t: u32) -> Polynomial {
    if t == 0 {
        return p.clone();
    }
    p.map_vars(|v| v.shifted(t))
}

/// σ^{-t}, defined when every variable has shift at least `t`.
pub fn shift_down(p: &Polynomial, t: u32) -> Option<Polynomial> {
    if p.min_shift().is_some_and(|s| s < t) {
        return None;
    }
    Some(p.map_vars(|v| VarId {
        shift: v.shift - t,
        ..v
    }))
}

/// The truncations `⟨σ^t f : t + ord f ≤ N⟩ + relations` of a σ-ideal,
/// built incrementally in `N` under [`MonomialOrder::LevelBlocks`], so that
/// every contraction to the variables of shift at most `i` is a filter.
#[derive(Clone, Debug)]
pub struct Prolongation {
    spec: GroupSpec,
    full: Vec<IdealBasis>,
}

impl Prolongation {
    pub fn new(spec: &GroupSpec) -> Self {
        Prolongation {
            spec: spec.clone(),
            full: Vec::new(),
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    fn new_at(&self, n: u32) -> Vec<Polynomial> {
        let mut out: Vec<Polynomial> = self
            .spec
            .generators
            .iter()
            .filter_map(|f| {
                let ord = f.max_shift().unwrap_or(0);
                (ord <= n).then(|| shift(f, n - ord))
            })
            .collect();
        out.extend(self.spec.ambient.relations_at(n));
        out
    }

    /// The whole truncation at `N`, all levels up to `N`.
    pub fn full(&mut self, n: u32) -> &IdealBasis {
        while self.full.len() <= n as usize {
            let k = self.full.len() as u32;
            let vars = self.spec.ambient.vars_at(k);
            let gens = self.new_at(k);
            let next = match self.full.last() {
                None => IdealBasis::computed(vars, gens, MonomialOrder::LevelBlocks),
                Some(prev) => prev.extend(gens, vars),
            };
            self.full.push(next);
        }
        &self.full[n as usize]
    }

    /// `E_i^N`: the truncation at `N` contracted to shifts at most `i`.
    pub fn truncated(&mut self, i: u32, n: u32) -> Result<IdealBasis> {
        if n < i {
            return Err(Error::LevelTooSmall { n, required: i });
        }
        self.full(n).restrict(|v| v.shift <= i)
    }

    /// `E_i^N` for increasing `N` until it agrees with `E_i^{N+lookahead}`.
    pub fn closure(&mut self, i: u32, lookahead: u32, cap: u32) -> Result<(IdealBasis, u32)> {
        let lookahead = lookahead.max(1);
        let mut n = i;
        loop {
            if n + lookahead > cap {
                return Err(Error::BudgetExceeded(format!(
                    "closure at level {i} did not stabilize with prolongation up to {cap}"
                )));
            }
            let a = self.truncated(i, n)?;
            let b = self.truncated(i, n + lookahead)?;
            if a.groebner_basis() == b.groebner_basis() {
                return Ok((b, n));
            }
            n += 1;
        }
    }
}

/// `E_i^N` for one spec; see [`Prolongation`].
pub fn prolongation_ideal(spec: &GroupSpec, i: u32, n: u32) -> Result<IdealBasis> {
    Prolongation::new(spec).truncated(i, n)
}

/// Whether `upper = ⟨lower, σ(lower)⟩ + relations` at `level`, both given as
/// level-block Gröbner bases.
pub fn generation_identity(
    spec: &GroupSpec,
    lower: &IdealBasis,
    upper: &IdealBasis,
    level: u32,
) -> bool {
    if level == 0 {
        return true;
    }
    let mut gens: Vec<Polynomial> = lower.polynomials().to_vec();
    gens.extend(lower.polynomials().iter().map(|g| shift(g, 1)));
    gens.extend(spec.ambient.relations_upto(level));
    let candidate = IdealBasis::computed(
        spec.ambient.vars_upto(level),
        gens,
        MonomialOrder::LevelBlocks,
    );
    candidate.groebner_basis() == upper.groebner_basis()
}

#[derive(Clone, Debug)]
pub struct ClosureIdeal {
    pub ideal: IdealBasis,
    /// Smallest `N` with `E_i^N = E_i^{N+lookahead}`.
    pub prolongation: u32,
    pub verified: bool,
}

/// Stabilized closure ideal `I(G[i])` with its verification flag.
///
/// The flag requires the lookahead window to agree and the identity
/// `I(G[i]) = ⟨I(G[i−1]), σ I(G[i−1])⟩` to hold, except at levels up to the
/// largest generator order, where generators enter the tower directly.
pub fn closure_ideal(spec: &GroupSpec, i: u32, lookahead: u32) -> Result<ClosureIdeal> {
    closure_ideal_with_cap(spec, i, lookahead, i + DEFAULT_CAP_OFFSET)
}

pub fn closure_ideal_with_cap(
    spec: &GroupSpec,
    i: u32,
    lookahead: u32,
    cap: u32,
) -> Result<ClosureIdeal> {
    let mut pro = Prolongation::new(spec);
    let (ideal, n) = pro.closure(i, lookahead, cap)?;
    let verified = i <= spec.max_order() || {
        let (lower, _) = pro.closure(i - 1, lookahead, cap)?;
        generation_identity(spec, &lower, &ideal, i)
    };
    Ok(ClosureIdeal {
        ideal,
        prolongation: n,
        verified,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureKind {
    Reflexive,
    WellMixed,
    Perfect,
}

#[derive(Clone, Debug)]
pub struct ClosureResult {
    pub generators: Vec<Polynomial>,
    pub kind: ClosureKind,
    pub bound: u32,
    pub closed_flag: bool,
}

/// All shifts of `p` staying within `bound`.
fn shifts_within(p: &Polynomial, bound: u32) -> Vec<Polynomial> {
    let top = p.max_shift().unwrap_or(0);
    (0..=bound.saturating_sub(top))
        .map(|t| shift(p, t))
        .collect()
}

fn truncation(spec: &GroupSpec, gens: &[Polynomial], bound: u32) -> IdealBasis {
    let mut all: Vec<Polynomial> = gens.iter().flat_map(|g| shifts_within(g, bound)).collect();
    all.extend(spec.ambient.relations_upto(bound));
    IdealBasis::computed(
        spec.ambient.vars_upto(bound),
        all,
        MonomialOrder::LevelBlocks,
    )
}

/// Reflexive closure at `bound`, iterating σ^{-1} until nothing new appears.
fn reflexive_ideal(spec: &GroupSpec, ideal: IdealBasis, bound: u32) -> (IdealBasis, bool) {
    let mut ideal = ideal;
    let upper: BTreeSet<VarId> = ideal
        .universe()
        .iter()
        .copied()
        .filter(|v| v.shift >= 1)
        .collect();
    // Each pass can only lower the level of a consequence by one.
    for _ in 0..=bound + 1 {
        if ideal.is_unit().unwrap_or(false) {
            return (ideal, true);
        }
        let high = eliminate(&ideal, &upper);
        let fresh: Vec<Polynomial> = high
            .polynomials()
            .iter()
            .filter_map(|g| shift_down(g, 1))
            .filter(|g| !ideal.contains(g).expect("basis computed"))
            .collect();
        if fresh.is_empty() {
            return (ideal, true);
        }
        let more: Vec<Polynomial> = fresh.iter().flat_map(|g| shifts_within(g, bound)).collect();
        ideal = ideal.extend(more, spec.ambient.vars_upto(bound));
    }
    (ideal, false)
}

pub fn reflexive_closure(spec: &GroupSpec, bound: u32) -> Result<ClosureResult> {
    let bound = bound.max(spec.max_order());
    let (ideal, closed) = reflexive_ideal(spec, truncation(spec, &spec.generators, bound), bound);
    Ok(ClosureResult {
        generators: ideal.polynomials().to_vec(),
        kind: ClosureKind::Reflexive,
        bound,
        closed_flag: closed,
    })
}

/// Splits `b = f·g` along a variable dividing every term.
fn monomial_splits(b: &Polynomial) -> Vec<(Polynomial, Polynomial)> {
    let mut common: Option<Monomial> = None;
    for (m, _) in b.terms() {
        common = Some(match common {
            None => m.clone(),
            Some(c) => {
                Monomial::from_pairs(c.pairs().iter().map(|&(v, e)| (v, e.min(m.exponent(v)))))
            }
        });
    }
    let Some(common) = common else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for v in common.vars() {
        let f = Polynomial::var(v);
        let g = Polynomial::from_terms(b.terms().map(|(m, c)| {
            (
                Monomial::var(v).divide_into(m).expect("common factor"),
                c.clone(),
            )
        }));
        if !g.is_constant() {
            out.push((f, g));
        }
    }
    out
}

/// Pure products of shifts of one coordinate: `∏ σ^{α_k}(c) ∈ 𝔞` forces `c`.
fn perfect_witness(b: &Polynomial) -> Option<Polynomial> {
    if b.len() != 1 {
        return None;
    }
    let (m, _) = b.terms().next()?;
    let mut coords = m.vars().map(|v| (v.space, v.coord));
    let first = coords.next()?;
    if coords.all(|c| c == first) {
        Some(Polynomial::var(VarId {
            space: first.0,
            shift: 0,
            coord: first.1,
        }))
    } else {
        None
    }
}

fn enrichment_step(
    gens: &[Polynomial],
    spec: &GroupSpec,
    bound: u32,
    kind: ClosureKind,
) -> Result<ClosureResult> {
    let bound = bound.max(spec.max_order());
    let (ideal, reflexive_closed) = reflexive_ideal(spec, truncation(spec, gens, bound), bound);
    if ideal.is_unit()? {
        return Ok(ClosureResult {
            generators: vec![Polynomial::one()],
            kind,
            bound,
            closed_flag: true,
        });
    }
    let mut candidates: Vec<Polynomial> = Vec::new();
    for b in ideal.polynomials() {
        for (f, g) in monomial_splits(b) {
            candidates.push(&f * &shift(&g, 1));
            candidates.push(&g * &shift(&f, 1));
        }
        if kind == ClosureKind::Perfect {
            candidates.extend(perfect_witness(b));
        }
    }
    for v in ideal.universe().iter().copied() {
        let keep: BTreeSet<VarId> = [v].into_iter().collect();
        let el = eliminate(&ideal, &keep);
        if let Some(p) = el.polynomials().first() {
            let u = Univariate::from_polynomial(p, v).expect("univariate eliminant");
            let sf = squarefree_part(&u);
            if sf.degree() < u.degree() {
                candidates.push(sf.to_polynomial(v));
            }
        }
    }
    let fresh: Vec<Polynomial> = candidates
        .into_iter()
        .filter(|c| c.max_shift().unwrap_or(0) <= bound)
        .filter(|c| !ideal.contains(c).expect("basis computed"))
        .collect();
    let nothing_new = fresh.is_empty();
    let result = if nothing_new {
        ideal
    } else {
        let more: Vec<Polynomial> = fresh.iter().flat_map(|g| shifts_within(g, bound)).collect();
        ideal.extend(more, [])
    };
    // A reflexive ideal with linear generators is prime, hence closed under
    // every one of these operations.
    let linear = result.polynomials().iter().all(|g| g.total_degree() <= 1);
    Ok(ClosureResult {
        generators: result.polynomials().to_vec(),
        kind,
        bound,
        closed_flag: nothing_new && reflexive_closed && linear,
    })
}

/// One bounded pass towards the radical mixed closure.
pub fn well_mixed_closure_step(
    gens: &[Polynomial],
    spec: &GroupSpec,
    bound: u32,
) -> Result<ClosureResult> {
    enrichment_step(gens, spec, bound, ClosureKind::WellMixed)
}

/// One bounded pass towards the perfect closure.
pub fn perfect_closure_step(
    gens: &[Polynomial],
    spec: &GroupSpec,
    bound: u32,
) -> Result<ClosureResult> {
    enrichment_step(gens, spec, bound, ClosureKind::Perfect)
}
