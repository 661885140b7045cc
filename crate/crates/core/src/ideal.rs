//! Ideals of polynomial rings over ℚ presented by generators, with cached
//! reduced Gröbner bases.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::groebner::{self, MonomialOrder, Poly, Reducer, Ring};
use crate::poly::{Monomial, Polynomial, VarId};

#[derive(Debug)]
struct Basis {
    ring: Ring,
    polys: Vec<Poly>,
    public: Vec<Polynomial>,
}

/// An ideal in the polynomial ring over a finite variable universe.
#[derive(Clone, Debug)]
pub struct IdealBasis {
    universe: BTreeSet<VarId>,
    order: MonomialOrder,
    generators: Vec<Polynomial>,
    gb: Option<Arc<Basis>>,
}

fn collect_universe<'a>(
    universe: impl IntoIterator<Item = VarId>,
    gens: impl IntoIterator<Item = &'a Polynomial>,
) -> BTreeSet<VarId> {
    let mut u: BTreeSet<VarId> = universe.into_iter().collect();
    for g in gens {
        u.extend(g.vars());
    }
    u
}

impl IdealBasis {
    /// An ideal without a computed Gröbner basis. The universe is widened by
    /// every variable occurring in `generators`.
    pub fn new(
        universe: impl IntoIterator<Item = VarId>,
        generators: Vec<Polynomial>,
        order: MonomialOrder,
    ) -> Self {
        let generators: Vec<Polynomial> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        let universe = collect_universe(universe, &generators);
        IdealBasis {
            universe,
            order,
            generators,
            gb: None,
        }
    }

    /// Like [`IdealBasis::new`] followed by [`IdealBasis::groebner`].
    pub fn computed(
        universe: impl IntoIterator<Item = VarId>,
        generators: Vec<Polynomial>,
        order: MonomialOrder,
    ) -> Self {
        IdealBasis::new(universe, generators, order).groebner()
    }

    /// Computes the reduced Gröbner basis if not yet present.
    pub fn groebner(self) -> Self {
        if self.gb.is_some() {
            return self;
        }
        let ring = Ring::new(&self.universe, &self.order);
        let input: Vec<Poly> = self
            .generators
            .iter()
            .map(|g| ring.to_internal(g).expect("universe covers generators"))
            .collect();
        let polys = groebner::groebner(&ring, Vec::new(), input);
        self.with_basis(ring, polys)
    }

    /// Wraps polynomials already known to form a reduced Gröbner basis under
    /// `order` (for instance a union of reduced bases in disjoint variables).
    pub(crate) fn from_reduced_unchecked(
        universe: impl IntoIterator<Item = VarId>,
        polys: Vec<Polynomial>,
        order: MonomialOrder,
    ) -> Self {
        let universe = collect_universe(universe, &polys);
        let ring = Ring::new(&universe, &order);
        let mut internal: Vec<Poly> = polys
            .iter()
            .map(|g| ring.to_internal(g).expect("universe covers basis"))
            .collect();
        internal.retain(|p| !p.is_empty());
        internal.sort_by(|a, b| ring.cmp(&a[0].e, &b[0].e));
        let out = IdealBasis {
            universe,
            order,
            generators: polys,
            gb: None,
        };
        out.with_basis(ring, internal)
    }

    fn with_basis(mut self, ring: Ring, polys: Vec<Poly>) -> Self {
        let public = polys.iter().map(|p| ring.to_public(p)).collect();
        self.gb = Some(Arc::new(Basis {
            ring,
            polys,
            public,
        }));
        self
    }

    /// Adds generators (and universe variables), reusing the current Gröbner
    /// basis as a seed when present. The order restricted to the old universe
    /// must be unchanged, which holds for every [`MonomialOrder`] kind.
    pub fn extend(
        &self,
        more: Vec<Polynomial>,
        vars: impl IntoIterator<Item = VarId>,
    ) -> IdealBasis {
        let more: Vec<Polynomial> = more.into_iter().filter(|g| !g.is_zero()).collect();
        let universe = collect_universe(self.universe.iter().copied().chain(vars), &more);
        let mut generators = self.generators.clone();
        generators.extend(more.iter().cloned());
        let out = IdealBasis {
            universe,
            order: self.order.clone(),
            generators,
            gb: None,
        };
        let Some(old) = &self.gb else {
            return out.groebner();
        };
        let ring = Ring::new(&out.universe, &out.order);
        let seed: Vec<Poly> = old
            .public
            .iter()
            .map(|g| ring.to_internal(g).expect("universe grows"))
            .collect();
        let input: Vec<Poly> = more
            .iter()
            .map(|g| ring.to_internal(g).expect("universe covers generators"))
            .collect();
        let polys = groebner::groebner(&ring, seed, input);
        out.with_basis(ring, polys)
    }

    pub fn universe(&self) -> &BTreeSet<VarId> {
        &self.universe
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_groebner(&self) -> bool {
        self.gb.is_some()
    }

    /// The reduced Gröbner basis, ascending by leading monomial.
    pub fn groebner_basis(&self) -> Option<&[Polynomial]> {
        self.gb.as_ref().map(|b| b.public.as_slice())
    }

    fn basis(&self) -> Result<&Basis> {
        self.gb.as_deref().ok_or(Error::NotGroebner)
    }

    /// The Gröbner basis if computed, else the generators.
    pub fn polynomials(&self) -> &[Polynomial] {
        self.groebner_basis().unwrap_or(&self.generators)
    }

    pub fn is_unit(&self) -> Result<bool> {
        let b = self.basis()?;
        Ok(b.public.len() == 1 && b.public[0].is_constant())
    }

    pub fn is_zero_ideal(&self) -> Result<bool> {
        Ok(self.basis()?.public.is_empty())
    }

    /// Leading monomials of the Gröbner basis.
    pub fn leading_monomials(&self) -> Result<Vec<Monomial>> {
        let b = self.basis()?;
        Ok(b.polys
            .iter()
            .map(|p| b.ring.exp_to_monomial(&p[0].e))
            .collect())
    }

    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        let b = self.basis()?;
        let internal = b.ring.to_internal(p).map_err(Error::ForeignVariable)?;
        let reduced = Reducer::new(&b.ring, &b.polys).reduce(internal);
        Ok(b.ring.to_public(&reduced))
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    pub fn contains_all<'a>(&self, ps: impl IntoIterator<Item = &'a Polynomial>) -> Result<bool> {
        for p in ps {
            if !self.contains(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Keeps the Gröbner basis elements whose variables all satisfy `keep`.
    ///
    /// This is the contraction to the kept subring only when the order
    /// eliminates the dropped variables (every monomial involving one of them
    /// exceeds every monomial free of them); callers guarantee that.
    pub fn restrict(&self, keep: impl Fn(VarId) -> bool) -> Result<IdealBasis> {
        let b = self.basis()?;
        let universe: BTreeSet<VarId> =
            self.universe.iter().copied().filter(|&v| keep(v)).collect();
        let kept: Vec<Polynomial> = b
            .public
            .iter()
            .filter(|g| g.vars().into_iter().all(&keep))
            .cloned()
            .collect();
        let order = match &self.order {
            MonomialOrder::Elimination(set) => {
                let rest: BTreeSet<VarId> = set.intersection(&universe).copied().collect();
                if rest.is_empty() {
                    MonomialOrder::Grevlex
                } else {
                    MonomialOrder::Elimination(rest)
                }
            }
            o => o.clone(),
        };
        let ring = Ring::new(&universe, &order);
        let polys: Vec<Poly> = kept
            .iter()
            .map(|g| ring.to_internal(g).expect("kept variables"))
            .collect();
        let out = IdealBasis {
            universe,
            order,
            generators: kept,
            gb: None,
        };
        Ok(out.with_basis(ring, polys))
    }

    /// Renames variables by an injective map and recomputes the basis under
    /// `order`.
    pub fn rename(&self, f: impl Fn(VarId) -> VarId, order: MonomialOrder) -> IdealBasis {
        let universe: BTreeSet<VarId> = self.universe.iter().map(|&v| f(v)).collect();
        let gens = self.polynomials().iter().map(|g| g.map_vars(&f)).collect();
        IdealBasis::computed(universe, gens, order)
    }

    /// The same ideal presented under another order (and possibly a larger
    /// universe).
    pub fn reorder(&self, order: MonomialOrder) -> IdealBasis {
        if self.gb.is_some() && self.order == order {
            return self.clone();
        }
        IdealBasis::computed(
            self.universe.iter().copied(),
            self.polynomials().to_vec(),
            order,
        )
    }

    /// Standard monomials of total degree at most `max_degree`, ascending in
    /// the basis order. Fails with `BudgetExceeded` beyond `limit` monomials.
    pub fn standard_monomials(
        &self,
        max_degree: Option<u32>,
        limit: usize,
    ) -> Result<Vec<Monomial>> {
        let b = self.basis()?;
        let lts: Vec<&[u16]> = b.polys.iter().map(|p| &*p[0].e).collect();
        if lts.iter().any(|e| e.iter().all(|&x| x == 0)) {
            return Ok(Vec::new());
        }
        let n = b.ring.nvars();
        let divisible = |e: &[u16]| lts.iter().any(|lt| lt.iter().zip(e).all(|(a, b)| a <= b));
        let start: Box<[u16]> = vec![0u16; n].into_boxed_slice();
        let mut seen: HashSet<Box<[u16]>> = HashSet::new();
        seen.insert(start.clone());
        let mut frontier = vec![start];
        while let Some(e) = frontier.pop() {
            let deg: u32 = e.iter().map(|&x| u32::from(x)).sum();
            if max_degree.is_some_and(|d| deg >= d) {
                continue;
            }
            for k in 0..n {
                let mut f = e.clone();
                f[k] += 1;
                if !divisible(&f) && !seen.contains(&f) {
                    if seen.len() >= limit {
                        return Err(Error::BudgetExceeded(format!(
                            "more than {limit} standard monomials"
                        )));
                    }
                    seen.insert(f.clone());
                    frontier.push(f);
                }
            }
        }
        let mut all: Vec<Box<[u16]>> = seen.into_iter().collect();
        all.sort_by(|a, c| b.ring.cmp(a, c));
        Ok(all.iter().map(|e| b.ring.exp_to_monomial(e)).collect())
    }

    /// Whether every variable has a pure power among the leading monomials.
    pub fn is_zero_dimensional(&self) -> Result<bool> {
        let b = self.basis()?;
        if self.is_unit()? {
            return Ok(true);
        }
        let mut covered = vec![false; b.ring.nvars()];
        for p in &b.polys {
            let e = &p[0].e;
            let support: Vec<usize> = (0..e.len()).filter(|&k| e[k] > 0).collect();
            if support.len() == 1 {
                covered[support[0]] = true;
            }
        }
        Ok(covered.iter().all(|&c| c))
    }
}

/// Reduced Gröbner basis of `gens`; the universe is the set of occurring
/// variables.
pub fn groebner(gens: Vec<Polynomial>, order: MonomialOrder) -> IdealBasis {
    IdealBasis::computed([], gens, order)
}

pub fn normal_form(p: &Polynomial, basis: &IdealBasis) -> Result<Polynomial> {
    basis.normal_form(p)
}

/// Contraction of `ideal` to the subring in `keep`, by a two-block
/// elimination order. The result is a reduced Gröbner basis for grevlex on
/// the kept variables.
pub fn eliminate(ideal: &IdealBasis, keep: &BTreeSet<VarId>) -> IdealBasis {
    let drop: BTreeSet<VarId> = ideal.universe.difference(keep).copied().collect();
    let universe = ideal.universe.iter().copied().chain(keep.iter().copied());
    let full = IdealBasis::computed(
        universe,
        ideal.polynomials().to_vec(),
        MonomialOrder::Elimination(drop),
    );
    full.restrict(|v| keep.contains(&v))
        .expect("basis computed")
}

fn min_hitting_set(sets: &[Vec<usize>], chosen: &mut Vec<bool>, depth: usize, best: &mut usize) {
    if depth >= *best {
        return;
    }
    let unhit = sets
        .iter()
        .filter(|s| !s.iter().any(|&v| chosen[v]))
        .min_by_key(|s| s.len());
    let Some(set) = unhit else {
        *best = depth;
        return;
    };
    if depth + 1 >= *best {
        return;
    }
    for &v in set {
        chosen[v] = true;
        min_hitting_set(sets, chosen, depth + 1, best);
        chosen[v] = false;
    }
}

/// Krull dimension: the largest set of variables containing no leading
/// monomial's support, i.e. the universe size minus a minimum hitting set.
pub fn krull_dim(ideal: &IdealBasis) -> Result<usize> {
    let ideal = ideal.clone().groebner();
    if ideal.is_unit()? {
        return Err(Error::UnitIdeal);
    }
    let b = ideal.basis()?;
    let n = b.ring.nvars();
    let mut supports: Vec<Vec<usize>> = b
        .polys
        .iter()
        .map(|p| (0..n).filter(|&k| p[0].e[k] > 0).collect())
        .collect();
    supports.sort_by_key(|s| s.len());
    let mut minimal: Vec<Vec<usize>> = Vec::new();
    for s in supports {
        if !minimal.iter().any(|m| m.iter().all(|v| s.contains(v))) {
            minimal.push(s);
        }
    }
    let mut chosen = vec![false; n];
    let mut best = n + 1;
    min_hitting_set(&minimal, &mut chosen, 0, &mut best);
    Ok(n - best.min(n))
}

/// Number of standard monomials; `Finite(0)` for the unit ideal.
pub fn vecdim(ideal: &IdealBasis) -> Result<Extended> {
    vecdim_with_limit(ideal, 1 << 20)
}

pub fn vecdim_with_limit(ideal: &IdealBasis, limit: usize) -> Result<Extended> {
    if !ideal.is_groebner() {
        return Err(Error::NotGroebner);
    }
    if ideal.is_unit()? {
        return Ok(Extended::Finite(0));
    }
    if !ideal.is_zero_dimensional()? {
        return Ok(Extended::Infinite);
    }
    Ok(Extended::Finite(
        ideal.standard_monomials(None, limit)?.len() as u64,
    ))
}

/// Equality of ideals, comparing reduced Gröbner bases under `a`'s order
/// over the union of both universes.
pub fn ideal_equal(a: &IdealBasis, b: &IdealBasis) -> bool {
    let universe: BTreeSet<VarId> = a.universe.union(&b.universe).copied().collect();
    let ga = IdealBasis::computed(universe.clone(), a.polynomials().to_vec(), a.order.clone());
    let gb = IdealBasis::computed(universe, b.polynomials().to_vec(), a.order.clone());
    ga.groebner_basis() == gb.groebner_basis()
}

/// `a ⊆ b` as ideals.
pub fn ideal_contained(a: &IdealBasis, b: &IdealBasis) -> Result<bool> {
    let universe: BTreeSet<VarId> = a.universe.union(&b.universe).copied().collect();
    let gb = IdealBasis::computed(universe, b.polynomials().to_vec(), b.order.clone());
    gb.contains_all(a.polynomials())
}
