//! Buchberger's algorithm over ℚ on dense exponent vectors.
//!
//! Polynomials are converted from the public [`Polynomial`] carrier into a
//! [`Ring`] that fixes the variable significance and block structure of the
//! monomial order. Pair handling follows the Gebauer–Möller update, pairs are
//! selected by smallest lcm with index tie-breaks, so results are reproducible.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Zero};

use crate::poly::{Monomial, Polynomial, Rational, VarId};

/// A monomial order on the variables of an ideal's universe.
///
/// Within every block the order is graded reverse lexicographic with larger
/// [`VarId`]s more significant; blocks are compared one after another.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    /// One block holding every variable.
    #[default]
    Grevlex,
    /// Every variable in its own block.
    Lex,
    /// Two blocks: the listed variables, then everything else.
    Elimination(BTreeSet<VarId>),
    /// One block per `(space, shift)` pair, higher shifts more significant.
    /// Contracting a basis to the variables of shift at most `i` is a
    /// filter on this order.
    LevelBlocks,
}

impl MonomialOrder {
    fn rank(&self, v: VarId, position: usize) -> (u64, u64) {
        match self {
            MonomialOrder::Grevlex => (0, 0),
            MonomialOrder::Lex => (position as u64, 0),
            MonomialOrder::Elimination(set) => (u64::from(set.contains(&v)), 0),
            MonomialOrder::LevelBlocks => (v.space as u64, u64::from(v.shift)),
        }
    }
}

pub(crate) type Exp = Box<[u16]>;

#[derive(Clone, Debug)]
pub(crate) struct Term {
    pub e: Exp,
    pub c: Rational,
}

/// Terms sorted by decreasing monomial.
pub(crate) type Poly = Vec<Term>;

#[derive(Clone, Debug)]
pub(crate) struct Ring {
    /// Index 0 is the most significant variable.
    vars: Vec<VarId>,
    index: HashMap<VarId, usize>,
    blocks: Vec<(usize, usize)>,
}

impl Ring {
    pub fn new(universe: &BTreeSet<VarId>, order: &MonomialOrder) -> Ring {
        let mut ranked: Vec<((u64, u64), VarId)> = universe
            .iter()
            .enumerate()
            .map(|(k, &v)| (order.rank(v, k), v))
            .collect();
        ranked.sort_by(|a, b| b.cmp(a));
        let mut blocks = Vec::new();
        let mut start = 0;
        for k in 1..=ranked.len() {
            if k == ranked.len() || ranked[k].0 != ranked[start].0 {
                blocks.push((start, k));
                start = k;
            }
        }
        let vars: Vec<VarId> = ranked.into_iter().map(|(_, v)| v).collect();
        let index = vars.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        Ring {
            vars,
            index,
            blocks,
        }
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn cmp(&self, a: &[u16], b: &[u16]) -> Ordering {
        for &(s, t) in &self.blocks {
            let da: u32 = a[s..t].iter().map(|&x| u32::from(x)).sum();
            let db: u32 = b[s..t].iter().map(|&x| u32::from(x)).sum();
            if da != db {
                return da.cmp(&db);
            }
            for k in (s..t).rev() {
                if a[k] != b[k] {
                    return b[k].cmp(&a[k]);
                }
            }
        }
        Ordering::Equal
    }

    pub fn to_internal(&self, p: &Polynomial) -> Result<Poly, VarId> {
        let n = self.nvars();
        let mut out = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let mut e = vec![0u16; n];
            for &(v, x) in m.pairs() {
                let k = *self.index.get(&v).ok_or(v)?;
                e[k] = u16::try_from(x).expect("exponent overflow");
            }
            out.push(Term {
                e: e.into_boxed_slice(),
                c: c.clone(),
            });
        }
        out.sort_by(|a, b| self.cmp(&b.e, &a.e));
        Ok(out)
    }

    pub fn exp_to_monomial(&self, e: &[u16]) -> Monomial {
        Monomial::from_pairs(
            e.iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(k, &x)| (self.vars[k], u32::from(x))),
        )
    }

    pub fn to_public(&self, p: &[Term]) -> Polynomial {
        Polynomial::from_terms(p.iter().map(|t| (self.exp_to_monomial(&t.e), t.c.clone())))
    }
}

fn mask(e: &[u16]) -> u64 {
    let mut m = 0u64;
    for (k, &x) in e.iter().enumerate() {
        if x > 0 {
            m |= 1 << (k % 64);
        }
    }
    m
}

fn divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u16], b: &[u16]) -> Exp {
    a.iter().zip(b).map(|(&x, &y)| x.max(y)).collect()
}

fn coprime(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x == 0 || y == 0)
}

fn quotient(a: &[u16], b: &[u16]) -> Exp {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

fn mul_exp(a: &[u16], b: &[u16]) -> Exp {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| x.checked_add(y).expect("exponent overflow"))
        .collect()
}

/// `p - c * m * g`, merging two sorted term lists.
fn sub_mul(ring: &Ring, p: &[Term], c: &Rational, m: &[u16], g: &[Term]) -> Poly {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let mut gi = g
        .iter()
        .map(|t| Term {
            e: mul_exp(&t.e, m),
            c: -(c * &t.c),
        })
        .peekable();
    let mut pi = p.iter().peekable();
    loop {
        match (pi.peek(), gi.peek()) {
            (Some(a), Some(b)) => match ring.cmp(&a.e, &b.e) {
                Ordering::Greater => out.push(pi.next().unwrap().clone()),
                Ordering::Less => out.push(gi.next().unwrap()),
                Ordering::Equal => {
                    let a = pi.next().unwrap();
                    let b = gi.next().unwrap();
                    let s = &a.c + b.c;
                    if !s.is_zero() {
                        out.push(Term { e: b.e, c: s });
                    }
                }
            },
            (Some(_), None) => out.push(pi.next().unwrap().clone()),
            (None, Some(_)) => out.push(gi.next().unwrap()),
            (None, None) => break,
        }
    }
    out
}

fn make_monic(p: &mut Poly) {
    if let Some(lc) = p.first().map(|t| t.c.clone()) {
        if !lc.is_one() {
            let inv = Rational::one() / lc;
            for t in p.iter_mut() {
                t.c *= &inv;
            }
        }
    }
}

/// A reducer: monic polynomials with cached leading exponents and masks.
pub(crate) struct Reducer<'a> {
    ring: &'a Ring,
    polys: Vec<&'a Poly>,
    masks: Vec<u64>,
}

impl<'a> Reducer<'a> {
    pub fn new(ring: &'a Ring, polys: impl IntoIterator<Item = &'a Poly>) -> Self {
        let polys: Vec<&Poly> = polys.into_iter().filter(|p| !p.is_empty()).collect();
        let masks = polys.iter().map(|p| mask(&p[0].e)).collect();
        Reducer { ring, polys, masks }
    }

    fn find(&self, e: &[u16]) -> Option<&'a Poly> {
        let me = mask(e);
        self.polys
            .iter()
            .zip(&self.masks)
            .find(|(g, &mg)| mg & !me == 0 && divides(&g[0].e, e))
            .map(|(g, _)| *g)
    }

    /// Full reduction: no term of the result is divisible by a leading term.
    pub fn reduce(&self, p: Poly) -> Poly {
        let mut done: Poly = Vec::new();
        let mut p = p;
        let mut start = 0;
        while start < p.len() {
            let lead = &p[start];
            match self.find(&lead.e) {
                Some(g) => {
                    let q = quotient(&lead.e, &g[0].e);
                    let c = lead.c.clone();
                    p = sub_mul(self.ring, &p[start..], &c, &q, g);
                    start = 0;
                }
                None => {
                    done.push(p[start].clone());
                    start += 1;
                }
            }
        }
        done
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Exp,
}

struct Buchberger<'r> {
    ring: &'r Ring,
    basis: Vec<Poly>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl<'r> Buchberger<'r> {
    fn lt(&self, i: usize) -> &[u16] {
        &self.basis[i][0].e
    }

    fn reduce(&self, p: Poly) -> Poly {
        let active = self
            .basis
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(p, _)| p);
        Reducer::new(self.ring, active).reduce(p)
    }

    fn insert(&mut self, h: Poly) {
        let hi = self.basis.len();
        self.basis.push(h);
        self.active.push(false);
        let lth = self.lt(hi).to_vec();

        let mut candidates: Vec<(usize, Exp)> = (0..hi)
            .filter(|&g| self.active[g])
            .map(|g| (g, lcm(&lth, self.lt(g))))
            .collect();
        let mut kept: Vec<(usize, Exp)> = Vec::new();
        while !candidates.is_empty() {
            let (g1, l1) = candidates.remove(0);
            let keep = coprime(&lth, self.lt(g1))
                || !candidates
                    .iter()
                    .chain(kept.iter())
                    .any(|(_, l2)| divides(l2, &l1));
            if keep {
                kept.push((g1, l1));
            }
        }
        let new_pairs: Vec<Pair> = kept
            .into_iter()
            .filter(|(g, _)| !coprime(&lth, self.lt(*g)))
            .map(|(g, l)| Pair {
                i: g,
                j: hi,
                lcm: l,
            })
            .collect();

        let ring_lt = |k: usize| -> &[u16] { &self.basis[k][0].e };
        let old = std::mem::take(&mut self.pairs);
        let mut retained: Vec<Pair> = old
            .into_iter()
            .filter(|p| {
                !(divides(&lth, &p.lcm)
                    && *lcm(ring_lt(p.i), &lth) != *p.lcm
                    && *lcm(ring_lt(p.j), &lth) != *p.lcm)
            })
            .collect();
        retained.extend(new_pairs);
        self.pairs = retained;

        for g in 0..hi {
            if self.active[g] && divides(&lth, self.lt(g)) {
                self.active[g] = false;
            }
        }
        self.active[hi] = true;
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let ord = self
                .ring
                .cmp(&a.lcm, &b.lcm)
                .then((a.i, a.j).cmp(&(b.i, b.j)));
            if ord == Ordering::Less {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn spoly(&self, p: &Pair) -> Poly {
        let (f, g) = (&self.basis[p.i], &self.basis[p.j]);
        let qf = quotient(&p.lcm, &f[0].e);
        let qg = quotient(&p.lcm, &g[0].e);
        let tail: Poly = f[1..]
            .iter()
            .map(|t| Term {
                e: mul_exp(&t.e, &qf),
                c: t.c.clone(),
            })
            .collect();
        sub_mul(self.ring, &tail, &Rational::one(), &qg, &g[1..])
    }
}

fn is_constant(p: &Poly) -> bool {
    p.len() == 1 && p[0].e.iter().all(|&x| x == 0)
}

fn unit(ring: &Ring) -> Vec<Poly> {
    vec![vec![Term {
        e: vec![0; ring.nvars()].into_boxed_slice(),
        c: Rational::one(),
    }]]
}

/// Reduced Gröbner basis of `old ∪ new`, where `old` is already a reduced
/// Gröbner basis in `ring` (possibly empty). Output is sorted by ascending
/// leading monomial.
pub(crate) fn groebner(ring: &Ring, old: Vec<Poly>, new: Vec<Poly>) -> Vec<Poly> {
    let mut bb = Buchberger {
        ring,
        basis: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    for g in old {
        if g.is_empty() {
            continue;
        }
        if is_constant(&g) {
            return unit(ring);
        }
        bb.basis.push(g);
        bb.active.push(true);
    }
    let mut new = new;
    // Small generators first: cheaper pairs early.
    new.sort_by(|a, b| match (a.first(), b.first()) {
        (Some(x), Some(y)) => ring.cmp(&x.e, &y.e),
        _ => Ordering::Equal,
    });
    for f in new {
        let mut h = bb.reduce(f);
        if h.is_empty() {
            continue;
        }
        if is_constant(&h) {
            return unit(ring);
        }
        make_monic(&mut h);
        bb.insert(h);
    }
    while let Some(pair) = bb.select() {
        let s = bb.spoly(&pair);
        let mut h = bb.reduce(s);
        if h.is_empty() {
            continue;
        }
        if is_constant(&h) {
            return unit(ring);
        }
        make_monic(&mut h);
        bb.insert(h);
    }
    let Buchberger { basis, active, .. } = bb;
    let mut minimal: Vec<Poly> = basis
        .into_iter()
        .zip(active)
        .filter(|(_, a)| *a)
        .map(|(p, _)| p)
        .collect();
    minimal.sort_by(|a, b| ring.cmp(&a[0].e, &b[0].e));
    interreduce(ring, minimal)
}

/// Reduces every tail against the other elements of a minimal basis.
fn interreduce(ring: &Ring, minimal: Vec<Poly>) -> Vec<Poly> {
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, p)| p);
        let reducer = Reducer::new(ring, others);
        let g = &minimal[k];
        let mut reduced = vec![g[0].clone()];
        reduced.extend(reducer.reduce(g[1..].to_vec()));
        out.push(reduced);
    }
    out
}
