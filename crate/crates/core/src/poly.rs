//! Sparse multivariate polynomials over ℚ in shift-indexed coordinates.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Which copy of the coordinate ring a variable lives in.
///
/// `Tag` sorts lowest so that block orders keep tag variables in the least
/// significant block; `Left`/`Right` are the two tensor factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Space {
    Tag,
    Base,
    Left,
    Right,
}

/// A coordinate of the ambient group, before shifting.
///
/// `Y` coordinates are numbered consecutively across all additive and
/// multiplicative factors; matrix entries `X(j, k)` belong to the single
/// general linear factor. Inverse coordinates sort after the plain ones so
/// that normal forms prefer the plain coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    Y(u16),
    X(u16, u16),
    InvY(u16),
    InvDet,
    /// Scratch variable for auxiliary eliminations; never part of an ambient.
    Aux(u16),
}

impl Coord {
    pub fn is_inverse(self) -> bool {
        matches!(self, Coord::InvY(_) | Coord::InvDet)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Y(j) => write!(f, "y{j}"),
            Coord::X(j, k) => write!(f, "x{j}_{k}"),
            Coord::InvY(j) => write!(f, "iy{j}"),
            Coord::InvDet => write!(f, "idet"),
            Coord::Aux(j) => write!(f, "aux{j}"),
        }
    }
}

/// The variable σ^shift(coord) in one copy of the ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    pub space: Space,
    pub shift: u32,
    pub coord: Coord,
}

impl VarId {
    pub const fn new(coord: Coord, shift: u32) -> Self {
        VarId {
            space: Space::Base,
            shift,
            coord,
        }
    }

    pub const fn y(j: u16, shift: u32) -> Self {
        VarId::new(Coord::Y(j), shift)
    }

    pub const fn iy(j: u16, shift: u32) -> Self {
        VarId::new(Coord::InvY(j), shift)
    }

    pub const fn x(j: u16, k: u16, shift: u32) -> Self {
        VarId::new(Coord::X(j, k), shift)
    }

    pub const fn idet(shift: u32) -> Self {
        VarId::new(Coord::InvDet, shift)
    }

    pub fn in_space(self, space: Space) -> Self {
        VarId { space, ..self }
    }

    pub fn shifted(self, t: u32) -> Self {
        VarId {
            shift: self.shift + t,
            ..self
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.space {
            Space::Base => "",
            Space::Left => "u.",
            Space::Right => "v.",
            Space::Tag => "t.",
        };
        if self.shift == 0 {
            write!(f, "{prefix}{}", self.coord)
        } else {
            write!(f, "{prefix}s{}({})", self.shift, self.coord)
        }
    }
}

/// A power product, stored as `(variable, exponent)` pairs sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, u32)>) -> Self {
        let mut map: BTreeMap<VarId, u32> = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn pairs(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(v, e)| other.exponent(v) >= e)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn divide_into(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let pairs = other
            .0
            .iter()
            .map(|&(v, e)| (v, e - self.exponent(v)))
            .filter(|&(_, e)| e > 0)
            .collect();
        Some(Monomial(pairs))
    }

    pub fn map_vars(&self, f: impl Fn(VarId) -> VarId) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (f(v), e)))
    }

    /// Graded reverse lexicographic comparison, with larger `VarId`s more
    /// significant. Used for canonical printing.
    pub fn grevlex_cmp(&self, other: &Monomial) -> Ordering {
        let (da, db) = (self.degree(), other.degree());
        if da != db {
            return da.cmp(&db);
        }
        // Walk from the least significant variable upwards.
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let va = self.0.get(i).map(|p| p.0);
            let vb = other.0.get(j).map(|p| p.0);
            let v = match (va, vb) {
                (Some(a), Some(b)) => a.min(b),
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (None, None) => break,
            };
            let ea = if va == Some(v) { self.0[i].1 } else { 0 };
            let eb = if vb == Some(v) { other.0[j].1 } else { 0 };
            if ea != eb {
                return eb.cmp(&ea);
            }
            if va == Some(v) {
                i += 1;
            }
            if vb == Some(v) {
                j += 1;
            }
        }
        Ordering::Equal
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        // Most significant variable first.
        for (k, (v, e)) in self.0.iter().rev().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial with exact rational coefficients. Zero coefficients are never
/// stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        Polynomial::constant(rat(n))
    }

    pub fn var(v: VarId) -> Self {
        Polynomial::monomial(Monomial::var(v), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Constant coefficient.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn max_shift(&self) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.vars())
            .map(|v| v.shift)
            .max()
    }

    pub fn min_shift(&self) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.vars())
            .map(|v| v.shift)
            .min()
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), a.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Renames variables; coinciding images are merged.
    pub fn map_vars(&self, f: impl Fn(VarId) -> VarId) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.map_vars(&f), c.clone());
        }
        out
    }

    pub fn in_space(&self, space: Space) -> Polynomial {
        self.map_vars(|v| v.in_space(space))
    }

    /// Applies the ring homomorphism sending each variable `v` to `f(v)`, or
    /// to itself when `f` returns `None`.
    pub fn substitute(&self, f: impl Fn(VarId) -> Option<Polynomial>) -> Polynomial {
        let mut cache: BTreeMap<VarId, Option<Polynomial>> = BTreeMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(c.clone());
            let mut kept = Vec::new();
            for &(v, e) in m.pairs() {
                let image = cache.entry(v).or_insert_with(|| f(v));
                match image {
                    Some(p) => term = &term * &p.pow(e),
                    None => kept.push((v, e)),
                }
            }
            if !kept.is_empty() {
                term = term.mul_monomial(&Monomial::from_pairs(kept));
            }
            out += &term;
        }
        out
    }

    /// Evaluates all variables at rationals given by `f`.
    pub fn evaluate(&self, f: impl Fn(VarId) -> Rational) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.pairs() {
                t *= num_traits::pow(f(v), e as usize);
            }
            acc += t;
        }
        acc
    }

    /// Terms sorted by descending graded reverse lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| b.0.grevlex_cmp(a.0));
        ts
    }

    /// Scales so that the grevlex-leading coefficient is one.
    pub fn monic(&self) -> Polynomial {
        match self.sorted_terms().first() {
            Some((_, c)) => {
                let inv = Rational::one() / *c;
                self.scale(&inv)
            }
            None => Polynomial::zero(),
        }
    }
}

impl From<VarId> for Polynomial {
    fn from(v: VarId) -> Self {
        Polynomial::var(v)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::print_poly(self))
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self -= &rhs;
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}
