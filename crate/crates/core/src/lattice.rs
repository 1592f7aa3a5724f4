//! The lattice of flats, maximal chains, building sets and nested sets.
//!
//! Flats are ordered by inclusion of their index sets. Inside every listing
//! flats appear rank by rank, lexicographically within a rank; this "lattice
//! order" is also the order used for building sets and nested sets.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::subset::Subset;

#[derive(Clone, Debug)]
pub struct LatticeOfFlats {
    ground: usize,
    flats: Vec<Subset>,
    rank: Vec<usize>,
    by_rank: Vec<std::ops::Range<usize>>,
    index: HashMap<Subset, usize>,
    upper_covers: Vec<Vec<usize>>,
}

impl LatticeOfFlats {
    /// Enumerates all flats of `m`: the rank-`k+1` flats are the closures of
    /// `F ∪ e` over rank-`k` flats `F` and `e ∉ F`, which also yields the
    /// covering relation.
    pub fn new(m: &Matroid) -> Self {
        let mut flats = vec![m.closure_unchecked(Subset::EMPTY)];
        let mut rank = vec![0];
        let mut by_rank = vec![Range { start: 0, end: 1 }];
        let mut index = HashMap::from([(flats[0], 0)]);
        let mut upper_covers: Vec<Vec<usize>> = vec![Vec::new()];
        let ground = m.ground_set();

        for r in 0..m.rank() {
            let layer = by_rank[r].clone();
            let mut next: Vec<Subset> = Vec::new();
            let mut pairs = Vec::new();
            for i in layer {
                let f = flats[i];
                for e in ground.difference(f).iter() {
                    let cl = m.closure_unchecked(f.with(e));
                    pairs.push((i, cl));
                    next.push(cl);
                }
            }
            next.sort();
            next.dedup();
            let start = flats.len();
            for &f in &next {
                index.insert(f, flats.len());
                flats.push(f);
                rank.push(r + 1);
                upper_covers.push(Vec::new());
            }
            by_rank.push(start..flats.len());
            for (i, cl) in pairs {
                let j = index[&cl];
                if !upper_covers[i].contains(&j) {
                    upper_covers[i].push(j);
                }
            }
        }
        for covers in &mut upper_covers {
            covers.sort_unstable();
        }
        LatticeOfFlats { ground: m.size(), flats, rank, by_rank, index, upper_covers }
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    /// All flats in lattice order.
    pub fn flats(&self) -> &[Subset] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    /// `r(M)`, the rank of the top element.
    pub fn rank(&self) -> usize {
        self.by_rank.len() - 1
    }

    pub fn flats_of_rank(&self, r: usize) -> &[Subset] {
        self.by_rank.get(r).map_or(&[], |range| &self.flats[range.clone()])
    }

    pub fn bottom(&self) -> Subset {
        self.flats[0]
    }

    pub fn top(&self) -> Subset {
        *self.flats.last().expect("lattice has a top")
    }

    pub fn index_of(&self, f: Subset) -> Option<usize> {
        self.index.get(&f).copied()
    }

    pub fn is_flat(&self, f: Subset) -> bool {
        self.index.contains_key(&f)
    }

    pub fn rank_of_flat(&self, f: Subset) -> Option<usize> {
        self.index_of(f).map(|i| self.rank[i])
    }

    /// Covering pairs `(F, G)`, `F ⋖ G`, in lattice order of `F` then `G`.
    pub fn covers(&self) -> Vec<(Subset, Subset)> {
        self.upper_covers
            .iter()
            .enumerate()
            .flat_map(|(i, ups)| ups.iter().map(move |&j| (self.flats[i], self.flats[j])))
            .collect()
    }

    /// Smallest flat containing `s`; the join of a family of flats is the
    /// closure of their union.
    pub fn closure(&self, s: Subset) -> Subset {
        self.flats
            .iter()
            .filter(|f| s.is_subset(**f))
            .fold(self.top(), |acc, &f| acc.intersection(f))
    }

    /// The interval `[0̂, F]` in lattice order.
    pub fn interval_below(&self, f: Subset) -> Vec<Subset> {
        self.flats.iter().copied().filter(|g| g.is_subset(f)).collect()
    }

    fn require_loopfree(&self) -> Result<()> {
        if self.bottom().is_empty() {
            Ok(())
        } else {
            Err(Error::Loops(self.bottom()))
        }
    }

    /// All maximal chains `F_1 ⊊ ... ⊊ F_r = E` starting at an atom, in
    /// lexicographic order.
    pub fn maximal_chains(&self) -> Result<Vec<ChainOfFlats>> {
        self.require_loopfree()?;
        let mut out = Vec::new();
        let mut stack = Vec::new();
        fn rec(lat: &LatticeOfFlats, i: usize, stack: &mut Vec<Subset>, out: &mut Vec<ChainOfFlats>) {
            stack.push(lat.flats[i]);
            if lat.upper_covers[i].is_empty() {
                out.push(ChainOfFlats(stack.clone()));
            }
            for &j in &lat.upper_covers[i] {
                rec(lat, j, stack, out);
            }
            stack.pop();
        }
        if self.rank() == 0 {
            return Ok(out);
        }
        for i in self.by_rank[1].clone() {
            rec(self, i, &mut stack, &mut out);
        }
        Ok(out)
    }

    /// Checks the building-set condition for `g`: for every flat `F` the join
    /// map from `∏ [0̂, X]`, `X ∈ max(G ∩ [0̂, F])`, to `[0̂, F]` must be an
    /// order isomorphism. Returns the first flat (lattice order) where it is
    /// not, or `None` if `g` is a building set.
    pub fn building_set_witness(&self, g: &[Subset]) -> Result<Option<Subset>> {
        for &x in g {
            if !self.is_flat(x) {
                return Err(Error::NotFlat(x));
            }
            if x == self.bottom() {
                return Err(Error::InvalidArgument("a building set cannot contain the bottom flat".into()));
            }
        }
        for &f in &self.flats {
            if !self.join_map_is_isomorphism(g, f) {
                return Ok(Some(f));
            }
        }
        Ok(None)
    }

    pub fn is_building_set(&self, g: &[Subset]) -> Result<bool> {
        Ok(self.building_set_witness(g)?.is_none())
    }

    fn join_map_is_isomorphism(&self, g: &[Subset], f: Subset) -> bool {
        let below: Vec<Subset> = g.iter().copied().filter(|x| x.is_subset(f)).collect();
        let maxes: Vec<Subset> = below.iter().copied().filter(|x| !below.iter().any(|y| y != x && x.is_subset(*y))).collect();
        let target = self.interval_below(f);
        let factors: Vec<Vec<Subset>> = maxes.iter().map(|&x| self.interval_below(x)).collect();

        let mut size: usize = 1;
        for fac in &factors {
            size = size.saturating_mul(fac.len());
            if size > target.len() {
                return false;
            }
        }
        if size != target.len() {
            return false;
        }

        // enumerate the product and its images
        let mut tuples: Vec<Vec<Subset>> = vec![Vec::new()];
        for fac in &factors {
            tuples = tuples
                .into_iter()
                .flat_map(|t| fac.iter().map(move |&y| {
                    let mut t = t.clone();
                    t.push(y);
                    t
                }))
                .collect();
        }
        let images: Vec<Subset> = tuples.iter().map(|t| self.closure(t.iter().fold(Subset::EMPTY, |a, &y| a.union(y)))).collect();
        let mut distinct = images.clone();
        distinct.sort();
        distinct.dedup();
        if distinct.len() != target.len() {
            return false;
        }
        // the join map is monotone; it must also reflect the order
        for (s, &is) in tuples.iter().zip(&images) {
            for (t, &it) in tuples.iter().zip(&images) {
                if is.is_subset(it) && !s.iter().zip(t).all(|(a, b)| a.is_subset(*b)) {
                    return false;
                }
            }
        }
        true
    }

    /// `true` iff every antichain of `s` with at least two members has a join
    /// outside `g`.
    pub fn is_nested(&self, g: &BuildingSet, s: &[Subset]) -> Result<bool> {
        for &x in s {
            if !g.contains(x) {
                return Err(Error::InvalidArgument(format!("{x} is not in the building set")));
            }
        }
        let mut prefix: Vec<Subset> = Vec::with_capacity(s.len());
        for &x in s {
            if !self.extends_nested(g, &prefix, x) {
                return Ok(false);
            }
            prefix.push(x);
        }
        Ok(true)
    }

    /// Whether `nested ∪ {x}` is nested, given that `nested` is: only the
    /// antichains through `x` need checking.
    fn extends_nested(&self, g: &BuildingSet, nested: &[Subset], x: Subset) -> bool {
        let incomparable: Vec<Subset> = nested.iter().copied().filter(|&y| !y.is_subset(x) && !x.is_subset(y)).collect();
        let k = incomparable.len();
        for mask in 1u64..(1u64 << k) {
            let chosen: Vec<Subset> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| incomparable[i]).collect();
            let antichain = chosen.iter().enumerate().all(|(i, a)| chosen[i + 1..].iter().all(|b| !a.is_subset(*b) && !b.is_subset(*a)));
            if !antichain {
                continue;
            }
            let union = chosen.iter().fold(x, |acc, &y| acc.union(y));
            if g.contains(self.closure(union)) {
                return false;
            }
        }
        true
    }

    /// All nested sets of `g` (the empty set included), depth first over `g`
    /// in lattice order. `max_len` limits the size of the listed sets.
    pub fn nested_sets(&self, g: &BuildingSet, max_len: Option<usize>) -> Vec<NestedSet> {
        let members = g.members();
        let limit = max_len.unwrap_or(usize::MAX);
        let mut out = Vec::new();
        let mut stack = Vec::new();
        fn rec(lat: &LatticeOfFlats, g: &BuildingSet, members: &[Subset], start: usize, limit: usize, stack: &mut Vec<Subset>, out: &mut Vec<NestedSet>) {
            out.push(NestedSet(stack.clone()));
            if stack.len() == limit {
                return;
            }
            for i in start..members.len() {
                if lat.extends_nested(g, stack, members[i]) {
                    stack.push(members[i]);
                    rec(lat, g, members, i + 1, limit, stack, out);
                    stack.pop();
                }
            }
        }
        rec(self, g, members, 0, limit, &mut stack, &mut out);
        out
    }

    /// Nested sets not contained in a larger nested set.
    pub fn maximal_nested_sets(&self, g: &BuildingSet) -> Vec<NestedSet> {
        self.nested_sets(g, None)
            .into_iter()
            .filter(|s| g.members().iter().all(|&x| s.0.contains(&x) || !self.extends_nested(g, &s.0, x)))
            .collect()
    }
}

/// A strictly increasing list of flats.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChainOfFlats(Vec<Subset>);

impl ChainOfFlats {
    /// Validates that every member is a flat and inclusions are strict.
    pub fn new(lattice: &LatticeOfFlats, flats: Vec<Subset>) -> Result<Self> {
        for &f in &flats {
            if !lattice.is_flat(f) {
                return Err(Error::NotFlat(f));
            }
        }
        for w in flats.windows(2) {
            if w[0] == w[1] || !w[0].is_subset(w[1]) {
                return Err(Error::NotNested(w[0], w[1]));
            }
        }
        Ok(ChainOfFlats(flats))
    }

    pub fn flats(&self) -> &[Subset] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// A maximal chain has one flat of each rank `1..=r(M)`.
    pub fn is_maximal_in(&self, lattice: &LatticeOfFlats) -> bool {
        lattice.bottom().is_empty()
            && self.0.len() == lattice.rank()
            && self.0.iter().enumerate().all(|(i, &f)| lattice.rank_of_flat(f) == Some(i + 1))
    }
}

impl fmt::Display for ChainOfFlats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" < ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// A building set of a lattice of flats, members kept in lattice order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildingSet {
    members: Vec<Subset>,
}

impl BuildingSet {
    /// Validates `members` with [`LatticeOfFlats::building_set_witness`].
    pub fn new(lattice: &LatticeOfFlats, mut members: Vec<Subset>) -> Result<Self> {
        members.sort_by_key(|&f| lattice.index_of(f).unwrap_or(usize::MAX));
        members.dedup();
        if let Some(w) = lattice.building_set_witness(&members)? {
            return Err(Error::NotBuildingSet(w));
        }
        Ok(BuildingSet { members })
    }

    /// `G_min`: the flats whose restriction is connected.
    pub fn minimal(m: &Matroid, lattice: &LatticeOfFlats) -> Result<Self> {
        m.require_loopfree()?;
        let mut members = Vec::new();
        for &f in &lattice.flats()[1..] {
            if m.restriction(f)?.is_connected() {
                members.push(f);
            }
        }
        Self::new(lattice, members).map_err(|e| Error::Inconsistent(format!("minimal building set rejected: {e}")))
    }

    /// `G_max`: every flat except the bottom.
    pub fn maximal(m: &Matroid, lattice: &LatticeOfFlats) -> Result<Self> {
        m.require_loopfree()?;
        Self::new(lattice, lattice.flats()[1..].to_vec()).map_err(|e| Error::Inconsistent(format!("maximal building set rejected: {e}")))
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn contains(&self, f: Subset) -> bool {
        self.members.contains(&f)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// A nested set, members in lattice order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct NestedSet(Vec<Subset>);

impl NestedSet {
    pub fn members(&self) -> &[Subset] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Whether the members are totally ordered by inclusion.
    pub fn is_chain(&self) -> bool {
        self.0.iter().enumerate().all(|(i, a)| self.0[i + 1..].iter().all(|b| a.is_subset(*b) || b.is_subset(*a)))
    }
}
