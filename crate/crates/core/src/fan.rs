//! Fan structures on `trop(M)`: nested-set fans (the fine subdivision being
//! the one for the maximal building set) and the Bergman fan.
//!
//! The Bergman fan is built from the fine subdivision. For a maximal chain
//! `F_1 ⊊ ... ⊊ F_r = E` with difference blocks `I^1, ..., I^r`, every weight
//! in the relative interior of the chain cone is maximized on the bases
//! meeting each block exactly once. Two chains lie in the same maximal
//! Bergman cone iff they select the same face, i.e. have the same family of
//! such transversal bases, so the maximal Bergman cones are the groups of
//! chains sharing that family. Each group is kept as the union of its chain
//! cones; membership is the disjunction of the closed-form chain tests.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{BuildingSet, ChainOfFlats, LatticeOfFlats, NestedSet};
use crate::linalg::{format_rational, rref};
use crate::matroid::Matroid;
use crate::subset::Subset;
use crate::tropical::{
    chain_cone_contains, chain_interior_point, chain_partition, chain_rays, degeneration_matroid, groebner_cone_dim,
    polytope_dim, transversal_bases, Partition, QuotientVector,
};

/// Reduced row echelon form of a cone's generators together with `1`.
/// Two cones span the same linear space iff their forms are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpanCanonicalForm(Vec<Vec<BigRational>>);

impl SpanCanonicalForm {
    pub fn of(size: usize, generators: &[QuotientVector]) -> Self {
        let mut rows: Vec<Vec<BigRational>> = vec![vec![BigRational::one(); size]];
        rows.extend(generators.iter().map(|g| g.coords().to_vec()));
        SpanCanonicalForm(rref(&rows))
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.0
    }

    /// Dimension of the span, lineality included.
    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl Serialize for SpanCanonicalForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.0.iter().map(|r| r.iter().map(format_rational).collect()).collect();
        rows.serialize(serializer)
    }
}

/// Span of a chain cone `cone(v_F : F ∈ chain) + R·1`.
pub fn chain_span(size: usize, chain: &ChainOfFlats) -> SpanCanonicalForm {
    SpanCanonicalForm::of(size, &chain_rays(size, chain))
}

/// Membership in `cone(rays) + R·1` for rays independent modulo `1`, by
/// solving for the coefficients exactly and checking their signs.
pub fn simplicial_cone_contains(rays: &[QuotientVector], v: &QuotientVector) -> bool {
    let size = v.len();
    let k = rays.len();
    // columns: rays, then 1, then v
    let rows: Vec<Vec<BigRational>> = (0..size)
        .map(|i| {
            let mut row: Vec<BigRational> = rays.iter().map(|r| r.coords()[i].clone()).collect();
            row.push(BigRational::one());
            row.push(v.coords()[i].clone());
            row
        })
        .collect();
    let reduced = rref(&rows);
    let mut coeffs = vec![BigRational::zero(); k + 1];
    let mut pivots = 0;
    for row in &reduced {
        let pivot = row.iter().position(|x| !x.is_zero()).expect("rref drops zero rows");
        if pivot == k + 1 {
            return false;
        }
        coeffs[pivot] = row[k + 1].clone();
        pivots += 1;
    }
    assert_eq!(pivots, k + 1, "cone generators must be independent modulo the lineality");
    coeffs[..k].iter().all(|c| !c.is_negative())
}

/// One maximal cone of a simplicial fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanCone {
    /// Indices into [`Fan::rays`].
    pub rays: Vec<usize>,
    /// For nested-set fans the single nested set generating the cone; for
    /// the Bergman fan its member maximal chains.
    pub chains: Vec<Vec<Subset>>,
    /// Transversal bases of the cone's maximal chains (empty for nested
    /// sets that are not maximal chains).
    pub bases: Vec<Subset>,
}

/// A fan in `R^{n+1}/R·1` whose rays are classes `v_F` of flats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub size: usize,
    pub lineality_dim: usize,
    /// Flats `F` whose classes `v_F` are the rays, in lattice order.
    pub ray_flats: Vec<Subset>,
    pub cones: Vec<FanCone>,
}

impl Fan {
    /// Primitive integer ray vectors, coordinate 0 normalized to zero.
    pub fn ray_vectors(&self) -> Vec<QuotientVector> {
        self.ray_flats.iter().map(|&f| QuotientVector::indicator(self.size, f)).collect()
    }

    pub fn cone_generators(&self, cone: usize) -> Vec<QuotientVector> {
        self.cones[cone].rays.iter().map(|&r| QuotientVector::indicator(self.size, self.ray_flats[r])).collect()
    }

    /// Maximal cones containing `v`, tested by solving for cone coefficients.
    pub fn containing_cones(&self, v: &QuotientVector) -> Vec<usize> {
        (0..self.cones.len()).filter(|&c| simplicial_cone_contains(&self.cone_generators(c), v)).collect()
    }

    /// Dimension modulo `R·1` of each maximal cone.
    pub fn cone_dims(&self) -> Vec<usize> {
        (0..self.cones.len()).map(|c| SpanCanonicalForm::of(self.size, &self.cone_generators(c)).dim() - 1).collect()
    }
}

fn fan_from_generating_sets(m: &Matroid, lattice: &LatticeOfFlats, sets: Vec<Vec<Subset>>) -> Result<Fan> {
    let ground = m.ground_set();
    let mut used: Vec<Subset> = sets.iter().flatten().copied().filter(|&f| f != ground).collect();
    used.sort_by_key(|&f| lattice.index_of(f));
    used.dedup();
    let position: HashMap<Subset, usize> = used.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut cones = Vec::with_capacity(sets.len());
    for set in sets {
        let rays = set.iter().filter(|&&f| f != ground).map(|f| position[f]).collect();
        let is_chain = set.windows(2).all(|w| w[0].is_subset(w[1]));
        let bases = match is_chain {
            true => {
                let chain = ChainOfFlats::new(lattice, set.clone())?;
                if chain.is_maximal_in(lattice) { transversal_bases(m, &chain_partition(lattice, &chain)?)? } else { Vec::new() }
            }
            false => Vec::new(),
        };
        cones.push(FanCone { rays, chains: vec![set], bases });
    }
    let fan = Fan { size: m.size(), lineality_dim: m.size() - polytope_dim(m)?, ray_flats: used, cones };
    let expected = m.rank().saturating_sub(1);
    if let Some(d) = fan.cone_dims().into_iter().find(|&d| d != expected) {
        return Err(Error::Inconsistent(format!("fan is not pure of dimension {expected}: found a maximal cone of dimension {d}")));
    }
    Ok(fan)
}

/// The nested-set fan `Σ_G(M)`: one simplicial cone `cone(v_F : F ∈ S) + R·1`
/// per nested set `S`. Only maximal cones are listed. Purity of dimension
/// `r(M) - 1` is checked.
pub fn nested_fan(m: &Matroid, lattice: &LatticeOfFlats, g: &BuildingSet) -> Result<Fan> {
    m.require_loopfree()?;
    if let Some(w) = lattice.building_set_witness(g.members())? {
        return Err(Error::NotBuildingSet(w));
    }
    let sets: Vec<Vec<Subset>> = lattice.maximal_nested_sets(g).into_iter().map(|s: NestedSet| s.members().to_vec()).collect();
    fan_from_generating_sets(m, lattice, sets)
}

/// The fine subdivision: one cone per maximal chain of flats.
pub fn fine_subdivision(m: &Matroid) -> Result<Fan> {
    m.require_loopfree()?;
    let lattice = LatticeOfFlats::new(m);
    let chains = lattice.maximal_chains()?;
    fan_from_generating_sets(m, &lattice, chains.into_iter().map(|c| c.flats().to_vec()).collect())
}

/// A maximal cone of the Bergman fan, stored as the union of the chain
/// cones of its member chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BergmanCone {
    pub(crate) member_chains: Vec<ChainOfFlats>,
    pub(crate) partitions: Vec<Partition>,
    pub(crate) transversal_bases: Vec<Subset>,
    pub(crate) block_set: Vec<Subset>,
    pub(crate) ray_flats: Vec<Subset>,
    pub(crate) span: SpanCanonicalForm,
}

impl BergmanCone {
    pub fn member_chains(&self) -> &[ChainOfFlats] {
        &self.member_chains
    }

    /// Ordered difference blocks of each member chain.
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    /// The bases meeting every block once; shared by all member chains.
    pub fn transversal_bases(&self) -> &[Subset] {
        &self.transversal_bases
    }

    /// The blocks as an unordered family; shared by all member chains.
    pub fn block_set(&self) -> &[Subset] {
        &self.block_set
    }

    /// Flats whose classes span the extreme rays of the cone.
    pub fn ray_flats(&self) -> &[Subset] {
        &self.ray_flats
    }

    pub fn span(&self) -> &SpanCanonicalForm {
        &self.span
    }

    pub fn contains(&self, v: &QuotientVector) -> bool {
        self.member_chains.iter().any(|c| chain_cone_contains(c, v))
    }

    /// Generators of all member chain cones, without repeats.
    pub fn generators(&self, size: usize) -> Vec<(Subset, QuotientVector)> {
        let ground = Subset::full(size);
        let mut flats: Vec<Subset> = self.member_chains.iter().flat_map(|c| c.flats().iter().copied()).filter(|&f| f != ground).collect();
        flats.sort();
        flats.dedup();
        flats.into_iter().map(|f| (f, QuotientVector::indicator(size, f))).collect()
    }

    /// Ray sum of the lexicographically first member chain.
    pub fn interior_point(&self, size: usize) -> QuotientVector {
        chain_interior_point(size, &self.member_chains[0])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BergmanFan {
    pub(crate) size: usize,
    pub(crate) lineality_dim: usize,
    pub(crate) ray_flats: Vec<Subset>,
    pub(crate) cones: Vec<BergmanCone>,
}

impl BergmanFan {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality_dim
    }

    /// Flats of the rays of the fan, in lattice order.
    pub fn ray_flats(&self) -> &[Subset] {
        &self.ray_flats
    }

    pub fn cones(&self) -> &[BergmanCone] {
        &self.cones
    }

    pub fn containing_cones(&self, v: &QuotientVector) -> Vec<usize> {
        (0..self.cones.len()).filter(|&i| self.cones[i].contains(v)).collect()
    }

    pub fn contains(&self, v: &QuotientVector) -> bool {
        self.cones.iter().any(|c| c.contains(v))
    }

    /// Index of the cone having `chain` as a member.
    pub fn cone_of_chain(&self, chain: &ChainOfFlats) -> Option<usize> {
        self.cones.iter().position(|c| c.member_chains.contains(chain))
    }

    pub fn to_fan(&self) -> Fan {
        let position: HashMap<Subset, usize> = self.ray_flats.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let cones = self
            .cones
            .iter()
            .map(|c| FanCone {
                rays: c.ray_flats.iter().map(|f| position[f]).collect(),
                chains: c.member_chains.iter().map(|ch| ch.flats().to_vec()).collect(),
                bases: c.transversal_bases.clone(),
            })
            .collect();
        Fan { size: self.size, lineality_dim: self.lineality_dim, ray_flats: self.ray_flats.clone(), cones }
    }
}

struct ChainData {
    chain: ChainOfFlats,
    partition: Partition,
    bases: Vec<Subset>,
}

/// The Bergman fan of a loopfree, connected matroid (essential, if it came
/// from a matrix).
///
/// Besides grouping the chains this cross-checks every chain against the
/// polytope: the degeneration matroid at the chain's interior point must
/// have exactly the transversal bases, and each group must select a face
/// whose weight cone has dimension `r(M) - 1`.
pub fn bergman_fan(m: &Matroid) -> Result<BergmanFan> {
    m.require_fan_hypotheses()?;
    let size = m.size();
    let lattice = LatticeOfFlats::new(m);
    let chains = lattice.maximal_chains()?;

    let data: Vec<ChainData> = chains
        .into_par_iter()
        .map(|chain| {
            let partition = chain_partition(&lattice, &chain)?;
            let bases = transversal_bases(m, &partition)?;
            let face = degeneration_matroid(m, &chain_interior_point(size, &chain))?;
            if face.bases() != bases.as_slice() {
                return Err(Error::Inconsistent(format!("chain {chain} selects a face other than its transversal bases")));
            }
            Ok(ChainData { chain, partition, bases })
        })
        .collect::<Result<_>>()?;

    let mut groups: Vec<Vec<ChainData>> = Vec::new();
    let mut by_bases: HashMap<Vec<Subset>, usize> = HashMap::new();
    for d in data {
        match by_bases.get(&d.bases) {
            Some(&g) => groups[g].push(d),
            None => {
                by_bases.insert(d.bases.clone(), groups.len());
                groups.push(vec![d]);
            }
        }
    }

    let mut ray_cache: BTreeMap<Subset, bool> = BTreeMap::new();
    let mut is_ray = |f: Subset| -> Result<bool> {
        if let Some(&r) = ray_cache.get(&f) {
            return Ok(r);
        }
        let r = groebner_cone_dim(m, &QuotientVector::indicator(size, f))? == 1;
        ray_cache.insert(f, r);
        Ok(r)
    };

    let ground = m.ground_set();
    let mut cones = Vec::with_capacity(groups.len());
    for group in groups {
        let block_set = group[0].partition.block_set();
        if group.iter().any(|d| d.partition.block_set() != block_set) {
            return Err(Error::Inconsistent("chains of one Bergman cone have different block families".into()));
        }
        let member_chains: Vec<ChainOfFlats> = group.iter().map(|d| d.chain.clone()).collect();
        let mut flats: Vec<Subset> = member_chains.iter().flat_map(|c| c.flats().iter().copied()).filter(|&f| f != ground).collect();
        flats.sort_by_key(|&f| lattice.index_of(f));
        flats.dedup();
        let generators: Vec<QuotientVector> = flats.iter().map(|&f| QuotientVector::indicator(size, f)).collect();
        let span = SpanCanonicalForm::of(size, &generators);
        let mut ray_flats = Vec::new();
        for f in flats {
            if is_ray(f)? {
                ray_flats.push(f);
            }
        }
        let interior = chain_interior_point(size, &member_chains[0]);
        if groebner_cone_dim(m, &interior)? + 1 != m.rank() || span.dim() != m.rank() {
            return Err(Error::Inconsistent(format!("Bergman cone through {} is not of full dimension", member_chains[0])));
        }
        cones.push(BergmanCone {
            partitions: group.iter().map(|d| d.partition.clone()).collect(),
            transversal_bases: group[0].bases.clone(),
            member_chains,
            block_set,
            ray_flats,
            span,
        });
    }

    let mut ray_flats: Vec<Subset> = cones.iter().flat_map(|c| c.ray_flats.iter().copied()).collect();
    ray_flats.sort_by_key(|&f| lattice.index_of(f));
    ray_flats.dedup();
    Ok(BergmanFan { size, lineality_dim: size - polytope_dim(m)?, ray_flats, cones })
}
