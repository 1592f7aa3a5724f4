//! Tropical linear spaces, chain cones and matroid polytopes.
//!
//! Vectors live in `R^{n+1} / R·1`. A [`QuotientVector`] is stored by the
//! representative whose coordinate 0 vanishes; every test in this module is
//! invariant under adding multiples of `1`, so the choice never leaks.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{ChainOfFlats, LatticeOfFlats};
use crate::linalg::rank_of;
use crate::matroid::Matroid;
use crate::subset::Subset;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuotientVector(Vec<BigRational>);

impl QuotientVector {
    /// Normalizes so that coordinate 0 is zero.
    pub fn new(mut coords: Vec<BigRational>) -> Self {
        if let Some(first) = coords.first().cloned() {
            for c in coords.iter_mut() {
                *c -= &first;
            }
        }
        QuotientVector(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn from_bigints(coords: &[BigInt]) -> Self {
        Self::new(coords.iter().map(|x| BigRational::from_integer(x.clone())).collect())
    }

    /// The class of `v_F = Σ_{i ∈ F} e_i`.
    pub fn indicator(size: usize, f: Subset) -> Self {
        Self::from_ints(&(0..size).map(|i| f.contains(i) as i64).collect::<Vec<_>>())
    }

    pub fn zero(size: usize) -> Self {
        QuotientVector(vec![BigRational::zero(); size])
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &QuotientVector) -> QuotientVector {
        QuotientVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: &BigRational) -> QuotientVector {
        QuotientVector(self.0.iter().map(|a| a * c).collect())
    }

    /// Smallest integer vector on the same ray: denominators cleared, then
    /// divided by the gcd of the entries. The direction is kept.
    pub fn primitive(&self) -> Vec<BigInt> {
        let lcm = self.0.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            ints
        } else {
            ints.into_iter().map(|x| x / &g).collect()
        }
    }

    /// Integer coordinates, if every coordinate is integral.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|x| if x.is_integer() { i64::try_from(x.to_integer()).ok() } else { None }).collect()
    }
}

impl fmt::Debug for QuotientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QuotientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(&crate::linalg::format_rational(x))?;
        }
        f.write_str(")")
    }
}

impl Serialize for QuotientVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(crate::linalg::format_rational))
    }
}

/// Circuit-based membership oracle for `trop(M)`.
#[derive(Clone, Debug)]
pub struct TropicalLinearSpace {
    size: usize,
    circuits: Vec<Subset>,
}

impl TropicalLinearSpace {
    pub fn new(m: &Matroid) -> Result<Self> {
        m.require_loopfree()?;
        Ok(TropicalLinearSpace { size: m.size(), circuits: m.circuits() })
    }

    /// First circuit on which the minimum of `v` is attained only once.
    pub fn violated_circuit(&self, v: &QuotientVector) -> Option<Subset> {
        assert_eq!(v.len(), self.size, "vector length must match the ground set");
        self.circuits.iter().copied().find(|c| {
            let min = c.iter().map(|i| &v.0[i]).min().expect("circuits are nonempty");
            c.iter().filter(|&i| &v.0[i] == min).count() < 2
        })
    }

    /// `v ∈ trop(M)` iff on every circuit the minimum is attained at least twice.
    pub fn contains(&self, v: &QuotientVector) -> bool {
        self.violated_circuit(v).is_none()
    }
}

pub fn trop_contains(m: &Matroid, v: &QuotientVector) -> Result<bool> {
    check_len(m, v)?;
    Ok(TropicalLinearSpace::new(m)?.contains(v))
}

fn check_len(m: &Matroid, v: &QuotientVector) -> Result<()> {
    if v.len() != m.size() {
        return Err(Error::DimensionMismatch(format!("vector of length {} for a ground set of size {}", v.len(), m.size())));
    }
    Ok(())
}

/// Ordered blocks `I^1, ..., I^k` of a chain decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Partition(Vec<Subset>);

impl Partition {
    pub fn new(blocks: Vec<Subset>) -> Result<Self> {
        let mut seen = Subset::EMPTY;
        for &b in &blocks {
            if b.is_empty() {
                return Err(Error::MalformedPartition("empty block".into()));
            }
            if !b.is_disjoint(seen) {
                return Err(Error::MalformedPartition(format!("block {b} overlaps an earlier block")));
            }
            seen = seen.union(b);
        }
        Ok(Partition(blocks))
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.0
    }

    /// The blocks as an unordered family (sorted).
    pub fn block_set(&self) -> Vec<Subset> {
        let mut v = self.0.clone();
        v.sort();
        v
    }

    pub fn union(&self) -> Subset {
        self.0.iter().fold(Subset::EMPTY, |a, &b| a.union(b))
    }
}

/// Blocks `F_1, F_2 \ F_1, ..., F_k \ F_{k-1}` and, if `F_k ≠ E`, the
/// complement `E \ F_k`. For a maximal chain this is the decomposition of
/// the ground set into difference blocks.
fn blocks_of(chain: &ChainOfFlats, ground: Subset) -> Vec<Subset> {
    let mut prev = Subset::EMPTY;
    let mut blocks = Vec::with_capacity(chain.len() + 1);
    for &f in chain.flats() {
        blocks.push(f.difference(prev));
        prev = f;
    }
    if prev != ground {
        blocks.push(ground.difference(prev));
    }
    blocks
}

/// Difference blocks of a maximal chain of flats.
pub fn chain_partition(lattice: &LatticeOfFlats, chain: &ChainOfFlats) -> Result<Partition> {
    if !chain.is_maximal_in(lattice) {
        return Err(Error::NotMaximalChain(chain.to_string()));
    }
    Partition::new(blocks_of(chain, Subset::full(lattice.ground_size())))
}

/// Bases meeting every block exactly once.
pub fn transversal_bases(m: &Matroid, part: &Partition) -> Result<Vec<Subset>> {
    if part.union() != m.ground_set() {
        return Err(Error::MalformedPartition("blocks do not cover the ground set".into()));
    }
    if part.blocks().len() != m.rank() {
        return Err(Error::MalformedPartition(format!("{} blocks for a matroid of rank {}", part.blocks().len(), m.rank())));
    }
    Ok(m.bases().iter().copied().filter(|b| part.blocks().iter().all(|&blk| b.intersection(blk).len() == 1)).collect())
}

/// Membership in `cone(v_F : F ∈ chain) + R·1`.
///
/// Writing `v = Σ λ_j v_{F_j} + μ·1`, the value of `v` on block `I^j` is
/// `μ + Σ_{i ≥ j} λ_i`. So `v` is in the cone iff it is constant on every
/// block and the block values are weakly decreasing; `λ_j` is the drop
/// between consecutive blocks.
pub fn chain_cone_contains(chain: &ChainOfFlats, v: &QuotientVector) -> bool {
    let blocks = blocks_of(chain, Subset::full(v.len()));
    let mut prev: Option<&BigRational> = None;
    for b in blocks {
        let mut it = b.iter();
        let value = &v.0[it.next().expect("blocks are nonempty")];
        if it.any(|i| &v.0[i] != value) {
            return false;
        }
        if prev.is_some_and(|p| p < value) {
            return false;
        }
        prev = Some(value);
    }
    true
}

/// Generators `v_F` of a chain cone, `E` itself omitted (it spans the lineality).
pub fn chain_rays(size: usize, chain: &ChainOfFlats) -> Vec<QuotientVector> {
    let ground = Subset::full(size);
    chain.flats().iter().filter(|&&f| f != ground).map(|&f| QuotientVector::indicator(size, f)).collect()
}

/// The sum of the generators of a chain cone. Its block values strictly
/// decrease along the chain, so it lies in the relative interior.
pub fn chain_interior_point(size: usize, chain: &ChainOfFlats) -> QuotientVector {
    chain_rays(size, chain).iter().fold(QuotientVector::zero(size), |acc, r| acc.add(r))
}

/// The matroid whose bases maximize `⟨w, e_B⟩`: the face of the matroid
/// polytope selected by `w`.
pub fn degeneration_matroid(m: &Matroid, w: &QuotientVector) -> Result<Matroid> {
    check_len(m, w)?;
    let weight = |b: &Subset| b.iter().fold(BigRational::zero(), |acc, i| acc + &w.0[i]);
    let best = m.bases().iter().map(weight).max().expect("a matroid has a basis");
    let bases: Vec<Subset> = m.bases().iter().copied().filter(|b| weight(b) == best).collect();
    Matroid::from_bases(m.ground(), bases).map_err(|e| Error::Inconsistent(format!("degeneration is not a matroid: {e}")))
}

/// Incidence vectors `e_B` of the bases, in basis order.
pub fn matroid_polytope_vertices(m: &Matroid) -> Vec<Vec<u8>> {
    m.bases().iter().map(|b| (0..m.size()).map(|i| b.contains(i) as u8).collect()).collect()
}

/// Dimension of the affine span of the basis incidence vectors.
pub(crate) fn affine_dimension(m: &Matroid) -> usize {
    let bases = m.bases();
    let base = bases[0];
    let diffs: Vec<Vec<BigRational>> = bases[1..]
        .iter()
        .map(|b| (0..m.size()).map(|i| BigRational::from_integer(BigInt::from(b.contains(i) as i64 - base.contains(i) as i64))).collect())
        .collect();
    rank_of(&diffs)
}

/// Dimension of the matroid polytope, checked against `n + 1 - κ(M)`.
pub fn polytope_dim(m: &Matroid) -> Result<usize> {
    let dim = affine_dimension(m);
    let expected = m.size() - m.num_components();
    if dim != expected {
        return Err(Error::Inconsistent(format!("polytope dimension {dim} differs from n+1-κ = {expected}")));
    }
    Ok(dim)
}

/// Dimension, modulo `R·1`, of the closed cone of weights selecting the same
/// face of the matroid polytope as `w`: the ambient dimension minus the face
/// dimension, minus one for the quotient.
pub fn groebner_cone_dim(m: &Matroid, w: &QuotientVector) -> Result<usize> {
    let face = degeneration_matroid(m, w)?;
    Ok(m.size() - 1 - affine_dimension(&face))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn s<const N: usize>(e: [usize; N]) -> Subset {
        Subset::from(e)
    }

    fn e(i: usize, n: usize, sign: i64) -> QuotientVector {
        let mut v = vec![0; n];
        v[i] = sign;
        QuotientVector::from_ints(&v)
    }

    #[test]
    fn quotient_normalization() {
        let v = QuotientVector::from_ints(&[2, 0, 0, 0, 0, 1]);
        assert_eq!(v, QuotientVector::from_ints(&[0, -2, -2, -2, -2, -1]));
        assert_eq!(QuotientVector::from_ints(&[3, 3, 3]), QuotientVector::zero(3));
        assert_eq!(QuotientVector::from_ints(&[0, 2, 4]).primitive(), vec![BigInt::from(0), 1.into(), 2.into()]);
        assert_eq!(QuotientVector::indicator(3, s([0])).primitive(), vec![BigInt::from(0), (-1).into(), (-1).into()]);
    }

    #[test]
    fn trop_membership_a3() {
        let m = corpus::m_a3();
        assert!(trop_contains(&m, &QuotientVector::zero(6)).unwrap());
        assert!(trop_contains(&m, &e(0, 6, 1)).unwrap());
        assert!(!trop_contains(&m, &e(0, 6, -1)).unwrap());
        let t = TropicalLinearSpace::new(&m).unwrap();
        assert_eq!(t.violated_circuit(&e(0, 6, -1)), Some(s([0, 1, 3])));
        assert!(trop_contains(&m, &QuotientVector::zero(5)).is_err());
    }

    #[test]
    fn trop_requires_loopfree() {
        let loopy = Matroid::from_bases(crate::subset::GroundSet::new(2).unwrap(), [s([0])]).unwrap();
        assert_eq!(trop_contains(&loopy, &QuotientVector::zero(2)), Err(Error::Loops(s([1]))));
    }

    #[test]
    fn partitions_of_chains() {
        let m = corpus::m_a3();
        let lat = LatticeOfFlats::new(&m);
        let e = m.ground_set();
        let c1 = ChainOfFlats::new(&lat, vec![s([0]), s([0, 5]), e]).unwrap();
        let c2 = ChainOfFlats::new(&lat, vec![s([5]), s([0, 5]), e]).unwrap();
        assert_eq!(chain_partition(&lat, &c1).unwrap().blocks(), &[s([0]), s([5]), s([1, 2, 3, 4])]);
        assert_eq!(chain_partition(&lat, &c2).unwrap().blocks(), &[s([5]), s([0]), s([1, 2, 3, 4])]);
        let short = ChainOfFlats::new(&lat, vec![s([0]), e]).unwrap();
        assert!(matches!(chain_partition(&lat, &short), Err(Error::NotMaximalChain(_))));

        let u = Matroid::uniform(2, 3).unwrap();
        let lat = LatticeOfFlats::new(&u);
        let c = ChainOfFlats::new(&lat, vec![s([0]), u.ground_set()]).unwrap();
        assert_eq!(chain_partition(&lat, &c).unwrap().blocks(), &[s([0]), s([1, 2])]);
    }

    #[test]
    fn transversals() {
        let m = corpus::m_a3();
        let p = Partition::new(vec![s([0]), s([5]), s([1, 2, 3, 4])]).unwrap();
        let t = transversal_bases(&m, &p).unwrap();
        assert_eq!(t, vec![s([0, 1, 5]), s([0, 2, 5]), s([0, 3, 5]), s([0, 4, 5])]);
        let q = Partition::new(vec![s([5]), s([0]), s([1, 2, 3, 4])]).unwrap();
        assert_eq!(transversal_bases(&m, &q).unwrap(), t);

        let free = Matroid::uniform(3, 3).unwrap();
        let p = Partition::new(vec![s([0]), s([1]), s([2])]).unwrap();
        assert_eq!(transversal_bases(&free, &p).unwrap(), vec![s([0, 1, 2])]);

        assert!(Partition::new(vec![s([0]), s([0, 1])]).is_err());
        assert!(transversal_bases(&m, &Partition::new(vec![s([0, 1, 2, 3, 4, 5])]).unwrap()).is_err());
    }

    #[test]
    fn chain_cone_membership() {
        let m = corpus::m_a3();
        let lat = LatticeOfFlats::new(&m);
        let c = ChainOfFlats::new(&lat, vec![s([0]), s([0, 5]), m.ground_set()]).unwrap();
        assert!(chain_cone_contains(&c, &QuotientVector::indicator(6, s([0]))));
        assert!(chain_cone_contains(&c, &QuotientVector::from_ints(&[2, 0, 0, 0, 0, 1])));
        assert!(!chain_cone_contains(&c, &e(1, 6, 1)));
        assert!(!chain_cone_contains(&c, &QuotientVector::from_ints(&[0, 0, 0, 0, 0, 1])));
        assert_eq!(chain_interior_point(6, &c), QuotientVector::from_ints(&[0, -2, -2, -2, -2, -1]));
    }

    #[test]
    fn degenerations_of_a3() {
        let m = corpus::m_a3();
        assert_eq!(degeneration_matroid(&m, &QuotientVector::zero(6)).unwrap(), m);
        let up = degeneration_matroid(&m, &e(0, 6, 1)).unwrap();
        assert!(up.bases().iter().all(|b| b.contains(0)));
        assert!(up.is_loopfree());
        let down = degeneration_matroid(&m, &e(0, 6, -1)).unwrap();
        assert!(down.bases().iter().all(|b| !b.contains(0)));
        assert_eq!(down.loops(), s([0]));
    }

    #[test]
    fn polytope_dimensions() {
        let u12 = Matroid::uniform(1, 2).unwrap();
        assert_eq!(matroid_polytope_vertices(&u12), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(polytope_dim(&u12).unwrap(), 1);
        assert_eq!(polytope_dim(&corpus::m_a3()).unwrap(), 5);
        assert_eq!(polytope_dim(&corpus::d22()).unwrap(), 2);
    }

    #[test]
    fn groebner_dimensions() {
        let m = corpus::m_a3();
        assert_eq!(groebner_cone_dim(&m, &QuotientVector::zero(6)).unwrap(), 0);
        assert_eq!(groebner_cone_dim(&m, &QuotientVector::indicator(6, s([0]))).unwrap(), 1);
        // v_{05} = v_0 + v_5 lies inside a 2-dimensional cone
        assert_eq!(groebner_cone_dim(&m, &QuotientVector::indicator(6, s([0, 5]))).unwrap(), 2);
    }
}
