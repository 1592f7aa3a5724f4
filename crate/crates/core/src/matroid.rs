//! Matroids on `{0, ..., n}` given by their basis family.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::subset::{GroundSet, Limits, Subset};

/// A matroid stored as its (lexicographically sorted) family of bases.
///
/// Values are immutable once built. Minors relabel their ground set to
/// `0..k` and keep a map back to the labels of the matroid they came from
/// (see [`Matroid::labels`]).
#[derive(Clone, Debug)]
pub struct Matroid {
    ground: GroundSet,
    rank: usize,
    bases: Vec<Subset>,
    labels: Vec<usize>,
    matrix_rows: Option<usize>,
}

/// Equality compares ground-set size and basis family only; labels and
/// realization metadata are ignored.
impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.bases == other.bases
    }
}

impl Eq for Matroid {}

impl Matroid {
    fn from_sorted_bases(ground: GroundSet, bases: Vec<Subset>) -> Self {
        debug_assert!(!bases.is_empty());
        debug_assert!(bases.windows(2).all(|w| w[0] < w[1]));
        Matroid {
            ground,
            rank: bases[0].len(),
            labels: (0..ground.size()).collect(),
            bases,
            matrix_rows: None,
        }
    }

    /// The column matroid of `mat`: column `i` is element `i`, and a set of
    /// columns is independent iff it is linearly independent.
    pub fn from_matrix(mat: &ExactMatrix) -> Result<Self> {
        Self::from_matrix_with(mat, Limits::default())
    }

    pub fn from_matrix_with(mat: &ExactMatrix, limits: Limits) -> Result<Self> {
        if mat.ncols() == 0 {
            return Err(Error::EmptyMatrix);
        }
        let ground = GroundSet::with_limits(mat.ncols(), limits)?;
        let (_, bases) = mat.column_bases();
        let mut m = Self::from_sorted_bases(ground, bases);
        m.matrix_rows = Some(mat.nrows());
        Ok(m)
    }

    /// Builds a matroid from an explicit basis family after checking the
    /// exchange axiom on every pair of bases.
    pub fn from_bases(ground: GroundSet, bases: impl IntoIterator<Item = Subset>) -> Result<Self> {
        let bases: BTreeSet<Subset> = bases.into_iter().collect();
        let first = *bases.iter().next().ok_or(Error::NoBases)?;
        for &b in &bases {
            ground.check(b)?;
            if b.len() != first.len() {
                return Err(Error::UnequalBasisSizes(first.len(), b.len()));
            }
        }
        let bases: Vec<Subset> = bases.into_iter().collect();
        check_exchange(&bases)?;
        Ok(Self::from_sorted_bases(ground, bases))
    }

    /// Builds a matroid from its circuits. The family must be an antichain of
    /// nonempty sets satisfying circuit elimination; the bases are the
    /// maximal sets containing no listed circuit.
    pub fn from_circuits(ground: GroundSet, circuits: impl IntoIterator<Item = Subset>) -> Result<Self> {
        let circuits: Vec<Subset> = circuits.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        for &c in &circuits {
            ground.check(c)?;
            if c.is_empty() {
                return Err(Error::InvalidArgument("the empty set cannot be a circuit".into()));
            }
        }
        for (i, &a) in circuits.iter().enumerate() {
            for &b in &circuits[i + 1..] {
                if a.is_subset(b) || b.is_subset(a) {
                    return Err(Error::NotAntichain(a, b));
                }
            }
        }
        for (i, &a) in circuits.iter().enumerate() {
            for &b in &circuits[i + 1..] {
                for e in a.intersection(b).iter() {
                    let rest = a.union(b).without(e);
                    if !circuits.iter().any(|c| c.is_subset(rest)) {
                        return Err(Error::CircuitElimination { first: a, second: b, element: e });
                    }
                }
            }
        }

        let n = ground.size();
        let dependent = |s: Subset, e: usize| circuits.iter().any(|c| c.contains(e) && c.is_subset(s));
        // greedy gives the rank because the circuit axioms hold
        let mut greedy = Subset::EMPTY;
        for e in 0..n {
            if !dependent(greedy.with(e), e) {
                greedy.insert(e);
            }
        }
        let rank = greedy.len();

        fn rec(n: usize, rank: usize, next: usize, cur: Subset, dep: &dyn Fn(Subset, usize) -> bool, out: &mut Vec<Subset>) {
            if cur.len() == rank {
                out.push(cur);
                return;
            }
            if n - next < rank - cur.len() {
                return;
            }
            if !dep(cur.with(next), next) {
                rec(n, rank, next + 1, cur.with(next), dep, out);
            }
            rec(n, rank, next + 1, cur, dep, out);
        }
        let mut bases = Vec::new();
        rec(n, rank, 0, Subset::EMPTY, &dependent, &mut bases);
        check_exchange(&bases)?;
        Ok(Self::from_sorted_bases(ground, bases))
    }

    /// The uniform matroid `U_{r,n}`: every `r`-subset of `n` elements is a basis.
    pub fn uniform(r: usize, n: usize) -> Result<Self> {
        Self::uniform_with(r, n, Limits::default())
    }

    pub fn uniform_with(r: usize, n: usize, limits: Limits) -> Result<Self> {
        if n == 0 || r > n {
            return Err(Error::InvalidArgument(format!("uniform matroid needs 0 <= r <= n and n >= 1 (got r = {r}, n = {n})")));
        }
        let ground = GroundSet::with_limits(n, limits)?;
        Ok(Self::from_sorted_bases(ground, Subset::k_subsets(n, r)))
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    /// Number of elements `n + 1`.
    pub fn size(&self) -> usize {
        self.ground.size()
    }

    pub fn ground_set(&self) -> Subset {
        self.ground.full()
    }

    /// `r(M)`, the common size of the bases.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &[Subset] {
        &self.bases
    }

    pub fn is_basis(&self, s: Subset) -> bool {
        self.bases.binary_search(&s).is_ok()
    }

    /// Labels of the elements in the matroid this one was derived from
    /// (identity for matroids that are not minors).
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// `false` when built from a matrix without full row rank (a
    /// non-essential arrangement). Accepted here, refused by the fan code.
    pub fn is_essential(&self) -> bool {
        self.matrix_rows.is_none_or(|rows| rows == self.rank)
    }

    /// Number of rows of the realizing matrix, when built from one.
    pub fn matrix_rows(&self) -> Option<usize> {
        self.matrix_rows
    }

    pub(crate) fn rank_unchecked(&self, s: Subset) -> usize {
        let mut best = 0;
        for b in &self.bases {
            best = best.max(b.intersection(s).len());
            if best == self.rank {
                break;
            }
        }
        best
    }

    /// Rank of a subset: the largest intersection with a basis.
    pub fn rank_of(&self, s: Subset) -> Result<usize> {
        self.ground.check(s)?;
        Ok(self.rank_unchecked(s))
    }

    pub fn is_independent(&self, s: Subset) -> Result<bool> {
        Ok(self.rank_of(s)? == s.len())
    }

    pub(crate) fn closure_unchecked(&self, s: Subset) -> Subset {
        let r = self.rank_unchecked(s);
        let mut cl = s;
        for e in 0..self.size() {
            if !s.contains(e) && self.rank_unchecked(s.with(e)) == r {
                cl.insert(e);
            }
        }
        cl
    }

    /// `{e : r(S ∪ e) = r(S)}`.
    pub fn closure(&self, s: Subset) -> Result<Subset> {
        self.ground.check(s)?;
        Ok(self.closure_unchecked(s))
    }

    pub fn is_flat(&self, s: Subset) -> Result<bool> {
        Ok(self.closure(s)? == s)
    }

    /// All circuits in lexicographic order. Every circuit is the fundamental
    /// circuit of some basis and outside element, so those are enumerated.
    pub fn circuits(&self) -> Vec<Subset> {
        let mut out = BTreeSet::new();
        for &b in &self.bases {
            for e in self.ground_set().difference(b).iter() {
                let mut c = Subset::singleton(e);
                for x in b.iter() {
                    if self.is_basis(b.without(x).with(e)) {
                        c.insert(x);
                    }
                }
                out.insert(c);
            }
        }
        out.into_iter().collect()
    }

    /// Elements lying in no basis.
    pub fn loops(&self) -> Subset {
        let covered = self.bases.iter().fold(Subset::EMPTY, |acc, &b| acc.union(b));
        self.ground_set().difference(covered)
    }

    pub fn is_loopfree(&self) -> bool {
        self.loops().is_empty()
    }

    pub(crate) fn require_loopfree(&self) -> Result<()> {
        let loops = self.loops();
        if loops.is_empty() {
            Ok(())
        } else {
            Err(Error::Loops(loops))
        }
    }

    /// Restriction `M|X` on `0..|X|`, element `i` being the `i`-th smallest member of `X`.
    pub fn restriction(&self, x: Subset) -> Result<Matroid> {
        self.ground.check(x)?;
        let rx = self.rank_unchecked(x);
        let members = x.to_vec();
        let bases: BTreeSet<Subset> = self
            .bases
            .iter()
            .map(|b| b.intersection(x))
            .filter(|b| b.len() == rx)
            .map(|b| b.pull_back(&members))
            .collect();
        Ok(self.minor(members, bases))
    }

    /// Contraction `M/X` on the relabeled complement `E \ X`.
    pub fn contraction(&self, x: Subset) -> Result<Matroid> {
        self.ground.check(x)?;
        let rx = self.rank_unchecked(x);
        let members = self.ground_set().difference(x).to_vec();
        let bases: BTreeSet<Subset> = self
            .bases
            .iter()
            .filter(|b| b.intersection(x).len() == rx)
            .map(|b| b.difference(x).pull_back(&members))
            .collect();
        Ok(self.minor(members, bases))
    }

    fn minor(&self, members: Vec<usize>, bases: BTreeSet<Subset>) -> Matroid {
        let ground = GroundSet::unchecked(members.len());
        let mut m = Self::from_sorted_bases(ground, bases.into_iter().collect());
        m.labels = members.iter().map(|&i| self.labels[i]).collect();
        m
    }

    /// The interval minor `M[F, G] = (M/F)|(G \ F)` for flats `F ⊆ G`.
    /// Its rank is `r(G) - r(F)`.
    pub fn minor_interval(&self, f: Subset, g: Subset) -> Result<Matroid> {
        for s in [f, g] {
            if !self.is_flat(s)? {
                return Err(Error::NotFlat(s));
            }
        }
        if !f.is_subset(g) {
            return Err(Error::NotNested(f, g));
        }
        let contracted = self.contraction(f)?;
        let rest = g.difference(f).pull_back(&self.ground_set().difference(f).to_vec());
        let minor = contracted.restriction(rest)?;
        let expected = self.rank_unchecked(g) - self.rank_unchecked(f);
        if minor.rank() != expected {
            return Err(Error::Inconsistent(format!("M[{f},{g}] has rank {} instead of {expected}", minor.rank())));
        }
        Ok(minor)
    }

    /// Classes of the relation "lie in a common circuit", ordered by their
    /// smallest element. Loops and coloops are singleton classes.
    pub fn connected_components(&self) -> Vec<Subset> {
        let n = self.size();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for c in self.circuits() {
            let mut it = c.iter();
            let Some(first) = it.next() else { continue };
            for e in it {
                let (a, b) = (find(&mut parent, first), find(&mut parent, e));
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut classes: Vec<Subset> = vec![Subset::EMPTY; n];
        for e in 0..n {
            let r = find(&mut parent, e);
            classes[r].insert(e);
        }
        classes.retain(|c| !c.is_empty());
        classes.sort();
        classes
    }

    /// `κ(M)`.
    pub fn num_components(&self) -> usize {
        self.connected_components().len()
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() <= 1
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        match self.num_components() {
            0 | 1 => Ok(()),
            k => Err(Error::Disconnected(k)),
        }
    }

    /// Hypotheses shared by the Bergman fan constructions: loopfree,
    /// connected and (for matrix input) essential.
    pub(crate) fn require_fan_hypotheses(&self) -> Result<()> {
        self.require_loopfree()?;
        self.require_connected()?;
        match self.matrix_rows {
            Some(rows) if rows != self.rank => Err(Error::NotEssential { rank: self.rank, rows }),
            _ => Ok(()),
        }
    }
}

fn check_exchange(bases: &[Subset]) -> Result<()> {
    let set: HashSet<Subset> = bases.iter().copied().collect();
    for &b1 in bases {
        for &b2 in bases {
            for x in b1.difference(b2).iter() {
                let ok = b2.difference(b1).iter().any(|y| set.contains(&b1.without(x).with(y)));
                if !ok {
                    return Err(Error::ExchangeViolation { first: b1, second: b2, element: x });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn s<const N: usize>(e: [usize; N]) -> Subset {
        Subset::from(e)
    }

    #[test]
    fn from_bases_examples() {
        let g3 = GroundSet::new(3).unwrap();
        let u23 = Matroid::from_bases(g3, [s([0, 1]), s([0, 2]), s([1, 2])]).unwrap();
        assert_eq!(u23, Matroid::uniform(2, 3).unwrap());

        let m = Matroid::from_bases(GroundSet::new(2).unwrap(), [s([0])]).unwrap();
        assert_eq!(m.loops(), s([1]));
        assert!(!m.is_loopfree());

        assert_eq!(Matroid::from_bases(g3, [s([0, 1]), s([2])]), Err(Error::UnequalBasisSizes(2, 1)));
        assert_eq!(Matroid::from_bases(g3, []), Err(Error::NoBases));
        assert!(Matroid::from_bases(g3, [s([0, 3])]).is_err());
    }

    #[test]
    fn exchange_violation_reported() {
        let g = GroundSet::new(4).unwrap();
        let err = Matroid::from_bases(g, [s([0, 1]), s([2, 3])]).unwrap_err();
        assert!(matches!(err, Error::ExchangeViolation { .. }));
    }

    #[test]
    fn from_circuits_examples() {
        let free = Matroid::from_circuits(GroundSet::new(3).unwrap(), []).unwrap();
        assert_eq!(free.bases(), &[s([0, 1, 2])]);

        let loops = Matroid::from_circuits(GroundSet::new(2).unwrap(), [s([0]), s([1])]).unwrap();
        assert_eq!(loops.bases(), &[Subset::EMPTY]);
        assert_eq!(loops.rank(), 0);

        let g = GroundSet::new(4).unwrap();
        assert!(matches!(Matroid::from_circuits(g, [s([0, 1]), s([0, 1, 2])]), Err(Error::NotAntichain(..))));
        assert!(matches!(
            Matroid::from_circuits(g, [s([0, 1]), s([1, 2])]),
            Err(Error::CircuitElimination { .. })
        ));
    }

    #[test]
    fn a3_rank_and_closure() {
        let m = corpus::m_a3();
        assert_eq!(m.rank_of(s([0, 1, 3])).unwrap(), 2);
        assert_eq!(m.rank_of(Subset::EMPTY).unwrap(), 0);
        assert_eq!(m.rank_of(m.ground_set()).unwrap(), 3);
        assert_eq!(m.closure(s([0, 1])).unwrap(), s([0, 1, 3]));
        assert_eq!(m.closure(Subset::EMPTY).unwrap(), Subset::EMPTY);
        assert_eq!(m.closure(s([0, 1, 2])).unwrap(), m.ground_set());
        assert!(m.rank_of(s([6])).is_err());
    }

    #[test]
    fn circuits_of_corpus() {
        // four triangles and three 4-cycles of K4
        let a3 = corpus::m_a3().circuits();
        assert_eq!(a3.iter().filter(|c| c.len() == 3).copied().collect::<Vec<_>>(), vec![s([0, 1, 3]), s([0, 2, 4]), s([1, 2, 5]), s([3, 4, 5])]);
        assert_eq!(a3.iter().filter(|c| c.len() == 4).copied().collect::<Vec<_>>(), vec![s([0, 1, 4, 5]), s([0, 2, 3, 5]), s([1, 2, 3, 4])]);
        assert!(Matroid::uniform(3, 3).unwrap().circuits().is_empty());
        for m in [corpus::m_a3(), corpus::n5(), corpus::f7(), corpus::d22()] {
            assert_eq!(m.circuits(), brute_force_circuits(&m));
        }
    }

    fn brute_force_circuits(m: &Matroid) -> Vec<Subset> {
        let indep = |x: Subset| m.bases().iter().any(|b| x.is_subset(*b));
        let mut out: Vec<Subset> = (0u64..1 << m.size())
            .map(Subset::from_bits)
            .filter(|&x| !indep(x) && x.iter().all(|e| indep(x.without(e))))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn restriction_examples() {
        let m = corpus::m_a3();
        let r = m.restriction(s([0, 1, 3])).unwrap();
        assert_eq!((r.size(), r.rank()), (3, 2));
        assert_eq!(r.circuits(), vec![s([0, 1, 2])]);
        assert_eq!(r.labels(), &[0, 1, 3]);
        assert_eq!(m.restriction(m.ground_set()).unwrap(), m);
        let empty = m.restriction(Subset::EMPTY).unwrap();
        assert_eq!((empty.size(), empty.rank()), (0, 0));
    }

    #[test]
    fn contraction_examples() {
        let n5 = corpus::n5();
        let c = n5.contraction(s([0])).unwrap();
        assert_eq!((c.size(), c.rank()), (4, 2));
        assert_eq!(c.labels(), &[1, 2, 3, 4]);
        assert_eq!(c.circuits(), vec![s([0, 1]), s([2, 3])]);
        assert_eq!(c.connected_components(), vec![s([0, 1]), s([2, 3])]);
        assert_eq!(n5.contraction(Subset::EMPTY).unwrap(), n5);
        let m = corpus::m_a3().contraction(s([0, 1])).unwrap();
        assert_eq!((m.size(), m.rank()), (4, 1));
    }

    #[test]
    fn interval_minors() {
        let m = corpus::m_a3();
        assert_eq!(m.minor_interval(Subset::EMPTY, m.ground_set()).unwrap(), m);
        let n5 = corpus::n5();
        assert_eq!(n5.minor_interval(s([0]), n5.ground_set()).unwrap(), n5.contraction(s([0])).unwrap());
        assert_eq!(m.minor_interval(s([0, 1]), m.ground_set()), Err(Error::NotFlat(s([0, 1]))));
        assert_eq!(m.minor_interval(s([0, 1, 3]), s([0, 2, 4])), Err(Error::NotNested(s([0, 1, 3]), s([0, 2, 4]))));

        let f7 = corpus::f7();
        let line = f7.minor_interval(s([0]), f7.ground_set()).unwrap();
        // the point's contraction: three parallel classes of size two on a line
        assert_eq!((line.size(), line.rank()), (6, 2));
        assert!(line.is_connected());
        let classes: BTreeSet<Subset> = (0..6).map(|e| line.closure(Subset::singleton(e)).unwrap()).collect();
        assert_eq!(classes.len(), 3);
        let reps: Subset = classes.iter().map(|c| c.first().unwrap()).collect();
        assert_eq!(line.restriction(reps).unwrap(), crate::generators::pg(1, 2).unwrap());
    }

    #[test]
    fn components() {
        assert_eq!(corpus::m_a3().num_components(), 1);
        assert_eq!(corpus::d22().connected_components(), vec![s([0, 1]), s([2, 3])]);
        let loops = Matroid::from_bases(GroundSet::new(2).unwrap(), [s([0])]).unwrap();
        assert_eq!(loops.connected_components(), vec![s([0]), s([1])]);
    }

    #[test]
    fn loopfree_flags() {
        assert!(corpus::m_a3().is_loopfree());
        assert!(corpus::f7().is_loopfree());
    }

    #[test]
    fn non_essential_matrix_flagged() {
        let m = Matroid::from_matrix(&ExactMatrix::from_integers(&[vec![1, 0, 1], vec![2, 0, 2]]).unwrap()).unwrap();
        assert!(!m.is_essential());
        assert_eq!(m.rank(), 1);
        assert!(corpus::m_a3().is_essential());
    }

    #[test]
    fn matrix_errors() {
        assert_eq!(ExactMatrix::from_integers(&[]), Err(Error::EmptyMatrix));
        assert_eq!(ExactMatrix::from_integers(&[vec![]]), Err(Error::EmptyMatrix));
        let wide = ExactMatrix::from_integers(&[vec![1; 21]]).unwrap();
        assert_eq!(Matroid::from_matrix(&wide), Err(Error::CapExceeded { size: 21, cap: 20 }));
    }
}
