//! Instance checks of the structural statements about the fans: distinct
//! spans of Bergman cones, the connectivity criterion for `Σ_min = 𝔅`, agreement
//! of the two membership tests for `trop(M)`, and refinement of the Bergman
//! fan by the fine subdivision.
//!
//! Every failing report carries at least one [`Witness`], and every witness
//! can be replayed with [`Witness::replay`].

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::Result;
use crate::fan::{bergman_fan, chain_span, nested_fan, BergmanFan, SpanCanonicalForm};
use crate::lattice::{BuildingSet, ChainOfFlats, LatticeOfFlats};
use crate::matroid::Matroid;
use crate::subset::Subset;
use crate::tropical::{chain_cone_contains, chain_interior_point, chain_rays, degeneration_matroid, QuotientVector, TropicalLinearSpace};

pub const REPORT_SCHEMA: &str = "report/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Two cones with the same linear span, each given by a chain in it.
    SpanCollision { cones: [usize; 2], chains: [ChainOfFlats; 2] },
    /// `M|G` is connected but the minor `M[F, G]` is not.
    FlatPair { f: Subset, g: Subset, components: Vec<Subset> },
    ConeCountMismatch { nested: usize, bergman: usize },
    /// Two maximal nested-set cones whose interior points share a Bergman cone.
    ConeCollision { nested: [Vec<Subset>; 2], bergman_cone: usize },
    /// The circuit test and the fan tests disagree at `vector`.
    MembershipDisagreement { vector: QuotientVector, circuit: bool, fine: bool, bergman: bool },
    /// A maximal chain not contained in exactly its own Bergman cone.
    ChainContainment { chain: ChainOfFlats, member_of: Option<usize>, containing: Vec<usize> },
    /// The face selected by a member chain differs from the cone's bases.
    FaceMismatch { chain: ChainOfFlats, cone: usize },
    /// Generators of a maximal nested-set cone share no Bergman cone.
    NestedConeSplit { nested: Vec<Subset>, containing: Vec<Vec<usize>> },
    /// The image of `v_generator` is not in `trop(M)`.
    ImageOutsideTrop { source_cone: Option<usize>, generator: Subset, image: QuotientVector, violated_circuit: Subset },
    /// The generator images of a Bergman cone share no target cone.
    NoCommonCone { source_cone: usize, generators: Vec<Subset>, images: Vec<QuotientVector>, containing: Vec<Vec<usize>> },
}

impl Witness {
    /// Re-derives the failure from scratch, against a freshly built Bergman
    /// fan where one is needed.
    pub fn replay(&self, m: &Matroid) -> Result<bool> {
        match self {
            Witness::SpanCollision { .. } | Witness::FlatPair { .. } | Witness::ImageOutsideTrop { .. } => self.replay_inner(m, None),
            _ => self.replay_with(m, &bergman_fan(m)?),
        }
    }

    /// Re-derives the failure against a given Bergman fan.
    pub fn replay_with(&self, m: &Matroid, fan: &BergmanFan) -> Result<bool> {
        self.replay_inner(m, Some(fan))
    }

    fn replay_inner(&self, m: &Matroid, fan: Option<&BergmanFan>) -> Result<bool> {
        let size = m.size();
        let fan = || fan.expect("fan supplied");
        Ok(match self {
            Witness::SpanCollision { chains, .. } => chain_span(size, &chains[0]) == chain_span(size, &chains[1]),
            Witness::FlatPair { f, g, .. } => m.restriction(*g)?.is_connected() && !m.minor_interval(*f, *g)?.is_connected(),
            Witness::ConeCountMismatch { .. } => {
                let lattice = LatticeOfFlats::new(m);
                let gmin = BuildingSet::minimal(m, &lattice)?;
                let nested = nested_fan(m, &lattice, &gmin)?.cones.len();
                nested != fan().cones().len()
            }
            Witness::ConeCollision { nested, bergman_cone } => {
                nested.iter().all(|s| fan().containing_cones(&nested_interior_point(size, s)) == vec![*bergman_cone])
            }
            Witness::MembershipDisagreement { vector, .. } => {
                let circuit = TropicalLinearSpace::new(m)?.contains(vector);
                let lattice = LatticeOfFlats::new(m);
                let fine = lattice.maximal_chains()?.iter().any(|c| chain_cone_contains(c, vector));
                circuit != fine || circuit != fan().contains(vector)
            }
            Witness::ChainContainment { chain, .. } => {
                let fan = fan();
                let containing = cones_containing_all(fan, &chain_rays(size, chain));
                containing.len() != 1 || Some(containing[0]) != fan.cone_of_chain(chain)
            }
            Witness::FaceMismatch { chain, cone } => {
                degeneration_matroid(m, &chain_interior_point(size, chain))?.bases() != fan().cones()[*cone].transversal_bases()
            }
            Witness::NestedConeSplit { nested, .. } => {
                let gens: Vec<QuotientVector> = nested.iter().filter(|&&f| f != m.ground_set()).map(|&f| QuotientVector::indicator(size, f)).collect();
                cones_containing_all(fan(), &gens).is_empty()
            }
            Witness::ImageOutsideTrop { image, violated_circuit, .. } => {
                TropicalLinearSpace::new(m)?.violated_circuit(image) == Some(*violated_circuit)
            }
            Witness::NoCommonCone { images, .. } => cones_containing_all(fan(), images).is_empty(),
        })
    }
}

pub(crate) fn cones_containing_all(fan: &BergmanFan, vectors: &[QuotientVector]) -> Vec<usize> {
    (0..fan.cones().len()).filter(|&i| vectors.iter().all(|v| fan.cones()[i].contains(v))).collect()
}

fn nested_interior_point(size: usize, nested: &[Subset]) -> QuotientVector {
    nested.iter().fold(QuotientVector::zero(size), |acc, &f| acc.add(&QuotientVector::indicator(size, f)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub check: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub stats: BTreeMap<String, usize>,
}

impl VerificationReport {
    /// Fails exactly when there is a witness.
    pub fn new(check: &str, witnesses: Vec<Witness>, stats: BTreeMap<String, usize>) -> Self {
        let verdict = if witnesses.is_empty() { Verdict::Pass } else { Verdict::Fail };
        VerificationReport { schema: REPORT_SCHEMA, check: check.into(), verdict, witnesses, stats }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn stats<const N: usize>(entries: [(&str, usize); N]) -> BTreeMap<String, usize> {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn span_collisions(spans: &[SpanCanonicalForm], representative: impl Fn(usize) -> ChainOfFlats) -> Vec<Witness> {
    let mut groups: BTreeMap<&SpanCanonicalForm, Vec<usize>> = BTreeMap::new();
    for (i, s) in spans.iter().enumerate() {
        groups.entry(s).or_default().push(i);
    }
    let mut pairs: Vec<(usize, usize)> = groups
        .values()
        .flat_map(|g| g.iter().enumerate().flat_map(move |(k, &a)| g[k + 1..].iter().map(move |&b| (a, b))))
        .collect();
    pairs.sort();
    pairs.into_iter().map(|(a, b)| Witness::SpanCollision { cones: [a, b], chains: [representative(a), representative(b)] }).collect()
}

/// Pairwise distinctness of the linear spans of the maximal Bergman cones.
pub fn verify_distinct_spans(m: &Matroid) -> Result<VerificationReport> {
    let fan = bergman_fan(m)?;
    let spans: Vec<SpanCanonicalForm> = fan.cones().iter().map(|c| c.span().clone()).collect();
    let witnesses = span_collisions(&spans, |i| fan.cones()[i].member_chains()[0].clone());
    let distinct = spans.iter().collect::<BTreeSet<_>>().len();
    Ok(VerificationReport::new("distinct-spans", witnesses, stats([("cones", spans.len()), ("distinct_spans", distinct)])))
}

/// The same check on the cones of the fine subdivision, which in general
/// fails: chains with the same block family span the same space.
pub fn verify_distinct_spans_fine(m: &Matroid) -> Result<VerificationReport> {
    m.require_loopfree()?;
    let lattice = LatticeOfFlats::new(m);
    let chains = lattice.maximal_chains()?;
    let spans: Vec<SpanCanonicalForm> = chains.iter().map(|c| chain_span(m.size(), c)).collect();
    let witnesses = span_collisions(&spans, |i| chains[i].clone());
    let distinct = spans.iter().collect::<BTreeSet<_>>().len();
    Ok(VerificationReport::new("distinct-spans-fine", witnesses, stats([("cones", spans.len()), ("distinct_spans", distinct)])))
}

/// For every flat `G` with `M|G` connected and every flat `F ⊊ G`, the minor
/// `M[F, G]` must be connected.
pub fn fs_criterion(m: &Matroid) -> Result<VerificationReport> {
    m.require_loopfree()?;
    let lattice = LatticeOfFlats::new(m);
    let mut witnesses = Vec::new();
    let mut connected_flats = 0;
    let mut pairs = 0;
    for &g in lattice.flats() {
        if g == lattice.bottom() || !m.restriction(g)?.is_connected() {
            continue;
        }
        connected_flats += 1;
        for &f in lattice.flats() {
            if f == g || !f.is_subset(g) {
                continue;
            }
            pairs += 1;
            let minor = m.minor_interval(f, g)?;
            if !minor.is_connected() {
                let components = minor.connected_components().into_iter().map(|c| c.push_forward(minor.labels())).collect();
                witnesses.push(Witness::FlatPair { f, g, components });
            }
        }
    }
    Ok(VerificationReport::new("fs-criterion", witnesses, stats([("connected_flats", connected_flats), ("pairs", pairs)])))
}

/// Compares `Σ_min` with the Bergman fan directly: equal cone counts, and the
/// interior points of distinct maximal `Σ_min` cones fall in distinct
/// Bergman cones.
pub fn fans_equal_min_vs_bergman(m: &Matroid) -> Result<VerificationReport> {
    let bergman = bergman_fan(m)?;
    let lattice = LatticeOfFlats::new(m);
    let gmin = BuildingSet::minimal(m, &lattice)?;
    let nested = nested_fan(m, &lattice, &gmin)?;
    let size = m.size();
    let mut witnesses = Vec::new();
    if nested.cones.len() != bergman.cones().len() {
        witnesses.push(Witness::ConeCountMismatch { nested: nested.cones.len(), bergman: bergman.cones().len() });
    }
    let mut first_in: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, cone) in nested.cones.iter().enumerate() {
        let set = &cone.chains[0];
        let containing = bergman.containing_cones(&nested_interior_point(size, set));
        if containing.len() != 1 {
            // the interior of a maximal cone of a refinement meets a single cone
            let gens: Vec<Vec<usize>> = set.iter().map(|&f| bergman.containing_cones(&QuotientVector::indicator(size, f))).collect();
            witnesses.push(Witness::NestedConeSplit { nested: set.clone(), containing: gens });
            continue;
        }
        match first_in.get(&containing[0]) {
            Some(&j) => witnesses.push(Witness::ConeCollision { nested: [nested.cones[j].chains[0].clone(), set.clone()], bergman_cone: containing[0] }),
            None => {
                first_in.insert(containing[0], i);
            }
        }
    }
    Ok(VerificationReport::new(
        "fans-equal",
        witnesses,
        stats([("nested_cones", nested.cones.len()), ("bergman_cones", bergman.cones().len())]),
    ))
}

/// Linear congruential generator with Knuth's MMIX constants; the high 32
/// bits of each state are used.
#[derive(Clone, Debug)]
pub struct Lcg(u64);

impl Lcg {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Lcg(seed)
    }

    pub fn next_u32(&mut self) -> u32 {
        self.0 = self.0.wrapping_mul(Self::MULTIPLIER).wrapping_add(Self::INCREMENT);
        (self.0 >> 32) as u32
    }

    /// Uniform-ish integer in `[-bound, bound]`, by reduction modulo `2 bound + 1`.
    pub fn next_in_box(&mut self, bound: u32) -> i64 {
        let width = 2 * u64::from(bound) + 1;
        (u64::from(self.next_u32()) % width) as i64 - i64::from(bound)
    }

    pub fn vector(&mut self, size: usize, bound: u32) -> Vec<i64> {
        (0..size).map(|_| self.next_in_box(bound)).collect()
    }
}

/// Draws `samples` integer vectors in `[-bound, bound]^{n+1}` and compares
/// the circuit test with membership in the fine subdivision and in the
/// Bergman fan.
pub fn support_consistency(m: &Matroid, bound: u32, samples: usize, seed: u64) -> Result<VerificationReport> {
    let trop = TropicalLinearSpace::new(m)?;
    let fan = bergman_fan(m)?;
    let chains = LatticeOfFlats::new(m).maximal_chains()?;
    let mut rng = Lcg::new(seed);
    let mut witnesses = Vec::new();
    let mut inside = 0;
    for _ in 0..samples {
        let v = QuotientVector::from_ints(&rng.vector(m.size(), bound));
        let circuit = trop.contains(&v);
        let fine = chains.iter().any(|c| chain_cone_contains(c, &v));
        let bergman = fan.contains(&v);
        inside += usize::from(circuit);
        if circuit != fine || circuit != bergman {
            witnesses.push(Witness::MembershipDisagreement { vector: v, circuit, fine, bergman });
        }
    }
    Ok(VerificationReport::new("support", witnesses, stats([("samples", samples), ("in_trop", inside)])))
}

/// Checks that the fine subdivision and `Σ_min` refine the Bergman fan.
pub fn verify_refinement(m: &Matroid) -> Result<VerificationReport> {
    verify_refinement_of(m, &bergman_fan(m)?)
}

/// [`verify_refinement`] against a given fan. Besides generator-wise
/// containment of every chain in exactly its own cone, each member chain
/// must select the cone's face of the matroid polytope.
pub fn verify_refinement_of(m: &Matroid, fan: &BergmanFan) -> Result<VerificationReport> {
    let size = m.size();
    let lattice = LatticeOfFlats::new(m);
    let chains = lattice.maximal_chains()?;
    let mut witnesses = Vec::new();
    for chain in &chains {
        let member_of = fan.cone_of_chain(chain);
        let containing = cones_containing_all(fan, &chain_rays(size, chain));
        if containing.len() != 1 || Some(containing[0]) != member_of {
            witnesses.push(Witness::ChainContainment { chain: chain.clone(), member_of, containing });
        }
    }
    for (i, cone) in fan.cones().iter().enumerate() {
        for chain in cone.member_chains() {
            if degeneration_matroid(m, &chain_interior_point(size, chain))?.bases() != cone.transversal_bases() {
                witnesses.push(Witness::FaceMismatch { chain: chain.clone(), cone: i });
            }
        }
    }
    let gmin = BuildingSet::minimal(m, &lattice)?;
    let nested = nested_fan(m, &lattice, &gmin)?;
    for c in 0..nested.cones.len() {
        let gens = nested.cone_generators(c);
        if cones_containing_all(fan, &gens).is_empty() {
            let containing = gens.iter().map(|g| fan.containing_cones(g)).collect();
            witnesses.push(Witness::NestedConeSplit { nested: nested.cones[c].chains[0].clone(), containing });
        }
    }
    Ok(VerificationReport::new(
        "refinement",
        witnesses,
        stats([("chains", chains.len()), ("bergman_cones", fan.cones().len()), ("nested_cones", nested.cones.len())]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn s<const N: usize>(e: [usize; N]) -> Subset {
        Subset::from(e)
    }

    #[test]
    fn distinct_spans() {
        for m in [corpus::m_a3(), corpus::f7()] {
            let r = verify_distinct_spans(&m).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        let r = verify_distinct_spans_fine(&corpus::m_a3()).unwrap();
        assert_eq!(r.witnesses.len(), 3);
        assert_eq!(r.stats["distinct_spans"], 15);
        for w in &r.witnesses {
            assert!(w.replay(&corpus::m_a3()).unwrap());
        }
    }

    #[test]
    fn fs_on_examples() {
        assert!(fs_criterion(&corpus::m_a3()).unwrap().passed());
        assert!(fs_criterion(&corpus::f7()).unwrap().passed());
        let r = fs_criterion(&corpus::n5()).unwrap();
        assert_eq!(r.witnesses.len(), 1);
        let Witness::FlatPair { f, g, components } = &r.witnesses[0] else { panic!("{r:?}") };
        assert_eq!((*f, *g), (s([0]), s([0, 1, 2, 3, 4])));
        assert_eq!(components, &vec![s([1, 2]), s([3, 4])]);
        assert!(r.witnesses[0].replay(&corpus::n5()).unwrap());
    }

    #[test]
    fn fans_equal() {
        assert!(fans_equal_min_vs_bergman(&corpus::m_a3()).unwrap().passed());
        let m = corpus::n5();
        let r = fans_equal_min_vs_bergman(&m).unwrap();
        assert_eq!(r.stats["nested_cones"], 10);
        assert_eq!(r.stats["bergman_cones"], 9);
        assert_eq!(r.witnesses.len(), 2);
        assert!(matches!(r.witnesses[0], Witness::ConeCountMismatch { nested: 10, bergman: 9 }));
        let Witness::ConeCollision { nested, .. } = &r.witnesses[1] else { panic!("{r:?}") };
        assert_eq!(nested[0], vec![s([0]), s([0, 1, 2]), m.ground_set()]);
        assert_eq!(nested[1], vec![s([0]), s([0, 3, 4]), m.ground_set()]);
        for w in &r.witnesses {
            assert!(w.replay(&m).unwrap());
        }
    }

    #[test]
    fn lcg_is_fixed() {
        let mut r = Lcg::new(0);
        assert_eq!(r.next_u32(), (Lcg::INCREMENT >> 32) as u32);
        let mut a = Lcg::new(7);
        let mut b = Lcg::new(7);
        assert_eq!(a.vector(20, 3), b.vector(20, 3));
        assert!(Lcg::new(1).vector(1000, 3).iter().all(|x| (-3..=3).contains(x)));
    }

    #[test]
    fn support() {
        let r = support_consistency(&corpus::m_a3(), 3, 1000, 1).unwrap();
        assert!(r.passed());
        assert!(r.stats["in_trop"] > 0);
    }

    #[test]
    fn refinement_and_negative_control() {
        let m = corpus::m_a3();
        let fan = bergman_fan(&m).unwrap();
        assert!(verify_refinement_of(&m, &fan).unwrap().passed());
        assert!(verify_refinement(&corpus::f7()).unwrap().passed());

        // move the first chain of a merged pair into another cone
        let mut bad = fan.clone();
        let from = bad.cones.iter().position(|c| c.member_chains.len() == 2).unwrap();
        let to = (from + 1) % bad.cones.len();
        let chain = bad.cones[from].member_chains.remove(0);
        let part = bad.cones[from].partitions.remove(0);
        bad.cones[to].member_chains.push(chain.clone());
        bad.cones[to].partitions.push(part);
        let r = verify_refinement_of(&m, &bad).unwrap();
        assert!(!r.passed());
        assert!(r.witnesses.iter().any(|w| matches!(w, Witness::FaceMismatch { chain: c, .. } if *c == chain)));
        for w in &r.witnesses {
            assert!(w.replay_with(&m, &bad).unwrap(), "{w:?}");
        }
    }
}
