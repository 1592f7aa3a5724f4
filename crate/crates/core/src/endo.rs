//! Integer linear maps on `R^{n+1}` that descend to `R^{n+1}/R·1`, and the
//! check that such a map carries `trop(M)` into itself cone by cone.
//!
//! A map passes [`check_fan_compatibility`] when, for every maximal Bergman
//! cone, the images of all its generators lie in one common maximal cone.
//! Bergman cones are convex, so the whole image cone then lies in that cone.
//! Surjectivity onto `trop(M)` is not decided.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{bergman_fan, BergmanFan};
use crate::lattice::LatticeOfFlats;
use crate::linalg::determinant;
use crate::matroid::Matroid;
use crate::subset::Subset;
use crate::tropical::{QuotientVector, TropicalLinearSpace};
use crate::verify::{Verdict, VerificationReport, Witness};

pub const COMPATIBILITY_SCHEMA: &str = "compatibility/v1";

/// Returns `c` with `A·1 = c·1`, or `None` when the row sums differ.
pub fn descends_to_quotient(a: &[Vec<i64>]) -> Result<Option<i64>> {
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!("expected a square matrix, got {n} rows")));
    }
    let sums: Vec<i128> = a.iter().map(|r| r.iter().map(|&x| i128::from(x)).sum()).collect();
    if sums.iter().any(|&s| s != sums[0]) {
        return Ok(None);
    }
    i64::try_from(sums[0]).map(Some).map_err(|_| Error::InvalidArgument("row sums overflow".into()))
}

/// A square integer matrix with `A·1 = c·1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegerLinearMap {
    matrix: Vec<Vec<i64>>,
    scale_on_ones: i64,
}

impl IntegerLinearMap {
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self> {
        match descends_to_quotient(&matrix)? {
            Some(c) => Ok(IntegerLinearMap { matrix, scale_on_ones: c }),
            None => Err(Error::NotQuotientMap),
        }
    }

    pub fn identity(size: usize) -> Self {
        let matrix = (0..size).map(|i| (0..size).map(|j| i64::from(i == j)).collect()).collect();
        IntegerLinearMap { matrix, scale_on_ones: 1 }
    }

    /// Lifts an `n x n` matrix acting on the coordinates `x_i = v_i - v_0`
    /// (`i = 1..n`) to `R^{n+1}`: row 0 is zero and column 0 makes every
    /// row sum vanish. With `transpose` the chart matrix is transposed
    /// first, for maps given by their action on characters.
    pub fn from_chart(chart: &[Vec<i64>], transpose: bool) -> Result<Self> {
        let n = chart.len();
        if n == 0 || chart.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("expected a square chart matrix, got {n} rows")));
        }
        let entry = |i: usize, j: usize| if transpose { chart[j][i] } else { chart[i][j] };
        let mut matrix = vec![vec![0i64; n + 1]];
        for i in 0..n {
            let mut row = vec![0i64; n + 1];
            let mut sum: i64 = 0;
            for j in 0..n {
                row[j + 1] = entry(i, j);
                sum = sum.checked_add(entry(i, j)).ok_or_else(|| Error::InvalidArgument("row sums overflow".into()))?;
            }
            row[0] = -sum;
            matrix.push(row);
        }
        Ok(IntegerLinearMap { matrix, scale_on_ones: 0 })
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn scale_on_ones(&self) -> i64 {
        self.scale_on_ones
    }

    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, v: &QuotientVector) -> QuotientVector {
        let coords = self
            .matrix
            .iter()
            .map(|row| row.iter().zip(v.coords()).fold(BigRational::zero(), |acc, (&a, x)| acc + x * BigRational::from_integer(a.into())))
            .collect();
        QuotientVector::new(coords)
    }

    /// The product `self · other`.
    pub fn compose(&self, other: &IntegerLinearMap) -> Result<Self> {
        let n = self.size();
        if other.size() != n {
            return Err(Error::DimensionMismatch(format!("cannot compose maps of sizes {n} and {}", other.size())));
        }
        let overflow = || Error::InvalidArgument("matrix product overflows i64".into());
        let mut matrix = vec![vec![0i64; n]; n];
        for (row, lhs) in matrix.iter_mut().zip(&self.matrix) {
            for (j, out) in row.iter_mut().enumerate() {
                let mut acc: i64 = 0;
                for (a, rhs) in lhs.iter().zip(&other.matrix) {
                    acc = a.checked_mul(rhs[j]).and_then(|x| acc.checked_add(x)).ok_or_else(overflow)?;
                }
                *out = acc;
            }
        }
        let scale_on_ones = self.scale_on_ones.checked_mul(other.scale_on_ones).ok_or_else(overflow)?;
        Ok(IntegerLinearMap { matrix, scale_on_ones })
    }

    /// Matrix of the induced map on the quotient in the basis of classes of
    /// `e_1, ..., e_n`: `Q[i][j] = A[i][j] - A[0][j]`.
    pub fn quotient_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.size();
        (1..n).map(|i| (1..n).map(|j| self.matrix[i][j] - self.matrix[0][j]).collect()).collect()
    }

    pub fn quotient_determinant(&self) -> BigInt {
        let q = self.quotient_matrix();
        if q.is_empty() {
            return BigInt::one();
        }
        let big: Vec<Vec<BigInt>> = q.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        determinant(&big)
    }
}

fn check_permutation(perm: &[usize], size: usize) -> Result<()> {
    if perm.len() != size {
        return Err(Error::InvalidPermutation(format!("expected {size} entries, got {}", perm.len())));
    }
    let mut seen = vec![false; size];
    for &p in perm {
        if p >= size || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidPermutation(format!("{perm:?} is not a permutation of 0..{size}")));
        }
    }
    Ok(())
}

/// The matrix sending `e_i` to `e_{perm[i]}`, so that composition of
/// permutations corresponds to the matrix product.
pub fn permutation_map(perm: &[usize]) -> Result<IntegerLinearMap> {
    let n = perm.len();
    check_permutation(perm, n)?;
    let mut matrix = vec![vec![0i64; n]; n];
    for (i, &p) in perm.iter().enumerate() {
        matrix[p][i] = 1;
    }
    Ok(IntegerLinearMap { matrix, scale_on_ones: 1 })
}

pub fn is_matroid_automorphism(m: &Matroid, perm: &[usize]) -> Result<bool> {
    check_permutation(perm, m.size())?;
    Ok(m.bases().iter().all(|b| m.is_basis(b.iter().map(|e| perm[e]).collect())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeImage {
    pub source: usize,
    pub target: Option<usize>,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibilityReport {
    pub schema: &'static str,
    pub verdict: Verdict,
    pub cones: Vec<ConeImage>,
    pub scale_on_ones: i64,
    /// Determinant of the induced map on the quotient, as a decimal string.
    pub determinant: String,
    pub invertible: bool,
    /// `|det| = 1`, i.e. invertible over the integers.
    pub unimodular: bool,
}

impl CompatibilityReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &Witness> {
        self.cones.iter().filter_map(|c| c.witness.as_ref())
    }
}

fn check_size(m_size: usize, a: &IntegerLinearMap) -> Result<()> {
    if a.size() != m_size {
        return Err(Error::DimensionMismatch(format!("map acts on R^{} but the matroid has {m_size} elements", a.size())));
    }
    Ok(())
}

/// Per-cone compatibility against a prebuilt fan; see [`check_fan_compatibility`].
pub fn check_fan_compatibility_with(fan: &BergmanFan, trop: &TropicalLinearSpace, a: &IntegerLinearMap) -> Result<CompatibilityReport> {
    check_size(fan.size(), a)?;
    let size = fan.size();
    let cones: Vec<ConeImage> = (0..fan.cones().len())
        .into_par_iter()
        .map(|source| {
            let gens = fan.cones()[source].generators(size);
            let images: Vec<QuotientVector> = gens.iter().map(|(_, v)| a.apply(v)).collect();
            let mut containing = Vec::with_capacity(images.len());
            for ((flat, _), image) in gens.iter().zip(&images) {
                let cs = fan.containing_cones(image);
                if cs.is_empty() {
                    let violated_circuit = trop
                        .violated_circuit(image)
                        .ok_or_else(|| Error::Inconsistent(format!("{image} is in trop(M) but in no Bergman cone")))?;
                    let witness = Witness::ImageOutsideTrop { source_cone: Some(source), generator: *flat, image: image.clone(), violated_circuit };
                    return Ok(ConeImage { source, target: None, witness: Some(witness) });
                }
                containing.push(cs);
            }
            let common: Vec<usize> = containing[0].iter().copied().filter(|c| containing.iter().all(|cs| cs.contains(c))).collect();
            Ok(match common.first() {
                Some(&t) => ConeImage { source, target: Some(t), witness: None },
                None => ConeImage {
                    source,
                    target: None,
                    witness: Some(Witness::NoCommonCone { source_cone: source, generators: gens.iter().map(|(f, _)| *f).collect(), images, containing }),
                },
            })
        })
        .collect::<Result<_>>()?;
    let det = a.quotient_determinant();
    let verdict = if cones.iter().all(|c| c.witness.is_none()) { Verdict::Pass } else { Verdict::Fail };
    Ok(CompatibilityReport {
        schema: COMPATIBILITY_SCHEMA,
        verdict,
        cones,
        scale_on_ones: a.scale_on_ones(),
        determinant: det.to_string(),
        invertible: !det.is_zero(),
        unimodular: det.abs().is_one(),
    })
}

/// For every maximal Bergman cone, the maximal cones containing all of its
/// generator images; the lowest-indexed one is reported as the target.
pub fn check_fan_compatibility(m: &Matroid, a: &IntegerLinearMap) -> Result<CompatibilityReport> {
    check_size(m.size(), a)?;
    let fan = bergman_fan(m)?;
    check_fan_compatibility_with(&fan, &TropicalLinearSpace::new(m)?, a)
}

/// Images of the rays `v_F` of the fine subdivision must lie in `trop(M)`,
/// and the map must pass [`check_fan_compatibility`].
pub fn maps_into_trop(m: &Matroid, a: &IntegerLinearMap) -> Result<VerificationReport> {
    check_size(m.size(), a)?;
    let fan = bergman_fan(m)?;
    let trop = TropicalLinearSpace::new(m)?;
    let lattice = LatticeOfFlats::new(m);
    let rays: Vec<Subset> = lattice.flats().iter().copied().filter(|&f| f != lattice.bottom() && f != lattice.top()).collect();
    let mut witnesses = Vec::new();
    for &f in &rays {
        let image = a.apply(&QuotientVector::indicator(m.size(), f));
        if let Some(c) = trop.violated_circuit(&image) {
            witnesses.push(Witness::ImageOutsideTrop { source_cone: None, generator: f, image, violated_circuit: c });
        }
    }
    let compat = check_fan_compatibility_with(&fan, &trop, a)?;
    witnesses.extend(compat.witnesses().cloned());
    let stats = [("rays", rays.len()), ("bergman_cones", fan.cones().len())].into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    Ok(VerificationReport::new("maps-into-trop", witnesses, stats))
}
