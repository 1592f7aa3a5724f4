//! Exact linear algebra over the rationals and prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::subset::Subset;

/// Arithmetic of a field whose elements are `Self::Elem`.
pub trait Field {
    type Elem: Clone + PartialEq;

    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

/// `GF(p)` for a prime `p < 2^32`, elements stored as residues in `[0, p)`.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 32 {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        // Fermat
        self.pow(*a, self.p - 2)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Row-echelon basis of a growing set of vectors. Vectors are stored fully
/// reduced against earlier pivots so membership tests are one pass.
pub(crate) struct Echelon<'f, F: Field> {
    field: &'f F,
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> Clone for Echelon<'_, F> {
    fn clone(&self) -> Self {
        Echelon { field: self.field, rows: self.rows.clone() }
    }
}

impl<'f, F: Field> Echelon<'f, F> {
    pub(crate) fn new(field: &'f F) -> Self {
        Echelon { field, rows: Vec::new() }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.field;
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            if f.is_zero(&v[*pivot]) {
                continue;
            }
            let c = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !f.is_zero(r) {
                    *x = f.sub(x, &f.mul(&c, r));
                }
            }
        }
        v
    }

    /// Adds `v`, returning `false` (and leaving `self` unchanged) if it is
    /// already in the span.
    pub(crate) fn insert(&mut self, v: &[F::Elem]) -> bool {
        let f = self.field;
        let mut v = self.reduce(v);
        let Some(pivot) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&v[pivot]);
        for x in v.iter_mut() {
            *x = f.mul(x, &inv);
        }
        self.rows.push((pivot, v));
        true
    }
}

/// Scalar field of an [`ExactMatrix`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    Prime(u64),
}

impl std::fmt::Display for FieldKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldKind::Rationals => f.write_str("Q"),
            FieldKind::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl std::str::FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "Q" {
            return Ok(FieldKind::Rationals);
        }
        let p = s
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(parse_canonical_natural)
            .ok_or_else(|| Error::Parse(format!("unknown field {s:?}; expected \"Q\" or \"GF(p)\"")))?;
        let p: u64 = p.try_into().map_err(|_| Error::NotPrime(0))?;
        PrimeField::new(p)?;
        Ok(FieldKind::Prime(p))
    }
}

/// A matrix of exact scalars whose columns are the vectors of an
/// arrangement (column `i` is element `i` of the matroid).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactMatrix {
    Rational(Vec<Vec<BigRational>>),
    Prime { p: u64, rows: Vec<Vec<u64>> },
}

impl ExactMatrix {
    pub fn rational(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        Self::check_shape(rows.iter().map(Vec::len))?;
        Ok(ExactMatrix::Rational(rows))
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::rational(rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect())
    }

    /// A matrix over `GF(p)`; entries are reduced into `[0, p)`.
    pub fn prime(p: u64, rows: Vec<Vec<i64>>) -> Result<Self> {
        PrimeField::new(p)?;
        Self::check_shape(rows.iter().map(Vec::len))?;
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.rem_euclid(p as i64) as u64).collect())
            .collect();
        Ok(ExactMatrix::Prime { p, rows })
    }

    fn check_shape(mut lens: impl Iterator<Item = usize>) -> Result<()> {
        let first = lens.next().ok_or(Error::EmptyMatrix)?;
        if first == 0 {
            return Err(Error::EmptyMatrix);
        }
        if lens.any(|l| l != first) {
            return Err(Error::DimensionMismatch("rows have different lengths".into()));
        }
        Ok(())
    }

    pub fn field(&self) -> FieldKind {
        match self {
            ExactMatrix::Rational(_) => FieldKind::Rationals,
            ExactMatrix::Prime { p, .. } => FieldKind::Prime(*p),
        }
    }

    pub fn nrows(&self) -> usize {
        match self {
            ExactMatrix::Rational(r) => r.len(),
            ExactMatrix::Prime { rows, .. } => rows.len(),
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            ExactMatrix::Rational(r) => r.first().map_or(0, Vec::len),
            ExactMatrix::Prime { rows, .. } => rows.first().map_or(0, Vec::len),
        }
    }

    /// Entries in canonical string form (`"-2/3"`, residues for `GF(p)`).
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        match self {
            ExactMatrix::Rational(r) => r.iter().map(|row| row.iter().map(format_rational).collect()).collect(),
            ExactMatrix::Prime { rows, .. } => rows.iter().map(|row| row.iter().map(u64::to_string).collect()).collect(),
        }
    }

    /// Parses canonical entry strings; non-canonical forms such as `"2/4"`,
    /// `"+1"`, `"-0"` or `"07"` are rejected.
    pub fn from_strings(field: FieldKind, rows: &[Vec<String>]) -> Result<Self> {
        match field {
            FieldKind::Rationals => {
                let rows = rows.iter().map(|r| r.iter().map(|s| parse_canonical_rational(s)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
                Self::rational(rows)
            }
            FieldKind::Prime(p) => {
                PrimeField::new(p)?;
                let rows = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|s| {
                                let v = parse_canonical_natural(s)
                                    .and_then(|v| u64::try_from(v).ok())
                                    .ok_or_else(|| Error::Parse(format!("non-canonical residue {s:?}")))?;
                                if v >= p {
                                    return Err(Error::Parse(format!("residue {v} not reduced mod {p}")));
                                }
                                Ok(v)
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::check_shape(rows.iter().map(Vec::len))?;
                Ok(ExactMatrix::Prime { p, rows })
            }
        }
    }

    /// Rank and all maximal independent column sets, in lexicographic order.
    pub(crate) fn column_bases(&self) -> (usize, Vec<Subset>) {
        match self {
            ExactMatrix::Rational(rows) => column_bases(&Rationals, rows),
            ExactMatrix::Prime { p, rows } => column_bases(&PrimeField { p: *p }, rows),
        }
    }

    pub fn rank(&self) -> usize {
        self.column_bases().0
    }
}

fn columns<E: Clone>(rows: &[Vec<E>]) -> Vec<Vec<E>> {
    let ncols = rows.first().map_or(0, Vec::len);
    (0..ncols).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect()
}

fn column_bases<F: Field>(field: &F, rows: &[Vec<F::Elem>]) -> (usize, Vec<Subset>) {
    let cols = columns(rows);
    let mut full = Echelon::new(field);
    for c in &cols {
        full.insert(c);
    }
    let rank = full.rank();

    // Depth-first over columns, include-branch first, which yields the
    // bases in lexicographic order.
    fn rec<F: Field>(
        cols: &[Vec<F::Elem>],
        next: usize,
        rank: usize,
        ech: &Echelon<'_, F>,
        chosen: Subset,
        out: &mut Vec<Subset>,
    ) {
        if chosen.len() == rank {
            out.push(chosen);
            return;
        }
        if cols.len() - next < rank - chosen.len() {
            return;
        }
        let mut with = ech.clone();
        if with.insert(&cols[next]) {
            rec(cols, next + 1, rank, &with, chosen.with(next), out);
        }
        rec(cols, next + 1, rank, ech, chosen, out);
    }

    let mut out = Vec::new();
    rec(&cols, 0, rank, &Echelon::new(field), Subset::EMPTY, &mut out);
    (rank, out)
}

/// Rank of a list of rational vectors.
pub fn rank_of(vectors: &[Vec<BigRational>]) -> usize {
    let mut ech = Echelon::new(&Rationals);
    vectors.iter().filter(|v| ech.insert(v)).count()
}

/// Reduced row echelon form with zero rows dropped. Two lists of vectors
/// span the same space iff their reduced forms are equal.
pub fn rref(vectors: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let mut ech = Echelon::new(&Rationals);
    for v in vectors {
        ech.insert(v);
    }
    let mut rows = ech.rows;
    rows.sort_by_key(|(pivot, _)| *pivot);
    // back-substitute so every pivot column is a unit vector
    for i in (0..rows.len()).rev() {
        let (pivot, pivot_row) = rows[i].clone();
        for (_, row) in rows.iter_mut().take(i) {
            if row[pivot].is_zero() {
                continue;
            }
            let c = row[pivot].clone();
            for (x, r) in row.iter_mut().zip(&pivot_row) {
                *x -= &c * r;
            }
        }
    }
    rows.into_iter().map(|(_, r)| r).collect()
}

/// Determinant of a square integer matrix (fraction-free elimination).
pub fn determinant(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn parse_canonical_natural(s: &str) -> Option<BigInt> {
    let ok = !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'));
    ok.then(|| s.parse().ok()).flatten()
}

/// Parses `"-3"`, `"2/3"`, `"-7/12"`. The numerator and denominator must be
/// coprime, the denominator greater than one, and zero is written `"0"`.
pub fn parse_canonical_rational(s: &str) -> Result<BigRational> {
    let err = || Error::Parse(format!("non-canonical rational {s:?}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let num = parse_canonical_natural(num).ok_or_else(err)?;
    if neg && num.is_zero() {
        return Err(err());
    }
    let num = if neg { -num } else { num };
    match den {
        None => Ok(BigRational::from_integer(num)),
        Some(d) => {
            let den = parse_canonical_natural(d).ok_or_else(err)?;
            if den <= BigInt::one() || num.is_zero() || !num.abs().gcd(&den).is_one() {
                return Err(err());
            }
            Ok(BigRational::new_raw(num, den))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn canonical_rationals() {
        assert_eq!(parse_canonical_rational("-2/3").unwrap(), q(-2, 3));
        assert_eq!(parse_canonical_rational("0").unwrap(), q(0, 1));
        assert_eq!(parse_canonical_rational("17").unwrap(), q(17, 1));
        for bad in ["2/4", "+1", "-0", "07", "1/1", "3/-2", "", "1/0", "0/5", " 1", "1.5", "-"] {
            assert!(parse_canonical_rational(bad).is_err(), "{bad:?} accepted");
        }
        for x in [q(-7, 12), q(5, 1), q(0, 1), q(1, 3)] {
            assert_eq!(parse_canonical_rational(&format_rational(&x)).unwrap(), x);
        }
    }

    #[test]
    fn field_kind_parse() {
        assert_eq!("GF(7)".parse::<FieldKind>().unwrap(), FieldKind::Prime(7));
        assert_eq!("Q".parse::<FieldKind>().unwrap(), FieldKind::Rationals);
        assert_eq!("GF(4)".parse::<FieldKind>(), Err(Error::NotPrime(4)));
        assert!("GF(07)".parse::<FieldKind>().is_err());
    }

    #[test]
    fn prime_entries_reduced() {
        let m = ExactMatrix::prime(3, vec![vec![-1, 4, 3]]).unwrap();
        assert_eq!(m.to_strings(), vec![vec!["2", "1", "0"]]);
        assert!(ExactMatrix::from_strings(FieldKind::Prime(3), &[vec!["3".into()]]).is_err());
        assert_eq!(ExactMatrix::prime(4, vec![vec![1]]), Err(Error::NotPrime(4)));
    }

    #[test]
    fn identity_bases() {
        let m = ExactMatrix::from_integers(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(m.column_bases(), (2, vec![Subset::from([0, 1])]));
    }

    #[test]
    fn rank_over_gf2_differs_from_q() {
        // columns e0+e1, e1+e2, e0+e2 are dependent only in characteristic 2
        let rows = vec![vec![1, 0, 1], vec![1, 1, 0], vec![0, 1, 1]];
        assert_eq!(ExactMatrix::from_integers(&rows).unwrap().rank(), 3);
        assert_eq!(ExactMatrix::prime(2, rows).unwrap().rank(), 2);
    }

    #[test]
    fn rref_is_canonical() {
        let a = vec![vec![q(1, 1), q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1), q(1, 1)]];
        let b = vec![vec![q(1, 1), q(2, 1), q(1, 1)], vec![q(2, 1), q(1, 1), q(-1, 1)]];
        assert_eq!(rref(&a), rref(&b));
        assert_eq!(rref(&a), vec![vec![q(1, 1), q(0, 1), q(-1, 1)], vec![q(0, 1), q(1, 1), q(1, 1)]]);
    }

    #[test]
    fn determinants() {
        let m = |rows: &[&[i64]]| rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<Vec<_>>>();
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(&m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]])), BigInt::from(0));
        assert_eq!(determinant(&m(&[&[0, 2, 1], &[1, 3, 2], &[4, 1, 1]])), BigInt::from(3));
    }
}
