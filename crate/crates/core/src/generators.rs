//! Standard arrangement matroids: braid arrangements and the full
//! arrangement of all rational hyperplanes over a prime field.

use crate::error::{Error, Result};
use crate::linalg::{is_prime, ExactMatrix};
use crate::matroid::Matroid;
use crate::subset::{Limits, MAX_GROUND};

/// Columns `e_i` (`i < n`) followed by `e_i - e_j` (`i < j`, lexicographic);
/// its matroid has rank `n` on `n + n(n-1)/2` elements.
pub fn braid_matrix(n: usize) -> Result<ExactMatrix> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("braid arrangement needs n >= 2 (got {n})")));
    }
    let mut cols: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let mut c = unit(n, i);
            c[j] = -1;
            cols.push(c);
        }
    }
    ExactMatrix::from_integers(&transpose(&cols))
}

pub fn braid(n: usize) -> Result<Matroid> {
    braid_with(n, Limits::default())
}

pub fn braid_with(n: usize, limits: Limits) -> Result<Matroid> {
    if n >= 2 {
        limits.check(n + n * (n - 1) / 2)?;
    }
    Matroid::from_matrix_with(&braid_matrix(n)?, limits)
}

/// Number of points of `PG(d, p)`, or `None` on overflow.
pub fn pg_point_count(d: usize, p: u64) -> Option<u64> {
    let mut total: u64 = 0;
    let mut pow: u64 = 1;
    for _ in 0..=d {
        total = total.checked_add(pow)?;
        pow = pow.checked_mul(p)?;
    }
    Some(total)
}

/// Normalized coordinate vectors of the points of `PG(d, p)` (first nonzero
/// entry equal to one), in lexicographic order.
pub fn pg_points(d: usize, p: u64) -> Result<Vec<Vec<u64>>> {
    if d < 1 {
        return Err(Error::InvalidArgument(format!("projective dimension must be >= 1 (got {d})")));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let count = pg_point_count(d, p).unwrap_or(u64::MAX);
    if count > MAX_GROUND as u64 {
        return Err(Error::CapExceeded { size: usize::try_from(count).unwrap_or(usize::MAX), cap: MAX_GROUND });
    }
    let mut out = Vec::with_capacity(count as usize);
    let len = d + 1;
    let mut v = vec![0u64; len];
    fn rec(v: &mut Vec<u64>, pos: usize, seen_nonzero: bool, p: u64, out: &mut Vec<Vec<u64>>) {
        if pos == v.len() {
            if seen_nonzero {
                out.push(v.clone());
            }
            return;
        }
        if seen_nonzero {
            for x in 0..p {
                v[pos] = x;
                rec(v, pos + 1, true, p, out);
            }
        } else {
            v[pos] = 0;
            rec(v, pos + 1, false, p, out);
            v[pos] = 1;
            rec(v, pos + 1, true, p, out);
        }
        v[pos] = 0;
    }
    rec(&mut v, 0, false, p, &mut out);
    debug_assert_eq!(out.len() as u64, count);
    Ok(out)
}

/// The matroid of all `GF(p)`-rational hyperplanes of `P^d`, i.e. of all
/// points of `PG(d, p)`; rank `d + 1`.
pub fn pg(d: usize, p: u64) -> Result<Matroid> {
    pg_with(d, p, Limits::default())
}

pub fn pg_with(d: usize, p: u64, limits: Limits) -> Result<Matroid> {
    if d >= 1 && is_prime(p) {
        let count = pg_point_count(d, p).unwrap_or(u64::MAX);
        limits.check(usize::try_from(count).unwrap_or(usize::MAX))?;
    }
    let points = pg_points(d, p)?;
    let rows: Vec<Vec<i64>> = (0..=d).map(|r| points.iter().map(|pt| pt[r] as i64).collect()).collect();
    Matroid::from_matrix_with(&ExactMatrix::prime(p, rows)?, limits)
}

/// The permutation of `PG(d, p)` point labels induced by an invertible
/// `(d+1) x (d+1)` matrix over `GF(p)` acting on column vectors.
pub fn pg_linear_permutation(d: usize, p: u64, matrix: &[Vec<i64>]) -> Result<Vec<usize>> {
    let points = pg_points(d, p)?;
    if matrix.len() != d + 1 || matrix.iter().any(|r| r.len() != d + 1) {
        return Err(Error::DimensionMismatch(format!("expected a {0}x{0} matrix", d + 1)));
    }
    let m = ExactMatrix::prime(p, matrix.to_vec())?;
    if m.rank() != d + 1 {
        return Err(Error::InvalidPermutation("matrix is singular over the field".into()));
    }
    let reduced: Vec<Vec<u64>> = matrix.iter().map(|r| r.iter().map(|x| x.rem_euclid(p as i64) as u64).collect()).collect();
    points
        .iter()
        .map(|pt| {
            let img: Vec<u64> = reduced.iter().map(|row| row.iter().zip(pt).map(|(a, b)| a * b % p).sum::<u64>() % p).collect();
            let lead = *img.iter().find(|&&x| x != 0).expect("invertible image is nonzero");
            let inv = (1..p).find(|&y| lead * y % p == 1).expect("field inverse");
            let normalized: Vec<u64> = img.iter().map(|x| x * inv % p).collect();
            Ok(points.iter().position(|q| *q == normalized).expect("normalized point is listed"))
        })
        .collect()
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn transpose(cols: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let nrows = cols[0].len();
    (0..nrows).map(|r| cols.iter().map(|c| c[r]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset::Subset;

    #[test]
    fn braid_three_is_the_standard_matrix() {
        let expected = ExactMatrix::from_integers(&[
            vec![1, 0, 0, 1, 1, 0],
            vec![0, 1, 0, -1, 0, 1],
            vec![0, 0, 1, 0, -1, -1],
        ])
        .unwrap();
        assert_eq!(braid_matrix(3).unwrap(), expected);
        let m = braid(3).unwrap();
        let triangles: Vec<Subset> = m.circuits().into_iter().filter(|c| c.len() == 3).collect();
        assert_eq!(triangles, vec![Subset::from([0, 1, 3]), Subset::from([0, 2, 4]), Subset::from([1, 2, 5]), Subset::from([3, 4, 5])]);
    }

    #[test]
    fn braid_sizes() {
        assert_eq!(braid(2).unwrap(), Matroid::uniform(2, 3).unwrap());
        let b4 = braid(4).unwrap();
        assert_eq!((b4.size(), b4.rank()), (10, 4));
        assert!(braid(1).is_err());
        assert!(matches!(braid(6), Err(Error::CapExceeded { size: 21, cap: 20 })));
    }

    #[test]
    fn pg_sizes() {
        let f7 = pg(2, 2).unwrap();
        assert_eq!((f7.size(), f7.rank()), (7, 3));
        assert_eq!(pg(1, 3).unwrap(), Matroid::uniform(2, 4).unwrap());
        assert_eq!(pg(1, 2).unwrap(), Matroid::uniform(2, 3).unwrap());
        assert_eq!(pg(2, 4), Err(Error::NotPrime(4)));
        assert!(matches!(pg(2, 5), Err(Error::CapExceeded { size: 31, .. })));
        assert!(pg_with(2, 5, Limits::new(31).unwrap()).is_ok());
    }

    #[test]
    fn fano_lines() {
        // the seven lines of the Fano plane are its rank-2 circuits
        let f7 = pg(2, 2).unwrap();
        let lines: Vec<Subset> = f7.circuits().into_iter().filter(|c| c.len() == 3).collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(pg_points(2, 2).unwrap()[0], vec![0, 0, 1]);
        assert_eq!(pg_points(2, 2).unwrap()[6], vec![1, 1, 1]);
    }

    #[test]
    fn linear_permutations() {
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(pg_linear_permutation(2, 2, &id).unwrap(), (0..7).collect::<Vec<_>>());
        let singular = vec![vec![1, 1, 0], vec![1, 1, 0], vec![0, 0, 1]];
        assert!(pg_linear_permutation(2, 2, &singular).is_err());
    }
}
