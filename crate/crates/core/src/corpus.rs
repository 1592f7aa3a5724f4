//! Small named matroids used throughout the tests, the guide and the CLI.

use crate::generators;
use crate::linalg::ExactMatrix;
use crate::matroid::Matroid;

/// The braid arrangement `A_3` in `P^2`: columns `e0, e1, e2, e0-e1, e0-e2, e1-e2`.
pub fn m_a3() -> Matroid {
    generators::braid(3).expect("braid(3)")
}

/// Five lines in `P^2` given by `z, y, y-z, x, x-z`. Line 0 (`z = 0`) carries
/// two points, one where lines 1 and 2 meet it and one where 3 and 4 do, so
/// every other line passes through one of them.
pub fn n5_matrix() -> ExactMatrix {
    ExactMatrix::from_integers(&[vec![0, 0, 0, 1, 1], vec![0, 1, 1, 0, 0], vec![1, 0, -1, 0, -1]]).expect("static matrix")
}

pub fn n5() -> Matroid {
    Matroid::from_matrix(&n5_matrix()).expect("n5")
}

/// The Fano plane, `PG(2, 2)`.
pub fn f7() -> Matroid {
    generators::pg(2, 2).expect("pg(2,2)")
}

/// Points of the Fano plane permuted by `x -> t x` on
/// `GF(8) = GF(2)[t]/(t^3 + t + 1)`, coordinates read as `a0 + a1 t + a2 t^2`.
/// A 7-cycle.
pub fn fano_singer_cycle() -> Vec<usize> {
    generators::pg_linear_permutation(2, 2, &[vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 0]]).expect("invertible")
}

/// The Frobenius `x -> x^2` on the same model of `GF(8)`; order 3.
pub fn fano_frobenius() -> Vec<usize> {
    generators::pg_linear_permutation(2, 2, &[vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 1]]).expect("invertible")
}

/// The transvection `e_1 -> e_0 + e_1`; an involution.
pub fn fano_transvection() -> Vec<usize> {
    generators::pg_linear_permutation(2, 2, &[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]).expect("invertible")
}

pub fn u24() -> Matroid {
    Matroid::uniform(2, 4).expect("U_{2,4}")
}

/// Two parallel pairs, `[[1,1,0,0],[0,0,1,1]]`; two connected components.
pub fn d22() -> Matroid {
    Matroid::from_matrix(&ExactMatrix::from_integers(&[vec![1, 1, 0, 0], vec![0, 0, 1, 1]]).expect("static matrix")).expect("d22")
}

/// The loopfree connected matroids on which the fan theorems are checked.
pub fn theorem_corpus() -> Vec<(&'static str, Matroid)> {
    vec![
        ("braid(2)", generators::braid(2).expect("braid(2)")),
        ("braid(3)", m_a3()),
        ("braid(4)", generators::braid(4).expect("braid(4)")),
        ("U(2,4)", u24()),
        ("U(3,5)", Matroid::uniform(3, 5).expect("U_{3,5}")),
        ("N5", n5()),
        ("F7", f7()),
        ("pg(1,3)", generators::pg(1, 3).expect("pg(1,3)")),
    ]
}
