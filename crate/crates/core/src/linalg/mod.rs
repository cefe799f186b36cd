//! Dense and structured linear algebra on complex matrices.
//!
//! The Liouvillians built in this crate are band-structured in the
//! vectorized index, so next to the dense Padé exponential ([`expm`]) there
//! are a diagonal-storage sparse form ([`dia::DiaMatrix`]), a banded LU
//! ([`band::BandedLu`]) and a truncated-Taylor evaluation of `e^{At}v`
//! ([`expmv`]) that never materialize the full matrix.

pub mod band;
pub mod dia;
pub mod expm;
pub mod expmv;
pub mod lu;

pub use expm::expm;

use crate::C64;
use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};

/// Conjugate transpose.
pub fn dagger(a: &Array2<C64>) -> Array2<C64> {
    a.t().mapv(|z| z.conj())
}

/// Hermitian eigendecomposition with column eigenvectors, A = V diag(λ) V†.
///
/// The raw LAPACK binding reads row-major complex buffers as their
/// transpose and therefore decomposes conj(A); eigenvalues are unaffected
/// but eigenvectors come out conjugated. This wrapper feeds conj(A) in
/// standard layout so the returned columns are eigenvectors of A itself.
pub fn eigh_hermitian(a: &Array2<C64>) -> (Array1<f64>, Array2<C64>) {
    let conj = a.mapv(|z| z.conj()).as_standard_layout().to_owned();
    conj.eigh(UPLO::Lower)
        .expect("Hermitian eigendecomposition failed")
}

/// Maximum elementwise deviation from Hermiticity, max |A - A†|.
pub fn hermiticity_defect(a: &Array2<C64>) -> f64 {
    let n = a.nrows();
    let mut max = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let dev = (a[[i, j]] - a[[j, i]].conj()).norm();
            if dev > max {
                max = dev;
            }
        }
    }
    max
}

/// Trace of a square matrix.
pub fn trace(a: &Array2<C64>) -> C64 {
    a.diag().sum()
}

/// Frobenius norm.
pub fn frobenius(a: &Array2<C64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest elementwise modulus.
pub fn max_abs(a: &Array2<C64>) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// 1-norm (maximum absolute column sum).
pub fn norm_1(a: &Array2<C64>) -> f64 {
    let mut max = 0.0f64;
    for col in a.columns() {
        let s: f64 = col.iter().map(|z| z.norm()).sum();
        if s > max {
            max = s;
        }
    }
    max
}

/// Column-stacking vectorization: `vec(A)[i + n*j] = A[i, j]`.
pub fn vectorize(a: &Array2<C64>) -> Vec<C64> {
    let n = a.nrows();
    let mut v = Vec::with_capacity(n * a.ncols());
    for j in 0..a.ncols() {
        for i in 0..n {
            v.push(a[[i, j]]);
        }
    }
    v
}

/// Inverse of [`vectorize`] for a square matrix of dimension `n`.
pub fn unvectorize(v: &[C64], n: usize) -> Array2<C64> {
    assert_eq!(v.len(), n * n, "vector length must be n²");
    let mut a = Array2::zeros((n, n));
    for j in 0..n {
        for i in 0..n {
            a[[i, j]] = v[i + n * j];
        }
    }
    a
}
