//! Dense LU solves with partial pivoting.
//!
//! Self-contained replacements for the LAPACK getrf/getrs pair. The complex
//! variant backs the Padé denominators in [`crate::linalg::expm`]; the real
//! variant backs the (tiny) regression normal equations. Keeping these in
//! crate avoids the multi-megabyte stack frames the system BLAS inverse
//! routines turn out to need, which overflow default worker threads.

use crate::error::{Error, Result};
use crate::C64;
use ndarray::Array2;
use num_complex::Complex64;

/// Solve A X = B for square complex A, overwriting nothing.
pub fn solve_c64(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "solve requires a square matrix");
    assert_eq!(n, b.nrows(), "dimension mismatch");
    let nrhs = b.ncols();

    // Row-major working copies.
    let mut lu: Vec<C64> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            lu.push(a[[i, j]]);
        }
    }
    let mut x: Vec<C64> = Vec::with_capacity(n * nrhs);
    for i in 0..n {
        for j in 0..nrhs {
            x.push(b[[i, j]]);
        }
    }

    for k in 0..n {
        // Pivot.
        let mut p = k;
        let mut best = lu[k * n + k].norm_sqr();
        for i in k + 1..n {
            let mag = lu[i * n + k].norm_sqr();
            if mag > best {
                best = mag;
                p = i;
            }
        }
        if p != k {
            for j in 0..n {
                lu.swap(k * n + j, p * n + j);
            }
            for j in 0..nrhs {
                x.swap(k * nrhs + j, p * nrhs + j);
            }
        }
        let pivot = lu[k * n + k];
        assert!(
            pivot.norm_sqr() > 0.0,
            "singular matrix in dense LU solve"
        );
        let inv = pivot.inv();
        for i in k + 1..n {
            let m = lu[i * n + k] * inv;
            if m == Complex64::ZERO {
                continue;
            }
            lu[i * n + k] = m;
            let (top, bottom) = lu.split_at_mut(i * n);
            let src = &top[k * n + k + 1..k * n + n];
            let dst = &mut bottom[k + 1..n];
            for (d, s) in dst.iter_mut().zip(src) {
                *d -= m * s;
            }
            let (xt, xb) = x.split_at_mut(i * nrhs);
            let xsrc = &xt[k * nrhs..k * nrhs + nrhs];
            let xdst = &mut xb[..nrhs];
            for (d, s) in xdst.iter_mut().zip(xsrc) {
                *d -= m * s;
            }
        }
    }

    // Back substitution.
    for k in (0..n).rev() {
        let inv = lu[k * n + k].inv();
        for j in 0..nrhs {
            let mut s = x[k * nrhs + j];
            for i in k + 1..n {
                s -= lu[k * n + i] * x[i * nrhs + j];
            }
            x[k * nrhs + j] = s * inv;
        }
    }

    Array2::from_shape_vec((n, nrhs), x).expect("shape")
}

/// Solve the real system A x = b; errors on (numerically) singular A.
pub fn solve_f64(a: &Array2<f64>, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    assert_eq!(n, b.len());
    let mut lu: Vec<f64> = a.iter().cloned().collect();
    let mut x = b.to_vec();

    let scale = lu.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    for k in 0..n {
        let mut p = k;
        let mut best = lu[k * n + k].abs();
        for i in k + 1..n {
            let mag = lu[i * n + k].abs();
            if mag > best {
                best = mag;
                p = i;
            }
        }
        if best <= scale * 1e-300 {
            return Err(Error::SingularSystem {
                n_samples: n,
                n_features: n,
            });
        }
        if p != k {
            for j in 0..n {
                lu.swap(k * n + j, p * n + j);
            }
            x.swap(k, p);
        }
        let inv = 1.0 / lu[k * n + k];
        for i in k + 1..n {
            let m = lu[i * n + k] * inv;
            if m == 0.0 {
                continue;
            }
            let (top, bottom) = lu.split_at_mut(i * n);
            let src = &top[k * n + k + 1..k * n + n];
            let dst = &mut bottom[k + 1..n];
            for (d, s) in dst.iter_mut().zip(src) {
                *d -= m * s;
            }
            x[i] -= m * x[k];
        }
    }
    for k in (0..n).rev() {
        let mut s = x[k];
        for i in k + 1..n {
            s -= lu[k * n + i] * x[i];
        }
        x[k] = s / lu[k * n + k];
    }
    Ok(x)
}
