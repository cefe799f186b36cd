//! Sparse matrices stored by diagonals.
//!
//! Vectorized Lindblad superoperators only populate a handful of diagonal
//! offsets `Δi + n·Δj`, so diagonal storage gives contiguous,
//! gather-free products — the hot operation under the correlation-function
//! stepper.

use crate::C64;
use ndarray::Array2;
use num_complex::Complex64;

/// Square sparse matrix as a list of (offset, diagonal) pairs.
///
/// Offset `d` holds entries `A[r, r+d]`; the diagonal vector is indexed by
/// the row `r` over its valid range.
#[derive(Debug, Clone)]
pub struct DiaMatrix {
    n: usize,
    /// Sorted by offset; each diagonal has length n - |offset|.
    diags: Vec<(isize, Vec<C64>)>,
}

impl DiaMatrix {
    /// Assemble from (row, col, value) triplets, accumulating duplicates.
    pub fn from_triplets(n: usize, triplets: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let mut by_offset: std::collections::BTreeMap<isize, Vec<C64>> =
            std::collections::BTreeMap::new();
        for (r, c, v) in triplets {
            debug_assert!(r < n && c < n);
            if v == Complex64::ZERO {
                continue;
            }
            let d = c as isize - r as isize;
            let diag = by_offset
                .entry(d)
                .or_insert_with(|| vec![Complex64::ZERO; n - d.unsigned_abs()]);
            let idx = if d >= 0 { r } else { c };
            diag[idx] += v;
        }
        // Drop diagonals that cancelled to zero.
        let diags = by_offset
            .into_iter()
            .filter(|(_, diag)| diag.iter().any(|z| z.norm_sqr() > 0.0))
            .collect();
        DiaMatrix { n, diags }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn offsets(&self) -> impl Iterator<Item = isize> + '_ {
        self.diags.iter().map(|(d, _)| *d)
    }

    /// Lower and upper bandwidth (kl, ku).
    pub fn bandwidth(&self) -> (usize, usize) {
        let mut kl = 0usize;
        let mut ku = 0usize;
        for (d, _) in &self.diags {
            if *d < 0 {
                kl = kl.max(d.unsigned_abs());
            } else {
                ku = ku.max(*d as usize);
            }
        }
        (kl, ku)
    }

    /// Entry accessor, O(#diagonals).
    pub fn get(&self, r: usize, c: usize) -> C64 {
        let d = c as isize - r as isize;
        for (off, diag) in &self.diags {
            if *off == d {
                let idx = if d >= 0 { r } else { c };
                return diag[idx];
            }
        }
        Complex64::ZERO
    }

    /// y = A x.
    pub fn mul_vec(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        y.fill(Complex64::ZERO);
        for (d, diag) in &self.diags {
            if *d >= 0 {
                let d = *d as usize;
                // y[r] += diag[r] * x[r + d]
                for (r, v) in diag.iter().enumerate() {
                    y[r] += v * x[r + d];
                }
            } else {
                let k = d.unsigned_abs();
                // entries A[c + k, c]: y[c + k] += diag[c] * x[c]
                for (c, v) in diag.iter().enumerate() {
                    y[c + k] += v * x[c];
                }
            }
        }
    }

    /// Mean of the main diagonal (trace / n).
    pub fn mean_diagonal(&self) -> C64 {
        for (d, diag) in &self.diags {
            if *d == 0 {
                return diag.iter().sum::<C64>() / self.n as f64;
            }
        }
        Complex64::ZERO
    }

    /// Shift the main diagonal by `-mu` (A ← A - μI).
    pub fn shifted(&self, mu: C64) -> DiaMatrix {
        let mut out = self.clone();
        let mut has_main = false;
        for (d, diag) in &mut out.diags {
            if *d == 0 {
                for v in diag.iter_mut() {
                    *v -= mu;
                }
                has_main = true;
            }
        }
        if !has_main {
            out.diags.push((0, vec![-mu; out.n]));
            out.diags.sort_by_key(|(d, _)| *d);
        }
        out
    }

    /// 1-norm (maximum absolute column sum).
    pub fn norm_1(&self) -> f64 {
        let mut col_sums = vec![0.0f64; self.n];
        for (d, diag) in &self.diags {
            if *d >= 0 {
                let d = *d as usize;
                for (r, v) in diag.iter().enumerate() {
                    col_sums[r + d] += v.norm();
                }
            } else {
                for (c, v) in diag.iter().enumerate() {
                    col_sums[c] += v.norm();
                }
            }
        }
        col_sums.into_iter().fold(0.0, f64::max)
    }

    /// Materialize densely. Quadratic memory; intended for checks and small
    /// dimensions.
    pub fn to_dense(&self) -> Array2<C64> {
        let mut a = Array2::zeros((self.n, self.n));
        for (d, diag) in &self.diags {
            if *d >= 0 {
                let d = *d as usize;
                for (r, v) in diag.iter().enumerate() {
                    a[[r, r + d]] = *v;
                }
            } else {
                let k = d.unsigned_abs();
                for (c, v) in diag.iter().enumerate() {
                    a[[c + k, c]] = *v;
                }
            }
        }
        a
    }
}
