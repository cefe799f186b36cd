//! Banded LU factorization with partial pivoting.
//!
//! LAPACK-style band storage: the factored array holds `2·kl + ku + 1` band
//! rows per column (the extra `kl` rows absorb pivoting fill-in). Used for
//! the steady-state solve, where the vectorized Liouvillian has bandwidth
//! ~2·dim out of dim² rows, making a dense solve needlessly cubic.

use crate::linalg::dia::DiaMatrix;
use crate::C64;
use num_complex::Complex64;

pub struct BandedLu {
    n: usize,
    kl: usize,
    ku_fill: usize, // ku + kl after fill-in
    ld: usize,
    /// Column-major: ab[j*ld + (i - j + ku_fill)] = A[i, j].
    ab: Vec<C64>,
    ipiv: Vec<usize>,
}

impl BandedLu {
    /// Factor `A - μI` from diagonal storage.
    ///
    /// Pivots smaller in magnitude than `pivot_floor` are replaced by that
    /// floor, which keeps inverse iteration on a (near-)singular matrix
    /// well-defined.
    pub fn factor_shifted(a: &DiaMatrix, mu: C64, pivot_floor: f64) -> Self {
        let n = a.dim();
        let (kl, ku) = a.bandwidth();
        let ku_fill = ku + kl;
        let ld = 2 * kl + ku + 1;
        let mut ab = vec![Complex64::ZERO; ld * n];

        // Scatter A into band storage.
        for d in a.offsets().collect::<Vec<_>>() {
            if d >= 0 {
                let dd = d as usize;
                for r in 0..n - dd {
                    let j = r + dd;
                    ab[j * ld + (r + ku_fill - j)] = a.get(r, j);
                }
            } else {
                let k = d.unsigned_abs();
                for c in 0..n - k {
                    let i = c + k;
                    ab[c * ld + (i + ku_fill - c)] = a.get(i, c);
                }
            }
        }
        if mu != Complex64::ZERO {
            for j in 0..n {
                ab[j * ld + ku_fill] -= mu;
            }
        }

        let mut ipiv = vec![0usize; n];
        for j in 0..n {
            // Pivot search in column j over rows j..=min(j+kl, n-1).
            let imax = (j + kl).min(n - 1);
            let mut p = j;
            let mut best = ab[j * ld + ku_fill].norm_sqr();
            for i in j + 1..=imax {
                let mag = ab[j * ld + (i + ku_fill - j)].norm_sqr();
                if mag > best {
                    best = mag;
                    p = i;
                }
            }
            ipiv[j] = p;

            // Swap rows j and p across the affected columns.
            let jmax = (j + ku_fill).min(n - 1);
            if p != j {
                for k in j..=jmax {
                    let rj = k * ld + (j + ku_fill - k);
                    let rp = k * ld + (p + ku_fill - k);
                    ab.swap(rj, rp);
                }
            }

            let mut pivot = ab[j * ld + ku_fill];
            if pivot.norm() < pivot_floor {
                pivot = Complex64::new(pivot_floor, 0.0);
                ab[j * ld + ku_fill] = pivot;
            }

            // Multipliers in column j, rows j+1..=imax (contiguous in ab).
            let inv = pivot.inv();
            for i in j + 1..=imax {
                ab[j * ld + (i + ku_fill - j)] *= inv;
            }

            // Trailing update, column by column so each AXPY is contiguous.
            for k in j + 1..=jmax {
                let ajk = ab[k * ld + (j + ku_fill - k)];
                if ajk == Complex64::ZERO {
                    continue;
                }
                let (mult_col, rest) = ab.split_at_mut(k * ld);
                let mult = &mult_col[j * ld + (ku_fill + 1)..j * ld + (imax + ku_fill - j + 1)];
                let dst_lo = j + 1 + ku_fill - k;
                let dst = &mut rest[dst_lo..dst_lo + mult.len()];
                for (d, m) in dst.iter_mut().zip(mult) {
                    *d -= m * ajk;
                }
            }
        }

        BandedLu {
            n,
            kl,
            ku_fill,
            ld,
            ab,
            ipiv,
        }
    }

    /// Solve `(A - μI) x = b` in place.
    pub fn solve_in_place(&self, b: &mut [C64]) {
        assert_eq!(b.len(), self.n);
        let (n, ld, kuf) = (self.n, self.ld, self.ku_fill);

        // Forward: apply pivots and L (unit diagonal, multipliers stored).
        for j in 0..n {
            let p = self.ipiv[j];
            if p != j {
                b.swap(j, p);
            }
            let bj = b[j];
            if bj == Complex64::ZERO {
                continue;
            }
            let imax = (j + self.kl).min(n - 1);
            for i in j + 1..=imax {
                b[i] -= self.ab[j * ld + (i + kuf - j)] * bj;
            }
        }

        // Back substitution with U (bandwidth ku_fill).
        for j in (0..n).rev() {
            let mut s = b[j];
            let kmax = (j + kuf).min(n - 1);
            for k in j + 1..=kmax {
                s -= self.ab[k * ld + (j + kuf - k)] * b[k];
            }
            b[j] = s / self.ab[j * ld + kuf];
        }
    }
}
