//! Operators and states on a truncated Fock basis.
//!
//! Ladder operators, displacement/squeeze unitaries, the displaced squeezed
//! thermal family, quadratures with the convention X̂ = (a+a†)/2, and Wigner
//! functions via the displaced-parity expectation
//! `W(α) = (2/π)·Tr[ρ D(α) Π D†(α)]`.
//!
//! All operators built with the same [`FockDim`] share its dimension;
//! unitaries are accurate on the low-occupation block and degrade only near
//! the truncation edge, which [`gaussian_state`] guards against by bounding
//! the population of the top tenth of the basis.

use crate::error::{Error, Result};
use crate::linalg::{self, expm};
use crate::C64;
use ndarray::Array2;
use ndarray_linalg::{EigValsh, UPLO};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Truncation dimension of the Fock space (at least 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockDim(usize);

impl FockDim {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { dim });
        }
        Ok(FockDim(dim))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// Parameters of a displaced squeezed thermal state.
///
/// The squeezing parameter is ζ = r·e^{2iθ}, derived on demand. The paper's
/// tasks use r ∈ [0,2], θ ∈ [0,π/2], real α_D ∈ [0,5], n̄ ∈ [0,10]; the type
/// permits any physical value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeTarget {
    pub r: f64,
    pub theta: f64,
    pub alpha_d: C64,
    pub n_bar: f64,
}

impl SqueezeTarget {
    pub fn new(r: f64, theta: f64, alpha_d: C64, n_bar: f64) -> Result<Self> {
        if r < 0.0 || n_bar < 0.0 || !r.is_finite() || !theta.is_finite() || !n_bar.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "squeeze target requires r ≥ 0 and n̄ ≥ 0, got r = {r}, n̄ = {n_bar}"
            )));
        }
        Ok(SqueezeTarget {
            r,
            theta,
            alpha_d,
            n_bar,
        })
    }

    pub fn vacuum() -> Self {
        SqueezeTarget {
            r: 0.0,
            theta: 0.0,
            alpha_d: Complex64::ZERO,
            n_bar: 0.0,
        }
    }

    /// ζ = r·e^{2iθ}.
    pub fn zeta(&self) -> C64 {
        Complex64::from_polar(self.r, 2.0 * self.theta)
    }
}

/// Annihilation operator, ⟨n-1|a|n⟩ = √n.
pub fn annihilation(d: FockDim) -> Array2<C64> {
    let n = d.get();
    let mut a = Array2::zeros((n, n));
    for k in 1..n {
        a[[k - 1, k]] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    a
}

/// Creation operator a†.
pub fn creation(d: FockDim) -> Array2<C64> {
    linalg::dagger(&annihilation(d))
}

/// Number operator a†a (diagonal).
pub fn number_operator(d: FockDim) -> Array2<C64> {
    let n = d.get();
    Array2::from_diag(&ndarray::Array1::from_iter(
        (0..n).map(|k| Complex64::new(k as f64, 0.0)),
    ))
}

/// Parity operator Π = (-1)^{a†a}.
pub fn parity(d: FockDim) -> Array2<C64> {
    let n = d.get();
    Array2::from_diag(&ndarray::Array1::from_iter((0..n).map(|k| {
        Complex64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
    })))
}

/// Displacement operator D(α) = exp(α a† - α* a).
///
/// Accurate while |α|² stays well inside the truncation.
pub fn displacement(d: FockDim, alpha: C64) -> Array2<C64> {
    let a = annihilation(d);
    let adag = linalg::dagger(&a);
    let gen = adag.mapv(|z| z * alpha) - a.mapv(|z| z * alpha.conj());
    expm(&gen)
}

/// Squeezing operator S(ζ) = exp(-ζ/2 a†² + ζ*/2 a²).
pub fn squeeze(d: FockDim, zeta: C64) -> Array2<C64> {
    let a = annihilation(d);
    let adag = linalg::dagger(&a);
    let a2 = a.dot(&a);
    let adag2 = adag.dot(&adag);
    let half = Complex64::new(0.5, 0.0);
    let gen = adag2.mapv(|z| z * (-zeta * half)) + a2.mapv(|z| z * (zeta.conj() * half));
    expm(&gen)
}

/// Quadrature operators (X̂, Ŷ) with X̂ = (a+a†)/2, Ŷ = (a-a†)/(2i).
pub fn quadratures(d: FockDim) -> (Array2<C64>, Array2<C64>) {
    let a = annihilation(d);
    let adag = linalg::dagger(&a);
    let half = Complex64::new(0.5, 0.0);
    let x = (&a + &adag).mapv(|z| z * half);
    let y = (&a - &adag).mapv(|z| z * (half / Complex64::i()));
    (x, y)
}

/// Hermitian, positive, unit-trace state on a truncated Fock basis.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim: FockDim,
    matrix: Array2<C64>,
}

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-8;
pub const POSITIVITY_TOL: f64 = 1e-8;

impl DensityMatrix {
    /// Validate and wrap a candidate density matrix.
    pub fn new(dim: FockDim, matrix: Array2<C64>) -> Result<Self> {
        let n = dim.get();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: matrix.nrows(),
            });
        }
        let herm = linalg::hermiticity_defect(&matrix);
        if herm > HERMITICITY_TOL {
            return Err(Error::NonHermitian {
                max_dev: herm,
                tol: HERMITICITY_TOL,
            });
        }
        let tr = linalg::trace(&matrix);
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix {
                what: "trace deviates from 1",
                value: (tr - Complex64::ONE).norm(),
                tol: TRACE_TOL,
            });
        }
        let eigs = matrix
            .eigvalsh(UPLO::Lower)
            .map_err(|_| Error::InvalidDensityMatrix {
                what: "eigenvalue computation failed",
                value: f64::NAN,
                tol: POSITIVITY_TOL,
            })?;
        let min_eig = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::InvalidDensityMatrix {
                what: "negative eigenvalue",
                value: min_eig,
                tol: POSITIVITY_TOL,
            });
        }
        Ok(DensityMatrix { dim, matrix })
    }

    pub fn dim(&self) -> FockDim {
        self.dim
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn vacuum(dim: FockDim) -> Self {
        Self::fock_state(dim, 0).expect("vacuum always fits")
    }

    pub fn fock_state(dim: FockDim, n: usize) -> Result<Self> {
        if n >= dim.get() {
            return Err(Error::DimensionMismatch {
                expected: dim.get(),
                got: n,
            });
        }
        let mut m = Array2::zeros((dim.get(), dim.get()));
        m[[n, n]] = Complex64::ONE;
        Ok(DensityMatrix { dim, matrix: m })
    }

    /// ⟨O⟩ = Tr(ρ O).
    pub fn expectation(&self, op: &Array2<C64>) -> C64 {
        linalg::trace(&self.matrix.dot(op))
    }

    /// Tr(ρ a†a), real part.
    pub fn mean_occupation(&self) -> f64 {
        self.expectation(&number_operator(self.dim)).re
    }

    /// Tr(ρ²).
    pub fn purity(&self) -> f64 {
        linalg::trace(&self.matrix.dot(&self.matrix)).re
    }

    /// Uhlmann fidelity F(ρ, σ) = (Tr √(√ρ σ √ρ))².
    pub fn fidelity(&self, other: &DensityMatrix) -> f64 {
        let (evals, evecs) = linalg::eigh_hermitian(&self.matrix);
        // √ρ from the spectral decomposition, clipping tiny negatives.
        let n = self.dim.get();
        let mut sqrt_rho = Array2::zeros((n, n));
        for k in 0..n {
            let lk = evals[k].max(0.0).sqrt();
            if lk == 0.0 {
                continue;
            }
            let col = evecs.column(k);
            for i in 0..n {
                for j in 0..n {
                    sqrt_rho[[i, j]] += col[i] * col[j].conj() * lk;
                }
            }
        }
        let inner = sqrt_rho.dot(&other.matrix).dot(&sqrt_rho);
        let sym = (&inner + &linalg::dagger(&inner)).mapv(|z| z * 0.5);
        let vals = sym.eigvalsh(UPLO::Lower).expect("eigvalsh");
        let tr: f64 = vals.iter().map(|&l| l.max(0.0).sqrt()).sum();
        tr * tr
    }
}

/// Thermal state with mean occupation n̄: p(n) = n̄ⁿ/(n̄+1)ⁿ⁺¹.
pub fn thermal_state(d: FockDim, n_bar: f64) -> Result<DensityMatrix> {
    if n_bar < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "thermal occupation must be nonnegative, got {n_bar}"
        )));
    }
    let n = d.get();
    let mut m = Array2::zeros((n, n));
    if n_bar == 0.0 {
        m[[0, 0]] = Complex64::ONE;
    } else {
        let ratio = n_bar / (n_bar + 1.0);
        let mut p = 1.0 / (n_bar + 1.0);
        let mut total = 0.0;
        for k in 0..n {
            m[[k, k]] = Complex64::new(p, 0.0);
            total += p;
            p *= ratio;
        }
        // Renormalize the truncated tail.
        let inv = Complex64::new(1.0 / total, 0.0);
        m.mapv_inplace(|z| z * inv);
    }
    DensityMatrix::new(d, m)
}

/// Fraction of the basis treated as the leakage guard band (top 10%).
pub const LEAKAGE_FRACTION: f64 = 0.1;
pub const LEAKAGE_THRESHOLD: f64 = 1e-6;

/// Displaced squeezed thermal state ρ = D(α_D) S(ζ) ρ_th S†(ζ) D†(α_D).
///
/// Errors if the top 10% of Fock levels carry more than 1e-6 population,
/// indicating an insufficient truncation for these parameters.
pub fn gaussian_state(d: FockDim, target: &SqueezeTarget) -> Result<DensityMatrix> {
    let n = d.get();
    let rho_th = thermal_state(d, target.n_bar)?;
    let s = squeeze(d, target.zeta());
    let disp = displacement(d, target.alpha_d);
    let x = disp.dot(&s);
    let raw = x.dot(rho_th.matrix()).dot(&linalg::dagger(&x));

    let tr = linalg::trace(&raw).re;
    let mut m = raw.mapv(|z| z / tr);
    // Congruence keeps positivity exactly; symmetrize rounding noise.
    let md = linalg::dagger(&m);
    m = (&m + &md).mapv(|z| z * 0.5);

    let guard = ((n as f64 * LEAKAGE_FRACTION).ceil() as usize).max(1);
    let leaked: f64 = (n - guard..n).map(|k| m[[k, k]].re).sum();
    if leaked > LEAKAGE_THRESHOLD {
        return Err(Error::OccupationLeakage {
            population: leaked,
            threshold: LEAKAGE_THRESHOLD,
        });
    }
    DensityMatrix::new(d, m)
}

/// Wigner function samples on a rectangular phase-space grid.
///
/// Axes are the quadratures x = ⟨X̂⟩, y = ⟨Ŷ⟩, so a coherent state |α⟩ peaks
/// at (Re α, Im α) and the function integrates to 1.
#[derive(Debug, Clone)]
pub struct WignerGrid {
    pub x_axis: Vec<f64>,
    pub y_axis: Vec<f64>,
    /// values[[i, j]] = W(x_axis[i], y_axis[j])
    pub values: Array2<f64>,
}

impl WignerGrid {
    /// Trapezoidal ∫∫ W dx dy.
    pub fn integral(&self) -> f64 {
        let nx = self.x_axis.len();
        let ny = self.y_axis.len();
        let dx = (self.x_axis[nx - 1] - self.x_axis[0]) / (nx - 1) as f64;
        let dy = (self.y_axis[ny - 1] - self.y_axis[0]) / (ny - 1) as f64;
        let mut sum = 0.0;
        for i in 0..nx {
            let wx = if i == 0 || i == nx - 1 { 0.5 } else { 1.0 };
            for j in 0..ny {
                let wy = if j == 0 || j == ny - 1 { 0.5 } else { 1.0 };
                sum += wx * wy * self.values[[i, j]];
            }
        }
        sum * dx * dy
    }
}

pub const WIGNER_MIN_POINTS: usize = 16;

/// Wigner function by displaced parity, W(α) = (2/π) Tr[ρ D(α) Π D†(α)].
///
/// `D(x+iy)` is split as `D(x)·D(iy)` up to a phase that cancels in the
/// parity sandwich, so only nx+ny exponentials are needed.
pub fn wigner(
    rho: &DensityMatrix,
    x_range: (f64, f64),
    y_range: (f64, f64),
    nx: usize,
    ny: usize,
) -> Result<WignerGrid> {
    if nx < WIGNER_MIN_POINTS || ny < WIGNER_MIN_POINTS {
        return Err(Error::GridTooCoarse {
            points: nx.min(ny),
            min: WIGNER_MIN_POINTS,
        });
    }
    let d = rho.dim();
    let pi_op = parity(d);

    let x_axis: Vec<f64> = (0..nx)
        .map(|i| x_range.0 + (x_range.1 - x_range.0) * i as f64 / (nx - 1) as f64)
        .collect();
    let y_axis: Vec<f64> = (0..ny)
        .map(|j| y_range.0 + (y_range.1 - y_range.0) * j as f64 / (ny - 1) as f64)
        .collect();

    // P_y = D(iy) Π D(iy)†,  Q_x = D(x)† ρ D(x);  W = (2/π) Tr(Q_x P_y).
    let p_y: Vec<Array2<C64>> = y_axis
        .iter()
        .map(|&y| {
            let dy = displacement(d, Complex64::new(0.0, y));
            dy.dot(&pi_op).dot(&linalg::dagger(&dy))
        })
        .collect();

    let mut values = Array2::zeros((nx, ny));
    for (i, &x) in x_axis.iter().enumerate() {
        let dx = displacement(d, Complex64::new(x, 0.0));
        let q_x = linalg::dagger(&dx).dot(rho.matrix()).dot(&dx);
        for (j, py) in p_y.iter().enumerate() {
            let mut tr = Complex64::ZERO;
            for a in 0..d.get() {
                for b in 0..d.get() {
                    tr += q_x[[a, b]] * py[[b, a]];
                }
            }
            values[[i, j]] = tr.re * 2.0 / std::f64::consts::PI;
        }
    }

    Ok(WignerGrid {
        x_axis,
        y_axis,
        values,
    })
}
