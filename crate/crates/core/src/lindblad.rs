//! Lindblad dynamics of the lossy Kerr mode.
//!
//! The master equation ∂_t ρ = 𝓛ρ = -i[H, ρ] + Σ_L (LρL† - ½{L†L, ρ})
//! (ħ = 1, energies in μeV) is handled through three views of the same
//! superoperator:
//!
//! - a vectorized matrix in the column-stacking convention,
//!   𝓛 = -i(I⊗H - Hᵀ⊗I) + Σ [L̄⊗L - ½ I⊗(L†L) - ½ (L†L)ᵀ⊗I],
//!   kept in diagonal-sparse form (dense on request via
//!   [`Liouvillian::matrix`]);
//! - direct application to density matrices ([`Liouvillian::apply_matrix`]),
//!   which cross-checks the vectorization;
//! - the action `e^{𝓛τ}v` under the correlation-function stepper.
//!
//! The steady state solves 𝓛ρ = 0 by inverse iteration on a banded
//! factorization of 𝓛 - μI with a μ far inside the spectral gap, trace
//! normalized; the propagated-from-vacuum route e^{𝓛t₀}|0⟩⟨0| stays
//! available as a cross-check. Two-time correlations follow from quantum
//! regression: propagate a·ρ_SS and trace against a†.

use crate::error::{Error, Result};
use crate::fock::{annihilation, DensityMatrix, FockDim};
use crate::linalg::band::BandedLu;
use crate::linalg::dia::DiaMatrix;
use crate::linalg::expmv::Expmv;
use crate::linalg::{self, expm};
use crate::C64;
use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Cavity parameters: Kerr nonlinearity U and loss rate γ_c, both in μeV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    pub u: f64,
    pub gamma_c: f64,
}

impl Default for CavityParams {
    /// U = 12 μeV, γ_c = 67 ns⁻¹ = 44.1 μeV.
    fn default() -> Self {
        CavityParams {
            u: 12.0,
            gamma_c: 44.1,
        }
    }
}

impl CavityParams {
    pub fn new(u: f64, gamma_c: f64) -> Result<Self> {
        if u < 0.0 || gamma_c <= 0.0 || !u.is_finite() || !gamma_c.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "cavity requires U ≥ 0 and γ_c > 0, got U = {u}, γ_c = {gamma_c}"
            )));
        }
        Ok(CavityParams { u, gamma_c })
    }

    /// Kerr Hamiltonian H = (U/2) a†a†aa = (U/2) n(n-1), diagonal.
    pub fn kerr_hamiltonian(&self, d: FockDim) -> Array2<C64> {
        let n = d.get();
        Array2::from_diag(&ndarray::Array1::from_iter((0..n).map(|k| {
            Complex64::new(0.5 * self.u * (k * k.saturating_sub(1)) as f64, 0.0)
        })))
    }
}

/// A jump operator L̂ entering the dissipator (units √μeV).
#[derive(Debug, Clone)]
pub struct LindbladTerm {
    operator: Array2<C64>,
}

impl LindbladTerm {
    pub fn new(operator: Array2<C64>) -> Self {
        LindbladTerm { operator }
    }

    pub fn operator(&self) -> &Array2<C64> {
        &self.operator
    }
}

/// Time grids for propagation and correlation sampling (units ħ/μeV).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagatorConfig {
    /// Propagator window Δt.
    pub dt: f64,
    /// Settling time for the propagated steady-state cross-check.
    pub t0: f64,
    /// Correlation horizon.
    pub tau_max: f64,
    /// Correlation sampling step.
    pub tau_step: f64,
}

impl PropagatorConfig {
    /// Defaults tied to the loss rate: Δt = τ_step = 0.05/γ, t₀ = 30/γ,
    /// τ_max = 40/γ.
    pub fn for_rate(gamma: f64) -> Self {
        PropagatorConfig {
            dt: 0.05 / gamma,
            t0: 30.0 / gamma,
            tau_max: 40.0 / gamma,
            tau_step: 0.05 / gamma,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dt <= 0.0 || self.t0 <= 0.0 || self.tau_max <= 0.0 || self.tau_step <= 0.0 {
            return Err(Error::InvalidConfig(
                "propagator times must all be positive".into(),
            ));
        }
        if self.tau_step > self.tau_max {
            return Err(Error::InvalidConfig(
                "τ_step must not exceed τ_max".into(),
            ));
        }
        Ok(())
    }
}

pub const HAMILTONIAN_HERMITICITY_TOL: f64 = 1e-10;

/// The vectorized Lindblad generator.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    dim: FockDim,
    hamiltonian: Array2<C64>,
    jumps: Vec<LindbladTerm>,
    dia: DiaMatrix,
}

/// Build the Liouvillian for Hamiltonian `h` and jump operators `jumps`.
pub fn build_liouvillian(
    d: FockDim,
    h: &Array2<C64>,
    jumps: &[LindbladTerm],
) -> Result<Liouvillian> {
    let n = d.get();
    if h.nrows() != n || h.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: h.nrows(),
        });
    }
    for j in jumps {
        if j.operator().nrows() != n || j.operator().ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: j.operator().nrows(),
            });
        }
    }
    let herm = linalg::hermiticity_defect(h);
    if herm > HAMILTONIAN_HERMITICITY_TOL {
        return Err(Error::NonHermitian {
            max_dev: herm,
            tol: HAMILTONIAN_HERMITICITY_TOL,
        });
    }

    let mut triplets: Vec<(usize, usize, C64)> = Vec::new();
    let minus_i = -Complex64::i();

    // -i (I⊗H): rows (i + n k), cols (j + n k) carry -i h[i,j].
    // +i (Hᵀ⊗I): rows (a + n b), cols (a + n d) carry +i h[d,b].
    for i in 0..n {
        for j in 0..n {
            let hij = h[[i, j]];
            if hij == Complex64::ZERO {
                continue;
            }
            for k in 0..n {
                triplets.push((i + n * k, j + n * k, minus_i * hij));
                triplets.push((k + n * j, k + n * i, -minus_i * hij));
            }
        }
    }

    for term in jumps {
        let l = term.operator();
        let ldag_l = linalg::dagger(l).dot(l);

        // L̄⊗L: rows (i + n j), cols (k + n m) carry conj(l[j,m])·l[i,k].
        for j in 0..n {
            for m in 0..n {
                let ljm = l[[j, m]];
                if ljm == Complex64::ZERO {
                    continue;
                }
                let cjm = ljm.conj();
                for i in 0..n {
                    for k in 0..n {
                        let lik = l[[i, k]];
                        if lik == Complex64::ZERO {
                            continue;
                        }
                        triplets.push((i + n * j, k + n * m, cjm * lik));
                    }
                }
            }
        }

        // -½ I⊗(L†L) and -½ (L†L)ᵀ⊗I.
        let half = Complex64::new(0.5, 0.0);
        for i in 0..n {
            for j in 0..n {
                let g = ldag_l[[i, j]];
                if g == Complex64::ZERO {
                    continue;
                }
                for k in 0..n {
                    triplets.push((i + n * k, j + n * k, -half * g));
                    triplets.push((k + n * j, k + n * i, -half * g));
                }
            }
        }
    }

    let dia = DiaMatrix::from_triplets(n * n, triplets);
    Ok(Liouvillian {
        dim: d,
        hamiltonian: h.clone(),
        jumps: jumps.to_vec(),
        dia,
    })
}

impl Liouvillian {
    pub fn dim(&self) -> FockDim {
        self.dim
    }

    pub fn hamiltonian(&self) -> &Array2<C64> {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[LindbladTerm] {
        &self.jumps
    }

    /// Sparse diagonal-storage view of the superoperator matrix.
    pub fn dia(&self) -> &DiaMatrix {
        &self.dia
    }

    /// Dense dim²×dim² superoperator matrix. O(dim⁴) memory; at dim = 60
    /// this materializes 207 MB, so it is computed on demand rather than
    /// stored.
    pub fn matrix(&self) -> Array2<C64> {
        self.dia.to_dense()
    }

    /// 𝓛ρ through operator algebra (not the vectorized matrix).
    pub fn apply_matrix(&self, rho: &Array2<C64>) -> Array2<C64> {
        let h = &self.hamiltonian;
        let comm = h.dot(rho) - rho.dot(h);
        let mut out = comm.mapv(|z| z * (-Complex64::i()));
        for term in &self.jumps {
            let l = term.operator();
            let ldag = linalg::dagger(l);
            let ldl = ldag.dot(l);
            let sandwich = l.dot(rho).dot(&ldag);
            let anti = ldl.dot(rho) + rho.dot(&ldl);
            out = out + sandwich - anti.mapv(|z| z * 0.5);
        }
        out
    }

    /// 𝓛 applied to a vectorized matrix.
    pub fn apply_vec(&self, v: &[C64], out: &mut [C64]) {
        self.dia.mul_vec(v, out);
    }
}

/// Propagator e^{𝓛t} as a dense superoperator matrix.
///
/// Dense scaling-and-squaring on the dim²×dim² matrix; meant for moderate
/// dimensions and cross-checks. Propagation of states in the large-dim
/// pipelines goes through [`g1_correlation`]'s stepper instead.
pub fn propagator(liou: &Liouvillian, t: f64) -> Result<Array2<C64>> {
    if t < 0.0 {
        return Err(Error::NegativeTime { t });
    }
    let scaled = liou.matrix().mapv(|z| z * t);
    Ok(expm(&scaled))
}

pub const STEADY_STATE_TOL: f64 = 1e-9;
const STEADY_SHIFT: f64 = 1e-8;
const MAX_INVERSE_ITERATIONS: usize = 8;

/// Steady state of 𝓛, i.e. the trace-one kernel element.
///
/// `rate` sets the physical rate scale (typically γ_c) for the shift and
/// the residual tolerance ‖𝓛ρ‖_F < 1e-9·rate. Errors when the kernel is
/// degenerate: two independent starting states then relax to different
/// kernel elements.
pub fn steady_state(liou: &Liouvillian, rate: f64) -> Result<DensityMatrix> {
    let n = liou.dim().get();
    let mu = Complex64::new(STEADY_SHIFT * rate, 0.0);
    let lu = BandedLu::factor_shifted(liou.dia(), mu, 0.0);

    let from_start = |start: Vec<C64>| -> Result<Array2<C64>> {
        let mut v = start;
        for _ in 0..MAX_INVERSE_ITERATIONS {
            lu.solve_in_place(&mut v);
            // Normalize by the largest component to avoid overflow.
            let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if !scale.is_finite() || scale == 0.0 {
                break;
            }
            let inv = Complex64::new(1.0 / scale, 0.0);
            v.iter_mut().for_each(|z| *z *= inv);

            let rho = finalize(&v, n);
            let residual = residual_norm(liou, &rho);
            if residual < STEADY_STATE_TOL * rate {
                return Ok(rho);
            }
        }
        let rho = finalize(&v, n);
        let residual = residual_norm(liou, &rho);
        if residual < STEADY_STATE_TOL * rate {
            Ok(rho)
        } else {
            Err(Error::DegenerateSteadyState {
                residual,
                tol: STEADY_STATE_TOL * rate,
            })
        }
    };

    // Maximally mixed start: guaranteed overlap with any steady state.
    let mut start_a = vec![Complex64::ZERO; n * n];
    for i in 0..n {
        start_a[i + n * i] = Complex64::new(1.0 / n as f64, 0.0);
    }
    let rho_a = from_start(start_a)?;

    // Second start probes kernel degeneracy.
    let mut start_b = vec![Complex64::ZERO; n * n];
    for i in 0..n {
        start_b[i + n * i] = Complex64::new((i + 1) as f64, 0.0);
    }
    let tr_b: f64 = (0..n).map(|i| start_b[i + n * i].re).sum();
    start_b
        .iter_mut()
        .for_each(|z| *z /= Complex64::new(tr_b, 0.0));
    let rho_b = from_start(start_b)?;

    let diff = linalg::max_abs(&(&rho_a - &rho_b));
    if diff > 1e-6 {
        return Err(Error::DegenerateSteadyState {
            residual: diff,
            tol: 1e-6,
        });
    }

    DensityMatrix::new(liou.dim(), rho_a)
}

fn finalize(v: &[C64], n: usize) -> Array2<C64> {
    let m = linalg::unvectorize(v, n);
    let md = linalg::dagger(&m);
    let mut rho = (&m + &md).mapv(|z| z * 0.5);
    let tr = linalg::trace(&rho);
    rho.mapv_inplace(|z| z / tr);
    rho
}

fn residual_norm(liou: &Liouvillian, rho: &Array2<C64>) -> f64 {
    let n = liou.dim().get();
    let v = linalg::vectorize(rho);
    let mut out = vec![Complex64::ZERO; n * n];
    liou.apply_vec(&v, &mut out);
    out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Steady state by long propagation from vacuum, e^{𝓛t₀}|0⟩⟨0|.
///
/// The cross-check route; slower than [`steady_state`] but independent of
/// the banded solve.
pub fn steady_state_by_propagation(
    liou: &Liouvillian,
    cfg: &PropagatorConfig,
) -> Result<DensityMatrix> {
    cfg.validate()?;
    let n = liou.dim().get();
    let vac = DensityMatrix::vacuum(liou.dim());
    let mut v = linalg::vectorize(vac.matrix());
    let mut stepper = Expmv::new(liou.dia().clone(), 1e-13);
    stepper.step(&mut v, cfg.t0)?;
    let rho = finalize(&v, n);
    DensityMatrix::new(liou.dim(), rho)
}

/// Sampled two-time correlation ⟨a†(τ)a⟩ on a uniform τ grid.
#[derive(Debug, Clone)]
pub struct G1 {
    pub tau_step: f64,
    /// values[k] = ⟨a†(k·τ_step) a⟩.
    pub values: Vec<C64>,
    /// ⟨a†⟩_SS·⟨a⟩_SS, the τ→∞ factorized offset.
    pub coherent_offset: C64,
    /// |g1(τ_max) - offset| against the convergence tolerance.
    pub horizon_residual: f64,
    pub horizon_converged: bool,
}

impl G1 {
    pub fn tau_grid(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |k| k as f64 * self.tau_step)
    }
}

pub const HORIZON_REL_TOL: f64 = 1e-4;

/// Quantum-regression evaluation of ⟨a†(τ)a⟩ for τ ∈ {0, τ_step, …, τ_max}.
///
/// Propagates the (non-Hermitian) matrix a·ρ_SS under e^{𝓛τ} and traces
/// against a†. Each grid step is advanced by the truncated-Taylor stepper
/// at tolerance 1e-13, so the grid only affects sampling, not accuracy.
pub fn g1_correlation(
    liou: &Liouvillian,
    rho_ss: &DensityMatrix,
    cfg: &PropagatorConfig,
) -> Result<G1> {
    cfg.validate()?;
    let n = liou.dim().get();
    let a = annihilation(liou.dim());

    let a_rho = a.dot(rho_ss.matrix());
    let mut v = linalg::vectorize(&a_rho);

    // Tr(a†M) = Σ conj(a[j,i]) M[j,i] = ⟨vec(a), vec(M)⟩.
    let w = linalg::vectorize(&a);
    let dot_w = |v: &[C64]| -> C64 {
        w.iter()
            .zip(v.iter())
            .map(|(wi, vi)| wi.conj() * vi)
            .sum()
    };

    let mean_a = linalg::trace(&a_rho); // Tr(a ρ) = ⟨a⟩
    let coherent_offset = mean_a.conj() * mean_a;

    let steps = (cfg.tau_max / cfg.tau_step).round() as usize;
    let mut values = Vec::with_capacity(steps + 1);
    values.push(dot_w(&v));

    let mut stepper = Expmv::new(liou.dia().clone(), 1e-13);
    for _ in 0..steps {
        stepper.step(&mut v, cfg.tau_step)?;
        values.push(dot_w(&v));
    }

    let g0 = values[0].norm();
    let horizon_residual = (values[steps] - coherent_offset).norm();
    let tol = HORIZON_REL_TOL * g0 + 1e-12 * (1.0 + coherent_offset.norm());
    let horizon_converged = horizon_residual <= tol;
    let _ = n;

    Ok(G1 {
        tau_step: cfg.tau_step,
        values,
        coherent_offset,
        horizon_residual,
        horizon_converged,
    })
}
