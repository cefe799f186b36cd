//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("Fock dimension must be at least 2, got {dim}")]
    InvalidDimension { dim: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian: max |A - A†| = {max_dev:.3e} exceeds {tol:.3e}")]
    NonHermitian { max_dev: f64, tol: f64 },

    #[error(
        "state is not a density matrix: {what} (value {value:.3e}, tolerance {tol:.3e})"
    )]
    InvalidDensityMatrix {
        what: &'static str,
        value: f64,
        tol: f64,
    },

    #[error(
        "Fock truncation leaks: population {population:.3e} in the top levels exceeds {threshold:.1e}"
    )]
    OccupationLeakage { population: f64, threshold: f64 },

    #[error("Wigner grid too coarse: {points} points per axis, need at least {min}")]
    GridTooCoarse { points: usize, min: usize },

    #[error("propagation time must be nonnegative, got {t}")]
    NegativeTime { t: f64 },

    #[error(
        "steady state did not converge: residual ‖Lρ‖ = {residual:.3e} exceeds {tol:.3e}; \
         the Liouvillian may have a degenerate kernel"
    )]
    DegenerateSteadyState { residual: f64, tol: f64 },

    #[error(
        "correlation horizon too short: |g1(τ_max) - offset| = {residual:.3e} exceeds {tol:.3e}"
    )]
    HorizonNotConverged { residual: f64, tol: f64 },

    #[error("correlation samples must lie on a uniform τ grid")]
    NonUniformGrid,

    #[error("spectrum has nonpositive total weight M0 = {m0:.3e}; cannot normalize moments")]
    DegenerateSpectrum { m0: f64 },

    #[error("reference spectrum has mean {mean:.3e}; cannot renormalize")]
    DegenerateReference { mean: f64 },

    #[error(
        "singular regression system at λ = 0 with {n_samples} samples and {n_features} features; \
         try a small ridge parameter such as 1e-14"
    )]
    SingularSystem {
        n_samples: usize,
        n_features: usize,
    },

    #[error("NRMSE undefined: targets have zero second moment")]
    UndefinedNormalization,

    #[error("unphysical thermal occupation: gain rate R = {r_rate:.3e} must stay below κ = {kappa:.3e}")]
    UnphysicalThermalOccupation { r_rate: f64, kappa: f64 },

    #[error("OPO pump |G| = {g:.3e} at or above threshold G_th = {g_th:.3e}")]
    AboveThreshold { g: f64, g_th: f64 },

    #[error("quasi-static approximation invalid: γ_s/γ_c = {ratio:.3e} exceeds {limit:.1e}")]
    QuasiStaticViolated { ratio: f64, limit: f64 },

    #[error("{diverged} of {total} positive-P trajectories diverged (budget {budget:.2}%)")]
    DivergenceBudgetExceeded {
        diverged: usize,
        total: usize,
        budget: f64,
    },

    #[error("training diverged at epoch {epoch}: loss = {loss:.3e}")]
    TrainingDiverged { epoch: usize, loss: f64 },

    #[error("matrix exponential action did not converge (needed more than {max_substeps} substeps)")]
    ExpmvNoConvergence { max_substeps: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
