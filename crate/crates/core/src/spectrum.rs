//! Emission spectra and spectral moments.
//!
//! S(ω) is the discrete Fourier transform of the coherence function over
//! the full τ line, using ⟨a†(-τ)a⟩ = ⟨a†(τ)a⟩*:
//!
//! S(ω) = Δτ·Σ_{j=-N}^{N} w_j [g¹(|τ_j|) - offset]^(±) e^{-iωτ_j},
//!
//! with trapezoidal end weights and the coherent offset ⟨a†⟩⟨a⟩ subtracted
//! before transforming, which removes the δ(ω) line of the mean field
//! exactly. With this normalization ∫S dω = 2π·(⟨a†a⟩ - |⟨a⟩|²), the
//! incoherent population.
//!
//! Moments M̃_m = Σ S(ω) ω^m Δω are taken over the fixed symmetric window
//! carried by the grid; M_0 = M̃_0 and M_m = M̃_m/M_0 for m ≥ 1. The window
//! is part of the frozen protocol: higher moments are window-dependent, so
//! every dataset records it.

use crate::error::{Error, Result};
use crate::lindblad::G1;
use crate::C64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Uniform symmetric frequency window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralWindow {
    pub omega_min: f64,
    pub omega_max: f64,
    pub n_points: usize,
}

impl SpectralWindow {
    /// The frozen default: ω ∈ [-20γ, +20γ] with 2001 points.
    pub fn for_rate(gamma: f64) -> Self {
        SpectralWindow {
            omega_min: -20.0 * gamma,
            omega_max: 20.0 * gamma,
            n_points: 2001,
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.n_points;
        (0..n)
            .map(|k| {
                self.omega_min + (self.omega_max - self.omega_min) * k as f64 / (n - 1) as f64
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_points < 3 || self.omega_max <= self.omega_min {
            return Err(Error::InvalidConfig(
                "spectral window needs ω_max > ω_min and at least 3 points".into(),
            ));
        }
        Ok(())
    }
}

/// Emission spectrum on a frequency grid (energies in μeV; the coherent
/// δ-contribution has been removed upstream).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Spectrum {
    pub omega: Vec<f64>,
    pub values: Vec<f64>,
}

impl Spectrum {
    pub fn omega_step(&self) -> f64 {
        (self.omega[self.omega.len() - 1] - self.omega[0]) / (self.omega.len() - 1) as f64
    }

    /// Pointwise difference against a reference spectrum on the same grid.
    pub fn difference(&self, reference: &Spectrum) -> Result<Spectrum> {
        if self.omega.len() != reference.omega.len() {
            return Err(Error::DimensionMismatch {
                expected: self.omega.len(),
                got: reference.omega.len(),
            });
        }
        Ok(Spectrum {
            omega: self.omega.clone(),
            values: self
                .values
                .iter()
                .zip(&reference.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }
}

/// Transform a sampled coherence function into the emission spectrum.
///
/// `coherent_offset` is ⟨a†⟩_SS⟨a⟩_SS, supplied by the caller (it is also
/// carried on [`G1`]). Fails if the correlation horizon had not converged,
/// since the truncated tail would alias into every frequency bin.
pub fn emission_spectrum(g1: &G1, window: &SpectralWindow, coherent_offset: C64) -> Result<Spectrum> {
    window.validate()?;
    if !g1.horizon_converged {
        let g0 = g1.values[0].norm();
        return Err(Error::HorizonNotConverged {
            residual: g1.horizon_residual,
            tol: crate::lindblad::HORIZON_REL_TOL * g0,
        });
    }

    let n = g1.values.len() - 1;
    let dt = g1.tau_step;
    let omega = window.grid();
    // Full-line trapezoid: S(ω) = Δτ[g̃₀ + 2Σ'_{j=1..N-1} Re(g̃_j e^{-iωτ_j})
    //                              + Re(g̃_N e^{-iωτ_N})].
    let tilde: Vec<C64> = g1.values.iter().map(|v| v - coherent_offset).collect();
    let values: Vec<f64> = omega
        .iter()
        .map(|&w| {
            let mut acc = tilde[0].re;
            for (j, g) in tilde.iter().enumerate().skip(1) {
                let tau = j as f64 * dt;
                let phase = C64::from_polar(1.0, -w * tau);
                let term = (g * phase).re;
                acc += if j == n { term } else { 2.0 * term };
            }
            acc * dt
        })
        .collect();

    Ok(Spectrum { omega, values })
}

/// Normalized spectral moments M_0 … M_{m_max}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentVector {
    /// values[0] = M_0 (spectral weight); values[m] = M̃_m/M_0 for m ≥ 1.
    pub values: Vec<f64>,
}

impl MomentVector {
    pub fn m_max(&self) -> usize {
        self.values.len() - 1
    }
}

/// Moments of the spectrum over its own (symmetric) grid.
pub fn moments(s: &Spectrum, m_max: usize) -> Result<MomentVector> {
    let n = s.omega.len();
    let span = s.omega[n - 1] - s.omega[0];
    if (s.omega[0] + s.omega[n - 1]).abs() > 1e-9 * span.abs() {
        return Err(Error::InvalidConfig(
            "moment integration requires a grid symmetric about ω = 0".into(),
        ));
    }
    let dw = s.omega_step();
    let mut raw = vec![0.0f64; m_max + 1];
    for (w, v) in s.omega.iter().zip(&s.values) {
        let mut wm = 1.0;
        for r in raw.iter_mut() {
            *r += v * wm * dw;
            wm *= w;
        }
    }
    let m0 = raw[0];
    if m0 <= 0.0 {
        return Err(Error::DegenerateSpectrum { m0 });
    }
    let values = raw
        .iter()
        .enumerate()
        .map(|(m, &v)| if m == 0 { v } else { v / m0 })
        .collect();
    Ok(MomentVector { values })
}

/// Raw (unnormalized) moments M̃_0 … M̃_{m_max}; defined for any sign of
/// spectral weight, as needed for difference spectra.
pub fn raw_moments(s: &Spectrum, m_max: usize) -> Vec<f64> {
    let dw = s.omega_step();
    let mut raw = vec![0.0f64; m_max + 1];
    for (w, v) in s.omega.iter().zip(&s.values) {
        let mut wm = 1.0;
        for r in raw.iter_mut() {
            *r += v * wm * dw;
            wm *= w;
        }
    }
    raw
}

/// Additive measurement noise: independent N(0, (σ·max S)²) per grid point.
pub fn add_noise<R: Rng>(s: &Spectrum, sigma: f64, rng: &mut R) -> Spectrum {
    if sigma == 0.0 {
        return s.clone();
    }
    let peak = s.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let normal = Normal::new(0.0, sigma * peak).expect("valid noise width");
    Spectrum {
        omega: s.omega.clone(),
        values: s.values.iter().map(|v| v + normal.sample(rng)).collect(),
    }
}
