//! Driving by a squeezed, displaced, thermally broadened environment.
//!
//! Decay into a displaced squeezed vacuum is decay through the Bogoliubov
//! operator b = (a - α)cosh r + e^{2iθ}(a† - α*)sinh r. Displacement and
//! squeezing decouple exactly:
//!
//! 𝓛[√κ b]ρ + 𝓛[√R b†]ρ = -(i/ħ)[H_p, ρ] + 𝓛[√κ σ]ρ + 𝓛[√R σ†]ρ,
//!
//! with σ = a·cosh r + e^{2iθ}a†·sinh r, the pump H_p = iF a† - iF*a for
//! F = ħ(κ-R)α/2, and the thermal gain rate R = κ·n̄/(n̄+1). The squeezed
//! jump √κ σ *replaces* the plain loss √γ_c a: the environment is the loss
//! channel, and κ = γ_c unless configured otherwise.
//!
//! At U = 0, n̄ = 0 the steady state is exactly the pure displaced squeezed
//! state, which pins down every sign in the construction.

use crate::error::{Error, Result};
use crate::fock::{annihilation, creation, FockDim, SqueezeTarget};
use crate::lindblad::LindbladTerm;
use crate::C64;
use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Coupling of the cavity to the squeezed environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentCoupling {
    /// Coupling strength κ (μeV); equal to γ_c in the tasks.
    pub kappa: f64,
    pub target: SqueezeTarget,
}

impl EnvironmentCoupling {
    pub fn new(kappa: f64, target: SqueezeTarget) -> Result<Self> {
        if kappa <= 0.0 || !kappa.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "environment coupling must be positive, got κ = {kappa}"
            )));
        }
        Ok(EnvironmentCoupling { kappa, target })
    }

    /// Thermal gain rate R = κ·n̄/(n̄+1), strictly below κ.
    pub fn gain_rate(&self) -> f64 {
        self.kappa * self.target.n_bar / (self.target.n_bar + 1.0)
    }

    /// Pump amplitude F = ħ(κ-R)α/2 (ħ = 1).
    pub fn drive_amplitude(&self) -> C64 {
        self.target.alpha_d * ((self.kappa - self.gain_rate()) * 0.5)
    }
}

/// Bogoliubov-transformed annihilation operator
/// σ = S(ζ) a S†(ζ) = a·cosh r + e^{2iθ} a†·sinh r.
///
/// Built from the closed-form linear combination, not by conjugating with
/// truncated unitaries, so the Bogoliubov algebra is exact on the
/// retained block.
pub fn bogoliubov_sigma(d: FockDim, zeta: C64) -> Array2<C64> {
    let r = zeta.norm();
    let a = annihilation(d);
    if r == 0.0 {
        return a;
    }
    let phase = zeta / r; // e^{2iθ}
    let adag = creation(d);
    a.mapv(|z| z * r.cosh()) + adag.mapv(|z| z * (phase * r.sinh()))
}

/// Pump Hamiltonian and jump operators realizing the squeezed environment.
///
/// Returns (H_p, jumps) with jumps {√κ σ} and additionally {√R σ†} when
/// n̄ > 0. Combined with the system's Kerr Hamiltonian these define the
/// driven model; no separate loss channel is added.
pub fn environment_terms(
    d: FockDim,
    env: &EnvironmentCoupling,
) -> Result<(Array2<C64>, Vec<LindbladTerm>)> {
    let r_rate = env.gain_rate();
    if r_rate >= env.kappa {
        return Err(Error::UnphysicalThermalOccupation {
            r_rate,
            kappa: env.kappa,
        });
    }

    let f = env.drive_amplitude();
    let a = annihilation(d);
    let adag = creation(d);
    let h_p = adag.mapv(|z| z * (Complex64::i() * f)) - a.mapv(|z| z * (Complex64::i() * f.conj()));

    let sigma = bogoliubov_sigma(d, env.target.zeta());
    let mut jumps = vec![LindbladTerm::new(sigma.mapv(|z| z * env.kappa.sqrt()))];
    if env.target.n_bar > 0.0 {
        let sigma_dag = crate::linalg::dagger(&sigma);
        jumps.push(LindbladTerm::new(sigma_dag.mapv(|z| z * r_rate.sqrt())));
    }
    Ok((h_p, jumps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::{build_liouvillian, steady_state, CavityParams};
    use crate::linalg;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn dim(n: usize) -> FockDim {
        FockDim::new(n).unwrap()
    }

    fn c(re: f64, im: f64) -> C64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sigma_reduces_to_annihilation() {
        let d = dim(8);
        let sigma = bogoliubov_sigma(d, Complex64::ZERO);
        assert!(linalg::max_abs(&(&sigma - &annihilation(d))) < 1e-15);
    }

    #[test]
    fn sigma_matrix_elements() {
        let d = dim(8);
        // r = 1, θ = 0: ⟨0|σ|1⟩ = cosh 1.
        let s0 = bogoliubov_sigma(d, c(1.0, 0.0));
        assert_abs_diff_eq!(s0[[0, 1]].re, 1.0f64.cosh(), epsilon = 1e-14);
        // r = 1, θ = π/2: ζ = e^{iπ}, ⟨2|σ|1⟩ = -√2 sinh 1.
        let s1 = bogoliubov_sigma(d, Complex64::from_polar(1.0, std::f64::consts::PI));
        assert_abs_diff_eq!(s1[[2, 1]].re, -(2.0f64.sqrt()) * 1.0f64.sinh(), epsilon = 1e-13);
        assert_abs_diff_eq!(s1[[2, 1]].im, 0.0, epsilon = 1e-13);
    }

    #[test]
    fn sigma_commutator_on_safe_block() {
        let d = dim(30);
        let sigma = bogoliubov_sigma(d, Complex64::from_polar(0.8, 0.9));
        let sdag = linalg::dagger(&sigma);
        let comm = sigma.dot(&sdag) - sdag.dot(&sigma);
        for i in 0..24 {
            for j in 0..24 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (comm[[i, j]] - c(want, 0.0)).norm() < 1e-12,
                    "[σ,σ†] defect at ({i},{j})"
                );
            }
        }
    }

    /// Dissipators of the displaced operators b, b† versus pump Hamiltonian
    /// plus dissipators of the undisplaced σ, σ†.
    fn decoupling_defect(r: f64, theta: f64, alpha: C64, n_bar: f64, seed: u64) -> f64 {
        let d = dim(12);
        let n = d.get();
        let target = SqueezeTarget::new(r, theta, alpha, n_bar).unwrap();
        let env = EnvironmentCoupling::new(1.0, target).unwrap();
        let kappa = env.kappa;
        let r_rate = env.gain_rate();

        // Random Hermitian ρ (not necessarily positive; the identity is
        // operator algebra).
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut rho: Array2<C64> = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                rho[[i, j]] = c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            }
        }
        let rho = {
            let rd = linalg::dagger(&rho);
            (&rho + &rd).mapv(|z| z * 0.5)
        };

        let zeta = target.zeta();
        let rr = zeta.norm();
        let phase = if rr == 0.0 { Complex64::ONE } else { zeta / rr };
        let a = annihilation(d);
        let adag = creation(d);
        let id: Array2<C64> = Array2::eye(n);
        let b = (&a - &id.mapv(|z| z * alpha)).mapv(|z| z * rr.cosh())
            + (&adag - &id.mapv(|z| z * alpha.conj())).mapv(|z| z * (phase * rr.sinh()));

        let dissipator = |l: &Array2<C64>, rho: &Array2<C64>| -> Array2<C64> {
            let ldag = linalg::dagger(l);
            let ldl = ldag.dot(l);
            let anti = ldl.dot(rho) + rho.dot(&ldl);
            l.dot(rho).dot(&ldag) - anti.mapv(|z| z * 0.5)
        };

        let mut lhs = dissipator(&b.mapv(|z| z * kappa.sqrt()), &rho);
        if n_bar > 0.0 {
            let bdag = linalg::dagger(&b);
            lhs = lhs + dissipator(&bdag.mapv(|z| z * r_rate.sqrt()), &rho);
        }

        let (h_p, jumps) = environment_terms(d, &env).unwrap();
        let comm = h_p.dot(&rho) - rho.dot(&h_p);
        let mut rhs = comm.mapv(|z| z * (-Complex64::i()));
        for j in &jumps {
            rhs = rhs + dissipator(j.operator(), &rho);
        }

        linalg::max_abs(&(&lhs - &rhs))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn displacement_squeezing_decoupling_identity(
            r in 0.0..2.0f64,
            theta in 0.0..std::f64::consts::FRAC_PI_2,
            re in -2.0..2.0f64,
            im in -2.0..2.0f64,
            n_bar in 0.0..5.0f64,
            seed in 0u64..1000,
        ) {
            let defect = decoupling_defect(r, theta, c(re, im), n_bar, seed);
            prop_assert!(defect < 1e-10, "decoupling defect {defect}");
        }
    }

    #[test]
    fn coherent_drive_reproduces_textbook_model() {
        // r = 0, n̄ = 0: Liouvillian equals Kerr + coherent drive + plain loss.
        let d = dim(10);
        let kappa = 1.0;
        let alpha = c(1.3, -0.4);
        let target = SqueezeTarget::new(0.0, 0.0, alpha, 0.0).unwrap();
        let env = EnvironmentCoupling::new(kappa, target).unwrap();
        let (h_p, jumps) = environment_terms(d, &env).unwrap();

        let cavity = CavityParams::new(0.7, kappa).unwrap();
        let h = cavity.kerr_hamiltonian(d) + &h_p;
        let liou = build_liouvillian(d, &h, &jumps).unwrap();

        // Textbook: H = Kerr + iF a† - iF* a with F = κα/2, loss √κ a.
        let f = alpha * (kappa * 0.5);
        let a = annihilation(d);
        let adag = creation(d);
        let h_ref = cavity.kerr_hamiltonian(d)
            + adag.mapv(|z| z * (Complex64::i() * f))
            - a.mapv(|z| z * (Complex64::i() * f.conj()));
        let loss = LindbladTerm::new(a.mapv(|z| z * kappa.sqrt()));
        let liou_ref = build_liouvillian(d, &h_ref, &[loss]).unwrap();

        let diff = linalg::max_abs(&(&liou.matrix() - &liou_ref.matrix()));
        assert!(diff < 1e-12, "Liouvillians differ by {diff}");
    }

    #[test]
    fn coherent_steady_state_displacement() {
        // (r=0, α=5, n̄=0), U=0: steady ⟨a⟩ = 5.
        let d = dim(60);
        let kappa = 44.1;
        let target = SqueezeTarget::new(0.0, 0.0, c(5.0, 0.0), 0.0).unwrap();
        let env = EnvironmentCoupling::new(kappa, target).unwrap();
        let (h_p, jumps) = environment_terms(d, &env).unwrap();
        let liou = build_liouvillian(d, &h_p, &jumps).unwrap();
        let rho = steady_state(&liou, kappa).unwrap();
        let mean_a = rho.expectation(&annihilation(d));
        assert_abs_diff_eq!(mean_a.re, 5.0, epsilon = 1e-6);
        assert_abs_diff_eq!(mean_a.im, 0.0, epsilon = 1e-6);
    }

    #[test]
    fn squeezed_vacuum_steady_state_moments() {
        // (r=1, θ=0, α=0, n̄=0), U=0: ⟨a†a⟩ = sinh²1, ⟨a²⟩ = -cosh1·sinh1.
        let d = dim(60);
        let kappa = 1.0;
        let target = SqueezeTarget::new(1.0, 0.0, Complex64::ZERO, 0.0).unwrap();
        let env = EnvironmentCoupling::new(kappa, target).unwrap();
        let (h_p, jumps) = environment_terms(d, &env).unwrap();
        let liou = build_liouvillian(d, &h_p, &jumps).unwrap();
        let rho = steady_state(&liou, kappa).unwrap();

        assert!((rho.mean_occupation() - 1.0f64.sinh().powi(2)).abs() < 1e-6);
        let a = annihilation(d);
        let a2 = rho.expectation(&a.dot(&a));
        // Analytic values carry the D = 60 truncation error of the model.
        assert!((a2.re + 1.0f64.cosh() * 1.0f64.sinh()).abs() < 1e-5);
        assert!(a2.im.abs() < 1e-8);
        // Pure squeezed vacuum.
        assert!((rho.purity() - 1.0).abs() < 1e-5);

        // The spec'd oracle: long-time propagation from vacuum, t₀ = 50/κ.
        let mut cfg = crate::lindblad::PropagatorConfig::for_rate(kappa);
        cfg.t0 = 50.0 / kappa;
        let propagated = crate::lindblad::steady_state_by_propagation(&liou, &cfg).unwrap();
        assert!(
            linalg::max_abs(&(rho.matrix() - propagated.matrix())) < 1e-6,
            "solve vs propagation"
        );
    }

    #[test]
    fn thermal_environment_equilibrates() {
        // (r=0, α=0, n̄=3): steady thermal occupation 3 via R/κ = 3/4.
        let d = dim(60);
        let kappa = 1.0;
        let target = SqueezeTarget::new(0.0, 0.0, Complex64::ZERO, 3.0).unwrap();
        let env = EnvironmentCoupling::new(kappa, target).unwrap();
        assert_abs_diff_eq!(env.gain_rate(), 0.75, epsilon = 1e-15);
        let (h_p, jumps) = environment_terms(d, &env).unwrap();
        assert_eq!(jumps.len(), 2);
        let liou = build_liouvillian(d, &h_p, &jumps).unwrap();
        let rho = steady_state(&liou, kappa).unwrap();
        assert!((rho.mean_occupation() - 3.0).abs() < 1e-4);
    }

    #[test]
    fn steady_state_matches_gaussian_construction() {
        // U = 0, n̄ = 0: dissipative fixed point equals the constructed
        // displaced squeezed state to high fidelity.
        let d = dim(110);
        let kappa = 1.0;
        let target = SqueezeTarget::new(1.0, 0.7, c(3.0, 0.0), 0.0).unwrap();
        let env = EnvironmentCoupling::new(kappa, target).unwrap();
        let (h_p, jumps) = environment_terms(d, &env).unwrap();
        let liou = build_liouvillian(d, &h_p, &jumps).unwrap();
        let rho_ss = steady_state(&liou, kappa).unwrap();
        let rho_gauss = crate::fock::gaussian_state(d, &target).unwrap();
        let fid = rho_ss.fidelity(&rho_gauss);
        assert!(fid > 1.0 - 1e-6, "fidelity {fid}");
    }
}
