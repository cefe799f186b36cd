use kerr_qrc::fock::SqueezeTarget;
use kerr_qrc::pipeline::{simulate_emission, SimConfig};
use kerr_qrc::lindblad::CavityParams;
use kerr_qrc::spectrum::{SpectralWindow};
use kerr_qrc::lindblad::PropagatorConfig;
use num_complex::Complex64;
use std::time::Instant;

fn run(label: &str, u: f64, r: f64, theta: f64, alpha: f64, n_bar: f64) {
    let gamma = 44.1;
    let mut cfg = SimConfig::default();
    cfg.cavity = CavityParams::new(u, gamma).unwrap();
    cfg.window = SpectralWindow::for_rate(gamma);
    cfg.prop = PropagatorConfig::for_rate(gamma);
    let target = SqueezeTarget::new(r, theta, Complex64::new(alpha, 0.0), n_bar).unwrap();
    let t0 = Instant::now();
    match simulate_emission(&cfg, &target) {
        Ok(s) => {
            let m0: f64 = s.values.iter().sum::<f64>() * s.omega_step();
            println!("{label}: {:.2}s  M0={m0:.4e}", t0.elapsed().as_secs_f64());
        }
        Err(e) => println!("{label}: {:.2}s  ERROR {e}", t0.elapsed().as_secs_f64()),
    }
}

fn main() {
    run("r=0   θ=0    α=5 n̄=0  U=12 ", 12.0, 0.0, 0.0, 5.0, 0.0);
    run("r=1   θ=0    α=5 n̄=0  U=12 ", 12.0, 1.0, 0.0, 5.0, 0.0);
    run("r=2   θ=0    α=5 n̄=0  U=12 ", 12.0, 2.0, 0.0, 5.0, 0.0);
    run("r=2   θ=π/2  α=5 n̄=0  U=12 ", 12.0, 2.0, std::f64::consts::FRAC_PI_2, 5.0, 0.0);
    run("r=0   θ=0    α=5 n̄=10 U=12 ", 12.0, 0.0, 0.0, 5.0, 10.0);
    run("r=2   θ=0    α=5 n̄=0  U=0.1", 0.1, 2.0, 0.0, 5.0, 0.0);
    run("r=2   θ=0    α=5 n̄=0  U=100", 100.0, 2.0, 0.0, 5.0, 0.0);
}
