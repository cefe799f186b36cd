//! Dense matrix exponential by scaling and squaring with Padé approximants.
//!
//! Follows Higham, "The Scaling and Squaring Method for the Matrix
//! Exponential Revisited", SIAM J. Matrix Anal. Appl. 26 (2005): the Padé
//! order is chosen from the 1-norm among m ∈ {3, 5, 7, 9, 13}, with 2^s
//! scaling applied above θ₁₃.

use crate::linalg::lu::solve_c64;
use crate::linalg::norm_1;
use crate::C64;
use ndarray::Array2;
use num_complex::Complex64;

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539398330063230e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn eye(n: usize) -> Array2<C64> {
    Array2::eye(n)
}

/// U and V for orders 3–9 given the even powers [I, A², A⁴, ...].
fn pade_low(a: &Array2<C64>, powers: &[Array2<C64>], b: &[f64]) -> (Array2<C64>, Array2<C64>) {
    let n = a.nrows();
    let mut u_inner: Array2<C64> = Array2::zeros((n, n));
    let mut v: Array2<C64> = Array2::zeros((n, n));
    for (k, p) in powers.iter().enumerate() {
        u_inner = u_inner + p.mapv(|z| z * b[2 * k + 1]);
        v = v + p.mapv(|z| z * b[2 * k]);
    }
    (a.dot(&u_inner), v)
}

fn pade_13(
    a: &Array2<C64>,
    a2: &Array2<C64>,
    a4: &Array2<C64>,
    a6: &Array2<C64>,
) -> (Array2<C64>, Array2<C64>) {
    let n = a.nrows();
    let id = eye(n);
    let b = &B13;
    let u_high = a6.dot(
        &(a6.mapv(|z| z * b[13]) + a4.mapv(|z| z * b[11]) + a2.mapv(|z| z * b[9])),
    );
    let u_low = a6.mapv(|z| z * b[7])
        + a4.mapv(|z| z * b[5])
        + a2.mapv(|z| z * b[3])
        + id.mapv(|z| z * b[1]);
    let u = a.dot(&(u_high + u_low));
    let v_high = a6.dot(
        &(a6.mapv(|z| z * b[12]) + a4.mapv(|z| z * b[10]) + a2.mapv(|z| z * b[8])),
    );
    let v = v_high
        + a6.mapv(|z| z * b[6])
        + a4.mapv(|z| z * b[4])
        + a2.mapv(|z| z * b[2])
        + id.mapv(|z| z * b[0]);
    (u, v)
}

/// Matrix exponential e^A of a square complex matrix.
///
/// Accurate to machine-level relative error for well-scaled inputs; the
/// caller is expected to pass `A·t` directly.
pub fn expm(a: &Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return Array2::zeros((0, 0));
    }

    let norm = norm_1(a);
    let a2 = a.dot(a);

    let (u, v, squarings) = if norm <= THETA_3 {
        let powers = [eye(n), a2.clone()];
        let (u, v) = pade_low(a, &powers, &B3);
        (u, v, 0)
    } else if norm <= THETA_5 {
        let a4 = a2.dot(&a2);
        let powers = [eye(n), a2.clone(), a4];
        let (u, v) = pade_low(a, &powers, &B5);
        (u, v, 0)
    } else if norm <= THETA_7 {
        let a4 = a2.dot(&a2);
        let a6 = a4.dot(&a2);
        let powers = [eye(n), a2.clone(), a4, a6];
        let (u, v) = pade_low(a, &powers, &B7);
        (u, v, 0)
    } else if norm <= THETA_9 {
        let a4 = a2.dot(&a2);
        let a6 = a4.dot(&a2);
        let a8 = a6.dot(&a2);
        let powers = [eye(n), a2.clone(), a4, a6, a8];
        let (u, v) = pade_low(a, &powers, &B9);
        (u, v, 0)
    } else {
        let s = ((norm / THETA_13).log2().ceil()).max(0.0) as u32;
        let scale = Complex64::new(0.5f64.powi(s as i32), 0.0);
        let a_s = a.mapv(|z| z * scale);
        let a2s = a_s.dot(&a_s);
        let a4s = a2s.dot(&a2s);
        let a6s = a4s.dot(&a2s);
        let (u, v) = pade_13(&a_s, &a2s, &a4s, &a6s);
        (u, v, s)
    };

    let denom = &v - &u;
    let numer = &v + &u;
    let mut r = solve_c64(&denom, &numer);
    for _ in 0..squarings {
        r = r.dot(&r);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use ndarray::array;

    fn c(re: f64, im: f64) -> C64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let a: Array2<C64> = Array2::zeros((4, 4));
        let e = expm(&a);
        assert!(max_abs(&(&e - &Array2::<C64>::eye(4))) < 1e-15);
    }

    #[test]
    fn exp_of_diagonal() {
        let a = array![
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(-2.0, 0.5)]
        ];
        let e = expm(&a);
        assert!((e[[0, 0]] - c(1.0f64.exp(), 0.0)).norm() < 1e-14);
        let want = Complex64::new(-2.0, 0.5).exp();
        assert!((e[[1, 1]] - want).norm() < 1e-14);
        assert!(e[[0, 1]].norm() < 1e-15);
    }

    #[test]
    fn exp_of_antihermitian_is_unitary() {
        // i times a Hermitian matrix exponentiates to a unitary.
        let h = array![
            [c(0.3, 0.0), c(1.0, 2.0), c(0.0, -0.7)],
            [c(1.0, -2.0), c(-1.2, 0.0), c(0.4, 0.1)],
            [c(0.0, 0.7), c(0.4, -0.1), c(2.5, 0.0)]
        ];
        let ih = h.mapv(|z| z * Complex64::i());
        let u = expm(&ih);
        let udu = crate::linalg::dagger(&u).dot(&u);
        assert!(max_abs(&(&udu - &Array2::<C64>::eye(3))) < 1e-13);
    }

    #[test]
    fn large_norm_uses_scaling() {
        // Rotation generator scaled far beyond θ13: e^{iφσ_x} stays exact.
        let phi = 75.0;
        let sx = array![[c(0.0, 0.0), c(phi, 0.0)], [c(phi, 0.0), c(0.0, 0.0)]];
        let e = expm(&sx.mapv(|z| z * Complex64::i()));
        // e^{iφσx} = cos φ I + i sin φ σx
        assert!((e[[0, 0]] - c(phi.cos(), 0.0)).norm() < 1e-11);
        assert!((e[[0, 1]] - c(0.0, phi.sin())).norm() < 1e-11);
    }

    #[test]
    fn semigroup_property() {
        let a = array![
            [c(-0.4, 1.1), c(0.2, 0.0)],
            [c(0.0, -0.3), c(-0.1, -2.0)]
        ];
        let e1 = expm(&a);
        let e2 = expm(&a.mapv(|z| z * 2.0));
        let e1e1 = e1.dot(&e1);
        assert!(max_abs(&(&e1e1 - &e2)) < 1e-13);
    }
}
