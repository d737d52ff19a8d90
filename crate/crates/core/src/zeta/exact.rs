//! Direct evaluation of `ζ(1/2 + it)` by Euler–Maclaurin summation and of
//! the exact theta phase through the complex log-Gamma function.
//!
//! This path is slow at large heights (the Euler–Maclaurin sum needs
//! `O(t)` terms) and is used where the Riemann–Siegel expansion is not
//! accurate enough: below [`super::RS_CROSSOVER`].

use num_complex::Complex64;
use std::f64::consts::PI;

/// `B_{2k}` for `k = 1..=15`.
const BERNOULLI_2K: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Principal branch of `ln Γ(z)` for `Re z > 0`, continuous in `Im z`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    // shift up until Stirling's series converges to full precision
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for (k, b) in BERNOULLI_2K.iter().take(9).enumerate() {
        let n = 2.0 * (k as f64 + 1.0);
        series += pow * (*b / (n * (n - 1.0)));
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - shift
}

/// Exact Riemann–Siegel theta, `arg Γ(1/4 + it/2) − (t/2) ln π`.
pub fn theta_exact(t: f64) -> f64 {
    ln_gamma(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln()
}

/// `ζ(s)` by Euler–Maclaurin summation, for `Re s > 0`, `s ≠ 1`.
///
/// The cut `N` and the number of Bernoulli corrections are chosen so
/// that successive correction terms shrink by at least a factor 16.
pub fn zeta_em(s: Complex64) -> Complex64 {
    let n_cut = (2.0 * s.norm() / PI).ceil() as usize + 10;
    let mut head = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for n in 1..n_cut {
        let term = (-s * (n as f64).ln()).exp() - comp;
        let next = head + term;
        comp = (next - head) - term;
        head = next;
    }
    let nf = n_cut as f64;
    let ln_n = nf.ln();
    let n_pow = (-s * ln_n).exp();
    let mut total = head + n_pow * nf / (s - 1.0) + 0.5 * n_pow;

    // Σ B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let mut rising = s;
    let mut pow = n_pow / nf;
    let mut fact = 2.0;
    for (k, b) in BERNOULLI_2K.iter().enumerate() {
        let term = rising * pow * (*b / fact);
        total += term;
        if term.norm() < 1e-17 * total.norm() {
            break;
        }
        let m = 2.0 * (k as f64 + 1.0);
        rising *= (s + (m - 1.0)) * (s + m);
        pow /= nf * nf;
        fact *= (m + 1.0) * (m + 2.0);
    }
    total
}

/// `Z(t) = e^{iθ(t)} ζ(1/2 + it)` through the exact phase; valid for all
/// `t ≥ 0` but costs `O(t)` operations.
pub fn z_exact(t: f64) -> f64 {
    let zeta = zeta_em(Complex64::new(0.5, t));
    let phase = Complex64::from_polar(1.0, theta_exact(t));
    (phase * zeta).re
}

/// Absolute error scale of [`z_exact`]: rounding in an `O(t)` term sum.
pub fn z_exact_err(t: f64) -> f64 {
    1e-13 * (1.0 + t)
}
