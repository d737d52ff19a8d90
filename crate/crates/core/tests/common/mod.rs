//! Reference implementations used only by the tests. They share no code
//! with the library.

#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

// B_2 .. B_20
const BERNOULLI: [f64; 10] = [
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
];

/// `ζ(s)` by Euler–Maclaurin summation with `N ≈ |Im s|/2 + 40` terms and
/// ten Bernoulli corrections.
pub fn zeta_em(s: Complex64) -> Complex64 {
    let n = (s.im.abs() / 2.0).ceil() as u64 + 40;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..n {
        sum += (-s * (k as f64).ln()).exp();
    }
    let nf = n as f64;
    let n_s = (-s * nf.ln()).exp();
    sum += n_s * nf / (s - 1.0) + n_s * 0.5;
    // s(s+1)...(s+2k-2) N^{-s-2k+1} / (2k)!
    let mut fact = s * n_s / nf;
    let mut denom = 2.0;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let k = k as f64 + 1.0;
        sum += fact * (*b / denom);
        fact = fact * (s + 2.0 * k - 1.0) * (s + 2.0 * k) / (nf * nf);
        denom *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    sum
}

/// `ln Γ(z)` on the branch continuous from the positive axis, from the
/// Stirling series after shifting `|z|` above 20.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 20.0 {
        shift += w.ln();
        w += 1.0;
    }
    let mut s = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln();
    let w2 = w * w;
    let mut wp = w;
    for (k, b) in BERNOULLI.iter().take(8).enumerate() {
        let k = k as f64 + 1.0;
        s += *b / (2.0 * k * (2.0 * k - 1.0)) / wp;
        wp *= w2;
    }
    s - shift
}

/// `θ(t) = Im ln Γ(1/4 + it/2) − (t/2) ln π`.
pub fn theta_exact(t: f64) -> f64 {
    ln_gamma(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln()
}

pub fn z_oracle(t: f64) -> f64 {
    let zeta = zeta_em(Complex64::new(0.5, t));
    (Complex64::new(0.0, theta_exact(t)).exp() * zeta).re
}

/// Zeros of the oracle `Z` in `[a, b]`: scan with `step`, then bisect.
pub fn oracle_zeros(a: f64, b: f64, step: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut x0 = a;
    let mut f0 = z_oracle(a);
    while x0 < b {
        let x1 = (x0 + step).min(b);
        let f1 = z_oracle(x1);
        if f0 == 0.0 {
            out.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut lo, mut hi, mut flo) = (x0, x1, f0);
            while hi - lo > 1e-12 {
                let m = 0.5 * (lo + hi);
                let fm = z_oracle(m);
                if (fm > 0.0) == (flo > 0.0) {
                    lo = m;
                    flo = fm;
                } else {
                    hi = m;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    out
}

/// Midpoint sum of `Z²` over `[a, b]` with step about `h`.
pub fn riemann_z2(a: f64, b: f64, h: f64) -> f64 {
    let n = ((b - a) / h).ceil() as u64;
    let h = (b - a) / n as f64;
    let mut s = 0.0;
    let mut c = 0.0;
    for i in 0..n {
        let t = a + (i as f64 + 0.5) * h;
        let z = z_oracle(t);
        let y = z * z * h - c;
        let u = s + y;
        c = (u - s) - y;
        s = u;
    }
    s
}

/// `π(x)` by a plain sieve of Eratosthenes.
pub fn prime_count(x: u64) -> u64 {
    if x < 2 {
        return 0;
    }
    let n = x as usize;
    let mut composite = vec![false; n + 1];
    let mut count = 0;
    for i in 2..=n {
        if !composite[i] {
            count += 1;
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    count
}

/// `(lo, hi)` of the indices of the smallest and largest values of `f` on
/// an evenly spaced grid.
pub fn grid_extrema(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> (f64, f64) {
    let mut best_lo = (f64::INFINITY, a);
    let mut best_hi = (f64::NEG_INFINITY, a);
    for i in 0..=n {
        let x = a + (b - a) * i as f64 / n as f64;
        let v = f(x);
        if v < best_lo.0 {
            best_lo = (v, x);
        }
        if v > best_hi.0 {
            best_hi = (v, x);
        }
    }
    (best_lo.1, best_hi.1)
}

#[test]
fn oracle_self_checks() {
    // ζ(2) = π²/6, ζ(1/2) = −1.4603545088095868...
    let z2 = zeta_em(Complex64::new(2.0, 0.0));
    assert!((z2.re - PI * PI / 6.0).abs() < 1e-14);
    let zh = zeta_em(Complex64::new(0.5, 0.0));
    assert!((zh.re + 1.460_354_508_809_586_8).abs() < 1e-13);
    // ln Γ(1/2) = ln √π, ln Γ(5) = ln 24
    assert!((ln_gamma(Complex64::new(0.5, 0.0)).re - 0.5 * PI.ln()).abs() < 1e-14);
    assert!((ln_gamma(Complex64::new(5.0, 0.0)).re - 24f64.ln()).abs() < 1e-13);
    assert_eq!(prime_count(100), 25);
}
