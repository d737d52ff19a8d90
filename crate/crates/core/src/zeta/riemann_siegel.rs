//! Riemann–Siegel main sum and remainder corrections.
//!
//! The remainder is `(−1)^{N−1} a^{−1/2} Σ_k C_k(p) a^{−k}` with
//! `a = √(t/2π)`, `N = ⌊a⌋`, `p = a − N`. The coefficients `C_k` are
//! combinations of derivatives of
//! `Ψ(p) = cos(2π(p² − p − 1/16)) / cos(2πp)`, an entire function. They are
//! stored as Taylor polynomials in `x = p − 1/2`, obtained once from a
//! discrete Cauchy integral of `Ψ` on the circle `|x| = 1`.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};
use std::sync::LazyLock;

use super::theta_series;

/// Number of correction coefficients available (`C_0..C_4`).
pub const MAX_TERMS: usize = 5;

const TAYLOR_LEN: usize = 72;
const POLY_LEN: usize = 56;
const CAUCHY_SAMPLES: usize = 256;

/// Empirical bounds on the truncated remainder, valid for `t ≥ 200`:
/// `|error| ≤ BOUND_COEF[k] · t^{−(2k+1)/4}` when `k` coefficients are kept.
const BOUND_COEF: [f64; MAX_TERMS + 1] = [1.0, 0.127, 0.053, 0.011, 0.031, 0.017];

struct Coefficients {
    /// `poly[k][m]` is the coefficient of `x^m` in `C_k`.
    poly: [[f64; POLY_LEN]; MAX_TERMS],
}

static COEFFS: LazyLock<Coefficients> = LazyLock::new(Coefficients::build);

fn psi(x: Complex64) -> Complex64 {
    // p = x + 1/2: p² − p − 1/16 = x² − 5/16 and cos(2πp) = −cos(2πx)
    let num = (TAU * (x * x - 5.0 / 16.0)).cos();
    let den = (TAU * x).cos();
    -num / den
}

impl Coefficients {
    fn build() -> Self {
        // Taylor coefficients of Ψ about x = 0 by the trapezoidal rule on
        // |x| = 1, which is spectrally accurate for an entire function.
        let samples: Vec<Complex64> = (0..CAUCHY_SAMPLES)
            .map(|j| {
                psi(Complex64::from_polar(
                    1.0,
                    TAU * j as f64 / CAUCHY_SAMPLES as f64,
                ))
            })
            .collect();
        let mut taylor = [0.0f64; TAYLOR_LEN];
        for (m, coef) in taylor.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, v) in samples.iter().enumerate() {
                let ang = -TAU * ((j * m) % CAUCHY_SAMPLES) as f64 / CAUCHY_SAMPLES as f64;
                acc += v * Complex64::from_polar(1.0, ang);
            }
            *coef = acc.re / CAUCHY_SAMPLES as f64;
        }

        // C_k = Σ_j w_{kj} Ψ^{(j)}
        let pi2 = PI * PI;
        let pi4 = pi2 * pi2;
        let pi6 = pi4 * pi2;
        let pi8 = pi4 * pi4;
        let combos: [&[(usize, f64)]; MAX_TERMS] = [
            &[(0, 1.0)],
            &[(3, -1.0 / (96.0 * pi2))],
            &[(2, 1.0 / (64.0 * pi2)), (6, 1.0 / (18432.0 * pi4))],
            &[
                (1, -1.0 / (64.0 * pi2)),
                (5, -1.0 / (3840.0 * pi4)),
                (9, -1.0 / (5_308_416.0 * pi6)),
            ],
            &[
                (0, 1.0 / (128.0 * pi2)),
                (4, 19.0 / (24576.0 * pi4)),
                (8, 11.0 / (5_898_240.0 * pi6)),
                (12, 1.0 / (2_038_431_744.0 * pi8)),
            ],
        ];

        let mut poly = [[0.0; POLY_LEN]; MAX_TERMS];
        for (k, combo) in combos.iter().enumerate() {
            for &(j, w) in combo.iter() {
                // Ψ^{(j)}(x) = Σ_m taylor[m+j] (m+j)!/m! x^m
                for (m, slot) in poly[k].iter_mut().enumerate() {
                    let mut falling = 1.0;
                    for i in 1..=j {
                        falling *= (m + i) as f64;
                    }
                    *slot += w * taylor[m + j] * falling;
                }
            }
        }
        Coefficients { poly }
    }

    fn eval(&self, k: usize, x: f64) -> f64 {
        self.poly[k].iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

/// `C_k(p)` for `k < MAX_TERMS`, `p ∈ [0, 1)`.
pub fn coefficient(k: usize, p: f64) -> f64 {
    COEFFS.eval(k, p - 0.5)
}

/// Cached `ln n` and `n^{−1/2}` for the main sum.
pub(crate) struct SumTables {
    pub ln: Vec<f64>,
    pub rsqrt: Vec<f64>,
}

/// Tables cover `n ≤ 4096`, i.e. heights up to about `10⁸`.
const TABLE_N: usize = 4096;

pub(crate) static TABLES: LazyLock<SumTables> = LazyLock::new(|| {
    let ln = (0..=TABLE_N).map(|n| (n.max(1) as f64).ln()).collect();
    let rsqrt = (0..=TABLE_N)
        .map(|n| 1.0 / (n.max(1) as f64).sqrt())
        .collect();
    SumTables { ln, rsqrt }
});

/// Number of terms `N = ⌊√(t/2π)⌋` in the main sum.
#[inline]
pub fn main_sum_len(t: f64) -> usize {
    (t / TAU).sqrt().floor() as usize
}

/// Remainder correction with `terms` coefficients.
pub fn remainder(t: f64, terms: usize) -> f64 {
    if terms == 0 {
        return 0.0;
    }
    let a = (t / TAU).sqrt();
    let n = a.floor();
    let x = a - n - 0.5;
    let inv_a = 1.0 / a;
    let mut acc = 0.0;
    let mut pow = 1.0;
    for k in 0..terms.min(MAX_TERMS) {
        acc += COEFFS.eval(k, x) * pow;
        pow *= inv_a;
    }
    let sign = if (n as u64) % 2 == 1 { 1.0 } else { -1.0 };
    sign * acc / a.sqrt()
}

/// `Z(t)` from the Riemann–Siegel formula with `terms` corrections.
pub fn z(t: f64, terms: usize) -> f64 {
    let tables = &*TABLES;
    let n = main_sum_len(t);
    let th = theta_series(t);
    let mut sum = 0.0;
    for k in 1..=n.min(TABLE_N) {
        sum += tables.rsqrt[k] * (th - t * tables.ln[k]).cos();
    }
    for k in TABLE_N + 1..=n {
        let kf = k as f64;
        sum += (th - t * kf.ln()).cos() / kf.sqrt();
    }
    2.0 * sum + remainder(t, terms)
}

/// Truncation bound of the remainder plus a rounding allowance for the
/// phases `t ln n`.
pub fn error_bound(t: f64, terms: usize) -> f64 {
    let k = terms.min(MAX_TERMS);
    let trunc = if k == 0 {
        (t / TAU).powf(-0.25)
    } else {
        BOUND_COEF[k] * t.powf(-(2.0 * k as f64 + 1.0) / 4.0)
    };
    let n = main_sum_len(t).max(1) as f64;
    let rounding = 4.0 * f64::EPSILON * t * n.ln().max(1.0) * n.sqrt();
    trunc + rounding
}

/// `Z` at the nodes `c + h·x_i` of a panel.
///
/// Writing `t = c + h x`, the main sum `Σ n^{−1/2} e^{−it ln n}` is a power
/// series in `x` whose coefficients are accumulated once per panel, so the
/// cost is one `sin_cos` per term instead of one per node and term. Falls
/// back to pointwise evaluation when `N` changes inside the panel.
pub fn z_panel(c: f64, h: f64, xs: &[f64], terms: usize, out: &mut [f64]) {
    debug_assert_eq!(xs.len(), out.len());
    let n = main_sum_len(c - h);
    if n != main_sum_len(c + h) || n == 0 || n > TABLE_N {
        for (x, o) in xs.iter().zip(out.iter_mut()) {
            *o = z(c + h * x, terms);
        }
        return;
    }
    let tables = &*TABLES;
    let w_max = h * tables.ln[n];
    let mass = 2.0 * (n as f64).sqrt();
    // smallest order K with w^{K+1}/(K+1)! · mass below 1e-17
    let mut order = 0;
    let mut tail = mass * w_max;
    while tail > 1e-17 && order < 60 {
        order += 1;
        tail *= w_max / (order as f64 + 1.0);
    }
    let len = order + 1;

    let mut re = [0.0f64; 64];
    let mut im = [0.0f64; 64];
    let recip: [f64; 64] = std::array::from_fn(|k| 1.0 / (k.max(1) as f64));
    for k in 1..=n {
        let (s, co) = (c * tables.ln[k]).sin_cos();
        let w = h * tables.ln[k];
        // e^{−ic ln k} / √k
        let mut pr = tables.rsqrt[k] * co;
        let mut pi = -tables.rsqrt[k] * s;
        re[0] += pr;
        im[0] += pi;
        for j in 1..len {
            // multiply by (−i w)/j
            let f = w * recip[j];
            let nr = pi * f;
            let ni = -pr * f;
            pr = nr;
            pi = ni;
            re[j] += pr;
            im[j] += pi;
            // past the peak the terms only shrink
            if f < 0.5 && pr.abs() + pi.abs() < 1e-20 {
                break;
            }
        }
    }
    for (x, o) in xs.iter().zip(out.iter_mut()) {
        let mut sr = 0.0;
        let mut si = 0.0;
        for j in (0..len).rev() {
            sr = sr * x + re[j];
            si = si * x + im[j];
        }
        let t = c + h * x;
        let (st, ct) = theta_series(t).sin_cos();
        *o = 2.0 * (ct * sr - st * si) + remainder(t, terms);
    }
}
