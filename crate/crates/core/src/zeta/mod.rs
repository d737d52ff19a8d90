//! Hardy's Z-function, the Riemann–Siegel theta function, zeros of `Z` and
//! the prime counting function.

pub mod exact;
pub mod primes;
pub mod riemann_siegel;

use std::f64::consts::{FRAC_PI_8, PI, TAU};

use crate::error::{Error, Result};

pub use primes::{prime_pi, PrimeTable};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Smallest height accepted by [`theta`].
pub const MIN_THETA_HEIGHT: f64 = 2.0;

/// Smallest height accepted by [`z_eval`] and [`zeros_in`].
pub const MIN_Z_HEIGHT: f64 = 10.0;

/// Below this height `Z` is evaluated through Euler–Maclaurin summation
/// and the exact theta phase, above it through Riemann–Siegel.
pub const RS_CROSSOVER: f64 = 200.0;

/// Largest number of Riemann–Siegel correction coefficients.
pub const MAX_RS_TERMS: usize = riemann_siegel::MAX_TERMS;

/// Default number of correction coefficients (`C_0..C_4`).
pub const DEFAULT_RS_TERMS: usize = MAX_RS_TERMS;

/// Zeros are bisected until their bracket is at most this wide.
pub const ZERO_BRACKET: f64 = 1e-9;

/// A height on the critical line, `t ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Height(f64);

impl Height {
    pub fn new(t: f64) -> Result<Self> {
        if t.is_finite() && t >= 0.0 {
            Ok(Height(t))
        } else {
            Err(Error::domain("height", t, "finite t >= 0"))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl From<Height> for f64 {
    fn from(h: Height) -> f64 {
        h.0
    }
}

/// `Z(t)` together with its square and an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZSample {
    pub t: Height,
    pub z: f64,
    pub z2: f64,
    pub err: f64,
}

impl ZSample {
    fn new(t: f64, z: f64, err: f64) -> Self {
        ZSample {
            t: Height(t),
            z,
            z2: z * z,
            err,
        }
    }
}

/// A zero `γ` of `ζ(1/2 + iγ)` located by a sign change of `Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub gamma: Height,
    /// Half-width of the final bisection bracket around `gamma`.
    pub bracket_width: f64,
}

/// Riemann–Siegel theta from its asymptotic expansion,
/// `t/2·ln(t/2π) − t/2 − π/8 + 1/(48t) + 7/(5760t³)`.
///
/// The first omitted term is `31/(80640 t⁵)`; [`theta_truncation_bound`]
/// returns twice that.
pub fn theta(t: f64) -> Result<f64> {
    if !(t.is_finite() && t >= MIN_THETA_HEIGHT) {
        return Err(Error::domain("theta", t, "t >= 2"));
    }
    Ok(theta_series(t))
}

#[inline]
pub(crate) fn theta_series(t: f64) -> f64 {
    let r = 1.0 / t;
    0.5 * t * (t / TAU).ln() - 0.5 * t - FRAC_PI_8 + r / 48.0 + 7.0 / 5760.0 * r * r * r
}

pub fn theta_truncation_bound(t: f64) -> f64 {
    2.0 * 31.0 / (80640.0 * t.powi(5))
}

/// Hardy's `Z(t)` with `terms` Riemann–Siegel corrections (`0..=5`).
///
/// The reported `err` bounds the truncation error, of order
/// `t^{−(2·terms+1)/4}`. Below [`RS_CROSSOVER`] the value comes from the
/// direct path and does not depend on `terms`.
pub fn z_eval(t: f64, terms: usize) -> Result<ZSample> {
    if !(t.is_finite() && t >= MIN_Z_HEIGHT) {
        return Err(Error::domain("z_eval", t, "t >= 10"));
    }
    if terms > MAX_RS_TERMS {
        return Err(Error::domain("z_eval terms", terms as f64, "terms <= 5"));
    }
    Ok(sample(t, terms))
}

fn sample(t: f64, terms: usize) -> ZSample {
    if t < RS_CROSSOVER {
        ZSample::new(t, exact::z_exact(t), exact::z_exact_err(t))
    } else {
        ZSample::new(
            t,
            riemann_siegel::z(t, terms),
            riemann_siegel::error_bound(t, terms),
        )
    }
}

/// `Z(t)` for any `t ≥ 0`, choosing the evaluation path by height.
#[inline]
pub fn z_value(t: f64, terms: usize) -> f64 {
    if t < RS_CROSSOVER {
        exact::z_exact(t)
    } else {
        riemann_siegel::z(t, terms)
    }
}

/// Values of `Z` at `c + h·x_i`; panels entirely above the crossover use
/// the batched Riemann–Siegel sum.
pub fn z_on_panel(c: f64, h: f64, xs: &[f64], terms: usize, out: &mut [f64]) {
    if c - h >= RS_CROSSOVER {
        riemann_siegel::z_panel(c, h, xs, terms, out);
    } else {
        for (x, o) in xs.iter().zip(out.iter_mut()) {
            *o = z_value(c + h * x, terms);
        }
    }
}

/// Mean spacing of zeros near `t`, `2π / ln(t/2π)`.
pub fn mean_zero_spacing(t: f64) -> f64 {
    TAU / (t / TAU).ln()
}

/// Sign-change scan step: 0.4 of the mean spacing, capped at 1.
pub fn zero_scan_step(t: f64) -> f64 {
    let spacing = mean_zero_spacing(t.max(MIN_Z_HEIGHT));
    if spacing.is_finite() && spacing > 0.0 {
        (0.4 * spacing).min(1.0)
    } else {
        1.0
    }
}

/// All sign changes of `Z` in `[a, b]`, bisected to [`ZERO_BRACKET`].
///
/// Pairs of zeros closer than the scan step can be missed; so can zeros
/// of even order.
pub fn zeros_in(a: f64, b: f64) -> Result<Vec<Zero>> {
    zeros_in_with(a, b, DEFAULT_RS_TERMS)
}

pub fn zeros_in_with(a: f64, b: f64, terms: usize) -> Result<Vec<Zero>> {
    if !(a.is_finite() && b.is_finite() && a >= MIN_Z_HEIGHT && a < b) {
        return Err(Error::domain("zeros_in", a, "10 <= a < b"));
    }
    if terms > MAX_RS_TERMS {
        return Err(Error::domain("zeros_in terms", terms as f64, "terms <= 5"));
    }
    let z = |t: f64| z_value(t, terms);
    let mut zeros = Vec::new();
    let mut lo = a;
    let mut z_lo = z(lo);
    while lo < b {
        let hi = (lo + zero_scan_step(lo)).min(b);
        let z_hi = z(hi);
        if z_lo == 0.0 {
            zeros.push(Zero {
                gamma: Height(lo),
                bracket_width: 0.0,
            });
        } else if z_lo * z_hi < 0.0 {
            zeros.push(bisect_zero(&z, lo, hi, z_lo));
        }
        lo = hi;
        z_lo = z_hi;
    }
    if z_lo == 0.0 && zeros.last().is_none_or(|g| g.gamma.0 < b) {
        zeros.push(Zero {
            gamma: Height(b),
            bracket_width: 0.0,
        });
    }
    Ok(zeros)
}

fn bisect_zero(z: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, z_lo: f64) -> Zero {
    let lo_sign = z_lo.signum();
    while hi - lo > ZERO_BRACKET {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let zm = z(mid);
        if zm == 0.0 {
            return Zero {
                gamma: Height(mid),
                bracket_width: 0.0,
            };
        }
        if zm.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Zero {
        gamma: Height(0.5 * (lo + hi)),
        bracket_width: 0.5 * (hi - lo),
    }
}

/// The Riemann–von Mangoldt smooth count `θ(t)/π + 1`.
pub fn smooth_zero_count(t: f64) -> Result<f64> {
    Ok(theta(t)? / PI + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_domain() {
        assert!(theta(1.99).is_err());
        assert!(theta(f64::NAN).is_err());
        assert!(theta(2.0).is_ok());
    }

    #[test]
    fn theta_series_rearrangement() {
        let t: f64 = 1e3;
        let rest = theta(t).unwrap() + FRAC_PI_8 + t / 2.0 - t / 2.0 * (t / TAU).ln();
        assert!((rest - 1.0 / (48.0 * t)).abs() < 1e-10);
    }

    #[test]
    fn z_eval_domain_and_square() {
        assert!(z_eval(9.99, 2).is_err());
        assert!(z_eval(100.0, MAX_RS_TERMS + 1).is_err());
        let s = z_eval(1234.5, 2).unwrap();
        assert_eq!(s.z2, s.z * s.z);
        assert!(s.err > 0.0);
    }

    #[test]
    fn zeros_empty_without_sign_change() {
        // Z(100) ≈ 2.69, no zero in [100, 100.01]
        assert!(zeros_in(100.0, 100.01).unwrap().is_empty());
        assert!(zeros_in(50.0, 40.0).is_err());
    }
}
