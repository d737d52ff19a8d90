//! Jacob's ladder `φ(T)`, defined by `Φ(φ(T)) = I(T)`, and chords of the
//! curve `y = φ(T)/2`.

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::quadrature::{Interval, MuParams};
use crate::zeta::{self, Zero, EULER_GAMMA};

/// Smallest `T` accepted by [`Engine::solve_phi`].
pub const MIN_T: f64 = 100.0;

/// Iteration cap of the root solver.
pub const MAX_ITER: usize = 80;

/// `ε` in `U₀(T) = T^{1/3 + 2ε}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonConfig {
    pub epsilon: f64,
}

impl Default for EpsilonConfig {
    fn default() -> Self {
        EpsilonConfig { epsilon: 0.01 }
    }
}

impl EpsilonConfig {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0 / 24.0) {
            return Err(Error::domain("epsilon", epsilon, "0 < epsilon < 1/24"));
        }
        Ok(EpsilonConfig { epsilon })
    }

    /// `U₀(T) = T^{1/3 + 2ε}`.
    pub fn u0(&self, t: f64) -> f64 {
        t.powf(1.0 / 3.0 + 2.0 * self.epsilon)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderPoint {
    pub t: f64,
    pub phi: f64,
    pub dphi_dt: f64,
    /// `|Φ(φ) − I(T)|`
    pub residual: f64,
    /// `I(T)`
    pub i_t: f64,
    /// `Φ′(φ(T))`
    pub phi_prime: f64,
    /// `Z(T)`
    pub z: f64,
}

/// The chord of `y = φ(T)/2` over `[n, m]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub n: f64,
    pub m: f64,
    pub tan_alpha: f64,
    /// `m − n = U₀(n)`
    pub is_fundamental: bool,
    /// `|tan α − 1| ≤ 1/ln n`
    pub is_almost_parallel: bool,
    pub lo: LadderPoint,
    pub hi: LadderPoint,
}

/// `tan α = (φ(M) − φ(N)) / (2(M − N))`.
pub fn tan_alpha(lo: &LadderPoint, hi: &LadderPoint) -> f64 {
    (hi.phi - lo.phi) / (2.0 * (hi.t - lo.t))
}

/// `|tan α − 1| ≤ eta`.
pub fn is_almost_parallel(ch: &Chord, eta: f64) -> Result<bool> {
    if !(eta > 0.0 && eta < 0.5) {
        return Err(Error::domain(
            "is_almost_parallel eta",
            eta,
            "0 < eta < 1/2",
        ));
    }
    Ok((ch.tan_alpha - 1.0).abs() <= eta)
}

/// Starting point for the root: `Φ(y) ≈ (y/2)(ln(y/4π) + c)` from the
/// mean value of `Z²`.
fn initial_guess(i_t: f64) -> f64 {
    let four_pi = 4.0 * std::f64::consts::PI;
    let mut y = (2.0 * i_t / (i_t.ln() - 2.0).max(1.0)).max(1.0);
    for _ in 0..30 {
        let f = 0.5 * y * ((y / four_pi).ln() + EULER_GAMMA) - i_t;
        let df = 0.5 * ((y / four_pi).ln() + EULER_GAMMA + 1.0);
        if df <= 0.0 {
            break;
        }
        let next = (y - f / df).max(0.5 * y);
        if (next - y).abs() <= 1e-12 * y {
            return next;
        }
        y = next;
    }
    y
}

impl Engine {
    /// `U₀(T)` for the configured `ε`.
    pub fn u0(&self, t: f64) -> f64 {
        EpsilonConfig {
            epsilon: self.config().epsilon,
        }
        .u0(t)
    }

    /// `φ(T)` as the root of `F(y) = Φ(y) − I(T)`, and `dφ/dT = Z²(T)/Φ′(φ)`.
    ///
    /// `F` is increasing. The search starts from a tight bracket around an
    /// asymptotic guess and grows it inside `[T/2, 4T]`, then once more
    /// inside `[T/4, 8T]`. Secant steps are safeguarded by bisection.
    pub fn solve_phi(&self, t: f64, mu: &MuParams, tol: f64) -> Result<LadderPoint> {
        if !(t.is_finite() && t >= MIN_T) {
            return Err(Error::domain("solve_phi", t, "T >= 100"));
        }
        let i_t = self.hl_integral(t, tol)?.value;
        let f = |y: f64| -> Result<f64> { Ok(self.phi_transform(y, mu, tol)?.value - i_t) };

        let guess = initial_guess(i_t).clamp(0.5 * t, 4.0 * t);
        let (mut lo, mut hi, mut f_lo, mut f_hi) =
            match self.bracket(&f, guess, 0.5 * t, 4.0 * t)? {
                Some(b) => b,
                None => {
                    self.bracket(&f, guess, 0.25 * t, 8.0 * t)?
                        .ok_or_else(|| Error::Bracket {
                            lo: 0.25 * t,
                            hi: 8.0 * t,
                            f_lo: f(0.25 * t).unwrap_or(f64::NAN),
                            f_hi: f(8.0 * t).unwrap_or(f64::NAN),
                        })?
                }
            };

        // Illinois-type regula falsi; every third step bisects so the
        // bracket keeps shrinking from both ends
        let mut last = 0i8;
        for iter in 0..MAX_ITER {
            if hi - lo <= 4.0 * f64::EPSILON * hi {
                break;
            }
            let secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
            let y = if iter % 3 == 2 || !(secant > lo && secant < hi) {
                0.5 * (lo + hi)
            } else {
                secant
            };
            let fy = f(y)?;
            if fy == 0.0 {
                lo = y;
                hi = y;
                break;
            }
            if fy < 0.0 {
                lo = y;
                f_lo = fy;
                if last == -1 {
                    f_hi *= 0.5;
                }
                last = -1;
            } else {
                hi = y;
                f_hi = fy;
                if last == 1 {
                    f_lo *= 0.5;
                }
                last = 1;
            }
        }
        // f_lo/f_hi may have been halved; compare fresh values
        let y = if lo == hi || f(lo)?.abs() <= f(hi)?.abs() {
            lo
        } else {
            hi
        };
        let v = self.phi_values(y, mu, tol)?;
        let z = zeta::z_value(t, self.config().rs_terms);
        Ok(LadderPoint {
            t,
            phi: y,
            dphi_dt: z * z / v.dphi,
            residual: (v.phi.value - i_t).abs(),
            i_t,
            phi_prime: v.dphi,
            z,
        })
    }

    /// Grows `[guess·(1 ∓ δ)]` geometrically inside `[min, max]` until
    /// `f` changes sign.
    fn bracket(
        &self,
        f: &impl Fn(f64) -> Result<f64>,
        guess: f64,
        min: f64,
        max: f64,
    ) -> Result<Option<(f64, f64, f64, f64)>> {
        let mut delta = 0.01;
        let mut lo = (guess * (1.0 - delta)).max(min);
        let mut hi = (guess * (1.0 + delta)).min(max);
        let mut f_lo = f(lo)?;
        let mut f_hi = f(hi)?;
        loop {
            if f_lo <= 0.0 && f_hi >= 0.0 {
                return Ok(Some((lo, hi, f_lo, f_hi)));
            }
            if (f_lo > 0.0 && lo <= min) || (f_hi < 0.0 && hi >= max) {
                return Ok(None);
            }
            delta *= 2.0;
            if f_lo > 0.0 {
                hi = lo;
                f_hi = f_lo;
                lo = (guess * (1.0 - delta).max(0.0)).max(min);
                f_lo = f(lo)?;
            } else {
                lo = hi;
                f_lo = f_hi;
                hi = (guess * (1.0 + delta)).min(max);
                f_hi = f(hi)?;
            }
        }
    }

    pub fn chord(&self, t: f64, u: f64) -> Result<Chord> {
        if !(u > 0.0 && u.is_finite()) {
            return Err(Error::domain("chord U", u, "U > 0"));
        }
        let mu = self.config().mu;
        let tol = self.config().tol;
        let lo = self.solve_phi(t, &mu, tol)?;
        let hi = self.solve_phi(t + u, &mu, tol)?;
        Ok(self.chord_from(lo, hi))
    }

    fn chord_from(&self, lo: LadderPoint, hi: LadderPoint) -> Chord {
        let tan = tan_alpha(&lo, &hi);
        let u0 = self.u0(lo.t);
        Chord {
            n: lo.t,
            m: hi.t,
            tan_alpha: tan,
            is_fundamental: ((hi.t - lo.t) - u0).abs() <= 1e-9 * u0,
            is_almost_parallel: (tan - 1.0).abs() <= 1.0 / lo.t.ln(),
            lo,
            hi,
        }
    }

    /// The chord from a zero `γ` whose slope `tan α(γ, U)` equals
    /// `tan_target`, for the smallest `U ∈ (0, U₀(γ)]` found by a scan
    /// with step `U₀/256` followed by bisection to `|tan α − target| ≤ 10⁻⁶`.
    pub fn find_chord_with_angle(
        &self,
        gamma: Zero,
        tan_target: f64,
        eta_bracket: f64,
    ) -> Result<Chord> {
        let g = gamma.gamma.get();
        if !(eta_bracket > 0.0 && eta_bracket < 0.5) {
            return Err(Error::domain("eta_bracket", eta_bracket, "0 < eta < 1/2"));
        }
        if !(tan_target >= eta_bracket && tan_target <= 1.0 - eta_bracket) {
            return Err(Error::domain(
                "tan_target",
                tan_target,
                "eta <= tan <= 1 - eta",
            ));
        }
        if g < MIN_T {
            return Err(Error::domain(
                "find_chord_with_angle gamma",
                g,
                "gamma >= 100",
            ));
        }
        let mu = self.config().mu;
        let tol = self.config().tol;
        let base = self.solve_phi(g, &mu, tol)?;
        let u0 = self.u0(g);
        let step = u0 / 256.0;
        let eval = |u: f64| -> Result<(LadderPoint, f64)> {
            let p = self.solve_phi(g + u, &mu, tol)?;
            let d = tan_alpha(&base, &p) - tan_target;
            Ok((p, d))
        };

        let mut u_lo = 0.0;
        let mut d_lo = base.dphi_dt / 2.0 - tan_target;
        let mut found = None;
        for k in 1..=256 {
            let u = step * k as f64;
            let (p, d) = eval(u)?;
            if d == 0.0 {
                return Ok(self.chord_from(base, p));
            }
            if (d > 0.0) != (d_lo > 0.0) {
                found = Some((u, d, p));
                break;
            }
            u_lo = u;
            d_lo = d;
        }
        let (mut u_hi, mut d_hi, p_hi) = found.ok_or_else(|| {
            Error::NotFound(format!(
                "no chord from gamma = {g} with tan = {tan_target} for U in (0, {u0}]"
            ))
        })?;
        let mut best = (d_hi.abs(), p_hi);
        for _ in 0..200 {
            if best.0 <= 1e-6 {
                break;
            }
            let u = 0.5 * (u_lo + u_hi);
            if u <= u_lo || u >= u_hi {
                break;
            }
            let (p, d) = eval(u)?;
            if d.abs() < best.0 {
                best = (d.abs(), p);
            }
            if (d > 0.0) == (d_hi > 0.0) {
                u_hi = u;
                d_hi = d;
            } else {
                u_lo = u;
            }
        }
        if best.0 > 1e-6 {
            return Err(Error::NotFound(format!(
                "bisection stalled at |tan - target| = {:e}",
                best.0
            )));
        }
        Ok(self.chord_from(base, best.1))
    }

    /// Up to `count` disjoint intervals `[N, N + len] ⊂ [T, T + U₀(T)]`
    /// whose mean of `Z²` lies within 20% of `ln T`, scanning `N` with
    /// step `len/4`.
    pub fn find_intervals_with_mean(
        &self,
        t: f64,
        len: f64,
        count: usize,
    ) -> Result<Vec<Interval>> {
        if !(t.is_finite() && t >= MIN_T) {
            return Err(Error::domain("find_intervals_with_mean", t, "T >= 100"));
        }
        let u0 = self.u0(t);
        if !(len > 0.0 && len < u0) {
            return Err(Error::domain("target_len", len, "0 < len < U0(T)"));
        }
        if count == 0 {
            return Err(Error::domain("count", 0.0, "count >= 1"));
        }
        let tol = self.config().tol;
        let target = t.ln();
        let end = t + u0;
        let step = len / 4.0;
        let mut out = Vec::new();
        let mut k = 0u64;
        loop {
            let n = t + step * k as f64;
            if n + len > end || out.len() >= count {
                break;
            }
            let iv = Interval { a: n, b: n + len };
            let mean = self.integrate_z2(iv, tol)?.value / len;
            if (mean / target - 1.0).abs() <= 0.2 {
                out.push(iv);
                k += 4;
            } else {
                k += 1;
            }
        }
        Ok(out)
    }
}
