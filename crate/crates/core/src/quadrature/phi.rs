//! The weighted transform `Φ(y) = ∫₀^{μ(y)} Z²(t) e^{−2t/y} dt` and its
//! first two derivatives.
//!
//! Beyond `t ≈ 30y` the weight has fallen below `e^{−60}` and the
//! integrand below any double-precision contribution. The integral is
//! therefore cut at the smallest block boundary `L(y)` where a bound on
//! the remaining tail (using `Z² ≤ 16 (t/2π)^{1/2}`) is negligible
//! relative to each of `Φ`, `Φ′` and `Φ″`; the bound is added to the
//! reported error.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2, TAU};

use super::grid::{self, Leaf, BLOCK};
use super::table::{self, Block, Z2Table, BLOCK_HALF};
use super::{IntegralResult, Neumaier};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::zeta::{self, EULER_GAMMA};

/// Smallest `y` accepted by the transform.
pub const MIN_Y: f64 = 20.0;

/// Step of the central difference used for `Z′` in `Q`.
pub const Z_PRIME_STEP: f64 = 1e-4;

/// Terms of `e^{−su}` kept when integrating against block moments.
const EXP_TERMS: usize = 8;

/// Below this `y` whole blocks are too wide for the moment expansion and
/// the per-node samples are used: `(10/y)^8/8! ≤ 10⁻¹⁹` from here on.
pub const Y_BLOCK: f64 = 630.0;

/// `μ(y) = coeff · y^{ω₁} · ln^{ω₂} y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuParams {
    pub omega1: f64,
    pub omega2: f64,
    pub coeff: f64,
}

impl Default for MuParams {
    fn default() -> Self {
        MuParams {
            omega1: 1.0,
            omega2: 1.0,
            coeff: 7.0,
        }
    }
}

impl MuParams {
    pub fn new(coeff: f64, omega1: f64, omega2: f64) -> Result<Self> {
        let mu = MuParams {
            omega1,
            omega2,
            coeff,
        };
        mu.validate()?;
        Ok(mu)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.coeff.is_finite() && self.coeff > 0.0) {
            return Err(Error::domain("mu coeff", self.coeff, "coeff > 0"));
        }
        if !(self.omega1.is_finite() && self.omega1 >= 1.0) {
            return Err(Error::domain("mu omega1", self.omega1, "omega1 >= 1"));
        }
        if !(self.omega2.is_finite() && self.omega2 >= 1.0) {
            return Err(Error::domain("mu omega2", self.omega2, "omega2 >= 1"));
        }
        Ok(())
    }

    pub fn value(&self, y: f64) -> f64 {
        self.coeff * y.powf(self.omega1) * y.ln().powf(self.omega2)
    }

    /// `dμ/dy`.
    pub fn d1(&self, y: f64) -> f64 {
        let (w1, w2) = (self.omega1, self.omega2);
        let l = y.ln();
        self.coeff * y.powf(w1 - 1.0) * (w1 * l.powf(w2) + w2 * l.powf(w2 - 1.0))
    }

    /// `d²μ/dy²`.
    pub fn d2(&self, y: f64) -> f64 {
        let (w1, w2) = (self.omega1, self.omega2);
        let l = y.ln();
        let bracket = w1 * (w1 - 1.0) * l.powf(w2)
            + w2 * (w1 - 1.0) * l.powf(w2 - 1.0)
            + w1 * w2 * l.powf(w2 - 1.0)
            + w2 * (w2 - 1.0) * l.powf(w2 - 2.0);
        self.coeff * y.powf(w1 - 2.0) * bracket
    }
}

/// `g(t) = t (t/φ − 1) e^{−2t/φ}`, the kernel of `Φ″`.
pub fn g_eval(t: f64, phi: f64) -> f64 {
    t * (t / phi - 1.0) * (-2.0 * t / phi).exp()
}

/// Closed-form extrema of `g` on `[0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GFacts {
    pub phi: f64,
    pub argmin: f64,
    pub argmax: f64,
    pub min_val: f64,
    pub max_val: f64,
}

pub fn g_extrema(phi: f64) -> Result<GFacts> {
    if !(phi.is_finite() && phi > std::f64::consts::E) {
        return Err(Error::domain("g_extrema", phi, "phi > e"));
    }
    Ok(GFacts {
        phi,
        argmin: (1.0 - FRAC_1_SQRT_2) * phi,
        argmax: (1.0 + FRAC_1_SQRT_2) * phi,
        min_val: -FRAC_1_SQRT_2 * (1.0 - FRAC_1_SQRT_2) * (-2.0 + SQRT_2).exp() * phi,
        max_val: FRAC_1_SQRT_2 * (1.0 + FRAC_1_SQRT_2) * (-2.0 - SQRT_2).exp() * phi,
    })
}

/// Running sums of `∫ Z² e^{−2t/y}`, `∫ t Z² e^{−2t/y}` and
/// `∫ t(t/y − 1) Z² e^{−2t/y}`.
#[derive(Debug, Default, Clone)]
pub(crate) struct Weighted {
    pub w0: Neumaier,
    pub w1: Neumaier,
    pub w2: Neumaier,
    pub err: f64,
    pub evals: u64,
}

impl Weighted {
    fn add_leaf(&mut self, leaf: &Leaf, y: f64) {
        let inv = 1.0 / y;
        for i in 0..leaf.wz.len() {
            let t = leaf.node(i);
            let f = leaf.wz[i] * (-2.0 * t * inv).exp();
            self.w0.add(f);
            self.w1.add(t * f);
            self.w2.add(t * (t * inv - 1.0) * f);
        }
        self.err += leaf.rule.error() * (-2.0 * (leaf.c - leaf.h) * inv).exp();
        self.evals += leaf.wz.len() as u64;
    }

    fn add_block(&mut self, block: &Block, b: usize, y: f64) {
        let c = b as f64 * BLOCK + BLOCK_HALF;
        let hh = BLOCK_HALF;
        let s = 2.0 * hh / y;
        let mut s0 = 0.0;
        let mut s1 = 0.0;
        let mut s2 = 0.0;
        let mut a = 1.0;
        for k in 0..EXP_TERMS {
            s0 += a * block.m[k];
            s1 += a * block.m[k + 1];
            s2 += a * block.m[k + 2];
            a *= -s / (k as f64 + 1.0);
        }
        let e = (-2.0 * c / y).exp();
        self.w0.add(e * s0);
        self.w1.add(e * (c * s0 + hh * s1));
        self.w2
            .add(e * (c * (c / y - 1.0) * s0 + hh * (2.0 * c / y - 1.0) * s1 + hh * hh / y * s2));
        self.err += block.err * e * s.exp();
    }
}

/// Tail bounds past a cut `l` for the three weighted integrals, already
/// scaled as in `Φ`, `Φ′` and `Φ″`.
fn tail_bounds(y: f64, l: f64) -> Option<[f64; 3]> {
    let beta = 2.0 / y;
    let scale = 16.0 / TAU.sqrt();
    let e = (-beta * l).exp();
    // ∫_l^∞ t^q e^{−βt} dt ≤ l^q e^{−βl} / (β − q/l)
    let tail = |q: f64| {
        let d = beta - q / l;
        (d > 0.0).then(|| scale * l.powf(q) * e / d)
    };
    Some([
        tail(0.5)?,
        2.0 / (y * y) * tail(1.5)?,
        4.0 / (y * y * y * y) * tail(2.5)?,
    ])
}

/// The block-aligned cut `L(y)` and the tail bounds there.
pub fn truncation(y: f64) -> (f64, [f64; 3]) {
    let mut k = (y / BLOCK).ceil().max(1.0);
    loop {
        let l = k * BLOCK;
        if let Some(b) = tail_bounds(y, l) {
            if b[0] <= 1e-18 * y && b[1] <= 1e-18 && b[2] <= 1e-20 / y {
                return (l, b);
            }
        }
        k += 1.0;
    }
}

/// `Φ`, `Φ′`, `Φ″` and their ingredients at one `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiValues {
    pub y: f64,
    pub mu: f64,
    /// Upper end of the quadrature (`min(μ(y), L(y))`).
    pub upper: f64,
    pub phi: IntegralResult,
    /// `(2/y²) ∫ t e^{−2t/y} Z²`
    pub w1: f64,
    /// `Z²(μ) e^{−2μ/y} μ′(y)`
    pub boundary: f64,
    pub dphi: f64,
    /// `(4/y³) ∫ t(t/y − 1) e^{−2t/y} Z²`
    pub w2: f64,
    pub q: f64,
    pub d2phi: f64,
}

/// The boundary terms of `Φ″` coming from the moving upper limit.
///
/// Differentiating `Φ′ = (2/y²)∫₀^μ t e^{−2t/y} Z² + Z²(μ) e^{−2μ/y} μ′`
/// gives
/// `Q = e^{−2μ/y} { (2/y²) Z² μ μ′ + (2/y²) Z² μ μ′ − (2/y) Z² μ′²
///                 + 2 Z Z′ μ′² + Z² μ″ }`
/// with `Z` and `Z′` taken at `μ(y)`.
pub fn q_term(y: f64, mu: f64, d1: f64, d2: f64, z: f64, dz: f64) -> f64 {
    let z2 = z * z;
    let e = (-2.0 * mu / y).exp();
    let t1 = 2.0 / (y * y) * z2 * mu * d1;
    let t2 = 2.0 / (y * y) * z2 * mu * d1;
    let t3 = -2.0 / y * z2 * d1 * d1;
    let t4 = 2.0 * z * dz * d1 * d1;
    let t5 = z2 * d2;
    e * (t1 + t2 + t3 + t4 + t5)
}

/// `∫ w(t) (ln(t/2π) + 2c) dt` over `[a, b]` for the three weights, the
/// derivative of the two-term mean value `t ln t + (2c − 1 − ln 2π) t`.
fn asymptotic_weighted(y: f64, a: f64, b: f64, acc: &mut Weighted) {
    use super::kronrod::{KRONROD_WEIGHTS, NODES};
    let n = ((b - a) / (0.125 * y)).ceil().max(1.0) as usize;
    let w = (b - a) / n as f64;
    for j in 0..n {
        let c = a + (j as f64 + 0.5) * w;
        let h = 0.5 * w;
        for (x, wk) in NODES.iter().zip(KRONROD_WEIGHTS) {
            let t = c + h * x;
            let f = wk * h * ((t / TAU).ln() + 2.0 * EULER_GAMMA) * (-2.0 * t / y).exp();
            acc.w0.add(f);
            acc.w1.add(t * f);
            acc.w2.add(t * (t / y - 1.0) * f);
        }
    }
}

/// Adds the weighted integrals over `[lo, hi]` using cached blocks where
/// they fit and fresh panels at the ragged ends.
fn weighted_range(table: &Z2Table, terms: usize, y: f64, lo: f64, hi: f64, acc: &mut Weighted) {
    if !(hi > lo) {
        return;
    }
    let b_lo = (lo / BLOCK).ceil() as usize;
    let b_hi = (hi / BLOCK).floor() as usize;
    if b_lo >= b_hi {
        direct(terms, y, lo, hi, acc);
        return;
    }
    direct(terms, y, lo, b_lo as f64 * BLOCK, acc);
    for b in b_lo..b_hi {
        match table.leaves(b) {
            Some(leaves) if y < Y_BLOCK => leaves.iter().for_each(|l| acc.add_leaf(l, y)),
            _ => acc.add_block(table.block(b), b, y),
        }
    }
    direct(terms, y, b_hi as f64 * BLOCK, hi, acc);
}

fn direct(terms: usize, y: f64, a: f64, b: f64, acc: &mut Weighted) {
    let mut leaves = Vec::new();
    for p in grid::panels_between(a, b) {
        grid::refine(p, terms, &table::table_accept, &mut leaves);
    }
    for l in &leaves {
        acc.add_leaf(l, y);
    }
}

impl Engine {
    /// `Φ`, `Φ′` and `Φ″` at `y` from a single pass over the table.
    pub fn phi_values(&self, y: f64, mu: &MuParams, tol: f64) -> Result<PhiValues> {
        if !(y.is_finite() && y >= MIN_Y) {
            return Err(Error::domain("phi", y, "y >= 20"));
        }
        if !(tol > 0.0) {
            return Err(Error::domain("phi tol", tol, "tol > 0"));
        }
        mu.validate()?;
        let cfg = self.config();
        let terms = cfg.rs_terms;
        let mu_y = mu.value(y);
        let budget = cfg.height_budget;
        if mu_y > budget && !cfg.asymptotic_tail {
            return Err(Error::Budget {
                what: "mu(y)",
                requested: mu_y,
                budget,
            });
        }
        let (cut, tails) = truncation(y);
        let end = mu_y.min(cut);
        let exact_end = end.min((budget / BLOCK).floor() * BLOCK);

        let mut acc = Weighted::default();
        self.with_table(exact_end, |table| {
            weighted_range(table, terms, y, 0.0, exact_end, &mut acc)
        })?;
        if exact_end < end {
            asymptotic_weighted(y, exact_end, end, &mut acc);
        }
        let mut err = acc.err;
        if end < mu_y {
            err += tails[0];
        }

        let z = zeta::z_value(mu_y, terms);
        let dz = (zeta::z_value(mu_y + Z_PRIME_STEP, terms)
            - zeta::z_value(mu_y - Z_PRIME_STEP, terms))
            / (2.0 * Z_PRIME_STEP);
        let d1 = mu.d1(y);
        let d2 = mu.d2(y);
        let boundary = z * z * (-2.0 * mu_y / y).exp() * d1;
        let q = q_term(y, mu_y, d1, d2, z, dz);

        let value = acc.w0.value();
        let w1 = 2.0 / (y * y) * acc.w1.value();
        let w2 = 4.0 / (y * y * y) * acc.w2.value();
        Ok(PhiValues {
            y,
            mu: mu_y,
            upper: end,
            phi: IntegralResult::new(value, err, acc.evals + 3, tol),
            w1,
            boundary,
            dphi: w1 + boundary,
            w2,
            q,
            d2phi: w2 + q,
        })
    }

    /// `Φ(y) = ∫₀^{μ(y)} Z²(t) e^{−2t/y} dt`.
    pub fn phi_transform(&self, y: f64, mu: &MuParams, tol: f64) -> Result<IntegralResult> {
        Ok(self.phi_values(y, mu, tol)?.phi)
    }

    /// `Φ′(y) = (2/y²)∫₀^{μ(y)} t e^{−2t/y} Z²(t) dt + Z²(μ) e^{−2μ/y} μ′(y)`.
    pub fn phi_prime(&self, y: f64, mu: &MuParams, tol: f64) -> Result<f64> {
        Ok(self.phi_values(y, mu, tol)?.dphi)
    }

    /// `Φ″(y) = (4/y³)∫₀^{μ(y)} t(t/y − 1) e^{−2t/y} Z²(t) dt + Q(y)`.
    pub fn phi_second(&self, y: f64, mu: &MuParams, tol: f64) -> Result<f64> {
        Ok(self.phi_values(y, mu, tol)?.d2phi)
    }

    /// The integral part of `Φ″` split at `split`: `(4/y³)∫₀^split` and
    /// `(4/y³)∫_split^{μ(y)}`.
    pub fn phi_second_parts(&self, y: f64, mu: &MuParams, split: f64) -> Result<(f64, f64)> {
        let v = self.phi_values(y, mu, 1.0)?;
        let split = split.clamp(0.0, v.upper);
        let terms = self.config().rs_terms;
        let mut head = Weighted::default();
        self.with_table(split, |table| {
            weighted_range(table, terms, y, 0.0, split, &mut head)
        })?;
        let head = 4.0 / (y * y * y) * head.w2.value();
        Ok((head, v.w2 - head))
    }
}
