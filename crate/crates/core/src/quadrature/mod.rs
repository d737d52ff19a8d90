//! Integrals of `Z²`: arbitrary intervals, the cumulative integral
//! `I(T) = ∫₀ᵀ Z²(t) dt`, and the weighted transform `Φ`.

pub mod checkpoint;
pub mod grid;
pub mod kronrod;
pub mod phi;
pub(crate) mod table;

use rayon::prelude::*;

use crate::engine::Engine;
use crate::error::{Error, Result};

pub use checkpoint::{Checkpoint, CheckpointStore};
pub use phi::{g_eval, g_extrema, GFacts, MuParams, PhiValues};

/// A closed interval `[a, b]` with `0 ≤ a ≤ b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a >= 0.0) {
            return Err(Error::domain("interval", a, "finite 0 <= a"));
        }
        if b < a {
            return Err(Error::domain("interval", b, "b >= a"));
        }
        Ok(Interval { a, b })
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn is_empty(&self) -> bool {
        self.b == self.a
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub err_est: f64,
    pub evals: u64,
    /// `err_est ≤ tol · max(1, |value|)`
    pub tol_met: bool,
}

impl IntegralResult {
    pub fn new(value: f64, err_est: f64, evals: u64, tol: f64) -> Self {
        IntegralResult {
            value,
            err_est,
            evals,
            tol_met: err_est <= tol * value.abs().max(1.0),
        }
    }

    pub const ZERO: IntegralResult = IntegralResult {
        value: 0.0,
        err_est: 0.0,
        evals: 0,
        tol_met: true,
    };
}

/// Compensated summation (Neumaier's variant of Kahan).
#[derive(Debug, Default, Clone, Copy)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Engine {
    /// `∫_a^b Z²(t) dt` over the fixed panel grid.
    ///
    /// A panel of width `w` is accepted when its error estimate is below
    /// `tol/2 · max(∫_panel |Z²|, w/(b − a))`, otherwise it is bisected.
    /// The totals therefore satisfy `err_est ≤ tol · max(1, value)` unless
    /// the depth limit was hit, which clears `tol_met`.
    pub fn integrate_z2(&self, iv: Interval, tol: f64) -> Result<IntegralResult> {
        if !(tol > 0.0) {
            return Err(Error::domain("integrate_z2 tol", tol, "tol > 0"));
        }
        if iv.is_empty() {
            return Ok(IntegralResult::ZERO);
        }
        self.check_height(iv.b)?;
        let terms = self.config().rs_terms;
        let len = iv.len();
        let accept = move |r: &kronrod::RuleResult, p: grid::Panel| {
            r.error() <= 0.5 * tol * r.resabs.max((p.b - p.a) / len)
        };
        let panels = grid::panels_between(iv.a, iv.b);
        let parts: Vec<(f64, f64, u64)> = self.pool().install(|| {
            panels
                .par_iter()
                .map(|p| {
                    let mut leaves = Vec::new();
                    grid::refine(*p, terms, &accept, &mut leaves);
                    let mut v = Neumaier::default();
                    let mut e = 0.0;
                    for l in &leaves {
                        v.add(l.rule.kronrod);
                        e += l.rule.error();
                    }
                    (v.value(), e, (leaves.len() * kronrod::N_NODES) as u64)
                })
                .collect()
        });
        let mut value = Neumaier::default();
        let mut err = Neumaier::default();
        let mut evals = 0;
        for (v, e, n) in parts {
            value.add(v);
            err.add(e);
            evals += n;
        }
        Ok(IntegralResult::new(value.value(), err.value(), evals, tol))
    }

    /// `I(T) = ∫₀ᵀ Z²`, from the checkpoint at `100·⌊T/100⌋` plus a direct
    /// integral over the remainder.
    pub fn hl_integral(&self, t: f64, tol: f64) -> Result<IntegralResult> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::domain("hl_integral", t, "T >= 0"));
        }
        let k = (t / checkpoint::SPACING).floor() as usize;
        let cp = self.checkpoint(k)?;
        let rest = self.integrate_z2(Interval { a: cp.t, b: t }, tol)?;
        let value = cp.i + rest.value;
        let err = cp.err_accum + rest.err_est;
        Ok(IntegralResult::new(value, err, rest.evals, tol))
    }

    /// The `k`-th checkpoint `I(100k)`, extending the store as needed.
    pub fn checkpoint(&self, k: usize) -> Result<Checkpoint> {
        if let Some(c) = self.checkpoints().read().expect("checkpoint lock").get(k) {
            return Ok(c);
        }
        let height = k as f64 * checkpoint::SPACING;
        self.check_height(height)?;
        let mut store = self.checkpoints().write().expect("checkpoint lock");
        if let Some(c) = store.get(k) {
            return Ok(c);
        }
        let first = store.len();
        let blocks_per = (checkpoint::SPACING / grid::BLOCK) as usize;
        let new = self.with_table(height, |table| {
            let mut prev = store.last();
            let mut out = Vec::with_capacity(k + 1 - first);
            for j in first..=k {
                let mut s = Neumaier::default();
                let mut e = 0.0;
                for b in (j - 1) * blocks_per..j * blocks_per {
                    let block = table.block(b);
                    s.add(block.m[0]);
                    e += block.err;
                }
                let next = Checkpoint {
                    t: j as f64 * checkpoint::SPACING,
                    i: prev.i + s.value(),
                    err_accum: prev.err_accum + e,
                };
                out.push(next);
                prev = next;
            }
            out
        })?;
        store.extend(&new)?;
        Ok(store.get(k).expect("just extended"))
    }
}
