//! The fixed panel decomposition of the `t` axis.
//!
//! Every unit interval `[j, j+1]` is cut into equal panels no wider than
//! half the local mean zero spacing `2π / ln(t/2π)`, and never fewer than
//! two. The grid depends on nothing but `t`, so every integral over the
//! same range visits the same panels in the same order.

use std::f64::consts::{PI, TAU};

use super::kronrod::{self, RuleResult, NODES, N_NODES};
use crate::zeta;

/// Width of a table block; a whole number of units.
pub const BLOCK: f64 = 10.0;
pub const UNITS_PER_BLOCK: u64 = 10;

/// Panels per unit interval `[j, j+1]`.
pub fn panels_in_unit(j: u64) -> u64 {
    let need = ((j as f64 + 1.0) / TAU).ln() / PI;
    if need > 2.0 {
        need.ceil() as u64
    } else {
        2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
}

impl Panel {
    #[inline]
    pub fn centre(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    #[inline]
    pub fn half_width(&self) -> f64 {
        0.5 * (self.b - self.a)
    }
}

/// Panels of unit `j`, in increasing order.
pub fn unit_panels(j: u64) -> impl Iterator<Item = Panel> {
    let np = panels_in_unit(j);
    let base = j as f64;
    (0..np).map(move |i| Panel {
        a: base + i as f64 / np as f64,
        b: base + (i + 1) as f64 / np as f64,
    })
}

/// Grid panels meeting `[a, b]`, clipped to it.
pub fn panels_between(a: f64, b: f64) -> Vec<Panel> {
    let mut out = Vec::new();
    if !(b > a) {
        return out;
    }
    let first = a.floor() as u64;
    let last = b.ceil() as u64;
    for j in first..last {
        for p in unit_panels(j) {
            let lo = p.a.max(a);
            let hi = p.b.min(b);
            if hi > lo {
                out.push(Panel { a: lo, b: hi });
            }
        }
    }
    out
}

/// A panel after quadrature: the weighted `Z²` samples `w_i·h·Z²(t_i)`
/// at `t_i = c + h·x_i`, plus the rule's own estimates.
#[derive(Debug, Clone, Copy)]
pub struct Leaf {
    pub c: f64,
    pub h: f64,
    pub wz: [f64; N_NODES],
    pub rule: RuleResult,
}

impl Leaf {
    pub fn evaluate(p: Panel, terms: usize) -> Leaf {
        let c = p.centre();
        let h = p.half_width();
        let mut z = [0.0; N_NODES];
        zeta::z_on_panel(c, h, &NODES, terms, &mut z);
        let z2: [f64; N_NODES] = std::array::from_fn(|i| z[i] * z[i]);
        let rule = kronrod::apply(&z2, h);
        let wz = std::array::from_fn(|i| kronrod::KRONROD_WEIGHTS[i] * h * z2[i]);
        Leaf { c, h, wz, rule }
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        self.c + self.h * NODES[i]
    }
}

/// Bisection depth limit for a single grid panel.
pub const MAX_DEPTH: u32 = 12;

/// Evaluates `p`, bisecting until `accept(rule, panel)` holds or the depth
/// limit is reached. Leaves are appended in increasing order of `t`.
pub fn refine(
    p: Panel,
    terms: usize,
    accept: &impl Fn(&RuleResult, Panel) -> bool,
    out: &mut Vec<Leaf>,
) {
    refine_at(p, terms, accept, 0, out);
}

fn refine_at(
    p: Panel,
    terms: usize,
    accept: &impl Fn(&RuleResult, Panel) -> bool,
    depth: u32,
    out: &mut Vec<Leaf>,
) {
    let leaf = Leaf::evaluate(p, terms);
    if depth >= MAX_DEPTH || accept(&leaf.rule, p) {
        out.push(leaf);
        return;
    }
    let m = p.centre();
    refine_at(Panel { a: p.a, b: m }, terms, accept, depth + 1, out);
    refine_at(Panel { a: m, b: p.b }, terms, accept, depth + 1, out);
}
