//! Cached `Z²` data on the fixed grid.
//!
//! Each block `[10b, 10b+10]` keeps the moments
//! `m_k = ∫ Z²(t) ((t − c)/5)^k dt`, `c = 10b + 5`, for `k < NMOM`.
//! Weighted integrals `∫ Z² e^{−2t/y} p(t) dt` over whole blocks follow
//! from a short Taylor expansion of the exponential once `y` is large
//! enough; for smaller `y` the per-node samples of blocks below
//! [`NODE_BLOCKS`] are kept as well.

use rayon::prelude::*;

use super::grid::{self, Leaf, BLOCK, UNITS_PER_BLOCK};
use super::Neumaier;

pub const NMOM: usize = 10;
pub const BLOCK_HALF: f64 = 0.5 * BLOCK;

/// Blocks are built in chunks of this many (1000 units of `t`).
pub const CHUNK_BLOCKS: usize = 100;

/// Per-node samples are retained for `t < 10·NODE_BLOCKS`.
pub const NODE_BLOCKS: usize = 4000;

/// Relative accuracy demanded of every cached panel, as judged by the
/// (pessimistic) Kronrod error estimate.
pub const TABLE_REL: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct Block {
    pub m: [f64; NMOM],
    pub err: f64,
}

pub struct Z2Table {
    terms: usize,
    blocks: Vec<Block>,
    leaves: Vec<Leaf>,
    /// `leaves[leaf_start[b]..leaf_start[b+1]]` belong to block `b`
    leaf_start: Vec<usize>,
}

/// Accepts a panel whose error estimate is small against the larger of
/// its own `∫Z²` and the local mean `ln(t/2π)` times its width.
pub(crate) fn table_accept(rule: &super::kronrod::RuleResult, p: grid::Panel) -> bool {
    let mean = (p.b / std::f64::consts::TAU).ln().max(1.0);
    rule.error() <= TABLE_REL * rule.resabs.max(mean * (p.b - p.a))
}

fn build_block(b: usize, terms: usize) -> (Block, Vec<Leaf>) {
    let mut leaves = Vec::with_capacity(64);
    let first = b as u64 * UNITS_PER_BLOCK;
    for j in first..first + UNITS_PER_BLOCK {
        for p in grid::unit_panels(j) {
            grid::refine(p, terms, &table_accept, &mut leaves);
        }
    }
    let c = b as f64 * BLOCK + BLOCK_HALF;
    let mut m: [Neumaier; NMOM] = Default::default();
    let mut err = 0.0;
    for leaf in &leaves {
        err += leaf.rule.error();
        for i in 0..leaf.wz.len() {
            let u = (leaf.node(i) - c) / BLOCK_HALF;
            let mut term = leaf.wz[i];
            for acc in m.iter_mut() {
                acc.add(term);
                term *= u;
            }
        }
    }
    let block = Block {
        m: std::array::from_fn(|k| m[k].value()),
        err,
    };
    (block, leaves)
}

impl Z2Table {
    pub fn new(terms: usize) -> Self {
        Z2Table {
            terms,
            blocks: Vec::new(),
            leaves: Vec::new(),
            leaf_start: vec![0],
        }
    }

    /// Height up to which blocks are available.
    pub fn covered(&self) -> f64 {
        self.blocks.len() as f64 * BLOCK
    }

    /// Builds whole chunks until `height` is covered. Blocks are computed
    /// independently and stored in index order, so the contents do not
    /// depend on the pool size.
    pub fn extend_to(&mut self, height: f64, pool: &rayon::ThreadPool) {
        let need = (height / BLOCK).ceil().max(0.0) as usize;
        if need <= self.blocks.len() {
            return;
        }
        let end = need.div_ceil(CHUNK_BLOCKS) * CHUNK_BLOCKS;
        let start = self.blocks.len();
        let terms = self.terms;
        let built: Vec<(Block, Vec<Leaf>)> = pool.install(|| {
            (start..end)
                .into_par_iter()
                .map(|b| {
                    let (block, leaves) = build_block(b, terms);
                    (block, if b < NODE_BLOCKS { leaves } else { Vec::new() })
                })
                .collect()
        });
        for (b, (block, leaves)) in (start..).zip(built) {
            self.blocks.push(block);
            if b < NODE_BLOCKS {
                self.leaves.extend_from_slice(&leaves);
                self.leaf_start.push(self.leaves.len());
            }
        }
    }

    pub fn block(&self, b: usize) -> &Block {
        &self.blocks[b]
    }

    /// Per-node samples of block `b`, if retained.
    pub fn leaves(&self, b: usize) -> Option<&[Leaf]> {
        if b + 1 < self.leaf_start.len() {
            Some(&self.leaves[self.leaf_start[b]..self.leaf_start[b + 1]])
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::DEFAULT_RS_TERMS;

    #[test]
    fn block_moments_match_leaves() {
        let (block, leaves) = build_block(123, DEFAULT_RS_TERMS);
        let direct: f64 = leaves.iter().map(|l| l.rule.kronrod).sum();
        assert!((block.m[0] - direct).abs() < 1e-12 * direct);
        // |u| ≤ 1 so the moments shrink in magnitude
        for k in 1..NMOM {
            assert!(block.m[k].abs() <= block.m[0] * (1.0 + 1e-12));
        }
        assert!(block.err < 1e-10 * block.m[0]);
    }
}
