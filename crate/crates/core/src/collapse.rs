//! Dominated vertices, strong collapses and cores.
//!
//! A vertex `v` is dominated by `w != v` when every facet containing `v` also
//! contains `w`. Deleting a dominated vertex is an elementary strong collapse,
//! and the map sending `v` to `w` (fixing everything else) is a retraction
//! contiguous to the identity. The contiguity engine relies on those
//! retractions to shrink domains and codomains before searching.

use std::sync::Arc;

use serde::Serialize;

use crate::complex::{bit, bits, maximal_masks, Complex, Subcomplex};

/// Result of iterated dominated-vertex deletion on raw facet masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct CoreSteps {
    /// `(removed, dominator)` in removal order.
    pub steps: Vec<(usize, usize)>,
    /// Vertices of the core.
    pub kept: u64,
    /// Facets of the core.
    pub facets: Vec<u64>,
}

impl CoreSteps {
    /// The composite retraction as a vertex table over `0..n`: each removed
    /// vertex is sent to its final representative in the core.
    pub fn retraction(&self, n: usize) -> Vec<u8> {
        let mut r: Vec<u8> = (0..n as u8).collect();
        for &(v, w) in &self.steps {
            for x in r.iter_mut() {
                if *x as usize == v {
                    *x = w as u8;
                }
            }
        }
        r
    }
}

fn first_dominator(facets: &[u64], v: usize) -> Option<usize> {
    let mut inter = u64::MAX;
    let mut seen = false;
    for &f in facets {
        if f & bit(v) != 0 {
            inter &= f;
            seen = true;
        }
    }
    let doms = inter & !bit(v);
    (seen && doms != 0).then(|| doms.trailing_zeros() as usize)
}

fn delete_vertex(facets: &[u64], v: usize) -> Vec<u64> {
    maximal_masks(facets.iter().map(|&f| f & !bit(v)).collect())
}

/// Greedy canonical collapse: repeatedly delete the smallest dominated vertex
/// towards its smallest dominator.
pub(crate) fn core_steps(facets: &[u64]) -> CoreSteps {
    let mut facets = maximal_masks(facets.to_vec());
    let mut kept = facets.iter().fold(0, |m, f| m | f);
    let mut steps = Vec::new();
    'outer: loop {
        for v in bits(kept) {
            if let Some(w) = first_dominator(&facets, v) {
                steps.push((v, w));
                facets = delete_vertex(&facets, v);
                kept &= !bit(v);
                continue 'outer;
            }
        }
        break;
    }
    CoreSteps {
        steps,
        kept,
        facets,
    }
}

pub(crate) fn dominated_pairs(facets: &[u64]) -> Vec<(usize, usize)> {
    let verts = facets.iter().fold(0, |m, f| m | f);
    let mut out = Vec::new();
    for v in bits(verts) {
        let inter = facets
            .iter()
            .filter(|&&f| f & bit(v) != 0)
            .fold(u64::MAX, |m, f| m & f);
        out.extend(bits(inter & !bit(v)).map(|w| (v, w)));
    }
    out
}

/// All `(v, dominator)` pairs, ordered by `v` then by dominator.
pub fn dominated_vertices(k: &Complex) -> Vec<(usize, usize)> {
    dominated_pairs(&k.facet_masks())
}

/// One elementary strong collapse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollapseStep {
    pub removed: String,
    pub dominator: String,
}

/// The ordered deletions performed by [`core`] and the resulting core.
#[derive(Debug, Clone)]
pub struct CollapseTrace {
    pub steps: Vec<CollapseStep>,
    /// The core as a subcomplex of the input.
    pub core: Subcomplex,
}

impl CollapseTrace {
    /// The core as a standalone complex.
    pub fn result(&self) -> Complex {
        self.core.to_complex().0
    }
}

pub fn core(k: &Arc<Complex>) -> CollapseTrace {
    let info = core_steps(&k.facet_masks());
    let steps = info
        .steps
        .iter()
        .map(|&(v, w)| CollapseStep {
            removed: k.label(v).to_string(),
            dominator: k.label(w).to_string(),
        })
        .collect();
    CollapseTrace {
        steps,
        core: Subcomplex::from_masks_unchecked(k, info.facets),
    }
}

pub fn is_strongly_collapsible(k: &Complex) -> bool {
    core_steps(&k.facet_masks()).kept.count_ones() == 1
}
