//! Entropy-based weighting between attracting and conflicting metalevel
//! evidence, measured on one pooled "imaginary" cluster holding every item.
//!
//! For each evidence type the average total uncertainty H = G + I is the sum
//! of Shannon entropy (scattering) and Hartley information (nonspecificity)
//! of the combined metalevel assignment.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evidence::{AttractionMatrix, ConflictMatrix};
use crate::scalar::Real;
use crate::subsets::{absent_edge_products, mobius_inplace};

/// Largest pooled item count for the attracting entropy; the coverage
/// aggregation walks `2^n` subsets.
pub const MAX_POOLED_ITEMS: usize = 24;

/// Entropy components of the pooled conflicting (`*_neg`) and attracting
/// (`*_pos`) metalevel evidence, in bits, plus the resulting weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyReport<F: Real> {
    pub g_neg: F,
    pub i_neg: F,
    pub h_neg: F,
    pub g_pos: F,
    pub i_pos: F,
    pub h_pos: F,
    pub alpha: F,
}

fn shannon_term<F: Real>(m: F) -> F {
    if m > F::zero() {
        -(m * m.log2())
    } else {
        F::zero()
    }
}

/// Entropy (G, I, H) of the combination of all pairwise conflicting
/// metalevel evidence pooled into one cluster.
///
/// Focal elements correspond one-to-one with subsets of the pair set, with
/// a product measure over independent pairs, so G is the sum of per-pair
/// binary entropies and I is the expectation of `log2 k` under the
/// Poisson-binomial distribution of the number of pairs present.
pub fn neg_entropy<F: Real>(c: &ConflictMatrix<F>) -> (F, F, F) {
    let n = c.n();
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push(c.get(i, j));
        }
    }

    let mut g = F::zero();
    for &ce in &edges {
        g += shannon_term(ce) + shannon_term(F::one() - ce);
    }

    // Poisson-binomial distribution of the present-pair count.
    let mut dist: Vec<F> = vec![F::one()];
    for &ce in &edges {
        let mut next = vec![F::zero(); dist.len() + 1];
        for (k, &pk) in dist.iter().enumerate() {
            next[k] += pk * (F::one() - ce);
            next[k + 1] += pk * ce;
        }
        dist = next;
    }
    let mut i_val = F::zero();
    for (k, &pk) in dist.iter().enumerate().skip(1) {
        i_val += pk * F::from_f64(k as f64).log2();
    }

    (g, i_val, g + i_val)
}

/// Mass the pooled attracting evidence puts on each exact coverage set,
/// indexed by item bit mask: `masses[J]` is the probability that the random
/// edge set touches exactly the items in `J` (Möbius inversion of the
/// coverage-containment probabilities). `masses[0]` is the Θ mass.
pub fn coverage_masses<F: Real>(p: &AttractionMatrix<F>) -> Result<Vec<F>> {
    let n = p.n();
    if n > MAX_POOLED_ITEMS {
        return Err(Error::SizeLimit {
            what: "pooled item count for attracting entropy",
            limit: MAX_POOLED_ITEMS,
            got: n,
        });
    }
    let members: Vec<usize> = (0..n).collect();
    let g = absent_edge_products(&members, |i, j| p.get(i, j));
    let full = (1usize << n) - 1;
    // m[S] starts as Pr(coverage ⊆ S) and ends as Pr(coverage = S).
    let mut m: Vec<F> = (0..=full).map(|s| g[full ^ s]).collect();
    mobius_inplace(&mut m);
    Ok(m)
}

/// Entropy (G, I, H) of the combination of all attracting metalevel evidence
/// pooled into one cluster.
///
/// Both sums range over coverage sets with more than one member, so the Θ
/// focal contributes nothing.
pub fn pos_entropy<F: Real>(p: &AttractionMatrix<F>) -> Result<(F, F, F)> {
    let n = p.n();
    let m = coverage_masses(p)?;
    let mut g_val = F::zero();
    let mut i_val = F::zero();
    for (j, &mass) in m.iter().enumerate() {
        let k = j.count_ones() as usize;
        if k <= 1 || mass <= F::zero() {
            continue;
        }
        g_val += shannon_term(mass);
        i_val += mass * F::from_f64((n - k + 1) as f64).log2();
    }
    Ok((g_val, i_val, g_val + i_val))
}

/// Weight of the attracting term in the metaconflict objective:
/// `h_pos / (h_pos + h_neg)`, so that no attracting information gives 0 and
/// no conflicting information gives 1. Both zero is resolved to 1/2.
pub fn alpha<F: Real>(h_pos: F, h_neg: F) -> Result<F> {
    for (what, v) in [("attracting entropy", h_pos), ("conflicting entropy", h_neg)] {
        if v.is_nan() || v < F::zero() {
            return Err(Error::Negative {
                what,
                value: v.into_f64(),
            });
        }
    }
    if h_pos == F::zero() && h_neg == F::zero() {
        return Ok(F::from_f64(0.5));
    }
    Ok(h_pos / (h_pos + h_neg))
}

/// Runs both pooled entropy computations and the weighting in one step.
pub fn entropy_report<F: Real>(
    c: &ConflictMatrix<F>,
    p: &AttractionMatrix<F>,
) -> Result<EntropyReport<F>> {
    if c.n() != p.n() {
        return Err(Error::invalid(format!(
            "conflict matrix is {0}x{0} but attraction matrix is {1}x{1}",
            c.n(),
            p.n()
        )));
    }
    let (g_neg, i_neg, h_neg) = neg_entropy(c);
    let (g_pos, i_pos, h_pos) = pos_entropy(p)?;
    let alpha = alpha(h_pos, h_neg)?;
    Ok(EntropyReport {
        g_neg,
        i_neg,
        h_neg,
        g_pos,
        i_pos,
        h_pos,
        alpha,
    })
}
