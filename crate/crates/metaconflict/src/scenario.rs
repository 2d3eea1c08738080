//! Synthetic clustering problems with known ground truth: each cluster backs
//! one frame atom, items carry simple support for their cluster's atom, and
//! attraction links exist only within clusters. Cross-cluster pairwise
//! conflict is then exactly `sharpness²` and within-cluster conflict is 0.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::evidence::{AttractionMatrix, EvidenceItem, Frame, MassFunction};
use crate::metalevel::Partition;
use crate::scalar::{in_unit, Real};

/// Generation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams {
    pub n: usize,
    pub k: usize,
    pub frame_size: usize,
    /// Mass each item puts on its cluster's atom; the rest sits on Θ.
    pub sharpness: f64,
    /// Attraction weight of every within-cluster pair.
    pub link_prob: f64,
}

/// A generated problem instance with its ground-truth partition.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<F: Real> {
    pub frame: Frame,
    pub items: Vec<EvidenceItem<F>>,
    pub attraction: AttractionMatrix<F>,
    pub truth: Partition,
    pub seed: u64,
    pub params: ScenarioParams,
}

/// Deterministically generates a scenario: items are dealt to `k` clusters
/// round-robin after a seeded shuffle.
pub fn generate<F: Real>(params: &ScenarioParams, seed: u64) -> Result<Scenario<F>> {
    let ScenarioParams {
        n,
        k,
        frame_size,
        sharpness,
        link_prob,
    } = *params;
    if n == 0 {
        return Err(Error::Empty("item set"));
    }
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "cluster count k = {k} must satisfy 1 <= k <= n = {n}"
        )));
    }
    if frame_size < k {
        return Err(Error::invalid(format!(
            "frame size {frame_size} must be at least the cluster count {k}"
        )));
    }
    for (what, v) in [("sharpness", sharpness), ("link probability", link_prob)] {
        if !in_unit(v) {
            return Err(Error::UnitRange { what, value: v });
        }
    }

    let frame = Frame::new((0..frame_size).map(|i| format!("a{i}")))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut raw_labels = vec![0usize; n];
    for (pos, &item) in order.iter().enumerate() {
        raw_labels[item] = pos % k;
    }
    let truth = Partition::canonicalize(&raw_labels)?;

    let s = F::from_f64(sharpness);
    let items = truth
        .labels()
        .iter()
        .enumerate()
        .map(|(i, &label)| {
            let atom = frame.focal(&[format!("a{label}")])?;
            let mut entries = vec![(atom, s)];
            if sharpness < 1.0 {
                entries.push((frame.theta(), F::one() - s));
            }
            Ok(EvidenceItem::new(
                format!("e{i}"),
                MassFunction::new(frame.clone(), entries)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let q = F::from_f64(link_prob);
    let mut links = Vec::new();
    if link_prob > 0.0 {
        for i in 0..n {
            for j in i + 1..n {
                if truth.labels()[i] == truth.labels()[j] {
                    links.push((i, j, q));
                }
            }
        }
    }
    let attraction = AttractionMatrix::from_triplets(n, links)?;

    Ok(Scenario {
        frame,
        items,
        attraction,
        truth,
        seed,
        params: *params,
    })
}
