//! Metaconflict evaluation and minimization over candidate partitions, by
//! exhaustive enumeration or seeded restart hill climbing, plus the older
//! subset-conflict objectives kept for cross-validation.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evidence::{AttractionMatrix, ConflictMatrix};
use crate::metalevel::{
    cluster_neg_mass, cluster_pos_mass, combine_partition_level, MetaBpa, Partition,
};
use crate::scalar::{in_unit, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMethod {
    Exact,
    Local,
}

/// Knobs for the partition search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig<F: Real> {
    pub method: SearchMethod,
    pub seed: u64,
    pub restarts: u32,
    pub max_items_exact: usize,
    /// Fixed weight; when set the entropy stage is skipped entirely.
    pub alpha_override: Option<F>,
}

impl<F: Real> Default for SearchConfig<F> {
    fn default() -> Self {
        SearchConfig {
            method: SearchMethod::Exact,
            seed: 0,
            restarts: 20,
            max_items_exact: 11,
            alpha_override: None,
        }
    }
}

/// One cluster's contribution to the partition-level masses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterTerm<F: Real> {
    pub members: Vec<usize>,
    pub neg_mass: F,
    pub pos_mass: F,
}

/// Full objective breakdown for one partition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McfReport<F: Real> {
    pub partition: Partition,
    pub alpha: F,
    pub pos_adp: F,
    pub neg_nadp: F,
    pub masses: MetaBpa<F>,
    pub mcf: F,
    pub per_cluster: Vec<ClusterTerm<F>>,
}

fn check_inputs<F: Real>(
    c: &ConflictMatrix<F>,
    p: &AttractionMatrix<F>,
    alpha: F,
) -> Result<usize> {
    if c.n() != p.n() {
        return Err(Error::invalid(format!(
            "conflict matrix is {0}x{0} but attraction matrix is {1}x{1}",
            c.n(),
            p.n()
        )));
    }
    if !in_unit(alpha) {
        return Err(Error::UnitRange {
            what: "alpha",
            value: alpha.into_f64(),
        });
    }
    Ok(c.n())
}

fn combine_products<F: Real>(pos_adp: F, neg_nadp: F, alpha: F) -> Result<(MetaBpa<F>, F)> {
    let pos = MetaBpa::attracting(pos_adp)?;
    let neg = MetaBpa::conflicting(neg_nadp)?;
    let masses = combine_partition_level(&pos, &neg)?;
    let mcf = alpha * (F::one() - masses.adp) + (F::one() - alpha) * masses.nadp;
    Ok((masses, mcf))
}

/// Evaluates the metaconflict objective
/// `alpha * (1 - m(AdP)) + (1 - alpha) * m(¬AdP)` for one partition and
/// returns the full breakdown.
pub fn evaluate_partition<F: Real>(
    c: &ConflictMatrix<F>,
    p: &AttractionMatrix<F>,
    alpha: F,
    part: &Partition,
) -> Result<McfReport<F>> {
    let n = check_inputs(c, p, alpha)?;
    if part.n() != n {
        return Err(Error::invalid(format!(
            "partition covers {} items but the matrices have {n}",
            part.n()
        )));
    }
    let mut per_cluster = Vec::new();
    let mut neg_survive = F::one();
    let mut pos_adp = F::one();
    for members in part.clusters() {
        let neg_mass = cluster_neg_mass(c, &members)?;
        let pos_mass = cluster_pos_mass(p, &members)?;
        neg_survive *= F::one() - neg_mass;
        pos_adp *= pos_mass;
        per_cluster.push(ClusterTerm {
            members,
            neg_mass,
            pos_mass,
        });
    }
    let neg_nadp = F::one() - neg_survive;
    let (masses, mcf) = combine_products(pos_adp, neg_nadp, alpha)?;
    Ok(McfReport {
        partition: part.clone(),
        alpha,
        pos_adp,
        neg_nadp,
        masses,
        mcf,
        per_cluster,
    })
}

/// Streams every set partition of `n` items exactly once, in lexicographic
/// restricted-growth order. The count is the Bell number B(n).
pub fn enumerate_partitions(n: usize, max_items: usize) -> Result<Partitions> {
    if n == 0 {
        return Err(Error::Empty("partition"));
    }
    if n > max_items {
        return Err(Error::SizeLimit {
            what: "exhaustive partition enumeration",
            limit: max_items,
            got: n,
        });
    }
    Ok(Partitions {
        next: Some(vec![0; n]),
    })
}

#[derive(Debug)]
pub struct Partitions {
    next: Option<Vec<usize>>,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.next.take()?;
        self.next = successor(&current);
        Some(Partition::from_canonical_unchecked(current))
    }
}

fn successor(a: &[usize]) -> Option<Vec<usize>> {
    let n = a.len();
    // prefix_max[i] = max label among a[0..i]
    let mut prefix_max = vec![0usize; n];
    for i in 1..n {
        prefix_max[i] = prefix_max[i - 1].max(a[i - 1]);
    }
    for i in (1..n).rev() {
        if a[i] <= prefix_max[i] {
            let mut next = a.to_vec();
            next[i] += 1;
            for slot in next.iter_mut().skip(i + 1) {
                *slot = 0;
            }
            return Some(next);
        }
    }
    None
}

/// Memoizes per-cluster masses across candidate partitions; clusters are
/// keyed by their member bit mask.
struct ClusterCache<'a, F: Real> {
    c: &'a ConflictMatrix<F>,
    p: &'a AttractionMatrix<F>,
    neg: HashMap<u64, F>,
    pos: HashMap<u64, F>,
    members_buf: Vec<Vec<usize>>,
}

impl<'a, F: Real> ClusterCache<'a, F> {
    fn new(c: &'a ConflictMatrix<F>, p: &'a AttractionMatrix<F>) -> Self {
        ClusterCache {
            c,
            p,
            neg: HashMap::new(),
            pos: HashMap::new(),
            members_buf: Vec::new(),
        }
    }

    /// Objective value for a canonical label vector.
    fn mcf(&mut self, labels: &[usize], alpha: F) -> Result<F> {
        let r = labels.iter().copied().max().unwrap_or(0) + 1;
        for v in self.members_buf.iter_mut() {
            v.clear();
        }
        if self.members_buf.len() < r {
            self.members_buf.resize(r, Vec::new());
        }
        let mut masks = vec![0u64; r];
        for (i, &l) in labels.iter().enumerate() {
            self.members_buf[l].push(i);
            masks[l] |= 1u64 << i;
        }
        let mut neg_survive = F::one();
        let mut pos_adp = F::one();
        for (l, &mask) in masks.iter().enumerate() {
            let members = &self.members_buf[l];
            let neg = match self.neg.get(&mask) {
                Some(&v) => v,
                None => {
                    let v = cluster_neg_mass(self.c, members)?;
                    self.neg.insert(mask, v);
                    v
                }
            };
            let pos = match self.pos.get(&mask) {
                Some(&v) => v,
                None => {
                    let v = cluster_pos_mass(self.p, members)?;
                    self.pos.insert(mask, v);
                    v
                }
            };
            neg_survive *= F::one() - neg;
            pos_adp *= pos;
        }
        let neg_nadp = F::one() - neg_survive;
        let (_, mcf) = combine_products(pos_adp, neg_nadp, alpha)?;
        Ok(mcf)
    }
}

/// Minimizes the metaconflict objective over every partition. Ties are
/// broken by the first partition in canonical enumeration order.
pub fn exact_search<F: Real>(
    c: &ConflictMatrix<F>,
    p: &AttractionMatrix<F>,
    alpha: F,
    cfg: &SearchConfig<F>,
) -> Result<McfReport<F>> {
    let n = check_inputs(c, p, alpha)?;
    if cfg.max_items_exact == 0 {
        return Err(Error::invalid("max_items_exact must be at least 1"));
    }
    if n > cfg.max_items_exact {
        return Err(Error::SizeLimit {
            what: "exact-search item count (use the local method beyond the cap)",
            limit: cfg.max_items_exact,
            got: n,
        });
    }
    if n > 64 {
        return Err(Error::SizeLimit {
            what: "exact-search item count",
            limit: 64,
            got: n,
        });
    }
    let mut cache = ClusterCache::new(c, p);
    let mut best: Option<(F, Partition)> = None;
    for part in enumerate_partitions(n, cfg.max_items_exact)? {
        let mcf = cache.mcf(part.labels(), alpha)?;
        let better = match &best {
            None => true,
            Some((best_mcf, _)) => mcf < *best_mcf,
        };
        if better {
            best = Some((mcf, part));
        }
    }
    let (_, winner) = best.expect("enumeration yields at least one partition");
    evaluate_partition(c, p, alpha, &winner)
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn restart_seed(seed: u64, restart: u32) -> u64 {
    splitmix64(seed ^ splitmix64(restart as u64))
}

fn random_rgs(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut labels = Vec::with_capacity(n);
    let mut max_label = 0usize;
    for i in 0..n {
        let cap = if i == 0 { 0 } else { max_label + 1 };
        let l = rng.gen_range(0..=cap);
        max_label = max_label.max(l);
        labels.push(l);
    }
    labels
}

/// Seeded steepest-descent hill climbing with random restarts.
///
/// Each restart starts from a random partition and repeatedly applies the
/// best single-item relocation (to another existing cluster or to a fresh
/// singleton) while the objective strictly decreases; the best local optimum
/// across restarts wins. Deterministic for a fixed `(seed, restarts)`.
pub fn local_search<F: Real>(
    c: &ConflictMatrix<F>,
    p: &AttractionMatrix<F>,
    alpha: F,
    cfg: &SearchConfig<F>,
) -> Result<McfReport<F>> {
    let n = check_inputs(c, p, alpha)?;
    if cfg.restarts == 0 {
        return Err(Error::invalid("restarts must be at least 1"));
    }
    if n > 64 {
        return Err(Error::SizeLimit {
            what: "local-search item count",
            limit: 64,
            got: n,
        });
    }
    let mut cache = ClusterCache::new(c, p);
    let mut best: Option<(F, Vec<usize>)> = None;
    for restart in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(cfg.seed, restart));
        let mut current = random_rgs(n, &mut rng);
        let mut current_mcf = cache.mcf(&current, alpha)?;
        loop {
            let mut best_move: Option<(F, Vec<usize>)> = None;
            let r = current.iter().copied().max().unwrap_or(0) + 1;
            for i in 0..n {
                let original = current[i];
                let cluster_size = current.iter().filter(|&&l| l == original).count();
                for target in 0..=r {
                    if target == original || (target == r && cluster_size == 1) {
                        continue;
                    }
                    let mut candidate = current.clone();
                    candidate[i] = target;
                    let canonical = Partition::canonicalize(&candidate)?;
                    let mcf = cache.mcf(canonical.labels(), alpha)?;
                    let improves = match &best_move {
                        None => true,
                        Some((best_mcf, _)) => mcf < *best_mcf,
                    };
                    if improves {
                        best_move = Some((mcf, canonical.labels().to_vec()));
                    }
                }
            }
            match best_move {
                Some((mcf, labels)) if current_mcf - mcf > F::IMPROVE_EPS => {
                    current = labels;
                    current_mcf = mcf;
                }
                _ => break,
            }
        }
        let better = match &best {
            None => true,
            Some((best_mcf, _)) => current_mcf < *best_mcf,
        };
        if better {
            best = Some((current_mcf, current));
        }
    }
    let (_, labels) = best.expect("at least one restart runs");
    evaluate_partition(c, p, alpha, &Partition::from_canonical_unchecked(labels))
}

/// Dispatches on `cfg.method`; a configured `alpha_override` wins over the
/// passed weight.
pub fn search<F: Real>(
    c: &ConflictMatrix<F>,
    p: &AttractionMatrix<F>,
    alpha: F,
    cfg: &SearchConfig<F>,
) -> Result<McfReport<F>> {
    let alpha = cfg.alpha_override.unwrap_or(alpha);
    match cfg.method {
        SearchMethod::Exact => exact_search(c, p, alpha, cfg),
        SearchMethod::Local => local_search(c, p, alpha, cfg),
    }
}

/// The original whole-subset metaconflict: `1 - ∏ (1 - c_i)` over per-subset
/// Dempster conflicts. An empty list is a partition with no conflicts, 0.
pub fn legacy_mcf<F: Real>(subset_conflicts: &[F]) -> Result<F> {
    let mut survive = F::one();
    for &ci in subset_conflicts {
        if !in_unit(ci) {
            return Err(Error::UnitRange {
                what: "subset conflict",
                value: ci.into_f64(),
            });
        }
        survive *= F::one() - ci;
    }
    Ok(F::one() - survive)
}

/// Sum of logarithmized pairwise conflicts, `Σ -ln(1 - c_kl)` over
/// intra-cluster pairs. A pair with full conflict yields the +infinity
/// sentinel.
pub fn logsum_objective<F: Real>(c: &ConflictMatrix<F>, part: &Partition) -> Result<F> {
    if c.n() != part.n() {
        return Err(Error::invalid(format!(
            "partition covers {} items but the matrix has {}",
            part.n(),
            c.n()
        )));
    }
    let mut total = F::zero();
    for cluster in part.clusters() {
        for (a, &i) in cluster.iter().enumerate() {
            for &j in &cluster[a + 1..] {
                total += -(F::one() - c.get(i, j)).ln();
            }
        }
    }
    Ok(total)
}
