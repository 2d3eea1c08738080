//! Metalevel evidence over the frame {AdP, ¬AdP}: conflicting evidence built
//! from pairwise Dempster conflicts, attracting evidence supplied externally,
//! combined per cluster and per partition.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evidence::{AttractionMatrix, ConflictMatrix};
use crate::scalar::{in_unit, Real};
use crate::subsets::absent_edge_products;

/// Largest cluster the attracting coverage probability is computed for;
/// the inclusion–exclusion sum has `2^|cluster|` terms.
pub const MAX_COVERAGE_CLUSTER: usize = 24;

/// A set partition of `n` items in canonical restricted-growth form:
/// item 0 has label 0 and each new label is the smallest unused integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    assignment: Vec<usize>,
}

impl Partition {
    /// Accepts only canonical restricted-growth labels.
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        if assignment.is_empty() {
            return Err(Error::Empty("partition"));
        }
        let mut max_label = 0usize;
        for (i, &l) in assignment.iter().enumerate() {
            let cap = if i == 0 { 0 } else { max_label + 1 };
            if l > cap {
                return Err(Error::invalid(format!(
                    "partition labels are not in canonical restricted-growth form \
                     (item {i} has label {l}, expected at most {cap})"
                )));
            }
            max_label = max_label.max(l);
        }
        Ok(Partition { assignment })
    }

    /// Relabels arbitrary cluster labels into canonical form by first
    /// occurrence.
    pub fn canonicalize(labels: &[usize]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Empty("partition"));
        }
        let mut seen: Vec<usize> = Vec::new();
        let assignment = labels
            .iter()
            .map(|&l| match seen.iter().position(|&s| s == l) {
                Some(idx) => idx,
                None => {
                    seen.push(l);
                    seen.len() - 1
                }
            })
            .collect();
        Ok(Partition { assignment })
    }

    pub(crate) fn from_canonical_unchecked(assignment: Vec<usize>) -> Self {
        debug_assert!(Partition::new(assignment.clone()).is_ok());
        Partition { assignment }
    }

    /// Every item in its own cluster.
    pub fn singletons(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty("partition"));
        }
        Ok(Partition {
            assignment: (0..n).collect(),
        })
    }

    /// All items in one cluster.
    pub fn single_cluster(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty("partition"));
        }
        Ok(Partition {
            assignment: vec![0; n],
        })
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.assignment
    }

    pub fn cluster_count(&self) -> usize {
        self.assignment.iter().copied().max().unwrap_or(0) + 1
    }

    /// Clusters in label order, members ascending.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.cluster_count()];
        for (i, &l) in self.assignment.iter().enumerate() {
            groups[l].push(i);
        }
        groups
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.assignment.serialize(serializer)
    }
}

/// Mass assignment over the metalevel frame {AdP, ¬AdP} plus Θ and the
/// empty set (the conflict slot of the final combination).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetaBpa<F: Real> {
    pub adp: F,
    pub nadp: F,
    pub theta: F,
    pub empty: F,
}

impl<F: Real> MetaBpa<F> {
    /// Simple support for AdP with weight `m`; the rest sits on Θ.
    pub fn attracting(m: F) -> Result<Self> {
        if !in_unit(m) {
            return Err(Error::UnitRange {
                what: "attracting mass",
                value: m.into_f64(),
            });
        }
        Ok(MetaBpa {
            adp: m,
            nadp: F::zero(),
            theta: F::one() - m,
            empty: F::zero(),
        })
    }

    /// Simple support for ¬AdP with weight `m`; the rest sits on Θ.
    pub fn conflicting(m: F) -> Result<Self> {
        if !in_unit(m) {
            return Err(Error::UnitRange {
                what: "conflicting mass",
                value: m.into_f64(),
            });
        }
        Ok(MetaBpa {
            adp: F::zero(),
            nadp: m,
            theta: F::one() - m,
            empty: F::zero(),
        })
    }

    pub fn total(&self) -> F {
        self.adp + self.nadp + self.theta + self.empty
    }
}

/// Dempster combination of internal and external conflicting evidence for
/// one pair: both are simple support functions for the same proposition, so
/// the combined weight is `1 - (1 - c_int)(1 - c_ext)`.
pub fn meta_neg<F: Real>(c_internal: F, c_external: F) -> Result<F> {
    for (what, v) in [
        ("internal conflict", c_internal),
        ("external conflict", c_external),
    ] {
        if !in_unit(v) {
            return Err(Error::UnitRange {
                what,
                value: v.into_f64(),
            });
        }
    }
    Ok(F::one() - (F::one() - c_internal) * (F::one() - c_external))
}

/// Merges external conflicting evidence into a conflict matrix entrywise
/// via [`meta_neg`]; the downstream pipeline sees only the merged matrix.
pub fn merge_external_conflict<F: Real>(
    base: &ConflictMatrix<F>,
    external: &ConflictMatrix<F>,
) -> Result<ConflictMatrix<F>> {
    let n = base.n();
    if external.n() != n {
        return Err(Error::invalid(format!(
            "external conflict matrix is {}x{}, expected {n}x{n}",
            external.n(),
            external.n()
        )));
    }
    let mut rows = vec![vec![F::zero(); n]; n];
    #[allow(clippy::needless_range_loop)] // symmetric fill needs both indices
    for i in 0..n {
        for j in i + 1..n {
            let merged = meta_neg(base.get(i, j), external.get(i, j))?;
            rows[i][j] = merged;
            rows[j][i] = merged;
        }
    }
    ConflictMatrix::from_rows(rows)
}

fn check_cluster(n: usize, cluster: &[usize]) -> Result<()> {
    let mut seen = vec![false; n];
    for &i in cluster {
        if i >= n {
            return Err(Error::IndexRange {
                what: "item",
                index: i,
                n,
            });
        }
        if seen[i] {
            return Err(Error::Duplicate {
                what: "cluster member",
                which: i.to_string(),
            });
        }
        seen[i] = true;
    }
    Ok(())
}

/// Mass supporting ¬AdP for one cluster: `1 - ∏ (1 - c_ij)` over
/// intra-cluster pairs. Size ≤ 1 gives the empty product, hence 0.
pub fn cluster_neg_mass<F: Real>(c: &ConflictMatrix<F>, cluster: &[usize]) -> Result<F> {
    check_cluster(c.n(), cluster)?;
    let mut survive = F::one();
    for (a, &i) in cluster.iter().enumerate() {
        for &j in &cluster[a + 1..] {
            survive *= F::one() - c.get(i, j);
        }
    }
    Ok(F::one() - survive)
}

/// Mass supporting AdP for one cluster: the probability that a random edge
/// set — each intra-cluster pair present independently with its attraction
/// weight — touches every member. Computed by inclusion–exclusion over the
/// member subsets; size ≤ 1 cannot be covered and gives 0.
pub fn cluster_pos_mass<F: Real>(p: &AttractionMatrix<F>, cluster: &[usize]) -> Result<F> {
    check_cluster(p.n(), cluster)?;
    let m = cluster.len();
    if m <= 1 {
        return Ok(F::zero());
    }
    if m > MAX_COVERAGE_CLUSTER {
        return Err(Error::SizeLimit {
            what: "attracting-coverage cluster size",
            limit: MAX_COVERAGE_CLUSTER,
            got: m,
        });
    }
    let g = absent_edge_products(cluster, |i, j| p.get(i, j));
    let mut total = F::zero();
    for (w, &gw) in g.iter().enumerate() {
        if (w.count_ones() & 1) == 0 {
            total += gw;
        } else {
            total -= gw;
        }
    }
    Ok(total.max(F::zero()).min(F::one()))
}

fn check_partition_size(matrix_n: usize, part: &Partition) -> Result<()> {
    if matrix_n != part.n() {
        return Err(Error::invalid(format!(
            "partition covers {} items but the matrix has {matrix_n}",
            part.n()
        )));
    }
    Ok(())
}

/// Partition-level conflicting mass: `1 - ∏_a (1 - cluster_neg_mass(a))`.
pub fn partition_neg<F: Real>(c: &ConflictMatrix<F>, part: &Partition) -> Result<F> {
    check_partition_size(c.n(), part)?;
    let mut survive = F::one();
    for cluster in part.clusters() {
        survive *= F::one() - cluster_neg_mass(c, &cluster)?;
    }
    Ok(F::one() - survive)
}

/// Partition-level attracting mass: `∏_a cluster_pos_mass(a)`. Any cluster
/// of size ≤ 1 zeroes the product.
pub fn partition_pos<F: Real>(p: &AttractionMatrix<F>, part: &Partition) -> Result<F> {
    check_partition_size(p.n(), part)?;
    let mut prod = F::one();
    for cluster in part.clusters() {
        prod *= cluster_pos_mass(p, &cluster)?;
    }
    Ok(prod)
}

/// Dempster combination of the partition-level attracting and conflicting
/// evidence. The conflict (AdP ∧ ¬AdP) is kept on the empty set; no
/// normalization is applied.
pub fn combine_partition_level<F: Real>(
    pos: &MetaBpa<F>,
    neg: &MetaBpa<F>,
) -> Result<MetaBpa<F>> {
    if pos.nadp != F::zero() || pos.empty != F::zero() {
        return Err(Error::invalid(
            "attracting operand must carry mass only on AdP and Θ",
        ));
    }
    if neg.adp != F::zero() || neg.empty != F::zero() {
        return Err(Error::invalid(
            "conflicting operand must carry mass only on ¬AdP and Θ",
        ));
    }
    Ok(MetaBpa {
        adp: pos.adp * neg.theta,
        nadp: pos.theta * neg.nadp,
        theta: pos.theta * neg.theta,
        empty: pos.adp * neg.nadp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conflict_from(rows: Vec<Vec<f64>>) -> ConflictMatrix<f64> {
        ConflictMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn canonical_partition_validation() {
        assert!(Partition::new(vec![0, 0, 1, 2]).is_ok());
        assert!(Partition::new(vec![1, 0]).is_err());
        assert!(Partition::new(vec![0, 2]).is_err()); // gap
        assert!(Partition::new(vec![]).is_err());
        let p = Partition::canonicalize(&[7, 7, 3, 7]).unwrap();
        assert_eq!(p.labels(), &[0, 0, 1, 0]);
        assert_eq!(p.cluster_count(), 2);
        assert_eq!(p.clusters(), vec![vec![0, 1, 3], vec![2]]);
    }

    #[test]
    fn meta_neg_examples() {
        assert_eq!(meta_neg(0.4f64, 0.0).unwrap(), 0.4);
        assert_eq!(meta_neg(1.0f64, 0.3).unwrap(), 1.0);
        assert!((meta_neg(0.5f64, 0.5).unwrap() - 0.75).abs() < 1e-15);
        assert!(meta_neg(1.2f64, 0.0).is_err());
        assert!(meta_neg(0.5f64, -0.1).is_err());
    }

    #[test]
    fn cluster_neg_examples() {
        let c = conflict_from(vec![
            vec![0.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.5, 0.5],
            vec![0.0, 0.5, 0.0, 0.5],
            vec![0.0, 0.5, 0.5, 0.0],
        ]);
        assert_eq!(cluster_neg_mass(&c, &[2]).unwrap(), 0.0);
        assert!((cluster_neg_mass(&c, &[1, 2, 3]).unwrap() - 0.875).abs() < 1e-12);
        let c2 = conflict_from(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(cluster_neg_mass(&c2, &[0, 1]).unwrap(), 1.0);
        assert!(cluster_neg_mass(&c2, &[0, 5]).is_err());
        assert!(cluster_neg_mass(&c2, &[0, 0]).is_err());
    }

    // Oracle: enumerate every subset of intra-cluster edges and sum the
    // probability of those whose union of endpoints covers the cluster.
    fn coverage_by_enumeration(p: &AttractionMatrix<f64>, cluster: &[usize]) -> f64 {
        let m = cluster.len();
        let mut edges = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                edges.push((a, b, p.get(cluster[a], cluster[b])));
            }
        }
        let full = (1usize << m) - 1;
        let mut total = 0.0;
        for pick in 0..(1usize << edges.len()) {
            let mut prob = 1.0;
            let mut covered = 0usize;
            for (e, &(a, b, w)) in edges.iter().enumerate() {
                if (pick >> e) & 1 == 1 {
                    prob *= w;
                    covered |= (1 << a) | (1 << b);
                } else {
                    prob *= 1.0 - w;
                }
            }
            if covered == full {
                total += prob;
            }
        }
        total
    }

    #[test]
    fn cluster_pos_examples() {
        let p = AttractionMatrix::from_triplets(3, [(1, 2, 0.7f64)]).unwrap();
        assert!((cluster_pos_mass(&p, &[1, 2]).unwrap() - 0.7).abs() < 1e-12);
        assert_eq!(cluster_pos_mass(&p, &[0]).unwrap(), 0.0);

        let half = AttractionMatrix::from_rows(vec![
            vec![0.0, 0.5, 0.5],
            vec![0.5, 0.0, 0.5],
            vec![0.5, 0.5, 0.0],
        ])
        .unwrap();
        let oracle = coverage_by_enumeration(&half, &[0, 1, 2]);
        assert!((oracle - 0.5).abs() < 1e-12);
        assert!((cluster_pos_mass(&half, &[0, 1, 2]).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn cluster_pos_size_cap() {
        let n = MAX_COVERAGE_CLUSTER + 1;
        let p = AttractionMatrix::<f64>::zeros(n).unwrap();
        let cluster: Vec<usize> = (0..n).collect();
        let err = cluster_pos_mass(&p, &cluster).unwrap_err();
        assert!(err.is_size_limit());
    }

    #[test]
    fn partition_level_masses() {
        let c = conflict_from(vec![
            vec![0.0, 0.4, 0.0],
            vec![0.4, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ]);
        let singles = Partition::singletons(3).unwrap();
        assert_eq!(partition_neg(&c, &singles).unwrap(), 0.0);
        let part = Partition::new(vec![0, 0, 1]).unwrap();
        assert!((partition_neg(&c, &part).unwrap() - 0.4).abs() < 1e-12);

        // two clusters of neg mass 0.5 each → 1 - 0.25
        let c2 = conflict_from(vec![
            vec![0.0, 0.5, 0.0, 0.0],
            vec![0.5, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.5],
            vec![0.0, 0.0, 0.5, 0.0],
        ]);
        let pairs = Partition::new(vec![0, 0, 1, 1]).unwrap();
        assert!((partition_neg(&c2, &pairs).unwrap() - 0.75).abs() < 1e-12);

        let p = AttractionMatrix::from_triplets(4, [(0, 1, 0.5f64), (2, 3, 0.5)]).unwrap();
        assert!((partition_pos(&p, &pairs).unwrap() - 0.25).abs() < 1e-12);
        let with_singleton = Partition::new(vec![0, 0, 1, 2]).unwrap();
        assert_eq!(partition_pos(&p, &with_singleton).unwrap(), 0.0);

        let half = AttractionMatrix::from_rows(vec![
            vec![0.0f64, 0.5, 0.5],
            vec![0.5, 0.0, 0.5],
            vec![0.5, 0.5, 0.0],
        ])
        .unwrap();
        let whole = Partition::single_cluster(3).unwrap();
        assert!((partition_pos(&half, &whole).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn combine_partition_level_examples() {
        let pos = MetaBpa::<f64>::attracting(0.6).unwrap();
        let neg = MetaBpa::<f64>::conflicting(0.5).unwrap();
        let m = combine_partition_level(&pos, &neg).unwrap();
        assert!((m.adp - 0.3).abs() < 1e-15);
        assert!((m.nadp - 0.2).abs() < 1e-15);
        assert!((m.theta - 0.2).abs() < 1e-15);
        assert!((m.empty - 0.3).abs() < 1e-15);
        assert!((m.total() - 1.0).abs() < 1e-12);

        let vac = MetaBpa::<f64>::attracting(0.0).unwrap();
        let m = combine_partition_level(&vac, &neg).unwrap();
        assert_eq!(m.nadp, neg.nadp);
        assert_eq!(m.theta, neg.theta);

        let vac_neg = MetaBpa::<f64>::conflicting(0.0).unwrap();
        let m = combine_partition_level(&pos, &vac_neg).unwrap();
        assert_eq!(m.adp, pos.adp);
        assert_eq!(m.theta, pos.theta);

        // precondition violations
        let bad = MetaBpa {
            adp: 0.1,
            nadp: 0.1,
            theta: 0.8,
            empty: 0.0,
        };
        assert!(combine_partition_level(&bad, &neg).is_err());
        assert!(combine_partition_level(&pos, &bad).is_err());
    }
}
