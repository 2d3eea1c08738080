#![allow(clippy::needless_range_loop)] // symmetric matrix fills

//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Every tolerance, count, and runtime cap is pinned here; oracles are
//! brute-force enumerations independent of the production code paths.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use metaconflict::evidence::{AttractionMatrix, ConflictMatrix};
use metaconflict::metalevel::{cluster_pos_mass, partition_neg, Partition};
use metaconflict::scenario::{generate, ScenarioParams};
use metaconflict::search::{
    enumerate_partitions, evaluate_partition, exact_search, local_search, logsum_objective,
    SearchConfig,
};
use metaconflict::weighting::{entropy_report, neg_entropy, pos_entropy};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_conflict(n: usize, rng: &mut ChaCha8Rng) -> ConflictMatrix<f64> {
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(0.0..1.0);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    ConflictMatrix::from_rows(rows).unwrap()
}

fn random_attraction(n: usize, rng: &mut ChaCha8Rng) -> AttractionMatrix<f64> {
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(0.0..1.0);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    AttractionMatrix::from_rows(rows).unwrap()
}

fn random_partition(n: usize, rng: &mut ChaCha8Rng) -> Partition {
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    Partition::canonicalize(&labels).unwrap()
}

fn report(number: u8, name: &str, detail: &str, elapsed: Duration) {
    println!("[PASS] criterion {number:2} ({name}): {detail} in {elapsed:.2?}");
}

// ---------------------------------------------------------------------------
// 1. Coverage-sum oracle: inclusion–exclusion vs brute force, 1e-12, < 5 s.
// ---------------------------------------------------------------------------

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
fn acceptance_01_coverage_sum_oracle() {
    let start = Instant::now();
    let mut rng = rng(0xacce_0001);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let size = rng.gen_range(2..=5usize);
        let p = random_attraction(size, &mut rng);
        let cluster: Vec<usize> = (0..size).collect();
        let got = cluster_pos_mass(&p, &cluster).unwrap();
        let oracle = coverage_by_enumeration(&p, &cluster);
        worst = worst.max((got - oracle).abs());
    }
    let elapsed = start.elapsed();
    assert!(worst < 1e-12, "worst coverage deviation {worst}");
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    report(1, "coverage-sum oracle", &format!("200 clusters, worst |Δ| = {worst:.2e}"), elapsed);
}

// ---------------------------------------------------------------------------
// 2. Entropy oracles: closed forms vs focal-element enumeration, 1e-9, < 10 s.
// ---------------------------------------------------------------------------

fn neg_by_enumeration(c: &ConflictMatrix<f64>) -> (f64, f64) {
    let n = c.n();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push(c.get(i, j));
        }
    }
    let mut g = 0.0;
    let mut i_val = 0.0;
    for pick in 0..(1usize << edges.len()) {
        let mut mass = 1.0;
        for (e, &ce) in edges.iter().enumerate() {
            mass *= if (pick >> e) & 1 == 1 { ce } else { 1.0 - ce };
        }
        if mass > 0.0 {
            g += -mass * mass.log2();
        }
        if pick.count_ones() >= 1 {
            i_val += mass * (pick.count_ones() as f64).log2();
        }
    }
    (g, i_val)
}

fn pos_by_enumeration(p: &AttractionMatrix<f64>) -> (f64, f64) {
    let n = p.n();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, p.get(i, j)));
        }
    }
    let mut by_coverage = vec![0.0f64; 1 << n];
    for pick in 0..(1usize << edges.len()) {
        let mut mass = 1.0;
        let mut covered = 0usize;
        for (e, &(i, j, pe)) in edges.iter().enumerate() {
            if (pick >> e) & 1 == 1 {
                mass *= pe;
                covered |= (1 << i) | (1 << j);
            } else {
                mass *= 1.0 - pe;
            }
        }
        by_coverage[covered] += mass;
    }
    let mut g = 0.0;
    let mut i_val = 0.0;
    for (cov, &mass) in by_coverage.iter().enumerate() {
        let k = cov.count_ones() as usize;
        if k <= 1 || mass <= 0.0 {
            continue;
        }
        g += -mass * mass.log2();
        i_val += mass * ((n - k + 1) as f64).log2();
    }
    (g, i_val)
}

#[test]
fn acceptance_02_entropy_oracles() {
    let start = Instant::now();
    let mut rng = rng(0xacce_0002);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=5usize);
        let c = random_conflict(n, &mut rng);
        let (g, i, _) = neg_entropy(&c);
        let (og, oi) = neg_by_enumeration(&c);
        worst = worst.max((g - og).abs()).max((i - oi).abs());

        let p = random_attraction(n, &mut rng);
        let (g, i, _) = pos_entropy(&p).unwrap();
        let (og, oi) = pos_by_enumeration(&p);
        worst = worst.max((g - og).abs()).max((i - oi).abs());
    }
    let elapsed = start.elapsed();
    assert!(worst < 1e-9, "worst entropy deviation {worst}");
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    report(2, "entropy oracles", &format!("100 instances, worst |Δ| = {worst:.2e}"), elapsed);
}

// ---------------------------------------------------------------------------
// 3. Weighting boundary conditions: exact 0 and exact 1.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_03_alpha_boundaries() {
    let start = Instant::now();
    let mut rng = rng(0xacce_0003);
    for _ in 0..50 {
        let n = rng.gen_range(2..=8usize);
        let c = random_conflict(n, &mut rng);
        let p = AttractionMatrix::<f64>::zeros(n).unwrap();
        assert_eq!(entropy_report(&c, &p).unwrap().alpha, 0.0, "all p = 0 must give alpha = 0");
    }
    for _ in 0..50 {
        let n = rng.gen_range(2..=8usize);
        let c = ConflictMatrix::<f64>::zeros(n).unwrap();
        let p = random_attraction(n, &mut rng);
        assert_eq!(entropy_report(&c, &p).unwrap().alpha, 1.0, "all c = 0 must give alpha = 1");
    }
    let elapsed = start.elapsed();
    report(3, "alpha boundaries", "50 instances per boundary, exact equality", elapsed);
}

// ---------------------------------------------------------------------------
// 4. Reduction to conflict-only clustering at alpha = 0, n = 7, < 30 s.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_04_conflict_only_reduction() {
    let start = Instant::now();
    let mut rng = rng(0xacce_0004);
    for _ in 0..100 {
        let n = 7;
        let c = random_conflict(n, &mut rng);
        let p = AttractionMatrix::<f64>::zeros(n).unwrap();
        let alpha = entropy_report(&c, &p).unwrap().alpha;
        assert_eq!(alpha, 0.0);

        let mut best_mcf: Option<(f64, Partition)> = None;
        let mut best_neg: Option<(f64, Partition)> = None;
        let mut count = 0usize;
        for part in enumerate_partitions(n, 11).unwrap() {
            count += 1;
            let mcf = evaluate_partition(&c, &p, alpha, &part).unwrap().mcf;
            if best_mcf.as_ref().is_none_or(|(v, _)| mcf < *v) {
                best_mcf = Some((mcf, part.clone()));
            }
            let neg = partition_neg(&c, &part).unwrap();
            if best_neg.as_ref().is_none_or(|(v, _)| neg < *v) {
                best_neg = Some((neg, part));
            }
        }
        assert_eq!(count, 877, "B(7)");
        assert_eq!(best_mcf.unwrap().1, best_neg.unwrap().1);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    report(4, "conflict-only reduction", "100 instances, argmins identical over B(7)", elapsed);
}

// ---------------------------------------------------------------------------
// 5. Log-sum objective ranks partitions exactly like 1 - ∏(1 - c).
// ---------------------------------------------------------------------------

#[test]
fn acceptance_05_logsum_rank_equivalence() {
    let start = Instant::now();
    let mut rng = rng(0xacce_0005);
    let mut pairs_checked = 0usize;
    for _ in 0..50 {
        let n = rng.gen_range(2..=6usize);
        let c = random_conflict(n, &mut rng);
        let parts: Vec<Partition> = enumerate_partitions(n, 11).unwrap().collect();
        let logsums: Vec<f64> = parts.iter().map(|p| logsum_objective(&c, p).unwrap()).collect();
        let masses: Vec<f64> = parts
            .iter()
            .map(|part| {
                let mut survive = 1.0;
                for cluster in part.clusters() {
                    for (a, &i) in cluster.iter().enumerate() {
                        for &j in &cluster[a + 1..] {
                            survive *= 1.0 - c.get(i, j);
                        }
                    }
                }
                1.0 - survive
            })
            .collect();
        for a in 0..parts.len() {
            for b in a + 1..parts.len() {
                let by_logsum = logsums[a].partial_cmp(&logsums[b]).unwrap();
                let by_mass = masses[a].partial_cmp(&masses[b]).unwrap();
                assert_eq!(by_logsum, by_mass, "rank disagreement");
                pairs_checked += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    report(5, "log-sum rank equivalence", &format!("{pairs_checked} partition pairs"), elapsed);
}

// ---------------------------------------------------------------------------
// 6. Dempster bookkeeping across 10,000 random evaluations.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_06_dempster_bookkeeping() {
    let start = Instant::now();
    let mut rng = rng(0xacce_0006);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=8usize);
        let c = random_conflict(n, &mut rng);
        let p = random_attraction(n, &mut rng);
        let part = random_partition(n, &mut rng);
        let alpha: f64 = rng.gen_range(0.0..=1.0);
        let r = evaluate_partition(&c, &p, alpha, &part).unwrap();
        let total = r.masses.adp + r.masses.nadp + r.masses.theta + r.masses.empty;
        assert!((total - 1.0).abs() < 1e-9, "mass total {total}");
        assert!(r.mcf >= 0.0 && r.mcf <= 1.0, "mcf {}", r.mcf);
    }
    let elapsed = start.elapsed();
    report(6, "Dempster bookkeeping", "10000 evaluations, masses sum to 1 and Mcf in [0,1]", elapsed);
}

// ---------------------------------------------------------------------------
// 7. Ground-truth recovery on generated instances, ≥ 95/100, < 60 s.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_07_ground_truth_recovery() {
    let start = Instant::now();
    let params = ScenarioParams {
        n: 8,
        k: 2,
        frame_size: 2,
        sharpness: 0.9,
        link_prob: 0.8,
    };
    let cfg = SearchConfig::default();
    let mut recovered = 0usize;
    for seed in 0..100u64 {
        let s = generate::<f64>(&params, seed).unwrap();
        let c = metaconflict::evidence::conflict_matrix(&s.items).unwrap();
        let alpha = entropy_report(&c, &s.attraction).unwrap().alpha;
        let winner = exact_search(&c, &s.attraction, alpha, &cfg).unwrap();
        if winner.partition == s.truth {
            recovered += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(recovered >= 95, "recovered only {recovered}/100");
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    report(7, "ground-truth recovery", &format!("{recovered}/100 exact recoveries"), elapsed);
}

// ---------------------------------------------------------------------------
// 8. Local-search quality on random n = 8 instances, ≥ 90/100 optima.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_08_local_search_quality() {
    let start = Instant::now();
    let mut rng = rng(0xacce_0008);
    let mut hits = 0usize;
    for round in 0..100u64 {
        let n = 8;
        let c = random_conflict(n, &mut rng);
        let p = random_attraction(n, &mut rng);
        let alpha = entropy_report(&c, &p).unwrap().alpha;
        let cfg = SearchConfig {
            seed: round,
            restarts: 20,
            ..SearchConfig::default()
        };
        let exact = exact_search(&c, &p, alpha, &cfg).unwrap();
        let local = local_search(&c, &p, alpha, &cfg).unwrap();
        assert!(local.mcf >= exact.mcf, "local search can never beat the optimum");
        if local.mcf - exact.mcf <= 1e-9 {
            hits += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(hits >= 90, "local search matched the optimum only {hits}/100 times");
    report(8, "local-search quality", &format!("{hits}/100 optima with 20 restarts"), elapsed);
}

// ---------------------------------------------------------------------------
// 9. CLI determinism: identical commands yield byte-identical reports.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_09_cli_determinism() {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_metaconflict");
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("block.json");
    std::fs::write(
        &instance,
        r#"{
            "conflict": [
                [0.0, 0.05, 0.9, 0.9],
                [0.05, 0.0, 0.9, 0.9],
                [0.9, 0.9, 0.0, 0.05],
                [0.9, 0.9, 0.05, 0.0]
            ],
            "attraction": [
                {"i": 0, "j": 1, "p": 0.8},
                {"i": 2, "j": 3, "p": 0.8}
            ],
            "partition": [0, 0, 1, 1]
        }"#,
    )
    .unwrap();
    let inst = instance.to_str().unwrap();
    let gen_a = dir.path().join("a.json");
    let gen_b = dir.path().join("b.json");
    let commands: Vec<Vec<&str>> = vec![
        vec!["cluster", inst],
        vec!["cluster", inst, "--method", "local", "--seed", "9", "--restarts", "7"],
        vec!["cluster", inst, "--output", "text"],
        vec!["evaluate", inst],
        vec!["entropy", inst],
    ];
    for args in &commands {
        let a = Command::new(bin).args(args).output().unwrap();
        let b = Command::new(bin).args(args).output().unwrap();
        assert!(a.status.success(), "{args:?} failed");
        assert_eq!(a.stdout, b.stdout, "stdout differs for {args:?}");
        assert_eq!(a.stderr, b.stderr);
    }
    for (path, out) in [(&gen_a, "a"), (&gen_b, "b")] {
        let s = Command::new(bin)
            .args(["generate", path.to_str().unwrap(), "--n", "6", "--k", "3", "--seed", "5"])
            .output()
            .unwrap();
        assert!(s.status.success(), "generate {out} failed");
    }
    assert_eq!(std::fs::read(&gen_a).unwrap(), std::fs::read(&gen_b).unwrap());
    let elapsed = start.elapsed();
    report(9, "CLI determinism", "5 commands plus generated files byte-identical", elapsed);
}

// ---------------------------------------------------------------------------
// 10. Desk-scale performance: exact search at n = 10 under 10 s.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_10_exact_search_scale() {
    let mut rng = rng(0xacce_000a);
    let n = 10;
    let c = random_conflict(n, &mut rng);
    let p = random_attraction(n, &mut rng);
    let alpha = entropy_report(&c, &p).unwrap().alpha;
    let cfg = SearchConfig::default();
    let start = Instant::now();
    let winner = exact_search(&c, &p, alpha, &cfg).unwrap();
    let elapsed = start.elapsed();
    assert!(winner.mcf >= 0.0 && winner.mcf <= 1.0);
    assert_eq!(enumerate_partitions(4, 11).unwrap().count(), 15, "sanity");
    assert!(elapsed < Duration::from_secs(10), "exact search took {elapsed:?}");
    report(10, "desk-scale performance", "B(10) = 115975 partitions searched", elapsed);
}
