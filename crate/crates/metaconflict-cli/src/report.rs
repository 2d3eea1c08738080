//! Report documents printed by the CLI. JSON is the machine interface and is
//! byte-reproducible for identical inputs and flags; text is a convenience
//! rendering of the same values.

use clap::ValueEnum;
use serde::{Serialize, Serializer};

use metaconflict::instance::CompiledInstance;
use metaconflict::search::{McfReport, SearchConfig, SearchMethod};
use metaconflict::weighting::EntropyReport;

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

const SINGLETON_ADVISORY: &str = "attracting support is zero for the winning partition; \
partitions containing singleton clusters never receive attracting support, so the AdP term \
cannot distinguish them";

#[derive(Serialize)]
pub struct EntropyOut {
    pub g_neg: f64,
    pub i_neg: f64,
    pub h_neg: f64,
    pub g_pos: f64,
    pub i_pos: f64,
    pub h_pos: f64,
    pub alpha: f64,
    /// True when both pooled entropies are zero and alpha fell back to 1/2.
    pub degenerate: bool,
}

impl EntropyOut {
    pub fn from_report(r: &EntropyReport<f64>) -> Self {
        EntropyOut {
            g_neg: r.g_neg,
            i_neg: r.i_neg,
            h_neg: r.h_neg,
            g_pos: r.g_pos,
            i_pos: r.i_pos,
            h_pos: r.h_pos,
            alpha: r.alpha,
            degenerate: r.h_pos == 0.0 && r.h_neg == 0.0,
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => to_json(self),
            OutputFormat::Text => {
                let mut out = String::new();
                out += &format!("conflicting: G = {:.6}  I = {:.6}  H = {:.6}\n", self.g_neg, self.i_neg, self.h_neg);
                out += &format!("attracting:  G = {:.6}  I = {:.6}  H = {:.6}\n", self.g_pos, self.i_pos, self.h_pos);
                out += &format!("alpha = {:.6}\n", self.alpha);
                if self.degenerate {
                    out += "note: no information on either side; alpha defaulted to 0.5\n";
                }
                out
            }
        }
    }
}

#[derive(Serialize)]
struct PerClusterOut {
    members: Vec<usize>,
    neg_mass: f64,
    pos_mass: f64,
}

#[derive(Serialize)]
struct MassesOut {
    adp: f64,
    nadp: f64,
    theta: f64,
    empty: f64,
}

fn masses_out(r: &McfReport<f64>) -> MassesOut {
    MassesOut {
        adp: r.masses.adp,
        nadp: r.masses.nadp,
        theta: r.masses.theta,
        empty: r.masses.empty,
    }
}

fn per_cluster_out(r: &McfReport<f64>) -> Vec<PerClusterOut> {
    r.per_cluster
        .iter()
        .map(|t| PerClusterOut {
            members: t.members.clone(),
            neg_mass: t.neg_mass,
            pos_mass: t.pos_mass,
        })
        .collect()
}

fn advisory_for(r: &McfReport<f64>) -> Option<String> {
    (r.pos_adp == 0.0).then(|| SINGLETON_ADVISORY.to_string())
}

fn render_common(out: &mut String, r: &ClusterCommon) {
    out.push_str(&format!("alpha = {:.6} ({})\n", r.alpha, r.alpha_source));
    out.push_str(&format!("partition = {:?}\n", r.partition));
    for (idx, members) in r.clusters.iter().enumerate() {
        let names: Vec<String> = match &r.items {
            Some(ids) => members.iter().map(|&i| ids[i].clone()).collect(),
            None => members.iter().map(|i| i.to_string()).collect(),
        };
        let term = &r.per_cluster[idx];
        out.push_str(&format!(
            "cluster {idx}: {{{}}}  neg = {:.6}  pos = {:.6}\n",
            names.join(", "),
            term.neg_mass,
            term.pos_mass
        ));
    }
    out.push_str(&format!(
        "masses: adp = {:.6}  nadp = {:.6}  theta = {:.6}  empty = {:.6}\n",
        r.masses.adp, r.masses.nadp, r.masses.theta, r.masses.empty
    ));
    out.push_str(&format!("mcf = {:.6}\n", r.mcf));
    if let Some(a) = &r.advisory {
        out.push_str(&format!("note: {a}\n"));
    }
}

/// Fields shared by the cluster and evaluate reports.
#[derive(Serialize)]
struct ClusterCommon {
    n: usize,
    alpha: f64,
    alpha_source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    entropy: Option<EntropyOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    items: Option<Vec<String>>,
    conflict: Vec<Vec<f64>>,
    partition: Vec<usize>,
    clusters: Vec<Vec<usize>>,
    pos_adp: f64,
    neg_nadp: f64,
    masses: MassesOut,
    mcf: f64,
    per_cluster: Vec<PerClusterOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    advisory: Option<String>,
}

impl ClusterCommon {
    fn build(
        compiled: &CompiledInstance,
        overridden: bool,
        entropy: Option<EntropyOut>,
        result: &McfReport<f64>,
    ) -> Self {
        ClusterCommon {
            n: compiled.n,
            alpha: result.alpha,
            alpha_source: if overridden { "override" } else { "entropy" },
            entropy,
            items: compiled
                .items
                .as_ref()
                .map(|items| items.iter().map(|i| i.id.clone()).collect()),
            conflict: compiled.conflict.rows(),
            partition: result.partition.labels().to_vec(),
            clusters: result.partition.clusters(),
            pos_adp: result.pos_adp,
            neg_nadp: result.neg_nadp,
            masses: masses_out(result),
            mcf: result.mcf,
            per_cluster: per_cluster_out(result),
            advisory: advisory_for(result),
        }
    }
}

#[derive(Serialize)]
pub struct ClusterReport {
    method: SearchMethod,
    seed: u64,
    restarts: u32,
    #[serde(flatten)]
    common: ClusterCommon,
}

impl ClusterReport {
    pub fn build(
        compiled: &CompiledInstance,
        cfg: &SearchConfig<f64>,
        overridden: bool,
        entropy: Option<EntropyOut>,
        result: &McfReport<f64>,
    ) -> Self {
        ClusterReport {
            method: cfg.method,
            seed: cfg.seed,
            restarts: cfg.restarts,
            common: ClusterCommon::build(compiled, overridden, entropy, result),
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => to_json(self),
            OutputFormat::Text => {
                let mut out = String::new();
                let method = match self.method {
                    SearchMethod::Exact => "exact",
                    SearchMethod::Local => "local",
                };
                out.push_str(&format!("method = {method}  n = {}\n", self.common.n));
                render_common(&mut out, &self.common);
                out
            }
        }
    }
}

fn serialize_logsum<S: Serializer>(v: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        serializer.serialize_f64(*v)
    } else {
        serializer.serialize_str("inf")
    }
}

#[derive(Serialize)]
pub struct EvaluateReport {
    #[serde(flatten)]
    common: ClusterCommon,
    #[serde(skip_serializing_if = "Option::is_none")]
    legacy_mcf: Option<f64>,
    #[serde(serialize_with = "serialize_logsum")]
    logsum: f64,
}

impl EvaluateReport {
    pub fn build(
        compiled: &CompiledInstance,
        overridden: bool,
        entropy: Option<EntropyOut>,
        result: &McfReport<f64>,
        legacy_mcf: Option<f64>,
        logsum: f64,
    ) -> Self {
        EvaluateReport {
            common: ClusterCommon::build(compiled, overridden, entropy, result),
            legacy_mcf,
            logsum,
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => to_json(self),
            OutputFormat::Text => {
                let mut out = String::new();
                out.push_str(&format!("n = {}\n", self.common.n));
                render_common(&mut out, &self.common);
                if let Some(l) = self.legacy_mcf {
                    out.push_str(&format!("legacy mcf = {l:.6}\n"));
                }
                if self.logsum.is_finite() {
                    out.push_str(&format!("logsum = {:.6}\n", self.logsum));
                } else {
                    out.push_str("logsum = inf\n");
                }
                out
            }
        }
    }
}

#[derive(Serialize)]
pub struct GenerateReport {
    pub out: String,
    pub n: usize,
    pub k: usize,
    pub frame_size: usize,
    pub sharpness: f64,
    pub link_prob: f64,
    pub seed: u64,
    pub truth: Vec<usize>,
}

impl GenerateReport {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => to_json(self),
            OutputFormat::Text => format!(
                "wrote {} (n = {}, k = {}, seed = {}, truth = {:?})\n",
                self.out, self.n, self.k, self.seed, self.truth
            ),
        }
    }
}
