//! The JSON problem-instance format shared by the CLI and the scenario
//! generator.
//!
//! An instance is either *evidence mode* (`frame` + `items`, the conflict
//! matrix is computed) or *matrix mode* (`conflict` given directly). Sparse
//! `attraction` and `external_conflict` sections use `{i, j, p}` triplets;
//! absent pairs are 0. External conflicting evidence is merged into the
//! conflict matrix before anything downstream sees it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evidence::{
    conflict_matrix, AttractionMatrix, ConflictMatrix, EvidenceItem, Frame, MassFunction,
};
use crate::metalevel::{merge_external_conflict, Partition};
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassEntrySpec {
    pub focal: Vec<String>,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemSpec {
    pub id: String,
    pub masses: Vec<MassEntrySpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairWeightSpec {
    pub i: usize,
    pub j: usize,
    pub p: f64,
}

/// Raw deserialized instance document.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub items: Option<Vec<ItemSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conflict: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attraction: Option<Vec<PairWeightSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub external_conflict: Option<Vec<PairWeightSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth: Option<Vec<usize>>,
}

/// A validated instance, ready for the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledInstance {
    pub n: usize,
    /// Present in evidence mode only.
    pub frame: Option<Frame>,
    /// Present in evidence mode only.
    pub items: Option<Vec<EvidenceItem<f64>>>,
    /// Conflicts before external evidence is merged in.
    pub base_conflict: ConflictMatrix<f64>,
    /// Conflicts with external evidence merged in; the pipeline input.
    pub conflict: ConflictMatrix<f64>,
    pub attraction: AttractionMatrix<f64>,
    pub partition: Option<Partition>,
    pub truth: Option<Partition>,
}

impl ProblemInstance {
    pub fn compile(&self) -> Result<CompiledInstance> {
        let (n, frame, items, base_conflict) = match (&self.items, &self.conflict) {
            (Some(_), Some(_)) => {
                return Err(Error::invalid(
                    "instance must contain exactly one of `items` and `conflict`, got both",
                ))
            }
            (None, None) => {
                return Err(Error::invalid(
                    "instance must contain exactly one of `items` and `conflict`, got neither",
                ))
            }
            (Some(item_specs), None) => {
                let frame_labels = self.frame.as_ref().ok_or_else(|| {
                    Error::invalid("evidence-mode instance requires a `frame`")
                })?;
                let frame = Frame::new(frame_labels.iter().cloned())?;
                let items = compile_items(&frame, item_specs)?;
                let base = conflict_matrix(&items)?;
                (items.len(), Some(frame), Some(items), base)
            }
            (None, Some(rows)) => {
                if self.frame.is_some() {
                    return Err(Error::invalid(
                        "`frame` is only valid together with `items`",
                    ));
                }
                let base = ConflictMatrix::from_rows(rows.clone())?;
                (base.n(), None, None, base)
            }
        };

        let attraction = match &self.attraction {
            None => AttractionMatrix::zeros(n)?,
            Some(triplets) => {
                AttractionMatrix::from_triplets(n, triplets.iter().map(|t| (t.i, t.j, t.p)))?
            }
        };

        let conflict = match &self.external_conflict {
            None => base_conflict.clone(),
            Some(triplets) => {
                let external =
                    ConflictMatrix::from_triplets(n, triplets.iter().map(|t| (t.i, t.j, t.p)))?;
                merge_external_conflict(&base_conflict, &external)?
            }
        };

        let partition = self
            .partition
            .as_ref()
            .map(|labels| compile_partition(labels, n, "partition"))
            .transpose()?;
        let truth = self
            .truth
            .as_ref()
            .map(|labels| compile_partition(labels, n, "truth"))
            .transpose()?;

        Ok(CompiledInstance {
            n,
            frame,
            items,
            base_conflict,
            conflict,
            attraction,
            partition,
            truth,
        })
    }
}

fn compile_items(frame: &Frame, specs: &[ItemSpec]) -> Result<Vec<EvidenceItem<f64>>> {
    if specs.is_empty() {
        return Err(Error::Empty("item list"));
    }
    let mut items = Vec::with_capacity(specs.len());
    for (idx, spec) in specs.iter().enumerate() {
        if specs[..idx].iter().any(|s| s.id == spec.id) {
            return Err(Error::Duplicate {
                what: "item id",
                which: spec.id.clone(),
            });
        }
        let entries = spec
            .masses
            .iter()
            .map(|e| Ok((frame.focal(&e.focal)?, e.mass)))
            .collect::<Result<Vec<_>>>()?;
        items.push(EvidenceItem::new(
            spec.id.clone(),
            MassFunction::new(frame.clone(), entries)?,
        ));
    }
    Ok(items)
}

fn compile_partition(labels: &[usize], n: usize, what: &str) -> Result<Partition> {
    if labels.len() != n {
        return Err(Error::invalid(format!(
            "`{what}` lists {} labels but the instance has {n} items",
            labels.len()
        )));
    }
    Partition::new(labels.to_vec())
        .map_err(|e| Error::invalid(format!("invalid `{what}` field: {e}")))
}

impl Scenario<f64> {
    /// Serializable instance document with the ground truth embedded.
    pub fn to_instance(&self) -> ProblemInstance {
        let frame_labels: Vec<String> = self.frame.atoms().to_vec();
        let items = self
            .items
            .iter()
            .map(|item| ItemSpec {
                id: item.id.clone(),
                masses: item
                    .mass
                    .entries()
                    .map(|(fs, m)| MassEntrySpec {
                        focal: fs.labels(&self.frame).iter().map(|s| s.to_string()).collect(),
                        mass: m,
                    })
                    .collect(),
            })
            .collect();
        let n = self.items.len();
        let mut attraction = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let p = self.attraction.get(i, j);
                if p > 0.0 {
                    attraction.push(PairWeightSpec { i, j, p });
                }
            }
        }
        ProblemInstance {
            frame: Some(frame_labels),
            items: Some(items),
            conflict: None,
            attraction: if attraction.is_empty() {
                None
            } else {
                Some(attraction)
            },
            external_conflict: None,
            partition: None,
            truth: Some(self.truth.labels().to_vec()),
        }
    }
}
