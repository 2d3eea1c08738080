//! Frames of discernment, basic probability assignments, and the
//! Dempster-rule conflict between and among belief functions.
//!
//! Combination here is always the unnormalized conjunctive rule: focal
//! elements intersect pairwise, products of masses accumulate, and the mass
//! landing on the empty intersection is kept as the conflict rather than
//! being renormalized away.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{in_unit, Real};

/// Largest supported frame; focal sets are packed into a 64-bit mask.
pub const MAX_FRAME_ATOMS: usize = 64;

/// An ordered frame of discernment over named atoms.
///
/// Atom order is fixed at construction; focal sets refer to atoms by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    atoms: Vec<String>,
}

impl Frame {
    pub fn new<I, S>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() || atoms.len() > MAX_FRAME_ATOMS {
            return Err(Error::FrameSize {
                max: MAX_FRAME_ATOMS,
                got: atoms.len(),
            });
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].contains(a) {
                return Err(Error::Duplicate {
                    what: "atom",
                    which: a.clone(),
                });
            }
        }
        Ok(Frame { atoms })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == label)
    }

    /// The focal set containing every atom (Θ).
    pub fn theta(&self) -> FocalSet {
        FocalSet::full(self.atoms.len())
    }

    /// Builds a focal set from atom labels.
    pub fn focal<S: AsRef<str>>(&self, labels: &[S]) -> Result<FocalSet> {
        let mut bits = 0u64;
        for l in labels {
            let idx = self
                .index_of(l.as_ref())
                .ok_or_else(|| Error::UnknownAtom(l.as_ref().to_string()))?;
            bits |= 1u64 << idx;
        }
        Ok(FocalSet { bits })
    }
}

/// A subset of frame atoms packed as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FocalSet {
    bits: u64,
}

impl FocalSet {
    pub const EMPTY: FocalSet = FocalSet { bits: 0 };

    pub fn from_indices<I>(frame: &Frame, indices: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut bits = 0u64;
        for idx in indices {
            if idx >= frame.len() {
                return Err(Error::IndexRange {
                    what: "atom",
                    index: idx,
                    n: frame.len(),
                });
            }
            bits |= 1u64 << idx;
        }
        Ok(FocalSet { bits })
    }

    fn full(len: usize) -> Self {
        debug_assert!((1..=MAX_FRAME_ATOMS).contains(&len));
        let bits = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        FocalSet { bits }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn intersect(&self, other: FocalSet) -> FocalSet {
        FocalSet {
            bits: self.bits & other.bits,
        }
    }

    pub fn contains(&self, index: usize) -> bool {
        index < 64 && (self.bits >> index) & 1 == 1
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..64).filter(|i| (self.bits >> i) & 1 == 1)
    }

    /// Atom labels of the members, in frame order.
    pub fn labels<'a>(&self, frame: &'a Frame) -> Vec<&'a str> {
        self.indices()
            .filter_map(|i| frame.atoms.get(i).map(String::as_str))
            .collect()
    }
}

/// A basic probability assignment over a frame.
///
/// Entries map non-empty focal sets to strictly positive masses; the mass on
/// the empty set is kept separately and is only non-zero for combination
/// results (user-supplied evidence carries no conflict of its own).
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction<F: Real> {
    frame: Frame,
    entries: BTreeMap<FocalSet, F>,
    empty_mass: F,
}

impl<F: Real> MassFunction<F> {
    /// Builds user-supplied evidence. Duplicate focal sets accumulate,
    /// zero masses are dropped, and a total within `F::MASS_TOL` of one is
    /// renormalized proportionally; anything further off is rejected.
    pub fn new<I>(frame: Frame, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FocalSet, F)>,
    {
        let mut map: BTreeMap<FocalSet, F> = BTreeMap::new();
        for (fs, m) in entries {
            if frame.len() < 64 && fs.bits >> frame.len() != 0 {
                return Err(Error::IndexRange {
                    what: "atom",
                    index: 63 - fs.bits.leading_zeros() as usize,
                    n: frame.len(),
                });
            }
            if fs.is_empty() {
                return Err(Error::EmptyFocal);
            }
            if !in_unit(m) {
                return Err(Error::UnitRange {
                    what: "mass",
                    value: m.into_f64(),
                });
            }
            if m > F::zero() {
                *map.entry(fs).or_insert_with(F::zero) += m;
            }
        }
        let total: F = map.values().copied().sum();
        if (total - F::one()).abs() > F::MASS_TOL {
            return Err(Error::MassSum {
                got: total.into_f64(),
                tol: F::MASS_TOL.into_f64(),
            });
        }
        for v in map.values_mut() {
            *v = *v / total;
        }
        Ok(MassFunction {
            frame,
            entries: map,
            empty_mass: F::zero(),
        })
    }

    /// The vacuous assignment: full mass on Θ.
    pub fn vacuous(frame: Frame) -> Self {
        let theta = frame.theta();
        let mut entries = BTreeMap::new();
        entries.insert(theta, F::one());
        MassFunction {
            frame,
            entries,
            empty_mass: F::zero(),
        }
    }

    /// Internal constructor for combination results; no renormalization.
    /// Accumulated products can overshoot 1 by an ulp, so values are clamped
    /// back into [0, 1].
    fn from_combination(frame: Frame, mut entries: BTreeMap<FocalSet, F>, empty_mass: F) -> Self {
        for v in entries.values_mut() {
            *v = (*v).min(F::one());
        }
        let empty_mass = empty_mass.min(F::one());
        debug_assert!({
            let total: F = entries.values().copied().sum::<F>() + empty_mass;
            (total - F::one()).abs() <= F::MASS_TOL
        });
        MassFunction {
            frame,
            entries,
            empty_mass,
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Non-empty focal elements with their masses, ordered by bit pattern.
    pub fn entries(&self) -> impl Iterator<Item = (FocalSet, F)> + '_ {
        self.entries.iter().map(|(fs, m)| (*fs, *m))
    }

    pub fn focal_count(&self) -> usize {
        self.entries.len()
    }

    /// Mass on a specific focal set (zero if absent; `EMPTY` reads the
    /// conflict mass).
    pub fn mass(&self, fs: FocalSet) -> F {
        if fs.is_empty() {
            self.empty_mass
        } else {
            self.entries.get(&fs).copied().unwrap_or_else(F::zero)
        }
    }

    pub fn empty_mass(&self) -> F {
        self.empty_mass
    }

    pub fn total(&self) -> F {
        self.entries.values().copied().sum::<F>() + self.empty_mass
    }
}

/// A belief function with a stable identifier.
#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceItem<F: Real> {
    pub id: String,
    pub mass: MassFunction<F>,
}

impl<F: Real> EvidenceItem<F> {
    pub fn new(id: impl Into<String>, mass: MassFunction<F>) -> Self {
        EvidenceItem {
            id: id.into(),
            mass,
        }
    }
}

/// Unnormalized conjunctive (Dempster) combination of two assignments.
///
/// Masses of empty intersections accumulate on the empty set instead of
/// being renormalized away, so the result keeps the pair's conflict.
pub fn combine_pair<F: Real>(a: &MassFunction<F>, b: &MassFunction<F>) -> Result<MassFunction<F>> {
    if a.frame != b.frame {
        return Err(Error::FrameMismatch);
    }
    let mut entries: BTreeMap<FocalSet, F> = BTreeMap::new();
    let mut empty = F::zero();
    let a_parts = with_empty(a);
    let b_parts = with_empty(b);
    for &(fa, ma) in &a_parts {
        for &(fb, mb) in &b_parts {
            let fs = fa.intersect(fb);
            let m = ma * mb;
            if fs.is_empty() {
                empty += m;
            } else {
                *entries.entry(fs).or_insert_with(F::zero) += m;
            }
        }
    }
    Ok(MassFunction::from_combination(
        a.frame.clone(),
        entries,
        empty,
    ))
}

fn with_empty<F: Real>(m: &MassFunction<F>) -> Vec<(FocalSet, F)> {
    let mut parts: Vec<(FocalSet, F)> = m.entries().collect();
    if m.empty_mass > F::zero() {
        parts.push((FocalSet::EMPTY, m.empty_mass));
    }
    parts
}

/// Conflict of Dempster's rule for a pair: the empty-set mass of their
/// unnormalized conjunctive combination.
pub fn conflict_pair<F: Real>(a: &MassFunction<F>, b: &MassFunction<F>) -> Result<F> {
    Ok(combine_pair(a, b)?.empty_mass)
}

/// Conflict of combining every assignment in `items`, folded left to right
/// without intermediate normalization. Equals the composed conflict of
/// sequentially normalized Dempster combinations.
pub fn conf_subset<F: Real>(items: &[MassFunction<F>]) -> Result<F> {
    let (first, rest) = items.split_first().ok_or(Error::Empty("item list"))?;
    let mut acc = first.clone();
    for m in rest {
        acc = combine_pair(&acc, m)?;
    }
    Ok(acc.empty_mass)
}

#[derive(Debug, Clone, PartialEq)]
struct PairWeights<F: Real> {
    n: usize,
    w: Vec<F>,
}

impl<F: Real> PairWeights<F> {
    fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty("item set"));
        }
        Ok(PairWeights {
            n,
            w: vec![F::zero(); n * n],
        })
    }

    fn from_rows(rows: Vec<Vec<F>>, what: &'static str) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty("matrix"));
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::invalid(format!(
                    "{what} matrix must be square: got a row of length {} for n = {n}",
                    row.len()
                )));
            }
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !in_unit(v) {
                    return Err(Error::UnitRange {
                        what,
                        value: v.into_f64(),
                    });
                }
                if i == j && v != F::zero() {
                    return Err(Error::invalid(format!(
                        "{what} matrix must have a zero diagonal (entry [{i}][{i}] = {})",
                        v.into_f64()
                    )));
                }
                if rows[j][i] != v {
                    return Err(Error::invalid(format!(
                        "{what} matrix is asymmetric at [{i}][{j}]"
                    )));
                }
            }
        }
        let mut w = Vec::with_capacity(n * n);
        for row in rows {
            w.extend(row);
        }
        Ok(PairWeights { n, w })
    }

    fn from_triplets<I>(n: usize, triplets: I, what: &'static str) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, F)>,
    {
        let mut m = PairWeights::zeros(n)?;
        let mut seen = vec![false; n * n];
        for (i, j, v) in triplets {
            for idx in [i, j] {
                if idx >= n {
                    return Err(Error::IndexRange {
                        what: "item",
                        index: idx,
                        n,
                    });
                }
            }
            if i == j {
                return Err(Error::invalid(format!(
                    "{what} entry ({i}, {j}) refers to the diagonal"
                )));
            }
            if !in_unit(v) {
                return Err(Error::UnitRange {
                    what,
                    value: v.into_f64(),
                });
            }
            let (a, b) = (i.min(j), i.max(j));
            if seen[a * n + b] {
                return Err(Error::Duplicate {
                    what: "pair entry",
                    which: format!("({a}, {b})"),
                });
            }
            seen[a * n + b] = true;
            m.w[a * n + b] = v;
            m.w[b * n + a] = v;
        }
        Ok(m)
    }

    fn get(&self, i: usize, j: usize) -> F {
        self.w[i * self.n + j]
    }

    fn rows(&self) -> Vec<Vec<F>> {
        (0..self.n)
            .map(|i| self.w[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }
}

macro_rules! pair_matrix {
    ($(#[$doc:meta])* $name:ident, $what:literal) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name<F: Real>(PairWeights<F>);

        impl<F: Real> $name<F> {
            /// All-zero matrix for `n` items.
            pub fn zeros(n: usize) -> Result<Self> {
                PairWeights::zeros(n).map(Self)
            }

            /// Builds from a full square matrix; rejects asymmetric input,
            /// non-zero diagonals, and values outside `[0, 1]`.
            pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
                PairWeights::from_rows(rows, $what).map(Self)
            }

            /// Builds from sparse `(i, j, value)` entries; absent pairs are 0.
            pub fn from_triplets<I>(n: usize, triplets: I) -> Result<Self>
            where
                I: IntoIterator<Item = (usize, usize, F)>,
            {
                PairWeights::from_triplets(n, triplets, $what).map(Self)
            }

            pub fn n(&self) -> usize {
                self.0.n
            }

            pub fn get(&self, i: usize, j: usize) -> F {
                self.0.get(i, j)
            }

            pub fn rows(&self) -> Vec<Vec<F>> {
                self.0.rows()
            }
        }
    };
}

pair_matrix!(
    /// Symmetric pairwise Dempster conflicts `c_ij ∈ [0, 1]`, zero diagonal.
    ConflictMatrix,
    "conflict"
);

pair_matrix!(
    /// Symmetric pairwise attraction degrees `p_ij ∈ [0, 1]`, zero diagonal.
    AttractionMatrix,
    "attraction"
);

/// Pairwise conflict matrix of a set of evidence items.
pub fn conflict_matrix<F: Real>(items: &[EvidenceItem<F>]) -> Result<ConflictMatrix<F>> {
    if items.is_empty() {
        return Err(Error::Empty("item list"));
    }
    let n = items.len();
    let mut rows = vec![vec![F::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let c = conflict_pair(&items[i].mass, &items[j].mass)?;
            rows[i][j] = c;
            rows[j][i] = c;
        }
    }
    ConflictMatrix::from_rows(rows)
}
