//! Spectral sets: selections whose part and complement are both closed.
//!
//! A selection assigns a side to every atom of a model: each explicit point,
//! each cluster, and finitely many level-1 items moved across (a leaf of a
//! depth-1 cluster or a whole family of a depth-2 cluster). The selected set
//! is the union of the selected atoms; a value shared by atoms on different
//! sides counts as selected. `selected_points` may name any value of the
//! model, not only its explicit points; a value listed there is selected
//! whatever its atom's side.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::cluster::{coincidences, Cluster, Coincidences};
use super::model::SpectrumModel;
use super::{SpectralError, MAX_BOUNDARY_MOVES};
use crate::exact::ExactComplex;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralSetSelection {
    #[serde(default)]
    pub selected_points: BTreeSet<ExactComplex>,
    #[serde(default)]
    pub selected_clusters: BTreeSet<usize>,
    /// `(cluster, item)` pairs placed on the side opposite to their cluster.
    #[serde(default)]
    pub boundary_moves: Vec<(usize, u64)>,
}

impl SpectralSetSelection {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every atom of the model.
    pub fn all(model: &SpectrumModel) -> Self {
        Self {
            selected_points: model.points().clone(),
            selected_clusters: (0..model.clusters().len()).collect(),
            boundary_moves: Vec::new(),
        }
    }

    pub fn with_point(mut self, p: ExactComplex) -> Self {
        self.selected_points.insert(p);
        self
    }

    pub fn with_cluster(mut self, c: usize) -> Self {
        self.selected_clusters.insert(c);
        self
    }

    pub fn with_move(mut self, cluster: usize, item: u64) -> Self {
        self.boundary_moves.push((cluster, item));
        self
    }

    pub fn validate(&self, model: &SpectrumModel) -> Result<(), SpectralError> {
        let bad = |msg: String| Err(SpectralError::MalformedSelection(msg));
        if let Some(p) = self.selected_points.iter().find(|p| !model.contains(p)) {
            return bad(format!("{p} is not a value of the model"));
        }
        let n = model.clusters().len();
        if let Some(c) = self.selected_clusters.iter().find(|&&c| c >= n) {
            return bad(format!("cluster {c} does not exist"));
        }
        if self.boundary_moves.len() > MAX_BOUNDARY_MOVES {
            return bad(format!("more than {MAX_BOUNDARY_MOVES} boundary moves"));
        }
        let mut seen = BTreeSet::new();
        for &(c, item) in &self.boundary_moves {
            let Some(cluster) = model.clusters().get(c) else {
                return bad(format!("boundary move references missing cluster {c}"));
            };
            if item <= cluster.removed_prefix() {
                return bad(format!("item {item} of cluster {c} is not generated"));
            }
            if !seen.insert((c, item)) {
                return bad(format!("duplicate boundary move ({c}, {item})"));
            }
        }
        Ok(())
    }

    pub fn is_spectral_set(&self, model: &SpectrumModel) -> Result<bool, SpectralError> {
        self.validate(model)?;
        let sides = Sides::new(model, self);
        let pool = sides.candidate_pool();
        Ok(pool.acc_candidates.iter().all(|c| sides.consistent_at(c)))
    }

    /// Whether `v` belongs to the selected set.
    pub fn contains(&self, model: &SpectrumModel, v: &ExactComplex) -> bool {
        Sides::new(model, self).value_on(v, true)
    }

    /// The selected set as a model.
    pub fn selected_part(&self, model: &SpectrumModel) -> Result<SpectrumModel, SpectralError> {
        self.require_spectral(model)?;
        let sides = Sides::new(model, self);
        let (points, clusters) = sides.pieces(true);
        Ok(SpectrumModel::new(points.into_iter().chain(self.selected_points.iter().cloned()), clusters))
    }

    /// `S \ σ` as a model.
    pub fn complement(&self, model: &SpectrumModel) -> Result<SpectrumModel, SpectralError> {
        self.require_spectral(model)?;
        let holes = self.shared_selected_values(model);
        let sides = Sides::new(model, self);
        let (raw_points, raw_clusters) = sides.pieces(false);
        let mut points: Vec<ExactComplex> = model
            .points()
            .iter()
            .filter(|p| !self.selected_points.contains(*p))
            .cloned()
            .chain(raw_points)
            .filter(|p| !holes.contains(p))
            .collect();
        let mut clusters = Vec::new();
        for c in raw_clusters {
            let (p, cs) = c.excise(&holes);
            points.extend(p);
            clusters.extend(cs);
        }
        Ok(SpectrumModel::new(points, clusters))
    }

    /// Values shared by atoms on both sides; they count as selected.
    pub(crate) fn shared_selected_values(&self, model: &SpectrumModel) -> BTreeSet<ExactComplex> {
        let sides = Sides::new(model, self);
        let pool = sides.candidate_pool();
        pool.values.into_iter().filter(|v| sides.value_on(v, true) && sides.value_on(v, false)).collect()
    }

    fn require_spectral(&self, model: &SpectrumModel) -> Result<(), SpectralError> {
        if self.is_spectral_set(model)? {
            Ok(())
        } else {
            Err(SpectralError::InvalidSpectralSet(
                "a selected and an unselected part accumulate at a common point".into(),
            ))
        }
    }
}

struct Sides<'a> {
    model: &'a SpectrumModel,
    sel: &'a SpectralSetSelection,
    moved: BTreeMap<usize, BTreeSet<u64>>,
}

struct CandidatePool {
    /// Points where a closedness violation could occur.
    acc_candidates: BTreeSet<ExactComplex>,
    /// Every value known to be shared between atoms.
    values: BTreeSet<ExactComplex>,
}

impl<'a> Sides<'a> {
    fn new(model: &'a SpectrumModel, sel: &'a SpectralSetSelection) -> Self {
        let mut moved: BTreeMap<usize, BTreeSet<u64>> = BTreeMap::new();
        for &(c, item) in &sel.boundary_moves {
            moved.entry(c).or_default().insert(item);
        }
        Self { model, sel, moved }
    }

    fn cluster_side(&self, c: usize) -> bool {
        self.sel.selected_clusters.contains(&c)
    }

    fn item_side(&self, c: usize, item: u64) -> bool {
        self.cluster_side(c) ^ self.moved.get(&c).is_some_and(|m| m.contains(&item))
    }

    /// Whether some atom on side `side` contains `v`.
    fn value_on(&self, v: &ExactComplex, side: bool) -> bool {
        if side && self.sel.selected_points.contains(v) {
            return true;
        }
        if !side && self.model.points().contains(v) && !self.sel.selected_points.contains(v) {
            return true;
        }
        self.model.clusters().iter().enumerate().any(|(c, cluster)| {
            (cluster.limit() == v && self.cluster_side(c) == side)
                || cluster.level1_indices(v).into_iter().any(|n| self.item_side(c, n) == side)
                || cluster.leaf_indices(v).into_iter().any(|(m, _, _)| self.item_side(c, m) == side)
        })
    }

    /// Sides of the sequences converging to `v`.
    fn tail_sides(&self, v: &ExactComplex) -> (bool, bool) {
        let (mut sel, mut unsel) = (false, false);
        for (c, cluster) in self.model.clusters().iter().enumerate() {
            if cluster.limit() == v {
                if self.cluster_side(c) {
                    sel = true;
                } else {
                    unsel = true;
                }
            }
            if cluster.depth() == 2 {
                for m in cluster.level1_indices(v) {
                    if self.item_side(c, m) {
                        sel = true;
                    } else {
                        unsel = true;
                    }
                }
            }
        }
        (sel, unsel)
    }

    fn consistent_at(&self, v: &ExactComplex) -> bool {
        let (tail_sel, tail_unsel) = self.tail_sides(v);
        if !tail_sel && !tail_unsel {
            return true;
        }
        let selected = self.value_on(v, true);
        !(tail_sel && !selected) && !(tail_unsel && selected)
    }

    fn candidate_pool(&self) -> CandidatePool {
        let clusters = self.model.clusters();
        let mut co = Coincidences::default();
        for (i, a) in clusters.iter().enumerate() {
            for b in &clusters[i + 1..] {
                coincidences(a, b, &mut co);
            }
        }
        let mut extra = BTreeSet::new();
        for (&c, items) in &self.moved {
            let cluster = &clusters[c];
            for &item in items {
                if cluster.depth() == 1 {
                    extra.insert(cluster.level1_value(item));
                    continue;
                }
                extra.insert(cluster.level1_value(item));
                for fam in cluster.family(item) {
                    for other in clusters {
                        coincidences(&fam, other, &mut co);
                    }
                }
            }
        }
        let mut acc_candidates: BTreeSet<ExactComplex> = clusters.iter().map(|c| c.limit().clone()).collect();
        acc_candidates.extend(co.shared_limits.iter().cloned());
        let mut values = co.values;
        values.extend(extra);
        values.extend(self.sel.selected_points.iter().cloned());
        acc_candidates.extend(values.iter().filter(|v| self.model.acc_contains(v)).cloned());
        CandidatePool { acc_candidates, values }
    }

    /// Cluster-derived atoms on side `side`, before removing shared values.
    fn pieces(&self, side: bool) -> (Vec<ExactComplex>, Vec<Cluster>) {
        let (mut points, mut clusters) = (Vec::new(), Vec::new());
        let empty = BTreeSet::new();
        for (c, cluster) in self.model.clusters().iter().enumerate() {
            let moved = self.moved.get(&c).unwrap_or(&empty);
            let (p, cs) = if self.cluster_side(c) == side {
                cluster.without_items(moved)
            } else {
                cluster.items_only(moved)
            };
            points.extend(p);
            clusters.extend(cs);
        }
        (points, clusters)
    }
}
