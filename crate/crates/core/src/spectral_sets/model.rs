use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::cluster::Cluster;
use super::selection::SpectralSetSelection;
use super::SpectralError;
use crate::exact::ExactComplex;

/// Position of a point in the lattice `Invertible ⊂ GeneralizedDrazin ⊂ GzInvertible`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralClass {
    Invertible,
    GeneralizedDrazin,
    GzInvertible,
    NotGzInvertible,
}

impl SpectralClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectralClass::Invertible => "invertible",
            SpectralClass::GeneralizedDrazin => "generalized_drazin",
            SpectralClass::GzInvertible => "gz_invertible",
            SpectralClass::NotGzInvertible => "not_gz_invertible",
        }
    }

    /// True when the point is at least g_z-invertible.
    pub fn is_gz(self) -> bool {
        self != SpectralClass::NotGzInvertible
    }
}

/// Closed countable set: finitely many points plus finitely many clusters.
///
/// Points equal to a value of some cluster are absorbed at construction, so
/// every entry of `points` is isolated.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpectrumModel {
    points: BTreeSet<ExactComplex>,
    clusters: Vec<Cluster>,
}

impl SpectrumModel {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(points: impl IntoIterator<Item = ExactComplex>, clusters: Vec<Cluster>) -> Self {
        let points = points.into_iter().filter(|p| !clusters.iter().any(|c| c.contains(p))).collect();
        Self { points, clusters }
    }

    pub fn from_points(points: impl IntoIterator<Item = ExactComplex>) -> Self {
        Self::new(points, Vec::new())
    }

    pub fn from_cluster(cluster: Cluster) -> Self {
        Self::new([], vec![cluster])
    }

    pub fn points(&self) -> &BTreeSet<ExactComplex> {
        &self.points
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.clusters.is_empty()
    }

    pub fn depth(&self) -> u8 {
        self.clusters.iter().map(Cluster::depth).max().unwrap_or(0)
    }

    pub fn contains(&self, v: &ExactComplex) -> bool {
        self.points.contains(v) || self.clusters.iter().any(|c| c.contains(v))
    }

    /// The derived set. Depth-1 clusters contribute their limit, depth-2
    /// clusters contribute their family limits together with their limit.
    pub fn acc(&self) -> SpectrumModel {
        let mut points = Vec::new();
        let mut clusters = Vec::new();
        for c in &self.clusters {
            if c.depth() == 2 {
                clusters.push(c.without_children());
            } else {
                points.push(c.limit().clone());
            }
        }
        Self::new(points, clusters)
    }

    pub fn acc_contains(&self, v: &ExactComplex) -> bool {
        self.clusters.iter().any(|c| c.acc_contains(v))
    }

    pub fn iso(&self) -> IsolatedSet {
        IsolatedSet {
            points: self.points.iter().cloned().collect(),
            generators: self.clusters.clone(),
            model: self.clone(),
        }
    }

    /// `acc(acc S)`: the limits of the depth-2 clusters.
    pub fn acc_acc(&self) -> BTreeSet<ExactComplex> {
        self.clusters.iter().filter(|c| c.depth() == 2).map(|c| c.limit().clone()).collect()
    }

    pub fn acc_acc_contains(&self, v: &ExactComplex) -> bool {
        self.clusters.iter().any(|c| c.depth() == 2 && c.limit() == v)
    }

    pub fn classify_zero(&self) -> SpectralClass {
        self.classify_at(&ExactComplex::zero())
    }

    /// Tier of `lambda`, i.e. of 0 for the translated set `S - lambda`.
    pub fn classify_at(&self, lambda: &ExactComplex) -> SpectralClass {
        if !self.contains(lambda) {
            SpectralClass::Invertible
        } else if !self.acc_contains(lambda) {
            SpectralClass::GeneralizedDrazin
        } else if !self.acc_acc_contains(lambda) {
            SpectralClass::GzInvertible
        } else {
            SpectralClass::NotGzInvertible
        }
    }

    /// `acc S ⊆ {0}`.
    pub fn is_zeroloid(&self) -> bool {
        self.clusters.iter().all(|c| c.depth() == 1 && c.limit().is_zero())
    }

    /// Union of two models. The derived set of a finite union is the union of
    /// the derived sets, so depth never grows; the error arm is kept for
    /// callers that build models from unchecked parts.
    pub fn union(&self, other: &SpectrumModel) -> Result<SpectrumModel, SpectralError> {
        let clusters: Vec<Cluster> = self.clusters.iter().chain(&other.clusters).cloned().collect();
        if clusters.iter().any(|c| c.depth() > 2) {
            return Err(SpectralError::DepthOverflow);
        }
        Ok(Self::new(self.points.iter().chain(&other.points).cloned(), clusters))
    }

    pub fn affine_image(&self, a: &ExactComplex, b: &ExactComplex) -> SpectrumModel {
        if a.is_zero() {
            return if self.is_empty() { Self::empty() } else { Self::from_points([b.clone()]) };
        }
        Self::new(
            self.points.iter().map(|p| a * p + b),
            self.clusters.iter().map(|c| c.affine(a, b)).collect(),
        )
    }

    pub fn translate(&self, b: &ExactComplex) -> SpectrumModel {
        self.affine_image(&ExactComplex::one(), b)
    }

    pub fn power_image(&self, n: u32) -> Result<SpectrumModel, SpectralError> {
        if n == 0 {
            return Err(SpectralError::UndefinedMap("power exponent must be positive".into()));
        }
        Ok(Self::new(
            self.points.iter().map(|p| p.pow(n)),
            self.clusters.iter().map(|c| c.power(n)).collect(),
        ))
    }

    pub fn conj(&self) -> SpectrumModel {
        Self::new(self.points.iter().map(ExactComplex::conj), self.clusters.iter().map(Cluster::conj).collect())
    }

    /// `{1/λ : λ ∈ S}`; fails if `0 ∈ S`.
    pub fn reciprocal_image(&self) -> Result<SpectrumModel, SpectralError> {
        let mut points = Vec::with_capacity(self.points.len());
        for p in &self.points {
            points.push(p.recip().ok_or_else(|| SpectralError::UndefinedMap("reciprocal of 0".into()))?);
        }
        let clusters = self.clusters.iter().map(Cluster::reciprocal).collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(points, clusters))
    }

    /// `{0} ∪ {1/λ : λ ∈ S \ σ}`, the spectrum of the g_z-inverse attached to `σ`.
    pub fn reciprocal_gz_image(&self, sel: &SpectralSetSelection) -> Result<SpectrumModel, SpectralError> {
        let complement = sel.complement(self)?;
        if complement.contains(&ExactComplex::zero()) {
            return Err(SpectralError::InvalidSpectralSet("0 lies outside the selected set".into()));
        }
        complement.reciprocal_image()?.union(&Self::from_points([ExactComplex::zero()]))
    }

    pub fn is_spectral_set(&self, sel: &SpectralSetSelection) -> Result<bool, SpectralError> {
        sel.is_spectral_set(self)
    }

    /// Explicit values: points, limits, and up to `per_cluster` level-1 items and leaves per cluster.
    pub fn sample(&self, per_cluster: usize) -> Vec<ExactComplex> {
        let mut out: BTreeSet<ExactComplex> = self.points.clone();
        for c in &self.clusters {
            out.insert(c.limit().clone());
            let first = c.removed_prefix() + 1;
            out.extend(c.level1_values(first, first + per_cluster as u64));
            out.extend(c.leaves(per_cluster));
        }
        out.into_iter().collect()
    }
}

/// `S \ acc S`: explicit points plus the leaves of each cluster.
#[derive(Debug, Clone)]
pub struct IsolatedSet {
    pub points: Vec<ExactComplex>,
    pub generators: Vec<Cluster>,
    model: SpectrumModel,
}

impl IsolatedSet {
    pub fn contains(&self, v: &ExactComplex) -> bool {
        self.model.contains(v) && !self.model.acc_contains(v)
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.generators.is_empty()
    }

    /// Points followed by the first `per_generator` leaves of each generator
    /// that are not accumulation points of the whole set.
    pub fn enumerate(&self, per_generator: usize) -> Vec<ExactComplex> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let leaves = self.generators.iter().flat_map(|g| g.leaves(per_generator));
        for v in self.points.iter().cloned().chain(leaves) {
            if !self.model.acc_contains(&v) && seen.insert(v.clone()) {
                out.push(v);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::spectral_sets::{ChildTemplate, TailSpec};

    fn q(p: i64, d: i64) -> ExactComplex {
        ExactComplex::frac(p, d)
    }

    fn z(n: i64) -> ExactComplex {
        ExactComplex::from_ints(n, 0)
    }

    fn harmonic0() -> SpectrumModel {
        SpectrumModel::from_cluster(Cluster::harmonic(ExactComplex::zero()))
    }

    fn harmonic_of_harmonic() -> SpectrumModel {
        let child = ChildTemplate::new(TailSpec::harmonic(ExactComplex::frac(1, 4)));
        SpectrumModel::from_cluster(
            Cluster::with_children(ExactComplex::zero(), TailSpec::harmonic(ExactComplex::one()), 0, vec![child])
                .unwrap(),
        )
    }

    fn scaled_geometric_children() -> SpectrumModel {
        let child = ChildTemplate::new(TailSpec::geometric(ExactComplex::one(), ratio(1, 4)).unwrap());
        SpectrumModel::from_cluster(
            Cluster::with_children(ExactComplex::zero(), TailSpec::harmonic(ExactComplex::one()), 0, vec![child])
                .unwrap(),
        )
    }

    #[test]
    fn acc_of_finite_and_harmonic() {
        assert!(SpectrumModel::from_points([z(1), z(2), z(3)]).acc().is_empty());
        let acc = harmonic0().acc();
        assert_eq!(acc, SpectrumModel::from_points([ExactComplex::zero()]));
    }

    #[test]
    fn acc_of_depth2_is_the_family_limits() {
        let s = scaled_geometric_children();
        let acc = s.acc();
        assert_eq!(acc.depth(), 1);
        assert!(acc.contains(&q(1, 5)));
        assert!(acc.contains(&ExactComplex::zero()));
        assert!(!acc.contains(&(q(1, 5) + q(1, 80))));
        assert_eq!(s.acc_acc(), [ExactComplex::zero()].into_iter().collect());
    }

    #[test]
    fn iso_examples() {
        let s = SpectrumModel::from_points([z(5)]).union(&harmonic0()).unwrap();
        let iso = s.iso();
        assert!(iso.contains(&z(5)) && iso.contains(&q(1, 9)) && !iso.contains(&ExactComplex::zero()));
        assert_eq!(iso.enumerate(3), vec![z(5), z(1), q(1, 2), q(1, 3)]);
        assert!(SpectrumModel::empty().iso().is_empty());
        let d2 = scaled_geometric_children().iso();
        assert!(d2.contains(&(q(1, 2) + q(1, 8))));
        assert!(!d2.contains(&q(1, 2)));
    }

    #[test]
    fn classification_tiers() {
        assert_eq!(SpectrumModel::from_points([z(2), z(5)]).classify_zero(), SpectralClass::Invertible);
        assert_eq!(SpectrumModel::from_points([z(0), z(2)]).classify_zero(), SpectralClass::GeneralizedDrazin);
        assert_eq!(harmonic0().classify_zero(), SpectralClass::GzInvertible);
        assert_eq!(harmonic_of_harmonic().classify_zero(), SpectralClass::NotGzInvertible);
        assert!(harmonic0().acc_acc().is_empty());
        assert!(SpectrumModel::from_points([z(1)]).acc_acc().is_empty());
    }

    #[test]
    fn zeroloid_examples() {
        assert!(SpectrumModel::from_points([z(1)]).is_zeroloid());
        assert!(harmonic0().is_zeroloid());
        assert!(!SpectrumModel::from_cluster(Cluster::harmonic(z(1))).is_zeroloid());
        assert!(!harmonic_of_harmonic().is_zeroloid());
    }

    #[test]
    fn images() {
        let s = SpectrumModel::from_points([z(0), z(1)]);
        assert_eq!(s.affine_image(&z(2), &z(1)), SpectrumModel::from_points([z(1), z(3)]));
        let sq = harmonic0().power_image(2).unwrap();
        let expected = Cluster::new(ExactComplex::zero(), TailSpec::power(ExactComplex::one(), 2).unwrap()).unwrap();
        assert_eq!(sq, SpectrumModel::from_cluster(expected));
        assert!(sq.is_zeroloid());
        assert!(harmonic0().power_image(0).is_err());
    }

    #[test]
    fn union_absorbs_and_keeps_clusters() {
        let u = harmonic0().union(&SpectrumModel::from_points([z(0)])).unwrap();
        assert_eq!(u, harmonic0());
        let neg = SpectrumModel::from_cluster(Cluster::harmonic(ExactComplex::zero()).affine(&z(-1), &z(0)));
        let u = harmonic0().union(&neg).unwrap();
        assert_eq!(u.clusters().len(), 2);
        assert_eq!(u.acc(), SpectrumModel::from_points([z(0)]));
        assert_eq!(SpectrumModel::from_points([z(1)]).union(&SpectrumModel::from_points([z(2)])).unwrap(),
            SpectrumModel::from_points([z(1), z(2)]));
    }

    #[test]
    fn reciprocal_gz_image_of_harmonic_tail() {
        let s = harmonic0();
        let sel = SpectralSetSelection::new().with_cluster(0).with_move(0, 1).with_move(0, 2);
        let image = s.reciprocal_gz_image(&sel).unwrap();
        assert_eq!(image, SpectrumModel::from_points([z(0), z(1), z(2)]));
    }
}
