use std::collections::BTreeMap;

use num::{One, Signed};

use super::{Dim, OperatorError};
use crate::exact::{rational_to_f64, ExactComplex, Rational};
use crate::linalg::ComplexMatrix;
use crate::spectral_sets::{Cluster, SpectrumModel};

/// Diagonal operator on `ℓ²` given by its entries.
///
/// Entries are the explicit points, each repeated by its multiplicity, and
/// every leaf of every cluster once (for a depth-2 cluster the leaves, not
/// the family limits). Cluster limits are not entries unless listed as
/// points; they are still in the spectrum, which is the closure of the entries.
///
/// Canonical order of entries: points of finite multiplicity as listed, then
/// round robin over the streams (points of infinite multiplicity, then
/// clusters in their canonical leaf order). Truncations and perturbation
/// positions refer to this order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalModel {
    points: Vec<(ExactComplex, Dim)>,
    clusters: Vec<Cluster>,
}

impl DiagonalModel {
    /// Repeated point values are merged by adding multiplicities.
    pub fn new(points: impl IntoIterator<Item = (ExactComplex, Dim)>, clusters: Vec<Cluster>) -> Result<Self, OperatorError> {
        let mut merged: Vec<(ExactComplex, Dim)> = Vec::new();
        for (v, m) in points {
            if m.is_zero() {
                return Err(OperatorError::InvalidModel(format!("multiplicity of {v} must be positive")));
            }
            match merged.iter_mut().find(|(w, _)| *w == v) {
                Some((_, total)) => *total = *total + m,
                None => merged.push((v, m)),
            }
        }
        Ok(Self { points: merged, clusters })
    }

    /// Finite diagonal matrix with the given entries.
    pub fn from_values(values: &[ExactComplex]) -> Self {
        Self::new(values.iter().map(|v| (v.clone(), Dim::Finite(1))), Vec::new()).expect("unit multiplicities")
    }

    pub fn from_cluster(cluster: Cluster) -> Self {
        Self { points: Vec::new(), clusters: vec![cluster] }
    }

    /// `diag(1, 1/2, 1/3, ...)`.
    pub fn harmonic() -> Self {
        Self::from_cluster(Cluster::harmonic(ExactComplex::zero()))
    }

    pub fn points(&self) -> &[(ExactComplex, Dim)] {
        &self.points
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn dimension(&self) -> Dim {
        if self.clusters.is_empty() {
            self.points.iter().map(|(_, m)| *m).sum()
        } else {
            Dim::Infinite
        }
    }

    /// Closure of the entries.
    pub fn value_set(&self) -> SpectrumModel {
        SpectrumModel::new(self.points.iter().map(|(v, _)| v.clone()), self.clusters.clone())
    }

    /// Number of entries equal to `v`.
    pub fn count(&self, v: &ExactComplex) -> Dim {
        let explicit: Dim = self.points.iter().filter(|(w, _)| w == v).map(|(_, m)| *m).sum();
        let leaves: u64 = self.clusters.iter().map(|c| cluster_count(c, v)).sum();
        explicit + Dim::Finite(leaves)
    }

    /// The first `count` entries in canonical order (fewer if the model is finite).
    pub fn leading_entries(&self, count: usize) -> Vec<ExactComplex> {
        let mut out = Vec::with_capacity(count);
        for (v, m) in &self.points {
            if let Dim::Finite(k) = m {
                for _ in 0..*k {
                    if out.len() == count {
                        return out;
                    }
                    out.push(v.clone());
                }
            }
        }
        let infinite: Vec<&ExactComplex> =
            self.points.iter().filter(|(_, m)| !m.is_finite()).map(|(v, _)| v).collect();
        let streams = infinite.len() + self.clusters.len();
        if streams == 0 || out.len() == count {
            return out;
        }
        let rounds = (count - out.len()).div_ceil(streams);
        let leaves: Vec<Vec<ExactComplex>> = self.clusters.iter().map(|c| c.leaves(rounds)).collect();
        'fill: for r in 0..rounds {
            for v in &infinite {
                if out.len() == count {
                    break 'fill;
                }
                out.push((*v).clone());
            }
            for l in &leaves {
                if out.len() == count {
                    break 'fill;
                }
                out.push(l[r].clone());
            }
        }
        out
    }

    pub(crate) fn conj(&self) -> Self {
        Self {
            points: self.points.iter().map(|(v, m)| (v.conj(), *m)).collect(),
            clusters: self.clusters.iter().map(Cluster::conj).collect(),
        }
    }
}

/// Entries of a cluster equal to `v`: level-1 items at depth 1, leaves at depth 2.
pub(crate) fn cluster_count(c: &Cluster, v: &ExactComplex) -> u64 {
    if c.depth() == 1 {
        c.level1_indices(v).len() as u64
    } else {
        c.leaf_indices(v).len() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `L e_1 = 0`, `L e_{n+1} = w_n e_n`.
    Left,
    /// `R e_n = w_n e_{n+1}`.
    Right,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }
}

/// Positive weight sequences whose spectral radius is known exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Weights {
    /// `prefix` followed by the constant `value`; the spectrum is the closed
    /// disk of radius `value`.
    Constant { value: Rational, prefix: Vec<Rational> },
    /// `w_n = n^(-exponent)`; the shift is quasi-nilpotent.
    Null { exponent: u32 },
}

impl Weights {
    pub fn constant(value: Rational) -> Self {
        Weights::Constant { value, prefix: Vec::new() }
    }

    /// `w_n` for `n >= 1`.
    pub fn weight(&self, n: u64) -> Rational {
        assert!(n >= 1, "weights are indexed from 1");
        match self {
            Weights::Constant { value, prefix } => prefix.get(n as usize - 1).cloned().unwrap_or_else(|| value.clone()),
            Weights::Null { exponent } => {
                Rational::new(1.into(), num::BigInt::from(n).pow(*exponent))
            }
        }
    }

    fn validate(&self) -> Result<(), OperatorError> {
        let bad = |m: &str| Err(OperatorError::InvalidModel(m.into()));
        match self {
            Weights::Constant { value, prefix } => {
                if !value.is_positive() {
                    return bad("the eventual weight must be positive");
                }
                if prefix.iter().any(|w| !w.is_positive()) {
                    return bad("weights must be positive");
                }
            }
            Weights::Null { exponent } => {
                if *exponent == 0 {
                    return bad("decay exponent must be positive");
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedShift {
    pub direction: Direction,
    pub weights: Weights,
}

impl WeightedShift {
    pub fn new(direction: Direction, weights: Weights) -> Result<Self, OperatorError> {
        weights.validate()?;
        Ok(Self { direction, weights })
    }

    /// Unweighted left shift.
    pub fn left() -> Self {
        Self { direction: Direction::Left, weights: Weights::constant(Rational::one()) }
    }

    /// Unweighted right shift.
    pub fn right() -> Self {
        Self { direction: Direction::Right, weights: Weights::constant(Rational::one()) }
    }
}

/// A diagonal model with finitely many entries replaced. Diagonal on
/// diagonal, so the edit commutes with the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalPerturbation {
    base: DiagonalModel,
    /// position -> (old entry, new entry)
    edits: BTreeMap<u64, (ExactComplex, ExactComplex)>,
}

impl DiagonalPerturbation {
    pub fn new(base: DiagonalModel, support: BTreeMap<u64, ExactComplex>) -> Result<Self, OperatorError> {
        let needed = support.keys().next_back().map_or(0, |&p| p as usize + 1);
        let entries = base.leading_entries(needed);
        if entries.len() < needed {
            return Err(OperatorError::InvalidModel(format!(
                "perturbation position {} is beyond the {} entries of the base",
                needed - 1,
                entries.len()
            )));
        }
        let edits = support.into_iter().map(|(p, v)| (p, (entries[p as usize].clone(), v))).collect();
        Ok(Self { base, edits })
    }

    pub fn base(&self) -> &DiagonalModel {
        &self.base
    }

    pub fn support(&self) -> BTreeMap<u64, ExactComplex> {
        self.edits.iter().map(|(&p, (_, v))| (p, v.clone())).collect()
    }

    pub fn count(&self, v: &ExactComplex) -> Dim {
        match self.base.count(v) {
            Dim::Infinite => Dim::Infinite,
            Dim::Finite(k) => {
                let removed = self.edits.values().filter(|(old, _)| old == v).count() as u64;
                let added = self.edits.values().filter(|(_, new)| new == v).count() as u64;
                Dim::Finite(k - removed + added)
            }
        }
    }

    pub fn leading_entries(&self, count: usize) -> Vec<ExactComplex> {
        let mut out = self.base.leading_entries(count);
        for (&p, (_, new)) in &self.edits {
            if let Some(slot) = out.get_mut(p as usize) {
                *slot = new.clone();
            }
        }
        out
    }

    pub(crate) fn edits(&self) -> &BTreeMap<u64, (ExactComplex, ExactComplex)> {
        &self.edits
    }

    fn conj(&self) -> Self {
        Self {
            base: self.base.conj(),
            edits: self.edits.iter().map(|(&p, (o, n))| (p, (o.conj(), n.conj()))).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorModel {
    FiniteMatrix(ComplexMatrix),
    Diagonal(DiagonalModel),
    WeightedShift(WeightedShift),
    DirectSum(Vec<OperatorModel>),
    /// `a T + b I` with `a != 0`.
    Affine { model: Box<OperatorModel>, a: ExactComplex, b: ExactComplex },
    DiagonalPerturbation(DiagonalPerturbation),
    /// `T^exponent`, `exponent >= 1`.
    Power { model: Box<OperatorModel>, exponent: u32 },
}

impl OperatorModel {
    pub fn affine(model: OperatorModel, a: ExactComplex, b: ExactComplex) -> Result<Self, OperatorError> {
        let m = OperatorModel::Affine { model: Box::new(model), a, b };
        m.validate()?;
        Ok(m)
    }

    pub fn power(model: OperatorModel, exponent: u32) -> Result<Self, OperatorError> {
        let m = OperatorModel::Power { model: Box::new(model), exponent };
        m.validate()?;
        Ok(m)
    }

    pub fn direct_sum(summands: Vec<OperatorModel>) -> Result<Self, OperatorError> {
        let m = OperatorModel::DirectSum(summands);
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), OperatorError> {
        match self {
            OperatorModel::FiniteMatrix(a) => {
                a.require_square()?;
            }
            OperatorModel::Diagonal(_) | OperatorModel::DiagonalPerturbation(_) => {}
            OperatorModel::WeightedShift(s) => s.weights.validate()?,
            OperatorModel::DirectSum(parts) => {
                if parts.is_empty() {
                    return Err(OperatorError::InvalidModel("a direct sum needs at least one summand".into()));
                }
                for p in parts {
                    p.validate()?;
                }
            }
            OperatorModel::Affine { model, a, .. } => {
                if a.is_zero() {
                    return Err(OperatorError::InvalidModel("affine coefficient a must be nonzero".into()));
                }
                model.validate()?;
            }
            OperatorModel::Power { model, exponent } => {
                if *exponent == 0 {
                    return Err(OperatorError::InvalidModel("power exponent must be positive".into()));
                }
                model.validate()?;
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> Dim {
        match self {
            OperatorModel::FiniteMatrix(a) => Dim::Finite(a.rows() as u64),
            OperatorModel::Diagonal(d) => d.dimension(),
            OperatorModel::DiagonalPerturbation(p) => p.base.dimension(),
            OperatorModel::WeightedShift(_) => Dim::Infinite,
            OperatorModel::DirectSum(parts) => parts.iter().map(OperatorModel::dimension).sum(),
            OperatorModel::Affine { model, .. } | OperatorModel::Power { model, .. } => model.dimension(),
        }
    }
}

/// `T*` in the same family: conjugated diagonals, shifts with the direction
/// flipped (weights are real), componentwise on sums, affine and powers.
pub fn adjoint_model(m: &OperatorModel) -> OperatorModel {
    match m {
        OperatorModel::FiniteMatrix(a) => OperatorModel::FiniteMatrix(a.adjoint()),
        OperatorModel::Diagonal(d) => OperatorModel::Diagonal(d.conj()),
        OperatorModel::DiagonalPerturbation(p) => OperatorModel::DiagonalPerturbation(p.conj()),
        OperatorModel::WeightedShift(s) => OperatorModel::WeightedShift(WeightedShift {
            direction: s.direction.flip(),
            weights: s.weights.clone(),
        }),
        OperatorModel::DirectSum(parts) => OperatorModel::DirectSum(parts.iter().map(adjoint_model).collect()),
        OperatorModel::Affine { model, a, b } => {
            OperatorModel::Affine { model: Box::new(adjoint_model(model)), a: a.conj(), b: b.conj() }
        }
        OperatorModel::Power { model, exponent } => {
            OperatorModel::Power { model: Box::new(adjoint_model(model)), exponent: *exponent }
        }
    }
}

/// Compression to the first `n` basis vectors (fewer for finite summands).
///
/// Direct sums are truncated summand by summand, powers as the power of the
/// truncation. Only meant for residual checks of algebraic identities on
/// diagonal models, where compression commutes with the inverse
/// construction; it says nothing about the spectrum of a shift.
pub fn truncate(m: &OperatorModel, n: usize) -> Result<ComplexMatrix, OperatorError> {
    if n == 0 {
        return Err(OperatorError::InvalidModel("truncation size must be at least 1".into()));
    }
    let diag = |entries: Vec<ExactComplex>| {
        ComplexMatrix::diag(&entries.iter().map(ExactComplex::to_c64).collect::<Vec<_>>())
    };
    Ok(match m {
        OperatorModel::FiniteMatrix(a) => {
            let k = n.min(a.rows());
            ComplexMatrix::wrap(a.as_dmatrix().view((0, 0), (k, k)).into_owned())
        }
        OperatorModel::Diagonal(d) => diag(d.leading_entries(n)),
        OperatorModel::DiagonalPerturbation(p) => diag(p.leading_entries(n)),
        OperatorModel::WeightedShift(s) => {
            let mut t = nalgebra::DMatrix::zeros(n, n);
            for k in 0..n.saturating_sub(1) {
                let w = num::complex::Complex64::new(rational_to_f64(&s.weights.weight(k as u64 + 1)), 0.0);
                match s.direction {
                    Direction::Left => t[(k, k + 1)] = w,
                    Direction::Right => t[(k + 1, k)] = w,
                }
            }
            ComplexMatrix::wrap(t)
        }
        OperatorModel::DirectSum(parts) => {
            let mut blocks = parts.iter().map(|p| truncate(p, n));
            let first = blocks.next().expect("validated direct sums are nonempty")?;
            blocks.try_fold(first, |acc, b| Ok::<_, OperatorError>(acc.direct_sum(&b?)))?
        }
        OperatorModel::Affine { model, a, b } => {
            let t = truncate(model, n)?;
            let k = t.rows();
            t.scale(a.to_c64()).add(&ComplexMatrix::identity(k).scale(b.to_c64()))?
        }
        OperatorModel::Power { model, exponent } => truncate(model, n)?.power(*exponent)?,
    })
}
