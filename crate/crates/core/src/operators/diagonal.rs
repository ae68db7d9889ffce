//! g_z-inverses and finite perturbations of diagonal models, verified in
//! exact arithmetic.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::model::{cluster_count, DiagonalModel, DiagonalPerturbation, OperatorModel};
use super::spectrum::perturbed_spectrum;
use super::{Dim, OperatorError};
use crate::exact::ExactComplex;
use crate::gz::Check;
use crate::spectral_sets::{SpectralSetSelection, SpectrumModel};

/// Entries of `T` sampled for the entrywise identities.
const SAMPLED_ENTRIES: usize = 256;
/// Values per cluster used when comparing two closed sets.
const SET_SAMPLES: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalCertificate {
    /// Sorted by name. Residuals count mismatches.
    pub checks: Vec<Check>,
    pub sampled_entries: usize,
}

impl DiagonalCertificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalGzInverse {
    /// Diagonal model of `S`.
    pub inverse: DiagonalModel,
    /// `σ(S)`, the closure of its entries.
    pub spectrum: SpectrumModel,
    /// `{0} ∪ {1/λ : λ ∈ σ(T) \ σ}`; 0 is only included when `σ` is
    /// nonempty (otherwise `S = T^{-1}`).
    pub expected_spectrum: SpectrumModel,
    pub certificate: DiagonalCertificate,
}

/// `T^D_σ` of a diagonal model: entries `1/d` for `d ∉ σ` and `0` for `d ∈ σ`.
pub fn gz_inverse_diagonal(m: &OperatorModel, sel: &SpectralSetSelection) -> Result<DiagonalGzInverse, OperatorError> {
    let OperatorModel::Diagonal(d) = m else {
        return Err(OperatorError::InvalidModel("g_z-inverses in closed form need a diagonal model".into()));
    };
    let spec = d.value_set();
    let invalid = |msg: &str| Err(OperatorError::InvalidSpectralSet(msg.into()));
    if !sel.is_spectral_set(&spec)? {
        return invalid("a selected and an unselected part accumulate at a common point");
    }
    let zero = ExactComplex::zero();
    if spec.contains(&zero) && !sel.contains(&spec, &zero) {
        return invalid("0 is in the spectrum but outside σ");
    }

    let inverse = build_inverse(d, &spec, sel)?;
    let inv_spec = inverse.value_set();
    let selected = sel.selected_part(&spec)?;
    let reciprocal = sel.complement(&spec)?.reciprocal_image()?;
    let expected = if selected.is_empty() {
        reciprocal
    } else {
        reciprocal.union(&SpectrumModel::from_points([zero.clone()]))?
    };

    let mut checks = Vec::new();
    let samples = sampled_entries(d, sel, &spec);
    let (mut comm, mut inner, mut defect, mut present, mut mult) = (0usize, 0usize, 0usize, 0usize, 0usize);
    for t in &samples {
        let in_sigma = sel.contains(&spec, t);
        let s = if in_sigma { zero.clone() } else { t.recip().expect("0 is never outside σ") };
        if t * &s != &s * t {
            comm += 1;
        }
        if &s * t * &s != s {
            inner += 1;
        }
        // T²S - T is 0 off σ and -T on σ
        let e = t * t * &s - t;
        if e != if in_sigma { -t } else { zero.clone() } {
            defect += 1;
        }
        if !inv_spec.contains(&s) {
            present += 1;
        }
        if !in_sigma && inverse.count(&s) != d.count(t) {
            mult += 1;
        }
    }
    checks.push(Check::new("commutation", comm == 0, comm as f64));
    checks.push(Check::new("inner", inner == 0, inner as f64));
    checks.push(Check::new("defect_entries", defect == 0, defect as f64));
    checks.push(Check::new("entries_in_spectrum", present == 0, present as f64));
    checks.push(Check::new("entry_multiplicities", mult == 0, mult as f64));

    let expected_zeros = if selected.clusters().is_empty() {
        selected.points().iter().map(|v| d.count(v)).sum()
    } else {
        Dim::Infinite
    };
    let zeros_ok = inverse.count(&zero) == expected_zeros;
    checks.push(Check::new("zero_multiplicity", zeros_ok, if zeros_ok { 0.0 } else { 1.0 }));

    let zeroloid = selected.affine_image(&-ExactComplex::one(), &zero).is_zeroloid();
    checks.push(Check::new("defect_zeroloid", zeroloid, if zeroloid { 0.0 } else { 1.0 }));

    let mismatch = set_mismatch(&inv_spec, &expected);
    checks.push(Check::new("spectrum_mapping", mismatch == 0, mismatch as f64));

    // a diagonal S always has ascent <= 1; descent <= 1 iff its nonzero
    // entries stay away from 0
    let regular = !inv_spec.acc_contains(&zero);
    checks.push(Check::new("inverse_regular", regular, if regular { 0.0 } else { 1.0 }));

    checks.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(DiagonalGzInverse {
        inverse,
        spectrum: inv_spec,
        expected_spectrum: expected,
        certificate: DiagonalCertificate { checks, sampled_entries: samples.len() },
    })
}

fn build_inverse(d: &DiagonalModel, spec: &SpectrumModel, sel: &SpectralSetSelection) -> Result<DiagonalModel, OperatorError> {
    let holes = sel.shared_selected_values(spec);
    let mut moved: BTreeMap<usize, BTreeSet<u64>> = BTreeMap::new();
    for &(c, item) in &sel.boundary_moves {
        moved.entry(c).or_default().insert(item);
    }
    let recip = |v: &ExactComplex| {
        v.recip().ok_or_else(|| OperatorError::InvalidSpectralSet("0 is in the spectrum but outside σ".into()))
    };

    let mut zeros = Dim::ZERO;
    let mut points: Vec<(ExactComplex, Dim)> = Vec::new();
    let mut clusters = Vec::new();
    for (v, m) in d.points() {
        if sel.contains(spec, v) {
            zeros = zeros + *m;
        } else {
            points.push((recip(v)?, *m));
        }
    }
    let empty = BTreeSet::new();
    for (i, c) in d.clusters().iter().enumerate() {
        let items = moved.get(&i).unwrap_or(&empty);
        let (piece_points, piece_clusters) = if sel.selected_clusters.contains(&i) {
            zeros = Dim::Infinite;
            c.items_only(items)
        } else {
            for _ in items {
                zeros = zeros + if c.depth() == 1 { Dim::Finite(1) } else { Dim::Infinite };
            }
            c.without_items(items)
        };
        for v in piece_points {
            if sel.contains(spec, &v) {
                zeros = zeros + Dim::Finite(1);
            } else {
                points.push((recip(&v)?, Dim::Finite(1)));
            }
        }
        for pc in piece_clusters {
            let removed: u64 = holes.iter().map(|h| cluster_count(&pc, h)).sum();
            zeros = zeros + Dim::Finite(removed);
            let (pp, cc) = pc.excise(&holes);
            for v in pp {
                points.push((recip(&v)?, Dim::Finite(1)));
            }
            for k in cc {
                clusters.push(k.reciprocal()?);
            }
        }
    }
    if !zeros.is_zero() {
        points.push((ExactComplex::zero(), zeros));
    }
    DiagonalModel::new(points, clusters)
}

/// Leading entries, the explicit points, the moved items and the shared values.
fn sampled_entries(d: &DiagonalModel, sel: &SpectralSetSelection, spec: &SpectrumModel) -> Vec<ExactComplex> {
    let mut out: BTreeSet<ExactComplex> = d.leading_entries(SAMPLED_ENTRIES).into_iter().collect();
    out.extend(d.points().iter().map(|(v, _)| v.clone()));
    for &(c, item) in &sel.boundary_moves {
        let cluster = &d.clusters()[c];
        if cluster.depth() == 1 {
            out.insert(cluster.level1_value(item));
        } else {
            for fam in cluster.family(item) {
                out.extend(fam.leaves(8));
            }
        }
    }
    out.extend(sel.shared_selected_values(spec).into_iter().filter(|v| !d.count(v).is_zero()));
    out.into_iter().collect()
}

/// Number of sampled disagreements between two closed sets: values,
/// accumulation points, and second accumulation points, both directions.
pub(crate) fn set_mismatch(a: &SpectrumModel, b: &SpectrumModel) -> usize {
    let one_way = |x: &SpectrumModel, y: &SpectrumModel| {
        let values = x.sample(SET_SAMPLES).iter().filter(|v| !y.contains(v)).count();
        let accs = x.acc().sample(SET_SAMPLES).iter().filter(|v| !y.acc_contains(v)).count();
        values + accs
    };
    let acc_acc = usize::from(a.acc_acc() != b.acc_acc());
    one_way(a, b) + one_way(b, a) + acc_acc
}

/// Replaces finitely many entries (positions in canonical order) of a
/// diagonal model. Perturbing a perturbation merges the edits.
///
/// The g_z tier at 0 cannot change under such an edit; that is checked and
/// reported as an error if it ever does. Lower tiers can change.
pub fn perturb(m: &OperatorModel, support: BTreeMap<u64, ExactComplex>) -> Result<OperatorModel, OperatorError> {
    let (base, mut merged, before) = match m {
        OperatorModel::Diagonal(d) => (d.clone(), BTreeMap::new(), d.value_set()),
        OperatorModel::DiagonalPerturbation(p) => (p.base().clone(), p.support(), perturbed_spectrum(p)),
        _ => return Err(OperatorError::InvalidModel("only diagonal models can be perturbed entrywise".into())),
    };
    merged.extend(support);
    let p = DiagonalPerturbation::new(base, merged)?;
    let after = perturbed_spectrum(&p);
    let zero = ExactComplex::zero();
    let (b, a) = (before.acc_acc_contains(&zero), after.acc_acc_contains(&zero));
    if a != b {
        let tier = |x: bool| if x { "not g_z" } else { "g_z" }.to_string();
        return Err(OperatorError::TierChanged { before: tier(b), after: tier(a) });
    }
    Ok(OperatorModel::DiagonalPerturbation(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ToleranceConfig;
    use crate::operators::{classify, OperatorClass};
    use crate::spectral_sets::Cluster;

    fn q(p: i64, d: i64) -> ExactComplex {
        ExactComplex::frac(p, d)
    }

    fn harmonic() -> OperatorModel {
        OperatorModel::Diagonal(DiagonalModel::harmonic())
    }

    #[test]
    fn harmonic_tail_from_three() {
        // σ = {0} ∪ {1/n : n >= 3}
        let sel = SpectralSetSelection::new().with_cluster(0).with_move(0, 1).with_move(0, 2);
        let g = gz_inverse_diagonal(&harmonic(), &sel).unwrap();
        assert!(g.certificate.passed(), "{:?}", g.certificate.checks);
        assert_eq!(g.spectrum, SpectrumModel::from_points([q(0, 1), q(1, 1), q(2, 1)]));
        assert_eq!(g.inverse.count(&q(0, 1)), Dim::Infinite);
        assert_eq!(g.inverse.count(&q(2, 1)), Dim::Finite(1));
    }

    #[test]
    fn finite_invertible_diagonal() {
        let m = OperatorModel::Diagonal(DiagonalModel::from_values(&[q(2, 1), q(5, 1)]));
        let g = gz_inverse_diagonal(&m, &SpectralSetSelection::new()).unwrap();
        assert!(g.certificate.passed(), "{:?}", g.certificate.checks);
        assert_eq!(g.inverse.leading_entries(2), vec![q(1, 2), q(1, 5)]);
        assert_eq!(g.spectrum, SpectrumModel::from_points([q(1, 2), q(1, 5)]));
    }

    #[test]
    fn infinite_zero_block() {
        let d = DiagonalModel::new([(q(0, 1), Dim::Infinite), (q(3, 1), Dim::Finite(1))], vec![]).unwrap();
        let m = OperatorModel::Diagonal(d);
        let sel = SpectralSetSelection::new().with_point(q(0, 1));
        let g = gz_inverse_diagonal(&m, &sel).unwrap();
        assert!(g.certificate.passed(), "{:?}", g.certificate.checks);
        assert_eq!(g.inverse.count(&q(0, 1)), Dim::Infinite);
        assert_eq!(g.inverse.count(&q(1, 3)), Dim::Finite(1));
    }

    #[test]
    fn zero_outside_sigma_rejected() {
        let m = OperatorModel::Diagonal(DiagonalModel::from_values(&[q(2, 1), q(0, 1)]));
        let sel = SpectralSetSelection::new().with_point(q(2, 1));
        assert!(matches!(gz_inverse_diagonal(&m, &sel), Err(OperatorError::InvalidSpectralSet(_))));
        // the limit alone is not a spectral set
        let sel = SpectralSetSelection::new().with_point(q(0, 1));
        assert!(gz_inverse_diagonal(&harmonic(), &sel).is_err());
    }

    #[test]
    fn selecting_a_cluster_away_from_zero_is_not_zeroloid() {
        let d = DiagonalModel::new([], vec![Cluster::harmonic(ExactComplex::one())]).unwrap();
        let g = gz_inverse_diagonal(&OperatorModel::Diagonal(d), &SpectralSetSelection::new().with_cluster(0)).unwrap();
        let z = g.certificate.checks.iter().find(|c| c.name == "defect_zeroloid").unwrap();
        assert!(!z.pass);
    }

    #[test]
    fn perturbation_keeps_gz_tier() {
        let cfg = ToleranceConfig::default();
        let zero = ExactComplex::zero();
        for v in [q(7, 1), q(0, 1)] {
            let p = perturb(&harmonic(), BTreeMap::from([(0, v)])).unwrap();
            assert_eq!(classify(&p, &zero, &cfg).unwrap().class, OperatorClass::GzInvertible);
        }
        let two = OperatorModel::Diagonal(DiagonalModel::from_values(&[q(2, 1)]));
        assert_eq!(classify(&two, &zero, &cfg).unwrap().class, OperatorClass::Invertible);
        let edited = perturb(&two, BTreeMap::from([(0, zero.clone())])).unwrap();
        assert_eq!(classify(&edited, &zero, &cfg).unwrap().class, OperatorClass::Browder);
    }

    #[test]
    fn perturbing_twice_merges() {
        let p = perturb(&harmonic(), BTreeMap::from([(0, q(7, 1))])).unwrap();
        let p = perturb(&p, BTreeMap::from([(1, q(9, 1))])).unwrap();
        let OperatorModel::DiagonalPerturbation(p) = p else { panic!() };
        assert_eq!(p.leading_entries(3), vec![q(7, 1), q(9, 1), q(1, 3)]);
    }
}
