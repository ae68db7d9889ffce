use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::{matrix_form, prefixed, sort_checks, zero_selection, ReportError, Tolerances, TOOL_VERSION};
use crate::exact::ExactComplex;
use crate::gz::{
    additive_split, drazin_inverse, gz_inverse_for_set, multiplicative_split, punctured_neighborhood_check, Check,
    EigenSelection, GzError,
};
use crate::linalg::{ComplexMatrix, ToleranceConfig};
use crate::operators::{
    adjoint_model, classify, gz_inverse_diagonal, index, perturb, Index, OperatorError, OperatorModel,
};

/// Seed of the random edits in the perturbation suite.
pub const PERTURBATION_SEED: u64 = 0;
/// Edits are placed among the first this many diagonal entries.
const EDIT_WINDOW: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Drazin,
    Gz,
    Splits,
    Punctured,
    Index,
    Perturbation,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] =
        [Suite::Drazin, Suite::Gz, Suite::Splits, Suite::Punctured, Suite::Index, Suite::Perturbation];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Drazin => "drazin",
            Suite::Gz => "gz",
            Suite::Splits => "splits",
            Suite::Punctured => "punctured",
            Suite::Index => "index",
            Suite::Perturbation => "perturbation",
            Suite::All => "all",
        }
    }

    fn default_samples(self) -> usize {
        match self {
            Suite::Perturbation => 3,
            _ => 8,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.as_str() == s)
            .ok_or_else(|| ReportError::Parse(format!("unknown suite `{s}` (drazin, gz, splits, punctured, index, perturbation, all)")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub kind: &'static str,
    pub tool_version: &'static str,
    pub operator_id: String,
    pub suite: Suite,
    /// `None` means each suite used its own default.
    pub samples: Option<usize>,
    /// Suites that do not apply to this operator, with the reason.
    pub skipped: BTreeMap<String, String>,
    /// Suites that apply but stopped on an error.
    pub errors: BTreeMap<String, String>,
    /// Quantities the checks were computed from, keyed like the checks.
    pub values: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub tolerances: Tolerances,
}

struct Outcome {
    checks: Vec<Check>,
    values: BTreeMap<String, Value>,
}

enum SuiteError {
    NotApplicable(String),
    /// The suite applies but could not finish.
    Failed(String),
}

type SuiteResult = Result<Outcome, SuiteError>;

fn failed(e: impl fmt::Display) -> SuiteError {
    SuiteError::Failed(e.to_string())
}

/// Runs one suite, or every applicable suite concurrently for `Suite::All`.
/// A named suite that does not apply yields a failing `<suite>.applicable`
/// check.
pub fn verify(
    model: &OperatorModel,
    operator_id: &str,
    suite: Suite,
    samples: Option<usize>,
    tol: &Tolerances,
) -> VerifyReport {
    let cfg = &tol.config;
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let results: Vec<(Suite, SuiteResult)> = std::thread::scope(|scope| {
        let handles: Vec<_> = suites
            .iter()
            .map(|&s| (s, scope.spawn(move || run_suite(model, s, samples.unwrap_or(s.default_samples()), cfg))))
            .collect();
        handles
            .into_iter()
            .map(|(s, h)| (s, h.join().unwrap_or_else(|_| Err(failed("suite panicked")))))
            .collect()
    });

    let mut checks = Vec::new();
    let mut values = BTreeMap::new();
    let mut skipped = BTreeMap::new();
    let mut errors = BTreeMap::new();
    for (s, r) in results {
        match r {
            Ok(o) => {
                checks.extend(o.checks);
                values.extend(o.values);
            }
            Err(SuiteError::NotApplicable(reason)) => {
                if suite != Suite::All {
                    checks.push(Check::new(&format!("{s}.applicable"), false, f64::NAN));
                }
                skipped.insert(s.to_string(), reason);
            }
            Err(SuiteError::Failed(reason)) => {
                checks.push(Check::new(&format!("{s}.completed"), false, f64::NAN));
                errors.insert(s.to_string(), reason);
            }
        }
    }
    if checks.is_empty() {
        // every suite was skipped; nothing was verified
        checks.push(Check::new(&format!("{suite}.applicable"), false, f64::NAN));
    }
    sort_checks(&mut checks);
    let passed = checks.iter().all(|c| c.pass);
    VerifyReport {
        kind: "verify",
        tool_version: TOOL_VERSION,
        operator_id: operator_id.to_string(),
        suite,
        samples,
        skipped,
        errors,
        values,
        checks,
        passed,
        tolerances: *tol,
    }
}

fn run_suite(m: &OperatorModel, s: Suite, samples: usize, cfg: &ToleranceConfig) -> SuiteResult {
    match s {
        Suite::Drazin => drazin_suite(m, cfg),
        Suite::Gz => gz_suite(m, cfg),
        Suite::Splits => splits_suite(m, cfg),
        Suite::Punctured => punctured_suite(m, samples, cfg),
        Suite::Index => index_suite(m, cfg),
        Suite::Perturbation => perturbation_suite(m, samples, cfg),
        Suite::All => unreachable!("expanded by verify"),
    }
}

fn dense(m: &OperatorModel) -> Result<ComplexMatrix, SuiteError> {
    match matrix_form(m) {
        Ok(Some(a)) => Ok(a),
        Ok(None) => Err(SuiteError::NotApplicable("needs a finite-dimensional non-diagonal model".into())),
        Err(e) => Err(failed(e)),
    }
}

fn drazin_suite(m: &OperatorModel, cfg: &ToleranceConfig) -> SuiteResult {
    let a = dense(m)?;
    let cert = drazin_inverse(&a, cfg).map_err(failed)?;
    let mut values = BTreeMap::new();
    values.insert("drazin.claimed_index".into(), json!(cert.claimed_index));
    values.insert("drazin.dis".into(), json!(cert.dis));
    Ok(Outcome { checks: prefixed("drazin", cert.checks), values })
}

fn gz_suite(m: &OperatorModel, cfg: &ToleranceConfig) -> SuiteResult {
    if let OperatorModel::Diagonal(d) = m {
        let sel = zero_selection(&d.value_set()).ok_or_else(|| SuiteError::NotApplicable("no spectral set around 0 to invert".into()))?;
        let g = gz_inverse_diagonal(m, &sel).map_err(failed)?;
        let mut values = BTreeMap::new();
        values.insert("gz.spectrum".into(), json!(g.spectrum));
        return Ok(Outcome { checks: prefixed("gz", g.certificate.checks), values });
    }
    let a = dense(m)?;
    let g = gz_inverse_for_set(&a, &EigenSelection::zero_cluster(), None, cfg).map_err(failed)?;
    let mut values = BTreeMap::new();
    values.insert("gz.r".into(), json!([g.r.re, g.r.im]));
    Ok(Outcome { checks: prefixed("gz", g.certificate.checks), values })
}

/// `P_σ` for the zero cluster.
fn zero_projection(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix, SuiteError> {
    gz_inverse_for_set(a, &EigenSelection::zero_cluster(), None, cfg).map(|g| g.projection).map_err(failed)
}

fn splits_suite(m: &OperatorModel, cfg: &ToleranceConfig) -> SuiteResult {
    let a = dense(m)?;
    let p = zero_projection(&a, cfg)?;
    let add = additive_split(&a, &p, cfg).map_err(failed)?;
    let mul = multiplicative_split(&a, &p, cfg).map_err(failed)?;
    let mut checks = prefixed("splits.additive", add.checks);
    checks.extend(prefixed("splits.multiplicative", mul.checks));
    Ok(Outcome { checks, values: BTreeMap::new() })
}

fn punctured_suite(m: &OperatorModel, samples: usize, cfg: &ToleranceConfig) -> SuiteResult {
    let a = dense(m)?;
    let p_sigma = zero_projection(&a, cfg)?;
    let p = ComplexMatrix::identity(a.rows()).sub(&p_sigma).map_err(failed)?;
    let rep = match punctured_neighborhood_check(&a, &p, samples, cfg) {
        Err(GzError::DegenerateRestriction) => return Err(SuiteError::NotApplicable("A has no invertible part away from 0".into())),
        other => other.map_err(failed)?,
    };
    let checks = rep
        .samples
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let miss = s.kernel_dim.abs_diff(rep.alpha) + s.codim.abs_diff(rep.beta);
            Check::new(&format!("punctured.sample_{k:02}"), s.pass, miss as f64)
        })
        .collect();
    let mut values = BTreeMap::new();
    values.insert("punctured.alpha".into(), json!(rep.alpha));
    values.insert("punctured.beta".into(), json!(rep.beta));
    values.insert("punctured.gamma".into(), json!(rep.gamma));
    values.insert("punctured.radius".into(), json!(rep.radius));
    Ok(Outcome { checks, values })
}

fn scaled(i: Index, k: i64) -> Index {
    match i {
        Index::Finite(v) => Index::Finite(v * k),
        inf => inf,
    }
}

fn index_suite(m: &OperatorModel, cfg: &ToleranceConfig) -> SuiteResult {
    let zero = ExactComplex::zero();
    let base = index(m, &zero, cfg).map_err(|e| SuiteError::NotApplicable(e.to_string()))?;
    let adj = adjoint_model(m);
    let neg = match base {
        Index::Finite(v) => Index::Finite(-v),
        Index::PlusInfinity => Index::MinusInfinity,
        Index::MinusInfinity => Index::PlusInfinity,
    };
    let mut values = BTreeMap::new();
    values.insert("index.T".into(), json!(base));
    let mut checks = Vec::new();
    let mut law = |name: &str, model: Result<OperatorModel, OperatorError>, expected: Option<Index>| {
        let got = model.and_then(|x| index(&x, &zero, cfg));
        values.insert(format!("index.{name}"), got.as_ref().map_or(Value::Null, |i| json!(i)));
        let ok = got.ok() == expected;
        checks.push(Check::new(&format!("index.{name}"), ok, if ok { 0.0 } else { 1.0 }));
    };
    law("adjoint", Ok(adj.clone()), Some(neg));
    law("power_2", OperatorModel::power(m.clone(), 2), Some(scaled(base, 2)));
    law("power_3", OperatorModel::power(m.clone(), 3), Some(scaled(base, 3)));
    // infinite + (-infinite) is undefined, so T ⊕ T* is then not semi-Fredholm
    let sum_expected = matches!(base, Index::Finite(_)).then_some(Index::Finite(0));
    law("sum_with_adjoint", OperatorModel::direct_sum(vec![m.clone(), adj]), sum_expected);
    Ok(Outcome { checks, values })
}

/// Random small rational: `p/q` with `|p| <= 8`, `1 <= q <= 8`.
fn random_value(rng: &mut ChaCha8Rng) -> ExactComplex {
    ExactComplex::frac(rng.gen_range(-8..=8), rng.gen_range(1..=8))
}

fn perturbation_suite(m: &OperatorModel, samples: usize, cfg: &ToleranceConfig) -> SuiteResult {
    if !matches!(m, OperatorModel::Diagonal(_) | OperatorModel::DiagonalPerturbation(_)) {
        return Err(SuiteError::NotApplicable("needs a diagonal model".into()));
    }
    let window = m.dimension().finite().map_or(EDIT_WINDOW, |n| n.min(EDIT_WINDOW));
    if window == 0 {
        return Err(SuiteError::NotApplicable("no entries to edit".into()));
    }
    let zero = ExactComplex::zero();
    let before = classify(m, &zero, cfg).map_err(failed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(PERTURBATION_SEED);
    let mut checks = Vec::new();
    let mut values = BTreeMap::new();
    values.insert("perturbation.before".into(), json!(before.class));
    for k in 0..samples {
        let edits: BTreeMap<u64, ExactComplex> =
            (0..rng.gen_range(1..=3)).map(|_| (rng.gen_range(0..window), random_value(&mut rng))).collect();
        let name = format!("perturbation.edit_{k:02}");
        let shown: BTreeMap<String, &ExactComplex> = edits.iter().map(|(i, v)| (i.to_string(), v)).collect();
        values.insert(format!("{name}.support"), json!(shown));
        let after = perturb(m, edits).and_then(|p| classify(&p, &zero, cfg));
        let ok = match &after {
            Ok(a) => a.class.is_gz() == before.class.is_gz() && a.tiers.in_acc_acc == before.tiers.in_acc_acc,
            Err(_) => false,
        };
        values.insert(format!("{name}.after"), after.map_or(Value::Null, |a| json!(a.class)));
        checks.push(Check::new(&name, ok, if ok { 0.0 } else { 1.0 }));
    }
    Ok(Outcome { checks, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{DiagonalModel, WeightedShift};

    fn run(m: &OperatorModel, s: Suite) -> VerifyReport {
        verify(m, "t", s, None, &Tolerances::default())
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn jordan_block_drazin_suite() {
        let m = OperatorModel::FiniteMatrix(ComplexMatrix::jordan_block(num::complex::Complex64::new(0.0, 0.0), 3));
        let r = run(&m, Suite::Drazin);
        assert!(r.passed, "{:?}", r.checks);
        assert_eq!(r.values["drazin.dis"], json!(3));
        assert_eq!(r.values["drazin.claimed_index"], json!(3));
    }

    #[test]
    fn shift_index_laws() {
        let m = OperatorModel::WeightedShift(WeightedShift::left());
        let r = run(&m, Suite::Index);
        assert!(r.passed, "{:?}", r.checks);
        assert_eq!(r.values["index.T"], json!(1));
        assert_eq!(r.values["index.adjoint"], json!(-1));
        assert_eq!(r.values["index.power_3"], json!(3));
        assert_eq!(r.values["index.sum_with_adjoint"], json!(0));
    }

    #[test]
    fn harmonic_perturbation_is_stable() {
        let m = OperatorModel::Diagonal(DiagonalModel::harmonic());
        let r = run(&m, Suite::Perturbation);
        assert!(r.passed, "{:?}", r);
        assert_eq!(r.checks.len(), 3);
        assert_eq!(r, run(&m, Suite::Perturbation));
    }

    #[test]
    fn inapplicable_suite_fails_but_all_skips() {
        let m = OperatorModel::WeightedShift(WeightedShift::left());
        let r = run(&m, Suite::Drazin);
        assert!(!r.passed);
        assert_eq!(r.checks[0].name, "drazin.applicable");
        let all = run(&m, Suite::All);
        assert!(all.skipped.contains_key("drazin"));
        assert!(all.passed, "{:?}", all.checks);
        let nothing = OperatorModel::direct_sum(vec![m, OperatorModel::Diagonal(DiagonalModel::harmonic())]).unwrap();
        let none = run(&OperatorModel::power(nothing, 1).unwrap(), Suite::All);
        assert_eq!(none.skipped.len(), Suite::EACH.len());
        assert!(!none.passed);
    }

    #[test]
    fn matrix_all_suites() {
        let a = ComplexMatrix::jordan_block(num::complex::Complex64::new(0.0, 0.0), 2)
            .direct_sum(&ComplexMatrix::diag_real(&[2.0, -1.0]));
        let r = run(&OperatorModel::FiniteMatrix(a), Suite::All);
        assert!(r.passed, "{:?}", r.checks);
        assert_eq!(r.skipped.keys().collect::<Vec<_>>(), vec!["perturbation"]);
        assert!(r.checks.windows(2).all(|w| w[0].name <= w[1].name));
    }
}
