//! Local data of `(T - μ)^n` for every model, computed by structural recursion.

use super::model::{OperatorModel, Weights};
use super::model::Direction;
use super::spectrum::perturbed_spectrum;
use super::{Dim, OperatorError};
use crate::exact::ExactComplex;
use crate::linalg::{numerical_rank, ComplexMatrix, ToleranceConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Local {
    /// `dim N((T - μ)^n)`
    pub alpha: Dim,
    /// Codimension of the closure of the range of `(T - μ)^n`.
    pub beta: Dim,
    pub closed_range: bool,
    /// `μ ∈ σ(T)`
    pub in_spectrum: bool,
    /// `μ ∈ iso σ(T)`
    pub isolated: bool,
    /// `μ` is a resolvent point or a pole of the resolvent.
    pub pole: bool,
}

impl Local {
    const RESOLVENT: Local = Local {
        alpha: Dim::ZERO,
        beta: Dim::ZERO,
        closed_range: true,
        in_spectrum: false,
        isolated: false,
        pole: true,
    };
}

pub(crate) fn local(m: &OperatorModel, n: u32, mu: &ExactComplex, cfg: &ToleranceConfig) -> Result<Local, OperatorError> {
    match m {
        OperatorModel::FiniteMatrix(a) => matrix_local(a, n, mu, cfg),
        OperatorModel::Diagonal(d) => Ok(diagonal_local(d.count(mu), &d.value_set(), mu)),
        OperatorModel::DiagonalPerturbation(p) => Ok(diagonal_local(p.count(mu), &perturbed_spectrum(p), mu)),
        OperatorModel::WeightedShift(s) => {
            let k = Dim::Finite(n as u64);
            let sided = |closed_range: bool, isolated: bool| {
                let (alpha, beta) = match s.direction {
                    Direction::Left => (k, Dim::ZERO),
                    Direction::Right => (Dim::ZERO, k),
                };
                Local { alpha, beta, closed_range, in_spectrum: true, isolated, pole: false }
            };
            match &s.weights {
                Weights::Constant { value, .. } => {
                    let r2 = value * value;
                    let d2 = mu.norm_sqr();
                    if d2 == r2 {
                        Err(OperatorError::UnsupportedSpectralShape(format!(
                            "{mu} lies on the boundary of the disk spectrum"
                        )))
                    } else if d2 > r2 {
                        Ok(Local::RESOLVENT)
                    } else {
                        Ok(sided(true, false))
                    }
                }
                // weights tend to 0, so the range is never closed
                Weights::Null { .. } => Ok(if mu.is_zero() { sided(false, true) } else { Local::RESOLVENT }),
            }
        }
        OperatorModel::DirectSum(parts) => {
            let mut out = Local { isolated: true, ..Local::RESOLVENT };
            for p in parts {
                let l = local(p, n, mu, cfg)?;
                out.alpha = out.alpha + l.alpha;
                out.beta = out.beta + l.beta;
                out.closed_range &= l.closed_range;
                out.in_spectrum |= l.in_spectrum;
                out.isolated &= l.isolated || !l.in_spectrum;
                out.pole &= l.pole;
            }
            out.isolated &= out.in_spectrum;
            Ok(out)
        }
        OperatorModel::Affine { model, a, b } => {
            // (aT + b - μ)^n = a^n (T - (μ - b)/a)^n
            let inv = a.recip().ok_or_else(|| OperatorError::InvalidModel("affine coefficient a must be nonzero".into()))?;
            local(model, n, &((mu - b) * inv), cfg)
        }
        OperatorModel::Power { model, exponent } => {
            if !mu.is_zero() {
                return Err(OperatorError::UnsupportedSpectralShape(
                    "powers are only resolved at 0".into(),
                ));
            }
            local(model, n * exponent, mu, cfg)
        }
    }
}

fn diagonal_local(count: Dim, spectrum: &crate::spectral_sets::SpectrumModel, mu: &ExactComplex) -> Local {
    let in_spectrum = spectrum.contains(mu);
    let acc = spectrum.acc_contains(mu);
    Local {
        alpha: count,
        beta: count,
        closed_range: !acc,
        in_spectrum,
        isolated: in_spectrum && !acc,
        pole: !acc,
    }
}

fn matrix_local(a: &ComplexMatrix, n: u32, mu: &ExactComplex, cfg: &ToleranceConfig) -> Result<Local, OperatorError> {
    let size = a.require_square()?;
    let shift = ComplexMatrix::identity(size).scale(mu.to_c64());
    let b = a.sub(&shift)?;
    let single = size - numerical_rank(&b, cfg);
    let defect = if n == 1 { single } else { size - numerical_rank(&b.power(n)?, cfg) };
    let d = Dim::Finite(defect as u64);
    Ok(Local {
        alpha: d,
        beta: d,
        closed_range: true,
        in_spectrum: single > 0,
        isolated: single > 0,
        pole: true,
    })
}
