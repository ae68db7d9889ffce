use nalgebra::DMatrix;
use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use super::GzError;
use crate::linalg::{eigenvalues, ComplexMatrix, ToleranceConfig};

/// Positively oriented circle used for resolvent integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ContourJson", into = "ContourJson")]
pub struct Contour {
    pub center: Complex64,
    pub radius: f64,
    pub initial_nodes: usize,
    pub max_nodes: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContourJson {
    pub center: [f64; 2],
    pub radius: f64,
    #[serde(default = "default_initial_nodes")]
    pub initial_nodes: usize,
    #[serde(default = "default_max_nodes")]
    pub max_nodes: usize,
}

fn default_initial_nodes() -> usize {
    32
}

fn default_max_nodes() -> usize {
    4096
}

impl TryFrom<ContourJson> for Contour {
    type Error = GzError;

    fn try_from(j: ContourJson) -> Result<Self, GzError> {
        let c = Contour {
            center: Complex64::new(j.center[0], j.center[1]),
            radius: j.radius,
            initial_nodes: j.initial_nodes,
            max_nodes: j.max_nodes,
        };
        c.validate()?;
        Ok(c)
    }
}

impl From<Contour> for ContourJson {
    fn from(c: Contour) -> Self {
        ContourJson {
            center: [c.center.re, c.center.im],
            radius: c.radius,
            initial_nodes: c.initial_nodes,
            max_nodes: c.max_nodes,
        }
    }
}

impl Contour {
    pub fn circle(center: Complex64, radius: f64) -> Result<Self, GzError> {
        let c = Contour { center, radius, initial_nodes: default_initial_nodes(), max_nodes: default_max_nodes() };
        c.validate()?;
        Ok(c)
    }

    pub fn with_nodes(mut self, initial: usize, max: usize) -> Result<Self, GzError> {
        self.initial_nodes = initial;
        self.max_nodes = max;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), GzError> {
        if !(self.center.re.is_finite() && self.center.im.is_finite()) {
            return Err(GzError::InvalidContour("center must be finite".into()));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(GzError::InvalidContour("radius must be positive".into()));
        }
        if self.initial_nodes < 2 || self.initial_nodes > self.max_nodes {
            return Err(GzError::InvalidContour("need 2 <= initial_nodes <= max_nodes".into()));
        }
        Ok(())
    }

    pub fn clearance(&self) -> f64 {
        1e-3 * self.radius
    }

    /// Distance from `z` to the circle.
    pub fn distance(&self, z: Complex64) -> f64 {
        ((z - self.center).norm() - self.radius).abs()
    }

    pub fn encloses(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }

    fn check_clearance(&self, points: &[Complex64]) -> Result<(), GzError> {
        let distance = points.iter().map(|&z| self.distance(z)).fold(f64::INFINITY, f64::min);
        if distance < self.clearance() {
            return Err(GzError::ContourTooClose { distance, clearance: self.clearance() });
        }
        Ok(())
    }
}

/// `(1 / 2πi) ∮ (λI - A)^{-1} dλ`: the spectral projection for the enclosed eigenvalues.
pub fn riesz_projection(a: &ComplexMatrix, contour: &Contour, cfg: &ToleranceConfig) -> Result<ComplexMatrix, GzError> {
    a.require_square()?;
    contour.validate()?;
    contour.check_clearance(&eigenvalues(a)?)?;
    quadrature(a, contour, cfg, |_| Complex64::new(1.0, 0.0))
}

/// `(1 / 2πi) ∮ λ^{-1} (λI - A)^{-1} dλ` over a circle that excludes 0.
pub fn contour_gz_inverse(a: &ComplexMatrix, contour: &Contour, cfg: &ToleranceConfig) -> Result<ComplexMatrix, GzError> {
    a.require_square()?;
    contour.validate()?;
    if contour.encloses(Complex64::new(0.0, 0.0)) {
        return Err(GzError::InvalidContour("the circle must leave 0 outside".into()));
    }
    let mut points = eigenvalues(a)?;
    points.push(Complex64::new(0.0, 0.0));
    contour.check_clearance(&points)?;
    quadrature(a, contour, cfg, |z| z.inv())
}

/// Trapezoidal rule on the circle, doubling the node count (and reusing the
/// previous nodes) until successive estimates differ by less than
/// `quadrature_tol * max(1, ‖estimate‖)`.
fn quadrature(
    a: &ComplexMatrix,
    contour: &Contour,
    cfg: &ToleranceConfig,
    weight: impl Fn(Complex64) -> Complex64,
) -> Result<ComplexMatrix, GzError> {
    let n = a.rows();
    let m = a.as_dmatrix();
    let term = |theta: f64| -> Result<DMatrix<Complex64>, GzError> {
        let offset = Complex64::from_polar(contour.radius, theta);
        let z = contour.center + offset;
        let shifted = DMatrix::from_diagonal_element(n, n, z) - m;
        let resolvent = shifted.lu().try_inverse().ok_or_else(|| {
            GzError::ContourTooClose { distance: 0.0, clearance: contour.clearance() }
        })?;
        Ok(resolvent * (weight(z) * offset))
    };

    let mut nodes = contour.initial_nodes;
    let mut sum = DMatrix::zeros(n, n);
    for k in 0..nodes {
        sum += term(std::f64::consts::TAU * k as f64 / nodes as f64)?;
    }
    let mut estimate = &sum / Complex64::new(nodes as f64, 0.0);
    let mut change = f64::INFINITY;
    while 2 * nodes <= contour.max_nodes {
        let doubled = 2 * nodes;
        for k in (1..doubled).step_by(2) {
            sum += term(std::f64::consts::TAU * k as f64 / doubled as f64)?;
        }
        nodes = doubled;
        let next = &sum / Complex64::new(nodes as f64, 0.0);
        change = (&next - &estimate).norm();
        estimate = next;
        if change < cfg.quadrature_tol * estimate.norm().max(1.0) {
            return Ok(ComplexMatrix::wrap(estimate));
        }
    }
    Err(GzError::NoConvergence { nodes, change })
}
