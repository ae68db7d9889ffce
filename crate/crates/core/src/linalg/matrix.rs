use nalgebra::DMatrix;
use num::complex::Complex64;
use num::Zero;
use serde::{Deserialize, Serialize};

use super::LinalgError;

/// Dense complex matrix whose entries are all finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self, LinalgError> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(LinalgError::Empty);
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self(m))
    }

    /// Wraps a matrix produced internally from finite data.
    pub(crate) fn wrap(m: DMatrix<Complex64>) -> Self {
        debug_assert!(m.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        Self(m)
    }

    pub fn from_row_slice(rows: usize, cols: usize, entries: &[Complex64]) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Shape(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Self::new(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        let entries: Vec<Complex64> = rows.iter().flat_map(|row| row.iter().map(|&x| Complex64::new(x, 0.0))).collect();
        Self::from_row_slice(r, c, &entries)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn diag(values: &[Complex64]) -> Self {
        Self(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(values)))
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let v: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diag(&v)
    }

    /// `k x k` Jordan block with eigenvalue `lambda` (ones on the superdiagonal).
    pub fn jordan_block(lambda: Complex64, k: usize) -> Self {
        let mut m = DMatrix::from_diagonal_element(k, k, lambda);
        for i in 0..k.saturating_sub(1) {
            m[(i, i + 1)] = Complex64::new(1.0, 0.0);
        }
        Self(m)
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn require_square(&self) -> Result<usize, LinalgError> {
        if self.is_square() {
            Ok(self.rows())
        } else {
            Err(LinalgError::NotSquare { rows: self.rows(), cols: self.cols() })
        }
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    /// Spectral norm.
    pub fn norm2(&self) -> f64 {
        spectral_norm(&self.0)
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let (r1, c1) = self.0.shape();
        let (r2, c2) = other.0.shape();
        let mut m = DMatrix::zeros(r1 + r2, c1 + c2);
        m.view_mut((0, 0), (r1, c1)).copy_from(&self.0);
        m.view_mut((r1, c1), (r2, c2)).copy_from(&other.0);
        Self(m)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols() != other.rows() {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(Self(&self.0 * &other.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.same_shape(other)?;
        Ok(Self(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.same_shape(other)?;
        Ok(Self(&self.0 - &other.0))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(&self.0 * c)
    }

    fn same_shape(&self, other: &Self) -> Result<(), LinalgError> {
        if self.0.shape() != other.0.shape() {
            return Err(LinalgError::Shape(format!("{:?} vs {:?}", self.0.shape(), other.0.shape())));
        }
        Ok(())
    }

    /// `A^n` by repeated squaring; `A^0 = I`.
    pub fn power(&self, n: u32) -> Result<Self, LinalgError> {
        let size = self.require_square()?;
        Ok(Self(dpow(&self.0, n, size)))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.diagonal().iter().fold(Complex64::zero(), |acc, z| acc + z)
    }

    /// Entries with real and imaginary parts rounded to `digits` decimals, for reports.
    pub fn rounded(&self, digits: i32) -> Self {
        let f = 10f64.powi(digits);
        let r = |x: f64| {
            let y = (x * f).round() / f;
            if y == 0.0 {
                0.0
            } else {
                y
            }
        };
        Self(self.0.map(|z| Complex64::new(r(z.re), r(z.im))))
    }
}

pub(crate) fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    super::svd::singular_values(m).first().copied().unwrap_or(0.0)
}

pub(crate) fn dpow(m: &DMatrix<Complex64>, n: u32, size: usize) -> DMatrix<Complex64> {
    let mut result = DMatrix::identity(size, size);
    let mut base = m.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result
}

/// `{"rows": r, "cols": c, "entries": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let mut entries = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let z = m.get(i, j);
                entries.push([z.re, z.im]);
            }
        }
        MatrixJson { rows: m.rows(), cols: m.cols(), entries }
    }
}

impl TryFrom<&MatrixJson> for ComplexMatrix {
    type Error = LinalgError;

    fn try_from(j: &MatrixJson) -> Result<Self, Self::Error> {
        let entries: Vec<Complex64> = j.entries.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        ComplexMatrix::from_row_slice(j.rows, j.cols, &entries)
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        ComplexMatrix::try_from(&j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn rejects_non_finite_and_ragged() {
        assert_eq!(ComplexMatrix::from_real_rows(&[&[1.0, f64::NAN]]), Err(LinalgError::NonFinite));
        assert!(ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0]]).is_err());
        assert!(ComplexMatrix::from_row_slice(2, 2, &[c(1.0)]).is_err());
    }

    #[test]
    fn direct_sum_adjoint_power() {
        let s = ComplexMatrix::diag_real(&[1.0]).direct_sum(&ComplexMatrix::diag_real(&[2.0]));
        assert_eq!(s, ComplexMatrix::diag_real(&[1.0, 2.0]));
        let j2 = ComplexMatrix::jordan_block(c(0.0), 2);
        assert_eq!(j2.adjoint(), ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap());
        let j3 = ComplexMatrix::jordan_block(c(0.0), 3);
        assert_eq!(j3.power(3).unwrap(), ComplexMatrix::zeros(3, 3));
        assert_eq!(j3.power(0).unwrap(), ComplexMatrix::identity(3));
        assert!(ComplexMatrix::zeros(2, 3).power(2).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = ComplexMatrix::from_row_slice(1, 2, &[Complex64::new(1.0, -2.0), c(0.5)]).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"rows":1,"cols":2,"entries":[[1.0,-2.0],[0.5,0.0]]}"#);
        assert_eq!(serde_json::from_str::<ComplexMatrix>(&text).unwrap(), m);
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        assert!((ComplexMatrix::diag_real(&[3.0, -4.0]).norm2() - 4.0).abs() < 1e-14);
    }
}
