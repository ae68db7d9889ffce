use nalgebra::DMatrix;
use num::complex::Complex64;

use super::svd::{singular_values, svd};
use super::{ComplexMatrix, ToleranceConfig};

/// Orthonormal basis stored as the columns of an `ambient x dim` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    basis: DMatrix<Complex64>,
}

impl SubspaceBasis {
    pub(crate) fn from_orthonormal(basis: DMatrix<Complex64>) -> Self {
        Self { basis }
    }

    pub fn zero(ambient: usize) -> Self {
        Self { basis: DMatrix::zeros(ambient, 0) }
    }

    pub fn whole(ambient: usize) -> Self {
        Self { basis: DMatrix::identity(ambient, ambient) }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.basis
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> DMatrix<Complex64> {
        &self.basis * self.basis.adjoint()
    }

    /// Largest deviation of `Q* Q` from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let g = self.basis.adjoint() * &self.basis - DMatrix::<Complex64>::identity(self.dim(), self.dim());
        g.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Distance of `x` from the subspace.
    pub fn distance(&self, x: &nalgebra::DVector<Complex64>) -> f64 {
        let proj = &self.basis * (self.basis.adjoint() * x);
        (x - proj).norm()
    }
}

/// Right singular vectors for values at or below `cutoff`.
pub(crate) fn kernel_with_cutoff(m: &DMatrix<Complex64>, cutoff: f64) -> SubspaceBasis {
    let c = m.ncols();
    let svd = svd(m);
    let rank = svd.values.iter().filter(|&&s| s > cutoff).count();
    SubspaceBasis::from_orthonormal(svd.v.columns(rank, c - rank).into_owned())
}

/// The `dim` right singular vectors with the smallest values.
pub(crate) fn kernel_of_dim(m: &DMatrix<Complex64>, dim: usize) -> SubspaceBasis {
    let c = m.ncols();
    let svd = svd(m);
    SubspaceBasis::from_orthonormal(svd.v.columns(c - dim, dim).into_owned())
}

/// Left singular vectors for values above `cutoff`.
pub(crate) fn range_with_cutoff(m: &DMatrix<Complex64>, cutoff: f64) -> SubspaceBasis {
    let svd = svd(m);
    let rank = svd.values.iter().filter(|&&s| s > cutoff).count().min(m.nrows());
    SubspaceBasis::from_orthonormal(svd.u.columns(0, rank).into_owned())
}

fn relative_cutoff(m: &DMatrix<Complex64>, cfg: &ToleranceConfig) -> f64 {
    cfg.rank_rtol * super::matrix::spectral_norm(m)
}

/// Count of singular values above `rank_rtol` times the largest one.
pub fn numerical_rank(a: &ComplexMatrix, cfg: &ToleranceConfig) -> usize {
    let values = singular_values(a.as_dmatrix());
    let top = values.iter().cloned().fold(0.0, f64::max);
    values.iter().filter(|&&s| s > cfg.rank_rtol * top).count()
}

pub fn kernel_basis(a: &ComplexMatrix, cfg: &ToleranceConfig) -> SubspaceBasis {
    kernel_with_cutoff(a.as_dmatrix(), relative_cutoff(a.as_dmatrix(), cfg))
}

pub fn range_basis(a: &ComplexMatrix, cfg: &ToleranceConfig) -> SubspaceBasis {
    range_with_cutoff(a.as_dmatrix(), relative_cutoff(a.as_dmatrix(), cfg))
}

/// Principal angles between two subspaces: `cos θ_i` are the singular values of `U* V`.
/// A principal pair belongs to the intersection when `1 - cos θ <= rank_rtol / 2`,
/// i.e. `sin θ` is at most about `sqrt(rank_rtol)`.
pub fn intersection(u: &SubspaceBasis, v: &SubspaceBasis, cfg: &ToleranceConfig) -> SubspaceBasis {
    assert_eq!(u.ambient(), v.ambient(), "subspaces of different spaces");
    if u.dim() == 0 || v.dim() == 0 {
        return SubspaceBasis::zero(u.ambient());
    }
    let cross = u.matrix().adjoint() * v.matrix();
    let svd = svd(&cross);
    let left = svd.u;
    let k = svd.values.iter().filter(|&&c| 1.0 - c <= 0.5 * cfg.rank_rtol).count();
    SubspaceBasis::from_orthonormal(u.matrix() * left.columns(0, k))
}

/// `U + V`, of dimension `dim U + dim V - dim(U ∩ V)` under the same angle rule.
pub fn subspace_sum(u: &SubspaceBasis, v: &SubspaceBasis, cfg: &ToleranceConfig) -> SubspaceBasis {
    assert_eq!(u.ambient(), v.ambient(), "subspaces of different spaces");
    let shared = intersection(u, v, cfg).dim();
    let extra = v.dim() - shared;
    if extra == 0 {
        return u.clone();
    }
    let n = u.ambient();
    let residual = v.matrix() - u.matrix() * (u.matrix().adjoint() * v.matrix());
    let svd = svd(&residual);
    let mut basis = DMatrix::zeros(n, u.dim() + extra);
    basis.columns_mut(0, u.dim()).copy_from(u.matrix());
    basis.columns_mut(u.dim(), extra).copy_from(&svd.u.columns(0, extra));
    SubspaceBasis::from_orthonormal(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn unit(n: usize, i: usize) -> nalgebra::DVector<Complex64> {
        let mut e = nalgebra::DVector::zeros(n);
        e[i] = c(1.0);
        e
    }

    #[test]
    fn diag_and_jordan_examples() {
        let d = ComplexMatrix::diag_real(&[3.0, 0.0]);
        assert_eq!(numerical_rank(&d, &cfg()), 1);
        let k = kernel_basis(&d, &cfg());
        assert_eq!(k.dim(), 1);
        assert!(k.distance(&unit(2, 1)) < 1e-14);

        let j2 = ComplexMatrix::jordan_block(c(0.0), 2);
        assert_eq!(numerical_rank(&j2, &cfg()), 1);
        assert!(kernel_basis(&j2, &cfg()).distance(&unit(2, 0)) < 1e-14);
        assert!(range_basis(&j2, &cfg()).distance(&unit(2, 0)) < 1e-14);
    }

    #[test]
    fn low_rank_product_has_factor_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut rand = |r: usize, cc: usize| DMatrix::from_fn(r, cc, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let b = rand(6, 4);
        let cm = rand(4, 6);
        let a = ComplexMatrix::new(b * cm).unwrap();
        assert_eq!(numerical_rank(&a, &cfg()), 4);
        let k = kernel_basis(&a, &cfg());
        assert_eq!(k.dim() + numerical_rank(&a, &cfg()), 6);
        assert!(k.orthonormality_error() < 1e-12);
        assert!((a.as_dmatrix() * k.matrix()).norm() < 1e-10);
    }

    #[test]
    fn wide_and_tall_kernels() {
        let wide = ComplexMatrix::from_real_rows(&[&[1.0, 1.0, 0.0]]).unwrap();
        assert_eq!(kernel_basis(&wide, &cfg()).dim(), 2);
        let tall = ComplexMatrix::from_real_rows(&[&[1.0], &[1.0], &[0.0]]).unwrap();
        assert_eq!(kernel_basis(&tall, &cfg()).dim(), 0);
        assert_eq!(range_basis(&tall, &cfg()).dim(), 1);
    }

    #[test]
    fn intersection_and_sum_of_coordinate_planes() {
        let n = 4;
        let span = |idx: &[usize]| {
            let mut m = DMatrix::zeros(n, idx.len());
            for (col, &i) in idx.iter().enumerate() {
                m[(i, col)] = c(1.0);
            }
            SubspaceBasis::from_orthonormal(m)
        };
        let u = span(&[0, 1]);
        let v = span(&[1, 2]);
        let i = intersection(&u, &v, &cfg());
        assert_eq!(i.dim(), 1);
        assert!(i.distance(&unit(n, 1)) < 1e-14);
        let s = subspace_sum(&u, &v, &cfg());
        assert_eq!(s.dim(), 3);
        assert!(s.orthonormality_error() < 1e-14);
        assert!(s.distance(&unit(n, 3)) > 0.99);
    }
}
