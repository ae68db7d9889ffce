//! One-sided Jacobi SVD for the small dense matrices this crate works with.
//!
//! nalgebra 0.33's complex SVD sometimes returns factors with `U S V*` off from
//! the input by many orders of magnitude more than rounding, mostly on
//! rank-deficient inputs. Jacobi rotations are slower but every step is an
//! exact unitary, so the factors always reproduce the input to rounding.

use nalgebra::DMatrix;
use num::complex::Complex64;

const MAX_SWEEPS: usize = 80;

pub(crate) struct Svd {
    /// Descending, one per column of the input.
    pub values: Vec<f64>,
    /// `rows x cols`; columns with a zero value are zero.
    pub u: DMatrix<Complex64>,
    /// `cols x cols` unitary.
    pub v: DMatrix<Complex64>,
}

/// SVD with a full set of right singular vectors. Wide inputs are padded
/// with zero rows, so `values` always has one entry per column.
pub(crate) fn svd(m: &DMatrix<Complex64>) -> Svd {
    let (r, c) = m.shape();
    let mut g = if r < c {
        let mut p = DMatrix::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let mut v = DMatrix::<Complex64>::identity(c, c);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..c {
            for j in i + 1..c {
                rotated |= rotate(&mut g, &mut v, i, j);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..c).map(|k| g.column(k).norm()).collect();
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));

    let mut u = DMatrix::zeros(r, c);
    let mut vs = DMatrix::zeros(c, c);
    let mut values = Vec::with_capacity(c);
    for (dst, &src) in order.iter().enumerate() {
        let s = norms[src];
        values.push(s);
        if s > 0.0 {
            let col = g.column(src).rows(0, r) / Complex64::new(s, 0.0);
            u.set_column(dst, &col);
        }
        vs.set_column(dst, &v.column(src));
    }
    Svd { values, u, v: vs }
}

/// Singular values only, descending.
pub(crate) fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    svd(m).values
}

/// Orthogonalises columns `i` and `j` of `g`, applying the same rotation to `v`.
/// Returns false when the pair is already orthogonal to working precision.
fn rotate(g: &mut DMatrix<Complex64>, v: &mut DMatrix<Complex64>, i: usize, j: usize) -> bool {
    let alpha = g.column(i).norm_squared();
    let beta = g.column(j).norm_squared();
    let gamma = g.column(i).dotc(&g.column(j));
    let mag = gamma.norm();
    if alpha == 0.0 || beta == 0.0 || mag <= f64::EPSILON * (alpha * beta).sqrt() {
        return false;
    }
    // rescale first: dividing subnormals by their modulus loses the unit length
    let big = gamma / gamma.re.abs().max(gamma.im.abs());
    let phase = big / big.norm();
    let zeta = (beta - alpha) / (2.0 * mag);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = c * t;
    let (cc, sp, sq) = (Complex64::new(c, 0.0), phase.conj() * s, phase * s);
    apply(g, i, j, cc, sp, sq);
    apply(v, i, j, cc, sp, sq);
    true
}

// col_i <- c col_i - s e^{-iφ} col_j,  col_j <- s e^{iφ} col_i + c col_j
fn apply(m: &mut DMatrix<Complex64>, i: usize, j: usize, c: Complex64, sp: Complex64, sq: Complex64) {
    for row in 0..m.nrows() {
        let a = m[(row, i)];
        let b = m[(row, j)];
        m[(row, i)] = c * a - sp * b;
        m[(row, j)] = sq * a + c * b;
    }
}
