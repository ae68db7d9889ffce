//! Kernel and range chains and the quantities read off them.
//!
//! Chains are built incrementally: `N(A^{k+1})` is the kernel of `(I - W W*) A`
//! where `W` spans `N(A^k)`, and `R(A^{k+1})` is the range of `A U` where `U`
//! spans `R(A^k)`. Every cut uses `rank_rtol * ‖A‖`, so powers of `A` are never
//! formed and tiny nilpotent powers do not get compared against their own
//! rounding noise.

use nalgebra::DMatrix;
use num::complex::Complex64;

use super::subspace::{intersection, kernel_of_dim, kernel_with_cutoff, range_with_cutoff, SubspaceBasis};
use super::{ComplexMatrix, LinalgError, ToleranceConfig};

fn cutoff(a: &ComplexMatrix, cfg: &ToleranceConfig) -> f64 {
    cfg.rank_rtol * a.norm2()
}

/// `[N(A^0), N(A^1), ...]`, ending with the first repeated dimension.
pub fn kernel_chain(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Vec<SubspaceBasis>, LinalgError> {
    let n = a.require_square()?;
    let cut = cutoff(a, cfg);
    let m = a.as_dmatrix();
    let mut chain = vec![SubspaceBasis::zero(n)];
    for _ in 0..=n {
        let w = chain.last().expect("nonempty chain");
        let restricted = m - w.projector() * m;
        let next = kernel_with_cutoff(&restricted, cut);
        let done = next.dim() == w.dim();
        chain.push(next);
        if done {
            return Ok(chain);
        }
    }
    unreachable!("kernel chain of a {n}x{n} matrix must stabilise within {n} steps")
}

/// `[R(A^0), R(A^1), ...]`, ending with the first repeated dimension.
pub fn range_chain(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Vec<SubspaceBasis>, LinalgError> {
    let n = a.require_square()?;
    let cut = cutoff(a, cfg);
    let m = a.as_dmatrix();
    let mut chain = vec![SubspaceBasis::whole(n)];
    for _ in 0..=n {
        let u = chain.last().expect("nonempty chain");
        let next = range_with_cutoff(&(m * u.matrix()), cut);
        let done = next.dim() == u.dim();
        chain.push(next);
        if done {
            return Ok(chain);
        }
    }
    unreachable!("range chain of a {n}x{n} matrix must stabilise within {n} steps")
}

/// Smallest `n` with `dim N(A^n) = dim N(A^{n+1})`.
pub fn ascent(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<usize, LinalgError> {
    Ok(kernel_chain(a, cfg)?.len() - 2)
}

/// Smallest `n` with `rank A^n = rank A^{n+1}`.
pub fn descent(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<usize, LinalgError> {
    Ok(range_chain(a, cfg)?.len() - 2)
}

/// Both stabilisation indices. They agree in exact arithmetic; a mismatch
/// means the tolerance cannot resolve the Jordan structure at 0.
pub fn ascent_descent(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<(usize, usize), LinalgError> {
    Ok((ascent(a, cfg)?, descent(a, cfg)?))
}

/// `k_j = dim(N(A) ∩ R(A^j))` for `j = 0 ..= descent + 1`.
///
/// `A` maps `R(A^j)` onto `R(A^{j+1})` with kernel `N(A) ∩ R(A^j)`, so
/// `k_j = rank A^j - rank A^{j+1}`. Reading it off the range chain avoids an
/// angle test between `N(A)` and `R(A^j)`, which fails once a similarity
/// squeezes the two subspaces to within the angle tolerance.
pub fn stable_iteration_profile(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Vec<usize>, LinalgError> {
    let dims: Vec<usize> = range_chain(a, cfg)?.iter().map(SubspaceBasis::dim).collect();
    let mut k: Vec<usize> = dims.windows(2).map(|w| w[0] - w[1]).collect();
    k.push(*k.last().expect("chain has at least two entries"));
    Ok(k)
}

/// The same profile from explicit subspace intersections. Slower and more
/// sensitive to conditioning; kept as a cross-check.
pub fn stable_iteration_profile_by_intersection(
    a: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<Vec<usize>, LinalgError> {
    let ranges = range_chain(a, cfg)?;
    let kernel = kernel_chain(a, cfg)?.swap_remove(1);
    Ok(ranges.iter().map(|r| intersection(&kernel, r, cfg).dim()).collect())
}

/// Degree of stable iteration: smallest `m` after which `k_j` is constant.
pub fn dis(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<usize, LinalgError> {
    let k = stable_iteration_profile(a, cfg)?;
    let last = *k.last().expect("profile is nonempty");
    let mut m = k.len() - 1;
    while m > 0 && k[m - 1] == last {
        m -= 1;
    }
    Ok(m)
}

/// Reduced minimal modulus: the smallest singular value above the rank cut.
pub fn gamma(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<f64, LinalgError> {
    let values = super::svd::singular_values(a.as_dmatrix());
    let top = values.iter().cloned().fold(0.0, f64::max);
    values
        .iter()
        .cloned()
        .filter(|&s| s > cfg.rank_rtol * top)
        .fold(None, |acc: Option<f64>, s| Some(acc.map_or(s, |m| m.min(s))))
        .ok_or(LinalgError::UndefinedGamma)
}

/// `N(A^p)` with `p` the ascent: the quasi-nilpotent part in finite dimension.
pub fn h0_basis(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<SubspaceBasis, LinalgError> {
    let chain = kernel_chain(a, cfg)?;
    Ok(chain[chain.len() - 2].clone())
}

/// `R(A^p)` with `p` the ascent: the analytic core in finite dimension.
pub fn k_basis(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<SubspaceBasis, LinalgError> {
    let p = ascent(a, cfg)?;
    let chain = range_chain(a, cfg)?;
    Ok(chain[p.min(chain.len() - 1)].clone())
}

/// `(q, R(A^q), N(A^q))` with `q` the descent.
///
/// The kernel side is built with the dimensions the range chain dictates
/// (`dim N(A^k) = n - rank A^k`), taking the smallest singular directions at
/// each step. The two bases then always have complementary dimensions, even
/// when a loose cut would let the kernel chain stop one step early or late.
pub fn core_nilpotent_split(
    a: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<(usize, SubspaceBasis, SubspaceBasis), LinalgError> {
    let n = a.require_square()?;
    let mut ranges = range_chain(a, cfg)?;
    let q = ranges.len() - 2;
    let m = a.as_dmatrix();
    let mut kernel = SubspaceBasis::zero(n);
    for range in &ranges[1..=q] {
        let restricted = m - kernel.projector() * m;
        kernel = kernel_of_dim(&restricted, n - range.dim());
    }
    Ok((q, ranges.swap_remove(q), kernel))
}

/// Ratio of the largest to the smallest singular value (infinite when singular).
pub fn condition_number(a: &ComplexMatrix) -> f64 {
    let values = super::svd::singular_values(a.as_dmatrix());
    let top = values.first().copied().unwrap_or(0.0);
    let bottom = values.last().copied().unwrap_or(0.0);
    if bottom == 0.0 {
        f64::INFINITY
    } else {
        top / bottom
    }
}

/// Eigenvalues with multiplicity from a complex Schur form, sorted by real then imaginary part.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>, LinalgError> {
    let n = a.require_square()?;
    // nalgebra's Schur iteration never converges on the zero matrix
    let scale = a.as_dmatrix().iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); n]);
    }
    let schur = (a.as_dmatrix() / Complex64::new(scale, 0.0))
        .try_schur(f64::EPSILON, 1000 * n.max(1))
        .ok_or(LinalgError::EigenFailure)?;
    let (_, t) = schur.unpack();
    let mut values: Vec<Complex64> = (0..n).map(|i| t[(i, i)] * scale).collect();
    values.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(values)
}

#[allow(dead_code)]
pub(crate) fn concat_columns(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    m.columns_mut(0, a.ncols()).copy_from(a);
    m.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    m
}
