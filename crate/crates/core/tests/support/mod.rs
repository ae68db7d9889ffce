//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use gzspec::spectral_sets::{ChildTemplate, Cluster, SpectrumModel, TailSpec};
use gzspec::{ComplexMatrix, ExactComplex};
use nalgebra::DMatrix;
use num::ToPrimitive;
use num::complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(p: i64, d: i64) -> ExactComplex {
    ExactComplex::frac(p, d)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ---------------------------------------------------------------------------
// random spectrum models on a coarse lattice

fn pick<T: Clone>(rng: &mut ChaCha8Rng, xs: &[T]) -> T {
    xs.choose(rng).expect("nonempty").clone()
}

fn lattice_points() -> Vec<ExactComplex> {
    vec![q(0, 1), q(1, 1), q(-1, 1), q(2, 1), ExactComplex::i(), -ExactComplex::i(), q(1, 2), q(3, 1)]
}

fn lattice_limits() -> Vec<ExactComplex> {
    vec![q(0, 1), q(1, 1), q(-1, 1), ExactComplex::i(), q(2, 1)]
}

pub fn random_tail(rng: &mut ChaCha8Rng) -> TailSpec {
    if rng.gen_bool(0.5) {
        let scale = pick(rng, &[q(1, 1), q(-1, 1), ExactComplex::i(), q(1, 2)]);
        TailSpec::power(scale, rng.gen_range(1..=2)).expect("valid power tail")
    } else {
        let base = pick(rng, &[q(1, 1), q(-1, 1), ExactComplex::i()]);
        let ratio = pick(rng, &[gzspec::exact::ratio(1, 2), gzspec::exact::ratio(-1, 2)]);
        TailSpec::geometric(base, ratio).expect("valid geometric tail")
    }
}

pub fn random_cluster(rng: &mut ChaCha8Rng, allow_depth2: bool) -> Cluster {
    loop {
        let limit = pick(rng, &lattice_limits());
        let tail = random_tail(rng);
        let prefix = rng.gen_range(0..=2);
        let children = if allow_depth2 && rng.gen_bool(0.35) {
            vec![ChildTemplate::new(random_tail(rng)).with_removed_prefix(rng.gen_range(0..=1))]
        } else {
            Vec::new()
        };
        if let Ok(cl) = Cluster::with_children(limit, tail, prefix, children) {
            return cl;
        }
    }
}

/// Depth <= 2 model: up to 3 points and up to 2 clusters.
pub fn random_spectrum(rng: &mut ChaCha8Rng) -> SpectrumModel {
    let points: Vec<ExactComplex> = (0..rng.gen_range(0..=3)).map(|_| pick(rng, &lattice_points())).collect();
    let clusters = (0..rng.gen_range(0..=2)).map(|_| random_cluster(rng, true)).collect();
    SpectrumModel::new(points, clusters)
}

// ---------------------------------------------------------------------------
// brute-force accumulation oracle

/// Radii of the shrinking balls.
pub const BALLS: [f64; 3] = [1e-1, 1e-2, 1e-3];
/// Sequences are enumerated until their offsets fall below this, at most
/// `MAX_TERMS` terms each.
const RESOLUTION: f64 = 1e-4;
pub const MAX_TERMS: u64 = 10_000;
/// A ball must hold this many other points.
const CROWD: usize = 3;
/// Distances below this count as the same point.
const SAME: f64 = 1e-12;

fn offset_f64(t: &TailSpec, n: u64) -> Complex64 {
    match t {
        TailSpec::Geometric { base, ratio } => base.to_c64() * ratio.to_f64().expect("finite ratio").powi(n as i32),
        TailSpec::Power { scale, exponent } => scale.to_c64() / (n as f64).powi(*exponent as i32),
    }
}

/// Indices `first..` until `|offset| * factor < RESOLUTION`, plus a few more,
/// capped at `MAX_TERMS` terms.
fn indices(t: &TailSpec, first: u64, factor: f64) -> impl Iterator<Item = u64> + '_ {
    let mut extra = 6;
    (first..first + MAX_TERMS).take_while(move |&n| {
        if offset_f64(t, n).norm() * factor < RESOLUTION {
            extra -= 1;
        }
        extra > 0
    })
}

/// Points of a model sorted by real part, and the family limits and
/// cluster limits that may be accumulation points.
pub struct Oracle {
    points: Vec<Complex64>,
    acc_candidates: Vec<Complex64>,
    acc_points: Vec<Complex64>,
}

fn sort_re(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Other points of `sorted` within `r` of `z`, stopping at `CROWD`.
fn crowd(sorted: &[Complex64], z: Complex64, r: f64) -> usize {
    let lo = sorted.partition_point(|p| p.re < z.re - r);
    let mut count = 0;
    for p in &sorted[lo..] {
        if p.re > z.re + r {
            break;
        }
        let d = (p - z).norm();
        if d > SAME && d <= r {
            count += 1;
            if count == CROWD {
                break;
            }
        }
    }
    count
}

fn crowded(sorted: &[Complex64], z: Complex64) -> bool {
    BALLS.iter().all(|&r| crowd(sorted, z, r) >= CROWD)
}

impl Oracle {
    pub fn new(model: &SpectrumModel) -> Self {
        let mut points: Vec<Complex64> = model.points().iter().map(ExactComplex::to_c64).collect();
        let mut acc_candidates = Vec::new();
        for cl in model.clusters() {
            assert!(cl.maps().is_empty(), "the oracle evaluates unmapped clusters only");
            let limit = cl.limit().to_c64();
            points.push(limit);
            acc_candidates.push(limit);
            let first = cl.removed_prefix() + 1;
            for m in indices(cl.tail(), first, 1.0) {
                let x = offset_f64(cl.tail(), m);
                points.push(limit + x);
                if cl.children().is_empty() {
                    continue;
                }
                acc_candidates.push(limit + x);
                for child in cl.children() {
                    for k in indices(&child.tail, child.removed_prefix + 1, x.norm()) {
                        points.push(limit + x + x * offset_f64(&child.tail, k));
                    }
                }
            }
        }
        sort_re(&mut points);
        let mut acc_points: Vec<Complex64> = acc_candidates.iter().copied().filter(|&z| crowded(&points, z)).collect();
        sort_re(&mut acc_points);
        Self { points, acc_candidates, acc_points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn contains(&self, z: &ExactComplex) -> bool {
        let z = z.to_c64();
        let lo = self.points.partition_point(|p| p.re < z.re - SAME);
        self.points[lo..].iter().take_while(|p| p.re <= z.re + SAME).any(|p| (p - z).norm() <= SAME)
    }

    pub fn acc(&self, z: &ExactComplex) -> bool {
        crowded(&self.points, z.to_c64())
    }

    pub fn acc_acc(&self, z: &ExactComplex) -> bool {
        crowded(&self.acc_points, z.to_c64())
    }
}

/// Values worth querying: every explicit value of the model near the top of
/// its sequences, plus a few lattice points that may or may not be in it.
pub fn query_pool(model: &SpectrumModel) -> Vec<ExactComplex> {
    let mut pool = lattice_points();
    pool.extend([q(1, 3), q(-1, 2), q(5, 4)]);
    pool.extend(model.points().iter().cloned());
    for cl in model.clusters() {
        pool.push(cl.limit().clone());
        let first = cl.removed_prefix() + 1;
        pool.extend(cl.level1_values(first, first + 3));
        if cl.depth() == 2 {
            for m in first..first + 2 {
                for (j, child) in cl.children().iter().enumerate() {
                    let k0 = child.removed_prefix + 1;
                    pool.extend((k0..k0 + 2).map(|k| cl.leaf_value(m, j, k)));
                }
            }
        }
    }
    pool.sort();
    pool.dedup();
    pool
}

// ---------------------------------------------------------------------------
// matrices

/// Haar-ish unitary from the QR factor of a Gaussian-like matrix.
pub fn unitary(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    g.qr().q()
}

/// `X` with singular values spread log-uniformly over `[1, cond]` (both
/// ends attained when `n >= 2`).
pub fn conditioned(n: usize, cond: f64, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let mut s: Vec<f64> = (0..n).map(|_| cond.powf(rng.gen::<f64>())).collect();
    s[0] = 1.0;
    if n > 1 {
        s[1] = cond;
    }
    let u = unitary(n, rng);
    let v = unitary(n, rng);
    &u * DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, s.iter().map(|&x| c(x, 0.0)))) * v.adjoint()
}

pub fn inverse(x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    x.clone().try_inverse().expect("invertible")
}

/// `X J X^{-1}`.
pub fn similar(j: &ComplexMatrix, x: &DMatrix<Complex64>) -> ComplexMatrix {
    ComplexMatrix::new(x * j.as_dmatrix() * inverse(x)).expect("finite")
}

pub fn block_diag(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    blocks[1..].iter().fold(blocks[0].clone(), |acc, b| acc.direct_sum(b))
}

/// Jordan seed: nilpotent blocks of sizes 1..=4 and a few nonzero simple
/// eigenvalues on the annulus `0.5 <= |λ| <= 2`, total size at most 10.
pub struct JordanSeed {
    pub j: ComplexMatrix,
    pub nilpotent_sizes: Vec<usize>,
    pub nonzero: Vec<Complex64>,
}

impl JordanSeed {
    pub fn random(rng: &mut ChaCha8Rng) -> Self {
        let mut blocks = Vec::new();
        let mut sizes = Vec::new();
        let mut n = 0;
        for _ in 0..rng.gen_range(1..=3) {
            let k = rng.gen_range(1..=4usize);
            if n + k > 8 {
                break;
            }
            blocks.push(ComplexMatrix::jordan_block(c(0.0, 0.0), k));
            sizes.push(k);
            n += k;
        }
        let mut nonzero = Vec::new();
        for _ in 0..rng.gen_range(1..=(10 - n).min(4)) {
            let z = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
            blocks.push(ComplexMatrix::jordan_block(z, 1));
            nonzero.push(z);
        }
        Self { j: block_diag(&blocks), nilpotent_sizes: sizes, nonzero }
    }

    /// Size of the largest nilpotent block: the true index.
    pub fn index(&self) -> usize {
        self.nilpotent_sizes.iter().copied().max().unwrap_or(0)
    }

    /// `J^D`: inverse on the nonzero diagonal, 0 on the nilpotent part.
    pub fn drazin(&self) -> ComplexMatrix {
        let n = self.j.rows();
        let d = DMatrix::from_fn(n, n, |i, k| {
            let x = self.j.get(i, k);
            if i == k && x.norm() > 0.1 {
                x.inv()
            } else {
                c(0.0, 0.0)
            }
        });
        ComplexMatrix::new(d).expect("finite")
    }
}

// ---------------------------------------------------------------------------
// assignment

/// Minimum-cost perfect matching on a square cost matrix (Hungarian
/// algorithm, O(n³)). Returns `row -> column`.
pub fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let inf = f64::INFINITY;
    let (mut u, mut v) = (vec![0.0; n + 1], vec![0.0; n + 1]);
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![0; n];
    for j in 1..=n {
        out[p[j] - 1] = j - 1;
    }
    out
}

/// Largest distance under the optimal matching of two equal-size multisets.
pub fn matched_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "multisets differ in size");
    let cost: Vec<Vec<f64>> = a.iter().map(|x| b.iter().map(|y| (x - y).norm()).collect()).collect();
    hungarian(&cost).iter().enumerate().map(|(i, &j)| cost[i][j]).fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// diagonal models

/// Lattice points with multiplicities 1..=3 or infinite, plus up to 2 clusters.
pub fn random_diagonal(rng: &mut ChaCha8Rng) -> gzspec::operators::DiagonalModel {
    use gzspec::operators::{DiagonalModel, Dim};
    loop {
        let points: Vec<(ExactComplex, Dim)> = (0..rng.gen_range(0..=3))
            .map(|_| {
                let m = if rng.gen_bool(0.15) { Dim::Infinite } else { Dim::Finite(rng.gen_range(1..=3)) };
                (pick(rng, &lattice_points()), m)
            })
            .collect();
        let clusters: Vec<Cluster> = (0..rng.gen_range(1..=2)).map(|_| random_cluster(rng, true)).collect();
        if let Ok(d) = DiagonalModel::new(points, clusters) {
            return d;
        }
    }
}

/// Points and clusters at 0 in σ, every other cluster in σ with
/// probability 1/3, and a couple of random boundary moves.
pub fn random_selection(
    rng: &mut ChaCha8Rng,
    spec: &SpectrumModel,
) -> gzspec::spectral_sets::SpectralSetSelection {
    let mut sel = gzspec::spectral_sets::SpectralSetSelection::new();
    let zero = ExactComplex::zero();
    if spec.points().contains(&zero) {
        sel = sel.with_point(zero.clone());
    }
    for (i, cl) in spec.clusters().iter().enumerate() {
        if cl.limit() == &zero || rng.gen_bool(1.0 / 3.0) {
            sel = sel.with_cluster(i);
        }
        if rng.gen_bool(0.3) {
            sel = sel.with_move(i, cl.removed_prefix() + rng.gen_range(1..=3));
        }
    }
    sel
}

/// Eigenvalues on a lattice with spacing 0.5, some in 2x2 Jordan blocks.
pub fn lattice_matrix(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> (ComplexMatrix, Vec<Complex64>, Vec<usize>) {
    let mut grid: Vec<Complex64> =
        (-3..=3).flat_map(|i| (-3..=3).map(move |j| c(0.5 * i as f64, 0.5 * j as f64))).collect();
    grid.retain(|z| z.norm() > 0.0);
    let mut blocks = Vec::new();
    let mut values = Vec::new();
    let mut sizes = Vec::new();
    let mut used = 0;
    while used < n {
        let z = grid.swap_remove(r.gen_range(0..grid.len()));
        let k = if used + 2 <= n && r.gen_bool(0.3) { 2 } else { 1 };
        blocks.push(ComplexMatrix::jordan_block(z, k));
        values.push(z);
        sizes.push(k);
        used += k;
    }
    (block_diag(&blocks), values, sizes)
}

/// `X E X^{-1}` with `E` the identity on the blocks whose eigenvalue is selected.
pub fn eigenprojection(sizes: &[usize], chosen: &[bool], x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let diag: Vec<Complex64> = sizes
        .iter()
        .zip(chosen)
        .flat_map(|(&k, &on)| std::iter::repeat_n(c(if on { 1.0 } else { 0.0 }, 0.0), k))
        .collect();
    let e = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
    x * e * inverse(x)
}

/// Random lattice matrix plus a nilpotent part; `σ` = the zero cluster and a
/// random subset of the other eigenvalues.
pub struct GzCase {
    pub a: ComplexMatrix,
    pub x: DMatrix<Complex64>,
    pub j: ComplexMatrix,
    pub selected: Vec<Complex64>,
    pub complement: Vec<Complex64>,
    pub zero_mult: usize,
    pub anchors: Vec<Complex64>,
}

pub fn gz_case(r: &mut ChaCha8Rng) -> GzCase {
    let nil = r.gen_range(0..=3);
    let n = r.gen_range(1..=(12 - nil).min(8));
    let (lat, values, sizes) = lattice_matrix(r, n);
    let j = if nil > 0 { ComplexMatrix::jordan_block(c(0.0, 0.0), nil).direct_sum(&lat) } else { lat };
    let x = conditioned(j.rows(), 10f64.powf(r.gen_range(0.0..1.0)), r);
    let mut anchors = if nil > 0 { vec![c(0.0, 0.0)] } else { Vec::new() };
    let (mut selected, mut complement) = (vec![c(0.0, 0.0); nil], Vec::new());
    for (v, &k) in values.iter().zip(&sizes) {
        let into = if r.gen_bool(0.3) {
            anchors.push(*v);
            &mut selected
        } else {
            &mut complement
        };
        into.extend(std::iter::repeat_n(*v, k));
    }
    GzCase { a: similar(&j, &x), x, j, selected, complement, zero_mult: nil, anchors }
}

impl GzCase {
    /// `J^D_σ`: block inverse on the unselected blocks, 0 on the rest.
    pub fn closed_form(&self) -> DMatrix<Complex64> {
        let n = self.j.rows();
        let jm = self.j.as_dmatrix();
        let mut keep = vec![false; n];
        for i in 0..n {
            let v = jm[(i, i)];
            keep[i] = v.norm() > 0.0 && !self.anchors.iter().any(|s| (s - v).norm() < 1e-12);
        }
        let restricted = DMatrix::from_fn(n, n, |i, k| if keep[i] && keep[k] { jm[(i, k)] } else if i == k { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let inv = inverse(&restricted);
        let jd = DMatrix::from_fn(n, n, |i, k| if keep[i] && keep[k] { inv[(i, k)] } else { c(0.0, 0.0) });
        &self.x * jd * inverse(&self.x)
    }
}

/// `X (A_M ⊕ N) X^{-1}` with `A_M` invertible and `N` nilpotent, and the
/// projection onto `M` along the nilpotent part.
pub struct BlockCase {
    pub a: ComplexMatrix,
    pub p: ComplexMatrix,
    /// `γ(A_M)` from an orthonormal basis of `M = X (C^k ⊕ 0)`.
    pub gamma: f64,
}

pub fn block_case(r: &mut ChaCha8Rng) -> BlockCase {
    let k = r.gen_range(1..=6);
    let am = conditioned(k, 10f64.powf(r.gen_range(0.0..1.0)), r) * c(r.gen_range(0.5..2.0), 0.0);
    let mut blocks = vec![ComplexMatrix::new(am.clone()).unwrap()];
    let mut nil = 0;
    while nil == 0 || (nil < 4 && r.gen_bool(0.5)) {
        let s = r.gen_range(1..=(4 - nil).min(3));
        blocks.push(ComplexMatrix::jordan_block(c(0.0, 0.0), s));
        nil += s;
    }
    let j = block_diag(&blocks);
    let n = j.rows();
    let x = conditioned(n, 10f64.powf(r.gen_range(0.0..2.0)), r);
    let e = DMatrix::from_fn(n, n, |i, l| if i == l && i < k { c(1.0, 0.0) } else { c(0.0, 0.0) });
    let p = ComplexMatrix::new(&x * e * inverse(&x)).unwrap();

    let q = x.columns(0, k).into_owned().qr().q();
    let compressed: DMatrix<Complex64> = q.adjoint() * similar(&j, &x).as_dmatrix() * &q;
    let gamma = compressed.singular_values().min();
    BlockCase { a: similar(&j, &x), p, gamma }
}
