use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use super::GzError;
use crate::linalg::{eigenvalues, range_chain, ComplexMatrix, ToleranceConfig};

/// Eigenvalues grouped by single linkage.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenCluster {
    pub values: Vec<Complex64>,
    /// The cluster carrying the eigenvalue 0.
    pub is_zero: bool,
}

/// Clusters of `σ(A)` with linkage gap `10 * rank_rtol * ‖A‖`.
///
/// A perturbed Jordan block has eigenvalues spread far beyond that gap, so
/// linkage alone would split it apart. The multiplicity of 0 is read off the
/// range chain (`n - rank A^q`) and that many eigenvalues of smallest modulus
/// seed the zero cluster. Elsewhere, groups linked at the coarser gap
/// `rank_rtol^{1/4} * ‖A‖` are merged when the range chain of `A - μ` at
/// their centroid `μ` accounts for every member.
pub fn eigen_clusters(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Vec<EigenCluster>, GzError> {
    let n = a.require_square()?;
    let mut values = eigenvalues(a)?;
    let chain = range_chain(a, cfg)?;
    let zero_mult = n - chain[chain.len() - 1].dim();
    values.sort_by(|x, y| x.norm().total_cmp(&y.norm()));
    let gap = linkage_gap(a, cfg);

    // union-find over eigenvalue indices; the zero seed is pre-joined
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut j = i;
        while parent[j] != r {
            let next = parent[j];
            parent[j] = r;
            j = next;
        }
        r
    }
    let join = |parent: &mut Vec<usize>, i: usize, j: usize| {
        let (ri, rj) = (find(parent, i), find(parent, j));
        if ri != rj {
            parent[ri.max(rj)] = ri.min(rj);
        }
    };
    for i in 1..zero_mult {
        join(&mut parent, 0, i);
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= gap {
                join(&mut parent, i, j);
            }
        }
    }
    let coarse = gap.max(cfg.rank_rtol.powf(0.25) * a.norm2());
    for group in linked(&values, &(0..n).collect::<Vec<_>>(), coarse) {
        for part in defective_groups(a, &values, group, cfg)? {
            for w in part.windows(2) {
                join(&mut parent, w[0], w[1]);
            }
        }
    }

    let mut clusters: Vec<(usize, EigenCluster)> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        let root = find(&mut parent, i);
        match clusters.iter_mut().find(|(r, _)| *r == root) {
            Some((_, c)) => c.values.push(v),
            None => clusters.push((root, EigenCluster { values: vec![v], is_zero: zero_mult > 0 && root == 0 })),
        }
    }
    Ok(clusters.into_iter().map(|(_, c)| c).collect())
}

/// Components of `idx` under single linkage at distance `<= gap`.
fn linked(values: &[Complex64], idx: &[usize], gap: f64) -> Vec<Vec<usize>> {
    let mut seen = vec![false; idx.len()];
    let mut out = Vec::new();
    for s in 0..idx.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut k = 0;
        while k < comp.len() {
            let u = comp[k];
            for v in 0..idx.len() {
                if !seen[v] && (values[idx[u]] - values[idx[v]]).norm() <= gap {
                    seen[v] = true;
                    comp.push(v);
                }
            }
            k += 1;
        }
        out.push(comp.into_iter().map(|u| idx[u]).collect());
    }
    out
}

/// Splits `group` into parts that each carry the full algebraic multiplicity
/// of their centroid; singletons are dropped.
fn defective_groups(
    a: &ComplexMatrix,
    values: &[Complex64],
    group: Vec<usize>,
    cfg: &ToleranceConfig,
) -> Result<Vec<Vec<usize>>, GzError> {
    if group.len() < 2 {
        return Ok(Vec::new());
    }
    let n = a.rows();
    let mu = group.iter().map(|&i| values[i]).sum::<Complex64>() / group.len() as f64;
    let shifted = ComplexMatrix::wrap(a.as_dmatrix() - nalgebra::DMatrix::from_diagonal_element(n, n, mu));
    let chain = range_chain(&shifted, cfg)?;
    if n - chain[chain.len() - 1].dim() >= group.len() {
        return Ok(vec![group]);
    }
    // cut at the longest linkage edge and try each side
    let longest = group
        .iter()
        .map(|&i| {
            group.iter().filter(|&&j| j != i).map(|&j| (values[i] - values[j]).norm()).fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let mut out = Vec::new();
    for part in linked(values, &group, longest * (1.0 - 1e-9)) {
        out.extend(defective_groups(a, values, part, cfg)?);
    }
    Ok(out)
}

fn linkage_gap(a: &ComplexMatrix, cfg: &ToleranceConfig) -> f64 {
    10.0 * cfg.rank_rtol * a.norm2()
}

/// A choice of `σ ⊆ σ(A)` by anchor points. Each anchor picks the whole
/// cluster of its nearest eigenvalue; an anchor at 0 picks the zero cluster.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EigenSelection {
    #[serde(default)]
    pub eigenvalues: Vec<[f64; 2]>,
}

impl EigenSelection {
    pub fn new(anchors: &[Complex64]) -> Self {
        Self { eigenvalues: anchors.iter().map(|z| [z.re, z.im]).collect() }
    }

    /// `σ = ∅`.
    pub fn empty() -> Self {
        Self::default()
    }

    /// `σ` = the eigenvalue cluster at 0.
    pub fn zero_cluster() -> Self {
        Self::new(&[Complex64::new(0.0, 0.0)])
    }

    pub fn anchors(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.eigenvalues.iter().map(|p| Complex64::new(p[0], p[1]))
    }

    /// Resolves the anchors against `σ(A)`. Errors when an anchor matches no
    /// eigenvalue or when 0 is an eigenvalue left outside `σ`.
    pub fn split(&self, a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<SpectralSplit, GzError> {
        let clusters = eigen_clusters(a, cfg)?;
        let gap = linkage_gap(a, cfg);
        let match_radius = gap.max(1e-6 * a.norm2().max(1.0));
        let mut chosen = vec![false; clusters.len()];
        for anchor in self.anchors() {
            if !(anchor.re.is_finite() && anchor.im.is_finite()) {
                return Err(GzError::InvalidSpectralSplit("anchor must be finite".into()));
            }
            if anchor.norm() <= match_radius {
                if let Some(k) = clusters.iter().position(|c| c.is_zero) {
                    chosen[k] = true;
                    continue;
                }
            }
            let nearest = clusters
                .iter()
                .enumerate()
                .flat_map(|(k, c)| c.values.iter().map(move |&v| (k, (v - anchor).norm())))
                .min_by(|x, y| x.1.total_cmp(&y.1));
            match nearest {
                Some((k, d)) if d <= match_radius => chosen[k] = true,
                _ => {
                    return Err(GzError::InvalidSpectralSplit(format!(
                        "{} + {}i is not an eigenvalue",
                        anchor.re, anchor.im
                    )))
                }
            }
        }
        if let Some(k) = clusters.iter().position(|c| c.is_zero) {
            if !chosen[k] {
                return Err(GzError::InvalidSpectralSplit("0 is an eigenvalue outside σ".into()));
            }
        }
        let mut split = SpectralSplit { selected: Vec::new(), complement: Vec::new(), zero_multiplicity: 0 };
        for (c, &on) in clusters.iter().zip(&chosen) {
            if c.is_zero {
                split.zero_multiplicity = c.values.len();
            }
            if on {
                split.selected.extend(&c.values);
            } else {
                split.complement.extend(&c.values);
            }
        }
        Ok(split)
    }
}

/// `σ` and `σ(A) \ σ`, with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSplit {
    pub selected: Vec<Complex64>,
    pub complement: Vec<Complex64>,
    pub zero_multiplicity: usize,
}

impl SpectralSplit {
    /// `max |λ|` over `σ`, 0 when `σ` is empty.
    pub fn selected_radius(&self) -> f64 {
        self.selected.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Smallest distance between `σ` and its complement.
    pub fn separation(&self) -> f64 {
        self.selected
            .iter()
            .flat_map(|s| self.complement.iter().map(move |c| (s - c).norm()))
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn zero_cluster_keeps_jordan_block_together() {
        let a = ComplexMatrix::jordan_block(c(0.0), 3).direct_sum(&ComplexMatrix::diag_real(&[2.0]));
        let clusters = eigen_clusters(&a, &cfg()).unwrap();
        assert_eq!(clusters.len(), 2);
        let zero = clusters.iter().find(|k| k.is_zero).unwrap();
        assert_eq!(zero.values.len(), 3);
    }

    #[test]
    fn perturbed_block_off_zero_stays_together() {
        let j = ComplexMatrix::jordan_block(Complex64::new(1.0, 1.0), 2).direct_sum(&ComplexMatrix::diag_real(&[0.5, 1.001]));
        let x = ComplexMatrix::from_real_rows(&[&[1.0, 0.3, 0.0, 0.2], &[0.1, 1.0, 0.4, 0.0], &[0.0, 0.2, 1.0, 0.3], &[0.5, 0.0, 0.1, 1.0]])
            .unwrap();
        let xi = x.as_dmatrix().clone().try_inverse().unwrap();
        let a = ComplexMatrix::new(x.as_dmatrix() * j.as_dmatrix() * xi).unwrap();
        let clusters = eigen_clusters(&a, &cfg()).unwrap();
        let mut sizes: Vec<usize> = clusters.iter().map(|k| k.values.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 2]);
    }

    #[test]
    fn close_simple_eigenvalues_stay_apart() {
        let a = ComplexMatrix::diag_real(&[1.0, 1.0 + 1e-4, 1.0 + 2e-4]);
        assert_eq!(eigen_clusters(&a, &cfg()).unwrap().len(), 3);
    }

    #[test]
    fn omitting_zero_is_rejected() {
        let a = ComplexMatrix::diag_real(&[2.0, 0.0]);
        let err = EigenSelection::new(&[c(2.0)]).split(&a, &cfg()).unwrap_err();
        assert!(matches!(err, GzError::InvalidSpectralSplit(_)));
    }

    #[test]
    fn unknown_anchor_is_rejected() {
        let a = ComplexMatrix::diag_real(&[2.0, 0.0]);
        let err = EigenSelection::new(&[c(0.0), c(3.0)]).split(&a, &cfg()).unwrap_err();
        assert!(matches!(err, GzError::InvalidSpectralSplit(_)));
    }

    #[test]
    fn anchors_pick_clusters() {
        let a = ComplexMatrix::diag_real(&[1.0, 0.5, 1.0 / 3.0, 0.25]);
        let split = EigenSelection::new(&[c(1.0 / 3.0), c(0.25)]).split(&a, &cfg()).unwrap();
        assert_eq!(split.selected.len(), 2);
        assert_eq!(split.complement.len(), 2);
        assert_eq!(split.zero_multiplicity, 0);
        assert!((split.separation() - (0.5 - 1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn json_form() {
        let s: EigenSelection = serde_json::from_str(r#"{"eigenvalues":[[0,0]]}"#).unwrap();
        assert_eq!(s, EigenSelection::zero_cluster());
    }
}
