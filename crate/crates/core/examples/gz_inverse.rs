//! A g_z-inverse of a matrix for a spectral set larger than the zero cluster:
//! `(A + r P_σ)^{-1} (I - P_σ)` against the contour integral of `1/λ`.

use gzspec::gz::{eigen_clusters, gz_inverse_for_set, EigenSelection};
use gzspec::linalg::eigenvalues;
use gzspec::{ComplexMatrix, ToleranceConfig};
use num::complex::Complex64;

fn main() {
    let cfg = ToleranceConfig::default();
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let a = ComplexMatrix::jordan_block(c(0.0, 0.0), 2)
        .direct_sum(&ComplexMatrix::jordan_block(c(0.5, 0.0), 2))
        .direct_sum(&ComplexMatrix::diag(&[c(2.0, 0.0), c(-1.0, 1.0)]));

    for cl in eigen_clusters(&a, &cfg).unwrap() {
        let center = cl.values.iter().sum::<Complex64>() / cl.values.len() as f64;
        println!("cluster near {center:.3}, {} eigenvalue(s), zero cluster {}", cl.values.len(), cl.is_zero);
    }
    // σ = {0, 1/2}: S inverts A on the eigenvalues 2 and -1+i only
    let g = gz_inverse_for_set(&a, &EigenSelection::new(&[c(0.0, 0.0), c(0.5, 0.0)]), None, &cfg).unwrap();
    println!("r = {}, {} contour(s)", g.r, g.contours.len());
    for k in &g.contours {
        println!("  circle at {:.3} radius {:.3}", k.center, k.radius);
    }
    for check in &g.certificate.checks {
        println!("  {:<26} {} ({:.2e})", check.name, if check.pass { "ok" } else { "FAILED" }, check.residual);
    }
    let mut eig = eigenvalues(&g.certificate.inverse).unwrap();
    eig.sort_by(|x, y| x.norm().total_cmp(&y.norm()));
    println!("σ(S) = {:?}", eig.iter().map(|z| format!("{:.4}", z)).collect::<Vec<_>>());
}
