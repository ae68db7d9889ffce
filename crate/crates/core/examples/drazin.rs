//! Drazin inverse of a similarity-transformed Jordan matrix, with its
//! certificate and the ascent/descent/dis structure.

use gzspec::gz::drazin_inverse;
use gzspec::linalg::{ascent, descent, dis};
use gzspec::{ComplexMatrix, ToleranceConfig};
use num::complex::Complex64;

fn main() {
    let cfg = ToleranceConfig::default();
    let j = ComplexMatrix::jordan_block(Complex64::new(0.0, 0.0), 3).direct_sum(&ComplexMatrix::diag_real(&[2.0, -0.5]));
    let x = ComplexMatrix::from_real_rows(&[
        &[1.0, 2.0, 0.0, 0.0, 1.0],
        &[0.0, 1.0, 3.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 1.0, 0.0],
        &[1.0, 0.0, 0.0, 1.0, 2.0],
        &[0.0, 1.0, 0.0, 0.0, 1.0],
    ])
    .unwrap();
    let x_inv = ComplexMatrix::new(x.as_dmatrix().clone().try_inverse().unwrap()).unwrap();
    let a = x.matmul(&j).unwrap().matmul(&x_inv).unwrap();

    println!("ascent {}, descent {}, dis {}", ascent(&a, &cfg).unwrap(), descent(&a, &cfg).unwrap(), dis(&a, &cfg).unwrap());
    let cert = drazin_inverse(&a, &cfg).unwrap();
    println!("claimed index {:?}, passed {}", cert.claimed_index, cert.passed());
    for c in &cert.checks {
        println!("  {:<24} {} ({:.2e})", c.name, if c.pass { "ok" } else { "FAILED" }, c.residual);
    }
    println!("S =\n{:.4}", cert.inverse.rounded(10).as_dmatrix());
}
