//! Additive and multiplicative splits along a Riesz projection, and the
//! punctured-neighbourhood dimensions of `A - λ` near 0.

use gzspec::gz::{additive_split, multiplicative_split, punctured_neighborhood_check, riesz_projection, Contour};
use gzspec::{ComplexMatrix, ToleranceConfig};
use num::complex::Complex64;

fn main() {
    let cfg = ToleranceConfig::default();
    let c = |x: f64| Complex64::new(x, 0.0);
    let core = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 3.0]]).unwrap();
    let a = core.direct_sum(&ComplexMatrix::jordan_block(c(0.0), 2));
    // P onto the invertible part: the circle |λ - 2.5| = 1.5 misses 0
    let p = riesz_projection(&a, &Contour::circle(c(2.5), 1.5).unwrap(), &cfg).unwrap();

    let add = additive_split(&a, &p, &cfg).unwrap();
    println!("A = S + R, passed {}\nS =\n{:.3}R =\n{:.3}", add.passed(), add.s.rounded(10).as_dmatrix(), add.r.rounded(10).as_dmatrix());
    let mul = multiplicative_split(&a, &p, &cfg).unwrap();
    println!("A = S R, passed {}", mul.passed());

    let rep = punctured_neighborhood_check(&a, &p, 6, &cfg).unwrap();
    println!("γ(A_M) = {:.4}, α = {}, β = {}", rep.gamma, rep.alpha, rep.beta);
    for s in &rep.samples {
        println!("  λ = {:+.3}{:+.3}i  dim N∩K = {}  codim R+H0 = {}", s.lambda[0], s.lambda[1], s.kernel_dim, s.codim);
    }
}
