//! Kernel and cokernel dimensions of `A - λ` inside the analytic core, on
//! matrices built as `X (A_M ⊕ N) X^{-1}` with `A_M` invertible and `N` nilpotent.

mod support;

use gzspec::gz::punctured_neighborhood_check;
use gzspec::ToleranceConfig;
use support::{block_case, c, rng};

#[test]
fn punctured_disk_dimensions_match_the_core_block() {
    let cfg = ToleranceConfig::default();
    let mut r = rng(11);
    for trial in 0..20 {
        let case = block_case(&mut r);
        let rep = punctured_neighborhood_check(&case.a, &case.p, 12, &cfg).unwrap();
        assert!((rep.gamma - case.gamma).abs() <= 1e-8 * case.gamma.max(1.0), "trial {trial}: γ {} vs {}", rep.gamma, case.gamma);
        assert_eq!((rep.alpha, rep.beta), (0, 0), "trial {trial}");
        assert_eq!(rep.samples.len(), 12);
        for s in &rep.samples {
            let m = c(s.lambda[0], s.lambda[1]).norm();
            assert!(m > 0.0 && m < case.gamma / 2.0, "trial {trial}: |λ| = {m}");
            assert_eq!((s.kernel_dim, s.codim), (0, 0), "trial {trial}: {s:?}");
            assert!(s.pass);
        }
    }
}
