//! Exact g_z-inverse of the diagonal operator diag(1, 1/2, 1/3, ...) for the
//! spectral set {0} ∪ {1/n : n >= 3}.

use gzspec::operators::{gz_inverse_diagonal, DiagonalModel, OperatorModel};
use gzspec::spectral_sets::SpectralSetSelection;

fn main() {
    let t = DiagonalModel::harmonic();
    let spec = t.value_set();
    let sel = SpectralSetSelection::new().with_cluster(0).with_move(0, 1).with_move(0, 2);
    println!("σ(T) \\ σ = {:?}", sel.complement(&spec).unwrap().points().iter().map(|v| v.to_string()).collect::<Vec<_>>());

    let g = gz_inverse_diagonal(&OperatorModel::Diagonal(t.clone()), &sel).unwrap();
    let show = |v: Vec<gzspec::ExactComplex>| v.iter().map(|z| z.to_string()).collect::<Vec<_>>().join(", ");
    println!("T = diag({}, ...)", show(t.leading_entries(6)));
    println!("S = diag({}, ...)", show(g.inverse.leading_entries(6)));
    println!("σ(S) = {{{}}}", show(g.spectrum.points().iter().cloned().collect()));
    println!("matches {{0}} ∪ 1/(σ(T) \\ σ): {}", g.spectrum == g.expected_spectrum);
    println!("certificate passed: {}", g.certificate.passed());
}
