//! Spectral tiers of a countable set: the harmonic sequence with a second
//! harmonic sequence attached to each of its points.

use gzspec::spectral_sets::{ChildTemplate, Cluster, SpectralSetSelection, SpectrumModel, TailSpec};
use gzspec::ExactComplex;

fn main() {
    let harmonic = TailSpec::harmonic(ExactComplex::one());
    // 1/m (1 + 1/k): leaves accumulate at every 1/m, and the 1/m accumulate at 0
    let nested = Cluster::with_children(ExactComplex::zero(), harmonic.clone(), 0, vec![ChildTemplate::new(harmonic.clone())])
        .unwrap();
    let shifted = Cluster::harmonic(ExactComplex::from_ints(2, 0));
    let s = SpectrumModel::new([ExactComplex::frac(-1, 2)], vec![nested.clone(), shifted]);

    for z in [ExactComplex::zero(), ExactComplex::frac(1, 3), ExactComplex::frac(4, 9), ExactComplex::from_ints(2, 0)] {
        println!(
            "{z:>6}: in S {:<5} acc {:<5} acc acc {:<5} tier {:?}",
            s.contains(&z),
            s.acc_contains(&z),
            s.acc_acc_contains(&z),
            s.classify_at(&z)
        );
    }
    println!("first leaves: {:?}", nested.leaves(6).iter().map(|v| v.to_string()).collect::<Vec<_>>());

    // the cluster at 2 together with -1/2 is a spectral set; {0} alone is not
    let sel = SpectralSetSelection::new().with_cluster(1).with_point(ExactComplex::frac(-1, 2));
    println!("σ = cluster at 2 and -1/2: spectral set {}", s.is_spectral_set(&sel).unwrap());
    let rest = sel.complement(&s).unwrap();
    println!("σ(T) \\ σ: zeroloid {}, tier at 0 {:?}", rest.is_zeroloid(), rest.classify_zero());
    let bad = SpectralSetSelection::new().with_move(0, 3);
    println!("moving family 3 alone: spectral set {}", s.is_spectral_set(&bad).unwrap());
}
