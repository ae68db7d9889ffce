//! The g_z tier at 0 survives finite-rank commuting perturbations of a
//! diagonal operator.

use std::collections::BTreeMap;

use gzspec::operators::{classify, perturb, DiagonalModel, OperatorModel};
use gzspec::{ExactComplex, ToleranceConfig};

fn main() {
    let cfg = ToleranceConfig::default();
    let zero = ExactComplex::zero();
    let t = OperatorModel::Diagonal(DiagonalModel::harmonic());
    println!("T = diag(1/n): {:?}", classify(&t, &zero, &cfg).unwrap().class);

    let edits = [
        BTreeMap::from([(0, ExactComplex::zero())]),
        BTreeMap::from([(1, ExactComplex::from_ints(5, 0)), (4, ExactComplex::frac(1, 2))]),
        BTreeMap::from([(2, ExactComplex::frac(-1, 3))]),
    ];
    for e in edits {
        let f = perturb(&t, e.clone()).unwrap();
        let c = classify(&f, &zero, &cfg).unwrap();
        let shown: Vec<String> = e.iter().map(|(k, v)| format!("{k}: {v}")).collect();
        println!("T + F with F = {{{}}}: {:?}, in acc acc {}", shown.join(", "), c.class, c.tiers.in_acc_acc);
    }
}
