//! The JSON reports behind the command line, built in process.

use gzspec::operators::{OperatorModel, DiagonalModel};
use gzspec::report::{analyze, inverse, to_json, verify, SelectionInput, Suite, Tolerances};
use gzspec::ExactComplex;

fn main() {
    let tol = Tolerances::default();
    let t = OperatorModel::Diagonal(DiagonalModel::harmonic());

    let a = analyze(&t, "harmonic", &ExactComplex::zero(), &tol).unwrap();
    print!("{}", to_json(&a));

    let sel = SelectionInput::from_json(r#"{ "selected_clusters": [0], "boundary_moves": [[0, 1]] }"#).unwrap();
    let inv = inverse(&t, "harmonic", &sel, None, &tol).unwrap();
    println!("inverse passed: {}", inv.passed);

    let v = verify(&t, "harmonic", Suite::Perturbation, Some(4), &tol);
    println!("perturbation suite: {}", if v.passed { "pass" } else { "fail" });
}
