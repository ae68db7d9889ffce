//! Kernel/cokernel data and the index on weighted shifts, their adjoints,
//! powers and direct sums.

use gzspec::exact::ratio;
use gzspec::operators::{adjoint_model, classify, index, point_data, Direction, OperatorModel, WeightedShift, Weights};
use gzspec::{ExactComplex, ToleranceConfig};

fn main() {
    let cfg = ToleranceConfig::default();
    let zero = ExactComplex::zero();
    let weights = Weights::Constant { value: ratio(1, 2), prefix: vec![ratio(3, 1)] };
    let l = OperatorModel::WeightedShift(WeightedShift::new(Direction::Left, weights).unwrap());
    let r = OperatorModel::WeightedShift(WeightedShift::right());

    let models = [
        ("L", l.clone()),
        ("L*", adjoint_model(&l)),
        ("L^3", OperatorModel::power(l.clone(), 3).unwrap()),
        ("L + R", OperatorModel::direct_sum(vec![l.clone(), r]).unwrap()),
    ];
    for (name, m) in &models {
        let d = point_data(m, &zero, &cfg).unwrap();
        println!(
            "{name:<6} α = {:<3} β = {:<3} ind = {:<12} class {:?}",
            d.alpha.to_string(),
            d.beta.to_string(),
            format!("{:?}", index(m, &zero, &cfg).unwrap()),
            classify(m, &zero, &cfg).unwrap().class
        );
    }
    // inside the disk |λ| < 1/2 away from 0 the query is refused
    println!("{:?}", classify(&l, &ExactComplex::frac(1, 4), &cfg).map(|c| c.class));
}
