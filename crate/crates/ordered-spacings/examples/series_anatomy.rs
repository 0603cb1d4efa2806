//! A look inside the evaluator: the weight/prefactor table the densities
//! are assembled from, the recursion sweep that certifies it, and the
//! breakpoints where the piecewise polynomials change.

use ordered_spacings::coefficients::{verify_recursions, CoefficientTable};
use ordered_spacings::model::{SpacingModel, StatKind};
use ordered_spacings::numeric::rational_to_f64;

fn main() {
    // Every density here is sum_i w(i,k) * c(k,n) * (window polynomial)^m.
    // The weights depend only on (i, k); one table serves all three
    // statistic families at a given n.
    let table = CoefficientTable::build(10, 4, true).unwrap();
    println!("weights w(i,k) for k <= 4 (exact):");
    for k in 1..=table.k_max() {
        print!("  k={k}:");
        for i in 1..=k {
            print!(" {}", table.weight_exact(i, k).unwrap());
        }
        println!();
    }
    println!("\nprefactors c(k, n=10):");
    for k in 1..=table.k_max() {
        let c = table.prefactor_exact(k).unwrap();
        println!("  c({k}) = {c} = {:.6e}", rational_to_f64(c));
    }

    // Four exact identities tie neighboring table entries together; a
    // single wrong entry breaks at least one of them.
    let report = verify_recursions(12).unwrap();
    println!(
        "\nrecursion sweep to k=12: {} + {} + {} + {} identities hold",
        report.weight_update_checks,
        report.weight_reduction_checks,
        report.weight_sum_checks,
        report.prefactor_update_checks,
    );

    // The same windows surface as breakpoints on a distribution: kinks
    // in the density that a plotting grid must include to be faithful.
    let dist = SpacingModel::with_edges(10)
        .unwrap()
        .distribution(StatKind::sum_smallest(4))
        .unwrap();
    let pts = dist.breakpoints();
    println!("\n{}: support [0, {:.6}]", dist.describe(), dist.support().1);
    print!("piece boundaries:");
    for p in &pts {
        print!(" {p:.6}");
    }
    println!();
}
