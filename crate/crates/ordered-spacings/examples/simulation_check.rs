//! Cross-check a closed-form CDF against brute-force simulation.
//!
//! The sampler never touches the analytic code: it drops points, sorts
//! gaps, and sums them. If the formulas were wrong anywhere along the
//! support, the KS distance here would blow through the bound.

use ordered_spacings::model::{SpacingModel, StatKind};
use ordered_spacings::montecarlo::{draw_statistic, ks_distance};
use ordered_spacings::series::EvalPolicy;

fn main() {
    let model = SpacingModel::without_edges(12).unwrap();
    let kind = StatKind::sum_largest(4);
    let dist = model.distribution(kind).unwrap();
    let policy = EvalPolicy::default();

    let replications = 200_000;
    let batch = draw_statistic(model, kind, 42, replications).unwrap();
    let summary = batch.summary();
    println!(
        "sum of 4 largest interior gaps, n = 12: {replications} replications, seed {}",
        batch.seed()
    );
    println!(
        "  sample   mean {:.6}  min {:.6}  max {:.6}",
        summary.mean, summary.min, summary.max
    );

    let sorted = batch.sorted();
    let ks = ks_distance(&sorted, |x| dist.cdf(x, &policy)).unwrap();

    // 1.63 / sqrt(R) is the 1% critical value of the one-sample KS test.
    let bound = 1.63 / (replications as f64).sqrt();
    println!("  KS distance to the analytic CDF: {ks:.5}");
    println!("  1% critical value:               {bound:.5}");
    assert!(ks < bound, "simulation disagrees with the closed form");
    println!("  agreement holds");

    // Quantile check from the same draws: the empirical 95th percentile
    // should sit at the analytic one within Monte Carlo error.
    let q95_empirical = sorted[(replications as f64 * 0.95) as usize];
    let q95 = ordered_spacings::inference::quantile(&dist, 0.95, &policy).unwrap();
    println!("\n  95th percentile: simulated {q95_empirical:.5}, analytic {q95:.5}");
}
