//! Quick visual tour: ASCII density sketches of the three statistic
//! families for one model, plus their quartiles.

use ordered_spacings::inference::quantile;
use ordered_spacings::model::{SpacingModel, StatKind};
use ordered_spacings::series::EvalPolicy;
use ordered_spacings::SpacingDistribution;

fn sketch(dist: &SpacingDistribution, policy: &EvalPolicy) {
    let (lo, hi) = dist.support();
    let cols = 56;
    let values: Vec<f64> = (0..cols)
        .map(|j| {
            let x = lo + (hi - lo) * (j as f64 + 0.5) / cols as f64;
            dist.pdf(x, policy).unwrap()
        })
        .collect();
    let peak = values.iter().cloned().fold(0.0, f64::max);

    println!("{}  on [0, {:.4}]", dist.describe(), hi);
    for row in (1..=8).rev() {
        let cut = peak * f64::from(row - 1) / 8.0;
        let line: String = values
            .iter()
            .map(|&v| if v > cut { '#' } else { ' ' })
            .collect();
        println!("  |{line}");
    }
    println!("  +{}", "-".repeat(cols));

    let q = |p| quantile(dist, p, policy).unwrap();
    println!(
        "  quartiles: {:.4}  {:.4}  {:.4}\n",
        q(0.25),
        q(0.5),
        q(0.75)
    );
}

fn main() {
    let model = SpacingModel::with_edges(10).unwrap();
    let policy = EvalPolicy::default();
    for kind in [
        StatKind::kth(3),
        StatKind::sum_smallest(3),
        StatKind::sum_largest(3),
    ] {
        sketch(&model.distribution(kind).unwrap(), &policy);
    }
}
