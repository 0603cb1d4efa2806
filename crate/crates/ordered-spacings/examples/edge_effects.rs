//! The boundary rule changes the law, not just the gap count.
//!
//! n points on [0,1] make n+1 gaps when the interval ends count as gap
//! boundaries, and n-1 gaps when only point-to-point distances matter.
//! Same points, same k, two different distributions; this prints them
//! side by side along with the degenerate orders the no-edge mode gains.

use ordered_spacings::model::{SpacingModel, StatKind};
use ordered_spacings::series::EvalPolicy;

fn main() {
    let n = 8;
    let kind = StatKind::kth(2);
    let with = SpacingModel::with_edges(n).unwrap().distribution(kind).unwrap();
    let without = SpacingModel::without_edges(n).unwrap().distribution(kind).unwrap();
    let policy = EvalPolicy::default();

    println!("{}  vs  {}", with.describe(), without.describe());
    println!(
        "supports: [0, {:.4}] vs [0, {:.4}]\n",
        with.support().1,
        without.support().1
    );

    println!("{:>8} {:>16} {:>16}", "x", "CDF with edges", "CDF without");
    for step in 0..=8 {
        let x = 0.12 * f64::from(step) / 8.0;
        let a = with.cdf(x, &policy).unwrap();
        let b = without.cdf(x, &policy).unwrap();
        println!("{x:>8.3} {a:>16.8} {b:>16.8}");
    }
    println!("\nfewer gaps without edges, so mass moves toward larger spacings");

    // Orders that reference every gap degenerate: the full sum is the
    // whole interval (a point mass at 1) with edges, and the span of the
    // points without them.
    let all_with = SpacingModel::with_edges(n)
        .unwrap()
        .distribution(StatKind::sum_smallest(n + 1))
        .unwrap();
    let all_without = SpacingModel::without_edges(n)
        .unwrap()
        .distribution(StatKind::sum_smallest(n - 1))
        .unwrap();
    println!("\nsum of all gaps:");
    println!("  with edges: always exactly 1 (degenerate: {})", all_with.is_degenerate());
    let median = ordered_spacings::inference::quantile(&all_without, 0.5, &policy).unwrap();
    println!("  without:    the span of the points; median {median:.6}");
}
