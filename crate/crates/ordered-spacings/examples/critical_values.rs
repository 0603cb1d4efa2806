//! Critical-value tables for gap monitoring: the thresholds a scan should
//! alarm at, for a range of sample sizes, without any simulation.

use ordered_spacings::inference::quantile;
use ordered_spacings::model::{SpacingModel, StatKind};
use ordered_spacings::series::EvalPolicy;

fn main() {
    let policy = EvalPolicy::default();
    let levels = [0.001, 0.01, 0.05, 0.95, 0.99, 0.999];

    println!("smallest gap among n uniform points (boundaries counted)");
    print!("{:>4}", "n");
    for p in levels {
        print!("{:>12}", format!("q({p})"));
    }
    println!();

    for n in [5u32, 10, 20, 50, 100, 200] {
        let dist = SpacingModel::with_edges(n)
            .unwrap()
            .distribution(StatKind::kth(1))
            .unwrap();
        print!("{n:>4}");
        for p in levels {
            let q = quantile(&dist, p, &policy).unwrap();
            print!("{q:>12.3e}");
        }
        println!();
    }

    // The same tail thresholds for a sum statistic: an alarm on the total
    // span of the 3 tightest gaps is less twitchy than one on the single
    // tightest gap.
    println!("\nsum of the 3 smallest gaps, n = 50");
    let dist = SpacingModel::with_edges(50)
        .unwrap()
        .distribution(StatKind::sum_smallest(3))
        .unwrap();
    for p in levels {
        let q = quantile(&dist, p, &policy).unwrap();
        println!("  q({p:<5}) = {q:.6e}");
    }
}
