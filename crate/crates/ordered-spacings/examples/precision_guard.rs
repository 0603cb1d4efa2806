//! What happens when float arithmetic runs out of digits.
//!
//! Deep in the support of a high-order sum statistic the series terms
//! alternate and cancel to fifteen-plus digits, so a pure float evaluation
//! would return noise. The evaluator counts the digits surviving the
//! cancellation and either refuses (float mode) or reroutes to exact
//! arithmetic (auto mode). This example makes both behaviors visible.

use ordered_spacings::model::{SpacingModel, StatKind};
use ordered_spacings::series::{EvalMode, EvalPolicy, EvalRoute};

fn main() {
    let dist = SpacingModel::with_edges(30)
        .unwrap()
        .distribution(StatKind::sum_smallest(15))
        .unwrap();
    let series = dist.cdf_series().unwrap();
    let (lo, hi) = dist.support();

    let float_only = EvalPolicy {
        mode: EvalMode::FloatLog,
        ..EvalPolicy::default()
    };
    let auto = EvalPolicy::default();

    println!("CDF of the sum of the 15 smallest gaps, n = 30");
    println!(
        "{:>8} {:>10} {:>22} {:>10}",
        "x", "float", "auto", "route"
    );
    for step in 0..=10 {
        let x = lo + (hi - lo) * f64::from(step) / 10.0;

        let float_col = match series.eval(x, &float_only) {
            Ok(v) => format!("{:.4e}", v.value),
            Err(_) => "refused".into(),
        };
        let evaluated = series.eval(x, &auto).unwrap();
        let route = match evaluated.route {
            EvalRoute::Float => "float",
            EvalRoute::RationalFallback => "exact*",
            EvalRoute::Rational => "exact",
        };
        println!(
            "{x:>8.4} {float_col:>10} {:>22.16e} {route:>10}",
            evaluated.value
        );
    }
    println!("\n(exact* = float cancellation detected, rerouted to rationals)");

    // The guard threshold is a policy knob. Between the comfortable region
    // near the support edge and the refusal region in the bulk lies a band
    // where six digits survive but twelve do not; the knob picks the side.
    let strict = EvalPolicy {
        mode: EvalMode::FloatLog,
        min_surviving_digits: 12.0,
        ..EvalPolicy::default()
    };
    'outer: for (label, s) in [
        ("density", dist.pdf_series().unwrap()),
        ("CDF", dist.cdf_series().unwrap()),
    ] {
        for j in 0..=2000 {
            let x = lo + (hi - lo) * f64::from(j) / 2000.0;
            if s.eval(x, &float_only).is_ok() && s.eval(x, &strict).is_err() {
                let v = s.eval(x, &float_only).unwrap();
                println!(
                    "\n{label} at x = {x:.5}: the float route keeps {:.1} digits",
                    v.surviving_digits
                );
                println!("  default guard (6 digits) accepts, value {:.6e}", v.value);
                println!("  strict guard (12 digits) refuses the same evaluation");
                break 'outer;
            }
        }
    }
}
