//! Exact rational evaluation: probabilities as fractions, no rounding
//! anywhere. Useful when a published table needs to be checked digit by
//! digit, or when float answers at two nearby points must be trusted to
//! order correctly.

use ordered_spacings::model::{SpacingModel, StatKind};
use ordered_spacings::numeric::{ratio, rational_to_f64};
use ordered_spacings::series::EvalPolicy;

fn main() {
    let dist = SpacingModel::with_edges(6)
        .unwrap()
        .distribution(StatKind::kth(2))
        .unwrap();

    // P(second-smallest gap <= 1/10), exactly.
    let x = ratio(1, 10);
    let cdf = dist.cdf_exact(&x).unwrap();
    let sf = dist.sf_exact(&x).unwrap();
    println!("second smallest of 7 gaps, x = 1/10");
    println!("  CDF = {cdf}");
    println!("      = {:.17}", rational_to_f64(&cdf));
    println!("  SF  = {sf}");

    // The two tails add to exactly one: fraction arithmetic, not 1 - eps.
    assert_eq!(&cdf + &sf, ratio(1, 1));
    println!("  CDF + SF == 1 holds as an identity of fractions");

    // Floats agree with the exact route to full precision here.
    let f = dist.cdf(0.1, &EvalPolicy::default()).unwrap();
    println!("\n  float CDF(0.1)    = {f:.17}");
    println!("  exact at same x   = {:.17}", rational_to_f64(&cdf));

    // Exact evaluation also certifies strict ordering between close
    // points, something float output alone cannot promise.
    let a = dist.cdf_exact(&ratio(999, 10_000)).unwrap();
    let b = dist.cdf_exact(&ratio(1_001, 10_000)).unwrap();
    assert!(a < b);
    println!("\n  CDF(999/10000) < CDF(1001/10000): certified exactly");
}
