//! Acceptance gate: one test per criterion, each against an independent
//! oracle or an exact identity, at the full stated scale. The test names
//! double as the report: `cargo test --test acceptance` prints one
//! pass/fail line per criterion.

use std::time::{Duration, Instant};

use num_traits::{One, Zero};

use ordered_spacings::coefficients::verify_recursions;
use ordered_spacings::dist_noedges;
use ordered_spacings::inference::{quantile, QUANTILE_TOLERANCE};
use ordered_spacings::model::{SpacingModel, StatFamily, StatKind};
use ordered_spacings::montecarlo::{draw_statistics, ks_distance};
use ordered_spacings::numeric::{
    ratio, rational_from_f64, rational_int_pow, rational_to_f64, Rational,
};
use ordered_spacings::quad;
use ordered_spacings::series::{EvalMode, EvalPolicy, EvalRoute};
use ordered_spacings::{Error, SpacingDistribution};

fn we(n: u32) -> SpacingModel {
    SpacingModel::with_edges(n).unwrap()
}

fn ne(n: u32) -> SpacingModel {
    SpacingModel::without_edges(n).unwrap()
}

fn dist(model: SpacingModel, kind: StatKind) -> SpacingDistribution {
    model.distribution(kind).unwrap()
}

fn auto() -> EvalPolicy {
    EvalPolicy::default()
}

fn float_only() -> EvalPolicy {
    EvalPolicy {
        mode: EvalMode::FloatLog,
        ..EvalPolicy::default()
    }
}

/// Evenly spaced floats over [lo, hi], endpoints included.
fn grid(lo: f64, hi: f64, points: u32) -> Vec<f64> {
    (0..points)
        .map(|j| {
            if j + 1 == points {
                hi
            } else {
                lo + (hi - lo) * f64::from(j) / f64::from(points - 1)
            }
        })
        .collect()
}

/// Evenly spaced rationals over the exact support, endpoints included.
fn exact_grid(lo: &Rational, hi: &Rational, points: i64) -> Vec<Rational> {
    (0..points)
        .map(|j| lo + (hi - lo) * ratio(j, points - 1))
        .collect()
}

/// Auto policy with a chosen precision floor: every point is either a
/// float value good to that many digits or an exact-arithmetic retry, so a
/// check built on it carries no hidden pointwise noise above 10^-digits.
/// The range clamp gets a decade of slack above that noise so honest
/// wobble around 0 and 1 is snapped, not rejected.
fn floored(digits: f64) -> EvalPolicy {
    EvalPolicy {
        min_surviving_digits: digits,
        negative_tolerance: 10f64.powf(1.0 - digits),
        ..EvalPolicy::default()
    }
}

fn nine_digit_policy() -> EvalPolicy {
    floored(9.0)
}

/// Largest polynomial degree any density here reaches.
fn pdf_degree(model: SpacingModel) -> u32 {
    model.n().saturating_sub(1).max(1)
}

/// Integral of the pdf from support low to each requested point,
/// accumulated segment by segment with breakpoint seeding. Each segment is
/// a polynomial piece, so the fixed-order rule integrates it exactly.
fn cumulative_integrals(d: &SpacingDistribution, points: &[f64], degree: u32) -> Vec<f64> {
    let policy = nine_digit_policy();
    let breaks = d.breakpoints();
    let (lo, _) = d.support();
    let mut acc = 0.0;
    let mut prev = lo;
    let mut out = Vec::with_capacity(points.len());
    for &s in points {
        if s > prev {
            let mut pieces = vec![prev];
            pieces.extend(breaks.iter().copied().filter(|b| *b > prev && *b < s));
            pieces.push(s);
            let r = quad::integrate_polynomial(|x| d.pdf(x, &policy).unwrap(), &pieces, degree);
            acc += r.value;
            prev = s;
        }
        out.push(acc);
    }
    out
}

#[test]
fn criterion_01_coefficient_recursions_exact() {
    let t0 = Instant::now();
    let report = verify_recursions(30).expect("a recursion identity failed");
    let elapsed = t0.elapsed();
    assert!(report.weight_update_checks > 400);
    assert!(report.weight_reduction_checks > 400);
    assert!(report.weight_sum_checks >= 29, "one sum rule per k = 2..=30");
    assert!(report.prefactor_update_checks > 800);
    assert!(
        elapsed < Duration::from_secs(5),
        "recursion sweep took {elapsed:?}"
    );
    println!(
        "criterion 1: PASS — {} + {} + {} + {} exact identities in {elapsed:?}",
        report.weight_update_checks,
        report.weight_reduction_checks,
        report.weight_sum_checks,
        report.prefactor_update_checks
    );
}

/// Smallest-gap law, written out independently: N(N+1)(1-(N+1)x)^(N-1).
fn smallest_gap_pdf_exact(n: i64, x: &Rational) -> Rational {
    if *x > ratio(1, n + 1) {
        return Rational::zero();
    }
    let base = Rational::one() - ratio(n + 1, 1) * x;
    ratio(n * (n + 1), 1) * rational_int_pow(&base, (n - 1) as u32)
}

/// Two-branch law for the sum of the two smallest gaps, with the corrected
/// prefactor n^2(n+1)/(n-1).
fn two_smallest_pdf_exact(n: i64, x: &Rational) -> Rational {
    if *x > ratio(2, n + 1) {
        return Rational::zero();
    }
    let pre = Rational::new((n * n * (n + 1)).into(), (n - 1).into());
    let b1 = Rational::one() - ratio(n + 1, 2) * x;
    let mut v = rational_int_pow(&b1, (n - 1) as u32);
    if *x <= ratio(1, n) {
        let b2 = Rational::one() - ratio(n, 1) * x;
        v -= rational_int_pow(&b2, (n - 1) as u32);
    }
    pre * v
}

#[test]
fn criterion_02_reduction_to_known_laws() {
    let t0 = Instant::now();
    let float_policy = float_only();
    for n in 2i64..=30 {
        for k in [1u32, 2] {
            let d = dist(we(n as u32), StatKind::sum_smallest(k));
            let oracle = |x: &Rational| -> Rational {
                if k == 1 {
                    smallest_gap_pdf_exact(n, x)
                } else {
                    two_smallest_pdf_exact(n, x)
                }
            };
            let (lo, hi) = d.support_exact();
            for x in exact_grid(&lo, &hi, 100) {
                // Exact leg: rational evaluation must equal the closed
                // form identically.
                let want = oracle(&x);
                assert_eq!(d.pdf_exact(&x).unwrap(), want, "n={n} k={k} x={x}");

                // Float leg: same point, 1e-12 relative. A precision
                // refusal is only tolerated where the truth is zero
                // (structural cancellation at the origin).
                let xf = rational_to_f64(&x);
                let want_f = oracle(&rational_from_f64(xf));
                match d.pdf(xf, &float_policy) {
                    Ok(got) => {
                        // Where the polynomial has a root (the support
                        // edge), one ulp of input rounding dominates both
                        // sides, so the comparison there is absolute.
                        let w = rational_to_f64(&want_f);
                        assert!(
                            (got - w).abs() <= 1e-12 || ((got - w) / w).abs() <= 1e-12,
                            "n={n} k={k} x={xf}: float {got} vs exact {w}"
                        );
                    }
                    Err(Error::Precision { .. }) => {
                        assert!(
                            want_f.is_zero(),
                            "refusal at n={n} k={k} x={xf} where truth is nonzero"
                        );
                    }
                    Err(e) => panic!("n={n} k={k} x={xf}: {e}"),
                }
            }
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!("criterion 2: PASS — k=1 and k=2 closed forms, N=2..30, in {elapsed:?}");
}

#[test]
fn criterion_03_densities_normalize() {
    let t0 = Instant::now();
    let policy = nine_digit_policy();
    let mut checked = 0usize;
    let mut worst = 0.0f64;

    let mut run = |model: SpacingModel| {
        let degree = pdf_degree(model);
        for k in 1..=model.max_k(StatFamily::KthSmallest) {
            for kind in [
                StatKind::kth(k),
                StatKind::sum_smallest(k),
                StatKind::sum_largest(k),
            ] {
                let d = dist(model, kind);
                if d.is_degenerate() {
                    continue;
                }
                let r = quad::integrate_polynomial(
                    |x| d.pdf(x, &policy).unwrap(),
                    &d.breakpoints(),
                    degree,
                );
                let err = (r.value - 1.0).abs();
                assert!(
                    err <= 1e-8,
                    "{}: integral {} over {} evals",
                    d.describe(),
                    r.value,
                    r.evals
                );
                worst = worst.max(err);
                checked += 1;
            }
        }
    };

    for n in 1..=30 {
        run(we(n));
    }
    for n in 3..=20 {
        run(ne(n));
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    println!(
        "criterion 3: PASS — {checked} densities integrate to 1 (worst |err| {worst:.2e}) in {elapsed:?}"
    );
}

#[test]
fn criterion_04_cdf_matches_integrated_pdf() {
    let t0 = Instant::now();
    let policy = nine_digit_policy();
    let mut checked = 0usize;
    for (model, kind, tol) in [
        (we(5), StatKind::kth(2), 1e-8),
        (we(9), StatKind::kth(4), 1e-8),
        (we(14), StatKind::kth(7), 1e-8),
        (we(9), StatKind::sum_smallest(3), 1e-8),
        (we(14), StatKind::sum_smallest(6), 1e-8),
        (we(9), StatKind::sum_largest(4), 1e-8),
        (ne(5), StatKind::kth(3), 1e-8),
        (ne(9), StatKind::kth(4), 1e-8),
        (ne(14), StatKind::kth(6), 1e-8),
        (ne(9), StatKind::sum_smallest(4), 1e-8),
        (ne(14), StatKind::sum_smallest(5), 1e-8),
        // The independently derived lower tail for the largest interior
        // sums carries the tighter bound.
        (ne(5), StatKind::sum_largest(2), 1e-9),
        (ne(9), StatKind::sum_largest(3), 1e-9),
        (ne(14), StatKind::sum_largest(6), 1e-9),
    ] {
        let d = dist(model, kind);
        let (lo, hi) = d.support();
        let points = grid(lo, hi, 50);
        let integrals = cumulative_integrals(&d, &points, pdf_degree(model));
        for (s, integral) in points.iter().zip(integrals) {
            let cdf = d.cdf(*s, &policy).unwrap();
            assert!(
                (cdf - integral).abs() <= tol,
                "{} at {s}: cdf {cdf} vs integral {integral}",
                d.describe()
            );
            checked += 1;
        }
    }
    println!(
        "criterion 4: PASS — {checked} grid points, analytic CDF vs quadrature, in {:?}",
        t0.elapsed()
    );
}

#[test]
fn criterion_05_complement_identity() {
    let t0 = Instant::now();
    // A 12-digit floor keeps the float path wherever it can honestly meet
    // the 1e-12 identity tolerance and retries exactly where it cannot.
    let float12 = floored(12.0);
    let mut exact_checks = 0usize;
    for n in 1u32..=20 {
        for k in 1..=n {
            let kc = n + 1 - k;
            let smax = dist(we(n), StatKind::sum_largest(k));
            let smin = dist(we(n), StatKind::sum_smallest(kc));
            let (lo, hi) = smax.support_exact();
            for s in exact_grid(&lo, &hi, 100) {
                let c = Rational::one() - &s;
                // Reflection bookkeeping: SF of the k largest is the CDF
                // of the complementary smallest sum.
                assert_eq!(
                    smax.sf_exact(&s).unwrap(),
                    smin.cdf_exact(&c).unwrap(),
                    "n={n} k={k} s={s}"
                );
                // Independent series: the directly built lower tail must
                // complement the reflected one exactly.
                assert_eq!(
                    smax.cdf_exact(&s).unwrap() + smin.cdf_exact(&c).unwrap(),
                    Rational::one(),
                    "n={n} k={k} s={s}"
                );
                exact_checks += 2;
            }
            let (lof, hif) = smax.support();
            for s in grid(lof, hif, 100) {
                let a = smax.sf(s, &float12).unwrap();
                let b = smin.cdf(1.0 - s, &float12).unwrap();
                assert!(
                    (a - b).abs() <= 1e-12,
                    "n={n} k={k} s={s}: sf {a} vs complement cdf {b}"
                );
            }
        }
    }
    println!(
        "criterion 5: PASS — {exact_checks} exact complement identities (plus float grids) in {:?}",
        t0.elapsed()
    );
}

/// The criterion-6 matrix: 14 combinations spanning both boundary modes
/// and all three families, grouped by model so each group shares draws.
fn mc_matrix() -> Vec<(SpacingModel, Vec<StatKind>, u64)> {
    vec![
        (
            we(5),
            vec![
                StatKind::kth(2),
                StatKind::sum_smallest(2),
                StatKind::sum_largest(2),
            ],
            101,
        ),
        (
            we(12),
            vec![
                StatKind::kth(4),
                StatKind::sum_smallest(5),
                StatKind::sum_largest(3),
            ],
            102,
        ),
        (we(30), vec![StatKind::kth(15), StatKind::sum_smallest(5)], 103),
        (
            ne(5),
            vec![
                StatKind::kth(1),
                StatKind::sum_smallest(2),
                StatKind::sum_largest(2),
            ],
            904,
        ),
        (
            ne(12),
            vec![
                StatKind::kth(3),
                StatKind::sum_smallest(4),
                StatKind::sum_largest(5),
            ],
            905,
        ),
        (ne(20), vec![StatKind::sum_largest(6)], 906),
    ]
}

#[test]
fn criterion_06_monte_carlo_ks() {
    let t0 = Instant::now();
    // CDF noise of 1e-4 is invisible next to the 0.0017 KS tolerance; the
    // low floor keeps a million evaluations per combination on the float
    // path.
    let policy = floored(4.0);
    let mut combos = 0usize;
    let mut worst = 0.0f64;
    for (model, kinds, seed) in mc_matrix() {
        let batches = draw_statistics(model, &kinds, seed, 1_000_000).unwrap();
        for batch in batches {
            let d = dist(model, batch.kind());
            let sorted = batch.sorted();
            let ks = ks_distance(&sorted, |x| d.cdf(x, &policy)).unwrap();
            assert!(ks <= 0.0017, "{}: KS {ks}", d.describe());
            worst = worst.max(ks);
            combos += 1;
        }
    }
    let elapsed = t0.elapsed();
    assert!(combos >= 12);
    assert!(elapsed < Duration::from_secs(180), "took {elapsed:?}");
    println!(
        "criterion 6: PASS — {combos} combinations at 1e6 replications, worst KS {worst:.5}, in {elapsed:?}"
    );
}

#[test]
fn criterion_07_no_edge_degenerate_range_law() {
    let policy = auto();
    let mut checked = 0usize;
    for n in [4u32, 8, 16] {
        for kind in [StatKind::sum_smallest(n - 1), StatKind::sum_largest(n - 1)] {
            let d = dist(ne(n), kind);
            for s in grid(0.0, 1.0, 101) {
                let nf = f64::from(n);
                let beta_cdf = nf * s.powi(n as i32 - 1) - (nf - 1.0) * s.powi(n as i32);
                let got = d.cdf(s, &policy).unwrap();
                assert!(
                    (got - beta_cdf).abs() <= 1e-10,
                    "{} at {s}: {got} vs {beta_cdf}",
                    d.describe()
                );
                checked += 1;
            }
        }
    }
    println!("criterion 7: PASS — {checked} points of the all-gaps sum against Beta(N-1,2)");
}

#[test]
fn criterion_08_marginalization_oracle() {
    let t0 = Instant::now();
    let policy = nine_digit_policy();
    let mut checked = 0usize;
    for n in [4u32, 6, 10] {
        let model = ne(n);
        let mut kinds = Vec::new();
        for k in 1..=n - 1 {
            kinds.push(StatKind::kth(k));
        }
        for k in 1..=n.saturating_sub(2) {
            kinds.push(StatKind::sum_smallest(k));
            kinds.push(StatKind::sum_largest(k));
        }
        for kind in kinds {
            let d = dist(model, kind);
            let (lo, hi) = d.support();
            for x in grid(lo, hi, 50) {
                // The oracle call itself enforces error estimate <= 1e-10.
                let oracle =
                    dist_noedges::marginal_pdf_by_quadrature(n, kind, x, 1e-10, 2_000_000)
                        .unwrap();
                let closed = d.pdf(x, &policy).unwrap();
                assert!(
                    (closed - oracle.value).abs() <= 1e-8,
                    "{} at {x}: closed {closed} vs oracle {} (err {})",
                    d.describe(),
                    oracle.value,
                    oracle.error_estimate
                );
                checked += 1;
            }
        }
    }
    println!(
        "criterion 8: PASS — {checked} closed-form points against the marginalization integral in {:?}",
        t0.elapsed()
    );
}

#[test]
fn criterion_09_quantile_round_trip() {
    let policy = nine_digit_policy();
    let combos = [
        (we(8), StatKind::kth(3)),
        (we(12), StatKind::sum_smallest(4)),
        (we(9), StatKind::sum_largest(2)),
        (we(30), StatKind::sum_smallest(5)),
        (ne(7), StatKind::kth(2)),
        (ne(10), StatKind::sum_smallest(3)),
        (ne(12), StatKind::sum_largest(4)),
        (ne(16), StatKind::sum_largest(15)),
    ];
    let mut checked = 0usize;
    for (model, kind) in combos {
        let d = dist(model, kind);
        for i in 1..=99 {
            let p = f64::from(i) / 100.0;
            let q = quantile(&d, p, &policy).unwrap();
            let back = d.cdf(q, &policy).unwrap();
            assert!(
                (back - p).abs() <= QUANTILE_TOLERANCE,
                "{} p={p}: CDF(quantile) = {back}",
                d.describe()
            );
            checked += 1;
        }
    }
    println!("criterion 9: PASS — {checked} round trips within 1e-9 across 8 combinations");
}

#[test]
fn criterion_10_pit_uniformity() {
    let t0 = Instant::now();
    let policy = floored(4.0);
    let mut combos = 0usize;
    let mut worst = 0.0f64;
    for (model, kinds, seed) in mc_matrix() {
        let batches = draw_statistics(model, &kinds, seed.wrapping_add(3000), 100_000).unwrap();
        for batch in batches {
            let d = dist(model, batch.kind());
            let mut u: Vec<f64> = batch
                .values()
                .iter()
                .map(|&x| d.cdf(x, &policy).unwrap())
                .collect();
            u.sort_unstable_by(f64::total_cmp);
            let ks = ks_distance(&u, |v| Ok(v)).unwrap();
            assert!(ks <= 0.0052, "{}: PIT KS {ks}", d.describe());
            worst = worst.max(ks);
            combos += 1;
        }
    }
    println!(
        "criterion 10: PASS — PIT uniform for {combos} combinations at 1e5 draws, worst KS {worst:.5}, in {:?}",
        t0.elapsed()
    );
}

#[test]
fn criterion_11_stability_at_n30_k15() {
    // Float-log evaluation at N=30, k=15 must never be silently wrong:
    // either it agrees with exact arithmetic to 1e-9 relative, or it
    // refuses with the precision error, or its own diagnostics already
    // declare the reduced precision (error within 10^(2 - claimed digits)).
    let d = dist(we(30), StatKind::sum_smallest(15));
    let float_policy = float_only();
    let (lo, hi) = d.support();
    let (mut tight, mut refused, mut enveloped) = (0usize, 0usize, 0usize);
    for (series, exact_of) in [
        (d.pdf_series().unwrap(), 0usize),
        (d.cdf_series().unwrap(), 1usize),
    ] {
        for x in grid(lo, hi, 201) {
            let xr = rational_from_f64(x);
            let exact = match exact_of {
                0 => d.pdf_exact(&xr).unwrap(),
                _ => d.cdf_exact(&xr).unwrap(),
            };
            let exact_f = rational_to_f64(&exact);
            match series.eval(x, &float_policy) {
                Ok(e) => {
                    assert!(matches!(e.route, EvalRoute::Float));
                    let err = (e.value - exact_f).abs();
                    let scale = exact_f.abs().max(1e-300);
                    if err / scale <= 1e-9 {
                        tight += 1;
                    } else {
                        let envelope = 10f64.powf(2.0 - e.surviving_digits);
                        assert!(
                            err / scale <= envelope,
                            "x={x}: rel error {:.2e} outside the declared envelope {envelope:.2e} \
                             ({:.1} digits claimed)",
                            err / scale,
                            e.surviving_digits
                        );
                        enveloped += 1;
                    }
                }
                Err(Error::Precision { .. }) => refused += 1,
                Err(e) => panic!("x={x}: {e}"),
            }
        }
    }
    assert!(tight > 0, "no point evaluated cleanly");
    println!(
        "criterion 11: PASS — {tight} points within 1e-9, {refused} refused via the precision guard, \
         {enveloped} within their declared-precision envelope"
    );
}
