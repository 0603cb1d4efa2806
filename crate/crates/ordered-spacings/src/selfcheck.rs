//! Desk-scale health checks over every invariant family the library rests
//! on. Each check exercises a small matrix in a few seconds; the heavyweight
//! versions live in the acceptance suite. The CLI's `selfcheck` subcommand
//! prints the report and turns the verdict into an exit code.

use num_traits::One;

use crate::coefficients;
use crate::inference::{quantile, QUANTILE_TOLERANCE};
use crate::model::{SpacingModel, StatKind};
use crate::montecarlo::{draw_statistic, ks_distance};
use crate::numeric::{ratio, Rational};
use crate::quad;
use crate::series::{EvalPolicy, EvalRoute};

/// Tally for one invariant family.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// First failure, described.
    pub detail: Option<String>,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        CheckOutcome {
            name,
            passed: 0,
            failed: 0,
            detail: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.detail.is_none() {
                self.detail = Some(describe());
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0 && self.passed > 0
    }
}

/// Report over all invariant families.
#[derive(Debug, Clone)]
pub struct SelfCheckReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl SelfCheckReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(CheckOutcome::ok)
    }
}

impl std::fmt::Display for SelfCheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let width = self
            .outcomes
            .iter()
            .map(|o| o.name.len())
            .max()
            .unwrap_or(0);
        for o in &self.outcomes {
            let verdict = if o.ok() { "pass" } else { "FAIL" };
            writeln!(
                f,
                "{:<width$}  {:>3}/{:<3} {}",
                o.name,
                o.passed,
                o.passed + o.failed,
                verdict
            )?;
            if let Some(d) = &o.detail {
                writeln!(f, "{:width$}  first failure: {d}", "")?;
            }
        }
        writeln!(
            f,
            "overall: {}",
            if self.all_passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Runs every check family at desk scale.
pub fn run_all() -> SelfCheckReport {
    SelfCheckReport {
        outcomes: vec![
            check_recursions(),
            check_normalization(),
            check_cdf_integrates_pdf(),
            check_exact_complements(),
            check_degenerate_laws(),
            check_marginalization(),
            check_quantile_roundtrip(),
            check_monte_carlo(),
            check_float_vs_rational(),
        ],
    }
}

fn all_kinds(model: SpacingModel) -> Vec<StatKind> {
    let mut kinds = Vec::new();
    for k in 1..=model.max_k(crate::model::StatFamily::KthSmallest) {
        kinds.push(StatKind::kth(k));
    }
    for k in 1..=model.max_k(crate::model::StatFamily::SumSmallest) {
        kinds.push(StatKind::sum_smallest(k));
        kinds.push(StatKind::sum_largest(k));
    }
    kinds
}

fn grid(lo: f64, hi: f64, points: u32) -> impl Iterator<Item = f64> {
    (0..=points).map(move |j| lo + (hi - lo) * f64::from(j) / f64::from(points))
}

fn check_recursions() -> CheckOutcome {
    let mut out = CheckOutcome::new("coefficient recursions (exact)");
    match coefficients::verify_recursions(12) {
        Ok(report) => {
            out.record(report.weight_update_checks > 0, String::new);
            out.record(report.weight_reduction_checks > 0, String::new);
            out.record(report.weight_sum_checks > 0, String::new);
            out.record(report.prefactor_update_checks > 0, String::new);
        }
        Err(fail) => out.record(false, || format!("{fail:?}")),
    }
    out
}

fn check_normalization() -> CheckOutcome {
    let mut out = CheckOutcome::new("densities integrate to 1");
    let policy = EvalPolicy::default();
    for model in [
        SpacingModel::with_edges(6).unwrap(),
        SpacingModel::without_edges(7).unwrap(),
    ] {
        for kind in all_kinds(model) {
            let dist = model.distribution(kind).unwrap();
            if dist.is_degenerate() {
                continue;
            }
            let r = quad::integrate(
                |x| dist.pdf(x, &policy).unwrap(),
                &dist.breakpoints(),
                1e-11,
                400_000,
            );
            out.record((r.value - 1.0).abs() < 1e-9, || {
                format!("{} integrates to {}", dist.describe(), r.value)
            });
        }
    }
    out
}

fn check_cdf_integrates_pdf() -> CheckOutcome {
    let mut out = CheckOutcome::new("cdf matches integrated pdf");
    let policy = EvalPolicy::default();
    for (model, kind) in [
        (SpacingModel::with_edges(7).unwrap(), StatKind::kth(3)),
        (SpacingModel::with_edges(7).unwrap(), StatKind::sum_largest(3)),
        (SpacingModel::without_edges(6).unwrap(), StatKind::sum_smallest(2)),
        (SpacingModel::without_edges(6).unwrap(), StatKind::sum_largest(2)),
    ] {
        let dist = model.distribution(kind).unwrap();
        let (lo, hi) = dist.support();
        for s in grid(lo, hi, 8).skip(1) {
            let mut seeds: Vec<f64> = dist
                .breakpoints()
                .into_iter()
                .filter(|b| *b < s)
                .collect();
            seeds.insert(0, lo);
            seeds.push(s);
            seeds.dedup();
            let r = quad::integrate(|x| dist.pdf(x, &policy).unwrap(), &seeds, 1e-12, 400_000);
            let cdf = dist.cdf(s, &policy).unwrap();
            out.record((cdf - r.value).abs() < 1e-9, || {
                format!("{} at {s}: cdf {cdf} vs {}", dist.describe(), r.value)
            });
        }
    }
    out
}

fn check_exact_complements() -> CheckOutcome {
    let mut out = CheckOutcome::new("cdf + sf = 1 (exact rational)");
    for model in [
        SpacingModel::with_edges(9).unwrap(),
        SpacingModel::without_edges(8).unwrap(),
    ] {
        for kind in all_kinds(model) {
            let dist = model.distribution(kind).unwrap();
            if dist.is_degenerate() {
                continue;
            }
            let (lo, hi) = dist.support_exact();
            for j in 1..=4 {
                let x = &lo + (&hi - &lo) * ratio(j, 5);
                let total = dist.cdf_exact(&x).unwrap() + dist.sf_exact(&x).unwrap();
                out.record(total == Rational::one(), || {
                    format!("{} at {x}: cdf + sf = {total}", dist.describe())
                });
            }
        }
    }
    out
}

fn check_degenerate_laws() -> CheckOutcome {
    let mut out = CheckOutcome::new("boundary orders (point mass, range law)");
    let policy = EvalPolicy::default();

    let total = SpacingModel::with_edges(5)
        .unwrap()
        .distribution(StatKind::sum_smallest(6))
        .unwrap();
    out.record(total.is_degenerate(), || "total sum not degenerate".into());
    let tails = (total.cdf(1.0, &policy).unwrap(), total.sf(1.0, &policy).unwrap());
    out.record(tails == (1.0, 1.0), || {
        format!("point-mass tails at the atom are {tails:?}, not both 1")
    });

    for n in [5u32, 9] {
        let d = SpacingModel::without_edges(n)
            .unwrap()
            .distribution(StatKind::sum_largest(n - 1))
            .unwrap();
        for s in grid(0.0, 1.0, 5).skip(1) {
            let want = crate::dist_noedges::range_cdf(n, s).unwrap();
            let got = d.cdf(s, &policy).unwrap();
            out.record((got - want).abs() < 1e-10, || {
                format!("range law n={n} at {s}: {got} vs {want}")
            });
        }
    }
    out
}

fn check_marginalization() -> CheckOutcome {
    let mut out = CheckOutcome::new("closed forms vs marginalization integral");
    let policy = EvalPolicy::default();
    let n = 5;
    for (kind, x) in [
        (StatKind::kth(2), 0.12),
        (StatKind::sum_smallest(2), 0.2),
        (StatKind::sum_largest(2), 0.55),
    ] {
        let dist = SpacingModel::without_edges(n)
            .unwrap()
            .distribution(kind)
            .unwrap();
        let closed = dist.pdf(x, &policy).unwrap();
        match crate::dist_noedges::marginal_pdf_by_quadrature(n, kind, x, 1e-11, 400_000) {
            Ok(oracle) => out.record((closed - oracle.value).abs() < 1e-8, || {
                format!(
                    "{} at {x}: closed {closed} vs integral {}",
                    dist.describe(),
                    oracle.value
                )
            }),
            Err(e) => out.record(false, || format!("oracle failed: {e}")),
        }
    }
    out
}

fn check_quantile_roundtrip() -> CheckOutcome {
    let mut out = CheckOutcome::new("quantile round trips");
    let policy = EvalPolicy::default();
    for (model, kind) in [
        (SpacingModel::with_edges(8).unwrap(), StatKind::kth(2)),
        (SpacingModel::without_edges(7).unwrap(), StatKind::sum_largest(3)),
    ] {
        let dist = model.distribution(kind).unwrap();
        for i in 1..=9 {
            let p = f64::from(i) / 10.0;
            let q = quantile(&dist, p, &policy).unwrap();
            let back = dist.cdf(q, &policy).unwrap();
            out.record((back - p).abs() <= QUANTILE_TOLERANCE, || {
                format!("{} p={p}: CDF(q)={back}", dist.describe())
            });
        }
    }
    out
}

fn check_monte_carlo() -> CheckOutcome {
    let mut out = CheckOutcome::new("Monte Carlo agreement (KS, 20k reps)");
    let policy = EvalPolicy::default();
    // Fixed seed: deterministic verdicts. 0.015 is lax for 20k draws
    // (99.9th percentile is ~0.0097) but immune to seed luck.
    for (model, kind) in [
        (SpacingModel::with_edges(6).unwrap(), StatKind::kth(2)),
        (SpacingModel::with_edges(6).unwrap(), StatKind::sum_largest(3)),
        (SpacingModel::without_edges(6).unwrap(), StatKind::sum_smallest(2)),
        (SpacingModel::without_edges(6).unwrap(), StatKind::sum_largest(2)),
    ] {
        let dist = model.distribution(kind).unwrap();
        let sorted = draw_statistic(model, kind, 0, 20_000).unwrap().sorted();
        let d = ks_distance(&sorted, |x| dist.cdf(x, &policy)).unwrap();
        out.record(d < 0.015, || {
            format!("{}: KS distance {d}", dist.describe())
        });
    }
    out
}

fn check_float_vs_rational() -> CheckOutcome {
    // The float path's contract is not "always 1e-9": it is that the
    // reported surviving digits never overstate the truth (with two digits
    // of slack for ordinary rounding on ~n terms), and that auto mode
    // reroutes to exact arithmetic instead of returning garbage.
    let mut out = CheckOutcome::new("evaluation diagnostics honor claimed digits");
    let policy = EvalPolicy::default();
    for (model, kind) in [
        (SpacingModel::with_edges(25).unwrap(), StatKind::kth(12)),
        (SpacingModel::with_edges(25).unwrap(), StatKind::sum_smallest(8)),
        (SpacingModel::without_edges(25).unwrap(), StatKind::sum_largest(10)),
    ] {
        let dist = model.distribution(kind).unwrap();
        let series = dist.cdf_series().unwrap();
        let (lo, hi) = dist.support_exact();
        for j in 1..=5 {
            let x = &lo + (&hi - &lo) * ratio(j, 6);
            let exact = crate::numeric::rational_to_f64(&dist.cdf_exact(&x).unwrap());
            let xf = crate::numeric::rational_to_f64(&x);
            match series.eval(xf, &policy) {
                Ok(e) => {
                    let err = (e.value - exact).abs();
                    let allowed = match e.route {
                        EvalRoute::Float if e.surviving_digits >= 12.0 => 1e-9,
                        EvalRoute::Float => 10f64.powf(2.0 - e.surviving_digits),
                        _ => 1e-15,
                    };
                    out.record(err <= allowed, || {
                        format!(
                            "{} at {xf}: error {err:.2e} exceeds {allowed:.2e} \
                             ({:?}, {:.1} digits claimed)",
                            dist.describe(),
                            e.route,
                            e.surviving_digits
                        )
                    });
                }
                Err(e) => out.record(false, || format!("unexpected error: {e}")),
            }
        }
    }
    out
}
