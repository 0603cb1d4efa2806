//! Distributions of ordered gaps when the endpoints do not count: only the
//! n-1 gaps between consecutive sample points, which sum to the random
//! sample range rather than to 1.
//!
//! Conditioned on the range, the interior points are a scaled copy of a
//! with-edges problem two samples smaller, and the range itself follows a
//! Beta(n-1, 2) law. Marginalizing gives closed forms with the same windowed
//! polynomial shape as the with-edges laws; this module also ships the
//! marginalization integral as a quadrature oracle so the closed forms can
//! be checked against first principles.

use num_bigint::BigInt;
use num_traits::One;

use crate::coefficients::{sum_prefactor_exact, sum_prefactor_log, term_weight_exact, term_weight_log};
use crate::distribution::SpacingDistribution;
use crate::error::{Error, Result};
use crate::model::{SpacingModel, StatFamily, StatKind};
use crate::numeric::{big_binomial, ln_binomial, ratio, rational_int_pow, Rational, SignedLog};
use crate::quad::{self, QuadResult};
use crate::series::{Dual, EvalPolicy, PiecewiseSeries, Term, EXACT_BUILD_CAP};

fn want_exact(n: u32) -> bool {
    n <= EXACT_BUILD_CAP
}

/// Builds the distribution for a no-edges model. k is already validated
/// against the n-1 gaps.
pub(crate) fn build(model: SpacingModel, kind: StatKind) -> Result<SpacingDistribution> {
    let n = model.n();
    match kind.family {
        StatFamily::KthSmallest => build_kth(model, kind),
        StatFamily::SumSmallest | StatFamily::SumLargest if kind.k == n - 1 => {
            // Every interior gap together is the sample range.
            build_range_law(model, kind)
        }
        StatFamily::SumSmallest => build_sum_smallest(model, kind),
        StatFamily::SumLargest => build_sum_largest(model, kind),
    }
}

/// k-th smallest of the n-1 interior gaps.
fn build_kth(model: SpacingModel, kind: StatKind) -> Result<SpacingDistribution> {
    let n = model.n();
    let k = kind.k;
    let exact = want_exact(n);
    let nf = f64::from(n);

    let prefactor = Dual::new(
        SignedLog::from_ln(
            nf.ln() + (nf - 1.0).ln() + ln_binomial(u64::from(n) - 2, u64::from(k) - 1),
        ),
        exact.then(|| {
            Rational::from_integer(
                BigInt::from(n)
                    * (BigInt::from(n) - 1)
                    * big_binomial(u64::from(n) - 2, u64::from(k) - 1),
            )
        }),
    );

    let support_lo = ratio(0, 1);
    let support_hi = ratio(1, i64::from(n) - i64::from(k));

    let mut pdf_terms = Vec::with_capacity(k as usize);
    let mut cdf_terms = Vec::with_capacity(2 * k as usize);
    let mut sf_terms = Vec::with_capacity(k as usize);
    for i in 1..=k {
        let m = i64::from(n) - i64::from(i);
        let sign: i8 = if (k - i) % 2 == 0 { 1 } else { -1 };
        let c = Dual::new(
            SignedLog::new(sign, ln_binomial(u64::from(k) - 1, u64::from(i) - 1)),
            exact.then(|| {
                let mag = big_binomial(u64::from(k) - 1, u64::from(i) - 1);
                Rational::from_integer(if sign > 0 { mag } else { -mag })
            }),
        );
        let window_hi = ratio(1, m);

        pdf_terms.push(Term::new(
            c.clone(),
            ratio(1, 1),
            ratio(-m, 1),
            n - 1,
            support_lo.clone(),
            window_hi.clone(),
        ));

        let tail = c.mul(&Dual::new(
            SignedLog::new(1, -(m as f64 * nf).ln()),
            exact.then(|| Rational::new(BigInt::one(), BigInt::from(m) * BigInt::from(n))),
        ));
        cdf_terms.push(Term::new(
            tail.clone(),
            ratio(1, 1),
            ratio(0, 1),
            0,
            support_lo.clone(),
            support_hi.clone(),
        ));
        cdf_terms.push(Term::new(
            tail.neg(),
            ratio(1, 1),
            ratio(-m, 1),
            n,
            support_lo.clone(),
            window_hi.clone(),
        ));
        sf_terms.push(Term::new(
            tail,
            ratio(1, 1),
            ratio(-m, 1),
            n,
            support_lo.clone(),
            window_hi,
        ));
    }

    Ok(SpacingDistribution::Continuous {
        model,
        kind,
        pdf: PiecewiseSeries::new(n, prefactor.clone(), pdf_terms, support_lo.clone(), support_hi.clone()),
        cdf: PiecewiseSeries::new(n, prefactor.clone(), cdf_terms, support_lo.clone(), support_hi.clone()),
        sf: PiecewiseSeries::new(n, prefactor, sf_terms, support_lo, support_hi),
    })
}

/// Sum of the k smallest interior gaps, k <= n-2: the smallest-sum weights
/// at effective count n-2 with an extra n/(n-2) marginalization factor.
fn build_sum_smallest(model: SpacingModel, kind: StatKind) -> Result<SpacingDistribution> {
    let n = model.n();
    let k = kind.k;
    let exact = want_exact(n);
    let nf = f64::from(n);

    let prefactor = Dual::new(
        sum_prefactor_log(k, n - 2)?.mul(SignedLog::from_f64(nf / (nf - 2.0))),
        exact
            .then(|| {
                sum_prefactor_exact(k, n - 2)
                    .map(|a| a * ratio(i64::from(n), i64::from(n) - 2))
            })
            .transpose()?,
    );

    let support_lo = ratio(0, 1);
    let support_hi = ratio(i64::from(k), i64::from(n) - 1);

    let mut pdf_terms = Vec::with_capacity(k as usize);
    let mut cdf_terms = Vec::with_capacity(2 * k as usize);
    let mut sf_terms = Vec::with_capacity(k as usize);
    for i in 1..=k {
        let m = i64::from(n) - i64::from(i);
        let r = i64::from(k) + 1 - i64::from(i);
        let a = Dual::new(
            term_weight_log(i, k)?,
            exact.then(|| term_weight_exact(i, k)).transpose()?,
        );
        let window_hi = ratio(r, m);

        pdf_terms.push(Term::new(
            a.clone(),
            ratio(1, 1),
            ratio(-m, r),
            n - 1,
            support_lo.clone(),
            window_hi.clone(),
        ));

        let tail = a.mul(&Dual::new(
            SignedLog::from_f64(r as f64 / (m as f64 * nf)),
            exact.then(|| Rational::new(BigInt::from(r), BigInt::from(m) * BigInt::from(n))),
        ));
        cdf_terms.push(Term::new(
            tail.clone(),
            ratio(1, 1),
            ratio(0, 1),
            0,
            support_lo.clone(),
            support_hi.clone(),
        ));
        cdf_terms.push(Term::new(
            tail.neg(),
            ratio(1, 1),
            ratio(-m, r),
            n,
            support_lo.clone(),
            window_hi.clone(),
        ));
        sf_terms.push(Term::new(
            tail,
            ratio(1, 1),
            ratio(-m, r),
            n,
            support_lo.clone(),
            window_hi,
        ));
    }

    Ok(SpacingDistribution::Continuous {
        model,
        kind,
        pdf: PiecewiseSeries::new(n, prefactor.clone(), pdf_terms, support_lo.clone(), support_hi.clone()),
        cdf: PiecewiseSeries::new(n, prefactor.clone(), cdf_terms, support_lo.clone(), support_hi.clone()),
        sf: PiecewiseSeries::new(n, prefactor, sf_terms, support_lo, support_hi),
    })
}

/// Sum of the k largest interior gaps, k <= n-2. No reflection shortcut
/// exists here (the gaps sum to the random range, not to 1), so the density
/// carries, per weight index, a polynomial part live from 0 and a windowed
/// part opening at k/(n-i); the lower tail is its term-wise antiderivative.
fn build_sum_largest(model: SpacingModel, kind: StatKind) -> Result<SpacingDistribution> {
    let n = model.n();
    let k = kind.k;
    let kc = n - 1 - k;
    let exact = want_exact(n);
    let nf = f64::from(n);
    let kf = f64::from(k);

    // n * A(kc, n-2) / (k^2 (n-2))
    let prefactor = Dual::new(
        sum_prefactor_log(kc, n - 2)?
            .mul(SignedLog::from_ln(nf.ln() - 2.0 * kf.ln() - (nf - 2.0).ln())),
        exact
            .then(|| {
                sum_prefactor_exact(kc, n - 2).map(|a| {
                    a * Rational::new(
                        BigInt::from(n),
                        BigInt::from(k) * BigInt::from(k) * (BigInt::from(n) - 2),
                    )
                })
            })
            .transpose()?,
    );

    let support_lo = ratio(0, 1);
    let support_hi = ratio(1, 1);

    let mut pdf_terms = Vec::with_capacity(3 * kc as usize);
    let mut cdf_terms = Vec::with_capacity(3 * kc as usize);
    for i in 1..=kc {
        let m = i64::from(n) - i64::from(i);
        let d = i64::from(n) - i64::from(k) - i64::from(i);
        let df = d as f64;
        let a = Dual::new(
            term_weight_log(i, kc)?,
            exact.then(|| term_weight_exact(i, kc)).transpose()?,
        );

        // Polynomial part: d * s^(n-2) * [k(n-1) - ((n-i) + k(n-2)) s].
        let lin0 = kf * (nf - 1.0) * df;
        let lin1 = (m as f64 + kf * (nf - 2.0)) * df;
        let c_zero = a.mul(&Dual::new(
            SignedLog::from_f64(lin0),
            exact.then(|| {
                Rational::from_integer(
                    BigInt::from(k) * (BigInt::from(n) - 1) * BigInt::from(d),
                )
            }),
        ));
        let c_one = a.mul(&Dual::new(
            SignedLog::from_f64(-lin1),
            exact.then(|| {
                -Rational::from_integer(
                    (BigInt::from(m) + BigInt::from(k) * (BigInt::from(n) - 2)) * BigInt::from(d),
                )
            }),
        ));
        pdf_terms.push(Term::new(
            c_zero.clone(),
            ratio(0, 1),
            ratio(1, 1),
            n - 2,
            support_lo.clone(),
            support_hi.clone(),
        ));
        pdf_terms.push(Term::new(
            c_one.clone(),
            ratio(0, 1),
            ratio(1, 1),
            n - 1,
            support_lo.clone(),
            support_hi.clone(),
        ));

        // Windowed part: [s(n-i) - k]^(n-1) / d^(n-3) once s > k/(n-i).
        let inv_dpow = Dual::new(
            SignedLog::from_ln(-(f64::from(n) - 3.0) * df.ln()),
            exact.then(|| Rational::one() / rational_int_pow(&ratio(d, 1), n - 3)),
        );
        let c_win = a.mul(&inv_dpow);
        pdf_terms.push(Term::new(
            c_win.clone(),
            ratio(-i64::from(k), 1),
            ratio(m, 1),
            n - 1,
            ratio(i64::from(k), m),
            support_hi.clone(),
        ));

        // Antiderivatives, each vanishing at its window's lower end.
        cdf_terms.push(Term::new(
            c_zero.mul(&Dual::new(
                SignedLog::from_f64(1.0 / (nf - 1.0)),
                exact.then(|| ratio(1, i64::from(n) - 1)),
            )),
            ratio(0, 1),
            ratio(1, 1),
            n - 1,
            support_lo.clone(),
            support_hi.clone(),
        ));
        cdf_terms.push(Term::new(
            c_one.mul(&Dual::new(
                SignedLog::from_f64(1.0 / nf),
                exact.then(|| ratio(1, i64::from(n))),
            )),
            ratio(0, 1),
            ratio(1, 1),
            n,
            support_lo.clone(),
            support_hi.clone(),
        ));
        cdf_terms.push(Term::new(
            c_win.mul(&Dual::new(
                SignedLog::from_f64(1.0 / (nf * m as f64)),
                exact.then(|| Rational::new(BigInt::one(), BigInt::from(n) * BigInt::from(m))),
            )),
            ratio(-i64::from(k), 1),
            ratio(m, 1),
            n,
            ratio(i64::from(k), m),
            support_hi.clone(),
        ));
    }

    let cdf = PiecewiseSeries::new(n, prefactor.clone(), cdf_terms, support_lo.clone(), support_hi.clone());
    let sf = cdf.one_minus();
    Ok(SpacingDistribution::Continuous {
        model,
        kind,
        pdf: PiecewiseSeries::new(n, prefactor, pdf_terms, support_lo, support_hi),
        cdf,
        sf,
    })
}

/// All n-1 interior gaps together: the sample range, Beta(n-1, 2).
fn build_range_law(model: SpacingModel, kind: StatKind) -> Result<SpacingDistribution> {
    let n = model.n();
    let exact = want_exact(n);
    let nf = f64::from(n);
    let support_lo = ratio(0, 1);
    let support_hi = ratio(1, 1);

    // pdf: n(n-1) (s^(n-2) - s^(n-1)).
    let pdf_prefactor = Dual::new(
        SignedLog::from_ln(nf.ln() + (nf - 1.0).ln()),
        exact.then(|| Rational::from_integer(BigInt::from(n) * (BigInt::from(n) - 1))),
    );
    let unit = |sign: i64| {
        Dual::new(
            SignedLog::from_f64(sign as f64),
            exact.then(|| ratio(sign, 1)),
        )
    };
    let pdf_terms = vec![
        Term::new(unit(1), ratio(0, 1), ratio(1, 1), n - 2, support_lo.clone(), support_hi.clone()),
        Term::new(unit(-1), ratio(0, 1), ratio(1, 1), n - 1, support_lo.clone(), support_hi.clone()),
    ];

    // cdf: n s^(n-1) - (n-1) s^n.
    let cdf_prefactor = Dual::new(SignedLog::ONE, exact.then(Rational::one));
    let cdf_terms = vec![
        Term::new(
            Dual::new(
                SignedLog::from_f64(nf),
                exact.then(|| ratio(i64::from(n), 1)),
            ),
            ratio(0, 1),
            ratio(1, 1),
            n - 1,
            support_lo.clone(),
            support_hi.clone(),
        ),
        Term::new(
            Dual::new(
                SignedLog::from_f64(-(nf - 1.0)),
                exact.then(|| ratio(1 - i64::from(n), 1)),
            ),
            ratio(0, 1),
            ratio(1, 1),
            n,
            support_lo.clone(),
            support_hi.clone(),
        ),
    ];

    let cdf = PiecewiseSeries::new(n, cdf_prefactor, cdf_terms, support_lo.clone(), support_hi.clone());
    let sf = cdf.one_minus();
    Ok(SpacingDistribution::Continuous {
        model,
        kind,
        pdf: PiecewiseSeries::new(n, pdf_prefactor, pdf_terms, support_lo, support_hi),
        cdf,
        sf,
    })
}

/// Density of the sample range (largest minus smallest of n points).
pub fn range_pdf(n: u32, s: f64) -> Result<f64> {
    SpacingModel::without_edges(n)?;
    check_unit(s)?;
    let nf = f64::from(n);
    Ok(nf * (nf - 1.0) * (s.powi(n as i32 - 2) - s.powi(n as i32 - 1)))
}

/// P(sample range <= s) = n s^(n-1) - (n-1) s^n.
pub fn range_cdf(n: u32, s: f64) -> Result<f64> {
    SpacingModel::without_edges(n)?;
    check_unit(s)?;
    let nf = f64::from(n);
    Ok(nf * s.powi(n as i32 - 1) - (nf - 1.0) * s.powi(n as i32))
}

fn check_unit(x: f64) -> Result<()> {
    if !x.is_finite() || !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "gap value {x} outside the unit interval"
        )));
    }
    Ok(())
}

/// Density of the k-th smallest interior gap at x, default policy.
pub fn kth_spacing_pdf(n: u32, k: u32, x: f64) -> Result<f64> {
    let dist = SpacingModel::without_edges(n)?.distribution(StatKind::kth(k))?;
    dist.pdf(x, &EvalPolicy::default())
}

/// P(k-th smallest interior gap <= x).
pub fn kth_spacing_cdf(n: u32, k: u32, x: f64) -> Result<f64> {
    let dist = SpacingModel::without_edges(n)?.distribution(StatKind::kth(k))?;
    dist.cdf(x, &EvalPolicy::default())
}

/// Density of the sum of the k smallest interior gaps at s.
pub fn sum_smallest_pdf(n: u32, k: u32, s: f64) -> Result<f64> {
    let dist = SpacingModel::without_edges(n)?.distribution(StatKind::sum_smallest(k))?;
    dist.pdf(s, &EvalPolicy::default())
}

/// P(sum of the k smallest interior gaps <= s).
pub fn sum_smallest_cdf(n: u32, k: u32, s: f64) -> Result<f64> {
    let dist = SpacingModel::without_edges(n)?.distribution(StatKind::sum_smallest(k))?;
    dist.cdf(s, &EvalPolicy::default())
}

/// Density of the sum of the k largest interior gaps at s.
pub fn sum_largest_pdf(n: u32, k: u32, s: f64) -> Result<f64> {
    let dist = SpacingModel::without_edges(n)?.distribution(StatKind::sum_largest(k))?;
    dist.pdf(s, &EvalPolicy::default())
}

/// P(sum of the k largest interior gaps <= s).
pub fn sum_largest_cdf(n: u32, k: u32, s: f64) -> Result<f64> {
    let dist = SpacingModel::without_edges(n)?.distribution(StatKind::sum_largest(k))?;
    dist.cdf(s, &EvalPolicy::default())
}

/// P(sum of the k largest interior gaps >= s).
pub fn sum_largest_sf(n: u32, k: u32, s: f64) -> Result<f64> {
    let dist = SpacingModel::without_edges(n)?.distribution(StatKind::sum_largest(k))?;
    dist.sf(s, &EvalPolicy::default())
}

/// First-principles density by numerical marginalization: condition on the
/// range, evaluate the scaled interior with-edges law two samples smaller,
/// and integrate against the Beta(n-1, 2) range weight with an explicit 1/mu
/// rescaling. Exists to check the closed forms, not to compete with them.
pub fn marginal_pdf_by_quadrature(
    n: u32,
    kind: StatKind,
    x: f64,
    tol: f64,
    max_evals: usize,
) -> Result<QuadResult> {
    let model = SpacingModel::without_edges(n)?;
    model.validate_k(kind.family, kind.k)?;
    if kind.k == n - 1 && kind.family != StatFamily::KthSmallest {
        return Err(Error::Domain(
            "marginalization oracle covers the series cases; the all-gaps sum is the range law"
                .into(),
        ));
    }
    check_unit(x)?;

    let inner = SpacingModel::with_edges(n - 2)?.distribution(kind)?;
    // Twelve honest digits per point keeps the integrand's noise floor
    // well below any error gate this oracle is asked to certify.
    let policy = EvalPolicy {
        min_surviving_digits: 12.0,
        ..EvalPolicy::default()
    };
    let nf = f64::from(n);
    let weight = nf * (nf - 1.0);

    if x == 0.0 {
        // Integrand reduces to pdf_inner(0) * n(n-1) mu^(n-3) (1-mu).
        let at_zero = inner.pdf(0.0, &policy)?;
        let integral = weight * at_zero * (1.0 / (nf - 2.0) - 1.0 / (nf - 1.0));
        return Ok(QuadResult {
            value: integral,
            error_estimate: 0.0,
            evals: 1,
        });
    }

    let (_, inner_hi) = inner.support();
    let mu_lo = (x / inner_hi).min(1.0);
    if mu_lo >= 1.0 {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evals: 0,
        });
    }

    // Seed every mu where x/mu crosses an inner breakpoint.
    let mut pieces = vec![mu_lo, 1.0];
    for b in inner.breakpoints() {
        if b > 0.0 {
            let mu = x / b;
            if mu > mu_lo && mu < 1.0 {
                pieces.push(mu);
            }
        }
    }
    pieces.sort_by(f64::total_cmp);
    pieces.dedup();

    let mut failure: Option<Error> = None;
    let result = quad::integrate(
        |mu| {
            if mu <= 0.0 {
                return 0.0;
            }
            match inner.pdf((x / mu).min(1.0), &policy) {
                Ok(p) => weight * mu.powi(n as i32 - 3) * (1.0 - mu) * p,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        &pieces,
        tol,
        max_evals,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if result.error_estimate > tol {
        return Err(Error::Quadrature {
            achieved: result.error_estimate,
            requested: tol,
        });
    }
    Ok(result)
}
