//! Distributions of ordered gaps when the interval endpoints count as data:
//! n points plus the boundaries 0 and 1 give n+1 gaps summing to 1.
//!
//! Everything here is a windowed polynomial series. The k-th smallest gap
//! follows an alternating binomial series; sums of the k smallest gaps use
//! the combinatorial weights from `coefficients`; sums of the k largest
//! reduce to the smallest-sum law through the exact complement
//! (k smallest) + (rest largest) = 1, and also carry a directly built lower
//! tail so both tails stay accurate in floating point.

use num_bigint::BigInt;
use num_traits::One;

use crate::coefficients::{sum_prefactor_exact, sum_prefactor_log, term_weight_exact, term_weight_log};
use crate::distribution::SpacingDistribution;
use crate::error::Result;
use crate::model::{SpacingModel, StatFamily, StatKind};
use crate::numeric::{big_binomial, ln_binomial, ratio, Rational, SignedLog};
use crate::series::{Dual, EvalPolicy, PiecewiseSeries, Term, EXACT_BUILD_CAP};

fn want_exact(n: u32) -> bool {
    n <= EXACT_BUILD_CAP
}

/// Builds the distribution for a with-edges model. k is already validated.
pub(crate) fn build(model: SpacingModel, kind: StatKind) -> Result<SpacingDistribution> {
    let n = model.n();
    match kind.family {
        StatFamily::KthSmallest => build_kth(model, kind),
        StatFamily::SumSmallest | StatFamily::SumLargest if kind.k == n + 1 => {
            // The sum of every gap is identically 1.
            Ok(SpacingDistribution::PointMass {
                model,
                kind,
                at: 1.0,
            })
        }
        StatFamily::SumSmallest => build_sum_smallest(model, kind),
        StatFamily::SumLargest => build_sum_largest(model, kind),
    }
}

/// Alternating binomial coefficient (-1)^(k-i) C(k-1, i-1) in both forms.
fn kth_term_coeff(i: u32, k: u32, exact: bool) -> Dual {
    let sign: i8 = if (k - i) % 2 == 0 { 1 } else { -1 };
    let log = SignedLog::new(sign, ln_binomial(u64::from(k) - 1, u64::from(i) - 1));
    let ex = exact.then(|| {
        let mag = big_binomial(u64::from(k) - 1, u64::from(i) - 1);
        Rational::from_integer(if sign > 0 { mag } else { -mag })
    });
    Dual::new(log, ex)
}

/// k-th smallest of the n+1 gaps. Series in powers of [1 - (n+2-i)x].
fn build_kth(model: SpacingModel, kind: StatKind) -> Result<SpacingDistribution> {
    let n = model.n();
    let k = kind.k;
    let exact = want_exact(n);
    let nf = f64::from(n);

    let prefactor = Dual::new(
        SignedLog::from_ln(nf.ln() + (nf + 1.0).ln() + ln_binomial(u64::from(n), u64::from(k) - 1)),
        exact.then(|| {
            Rational::from_integer(
                BigInt::from(n) * (BigInt::from(n) + 1) * big_binomial(u64::from(n), u64::from(k) - 1),
            )
        }),
    );

    let support_lo = ratio(0, 1);
    let support_hi = ratio(1, i64::from(n) + 2 - i64::from(k));

    let mut pdf_terms = Vec::with_capacity(k as usize);
    let mut cdf_terms = Vec::with_capacity(2 * k as usize);
    let mut sf_terms = Vec::with_capacity(k as usize);
    for i in 1..=k {
        let m = i64::from(n) + 2 - i64::from(i);
        let c = kth_term_coeff(i, k, exact);
        let window_hi = ratio(1, m);

        pdf_terms.push(Term::new(
            c.clone(),
            ratio(1, 1),
            ratio(-m, 1),
            n - 1,
            support_lo.clone(),
            window_hi.clone(),
        ));

        // Term antiderivative: (1 - [1 - m x]^n) / (m n), frozen past its
        // window; the constant parts sum to 1 over the whole support.
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

/// The three series of the smallest-sum law, reused by the largest-sum
/// builder at the complementary order.
struct SumSmallestParts {
    pdf: PiecewiseSeries,
    cdf: PiecewiseSeries,
    sf: PiecewiseSeries,
}

fn sum_smallest_parts(n: u32, k: u32) -> Result<SumSmallestParts> {
    let exact = want_exact(n);
    let nf = f64::from(n);

    let prefactor = Dual::new(
        sum_prefactor_log(k, n)?,
        exact.then(|| sum_prefactor_exact(k, n)).transpose()?,
    );

    let support_lo = ratio(0, 1);
    let support_hi = ratio(i64::from(k), i64::from(n) + 1);

    let mut pdf_terms = Vec::with_capacity(k as usize);
    let mut cdf_terms = Vec::with_capacity(2 * k as usize);
    let mut sf_terms = Vec::with_capacity(k as usize);
    for i in 1..=k {
        let m = i64::from(n) + 2 - i64::from(i);
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

        // Antiderivative of a term: (r/(m n)) (1 - [1 - (m/r) s]^n).
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

    Ok(SumSmallestParts {
        pdf: PiecewiseSeries::new(n, prefactor.clone(), pdf_terms, support_lo.clone(), support_hi.clone()),
        cdf: PiecewiseSeries::new(n, prefactor.clone(), cdf_terms, support_lo.clone(), support_hi.clone()),
        sf: PiecewiseSeries::new(n, prefactor, sf_terms, support_lo, support_hi),
    })
}

fn build_sum_smallest(model: SpacingModel, kind: StatKind) -> Result<SpacingDistribution> {
    let parts = sum_smallest_parts(model.n(), kind.k)?;
    Ok(SpacingDistribution::Continuous {
        model,
        kind,
        pdf: parts.pdf,
        cdf: parts.cdf,
        sf: parts.sf,
    })
}

/// Sum of the k largest gaps. Density and upper tail come from the exact
/// complement with the smallest-sum law at order n+1-k; the lower tail is a
/// directly constructed series so small probabilities keep relative
/// accuracy.
fn build_sum_largest(model: SpacingModel, kind: StatKind) -> Result<SpacingDistribution> {
    let n = model.n();
    let k = kind.k;
    let kc = n + 1 - k;
    let exact = want_exact(n);
    let nf = f64::from(n);

    let complement = sum_smallest_parts(n, kc)?;
    let pdf = complement.pdf.reflected();
    let sf = complement.cdf.reflected();

    let prefactor = Dual::new(
        sum_prefactor_log(kc, n)?.div(SignedLog::from_f64(nf)),
        exact
            .then(|| sum_prefactor_exact(kc, n).map(|a| a / Rational::from_integer(n.into())))
            .transpose()?,
    );

    let support_lo = ratio(i64::from(k), i64::from(n) + 1);
    let support_hi = ratio(1, 1);

    let mut cdf_terms = Vec::with_capacity(kc as usize);
    for i in 1..=kc {
        let m = i64::from(n) + 2 - i64::from(i);
        let r = i64::from(kc) + 1 - i64::from(i); // equals n+2-k-i
        let a = Dual::new(
            term_weight_log(i, kc)?,
            exact.then(|| term_weight_exact(i, kc)).transpose()?,
        );
        let coeff = a.mul(&Dual::new(
            SignedLog::from_f64(r as f64 / m as f64),
            exact.then(|| ratio(r, m)),
        ));
        cdf_terms.push(Term::new(
            coeff,
            ratio(-i64::from(k), r),
            ratio(m, r),
            n,
            ratio(i64::from(k), m),
            support_hi.clone(),
        ));
    }
    let cdf = PiecewiseSeries::new(n, prefactor, cdf_terms, support_lo, support_hi);

    Ok(SpacingDistribution::Continuous {
        model,
        kind,
        pdf,
        cdf,
        sf,
    })
}

fn check_unit(x: f64) -> Result<()> {
    if !x.is_finite() || !(0.0..=1.0).contains(&x) {
        return Err(crate::Error::Domain(format!(
            "gap value {x} outside the unit interval"
        )));
    }
    Ok(())
}

/// Density of one (unordered) gap: n(1-x)^(n-1). The baseline every ordered
/// law reduces to at n = 1.
pub fn single_spacing_pdf(n: u32, x: f64) -> Result<f64> {
    SpacingModel::with_edges(n)?;
    check_unit(x)?;
    Ok(f64::from(n) * (1.0 - x).powi(n as i32 - 1))
}

/// P(one gap <= x) = 1 - (1-x)^n.
pub fn single_spacing_cdf(n: u32, x: f64) -> Result<f64> {
    SpacingModel::with_edges(n)?;
    check_unit(x)?;
    Ok(1.0 - (1.0 - x).powi(n as i32))
}

/// Density of the k-th smallest gap at x, default evaluation policy.
pub fn kth_spacing_pdf(n: u32, k: u32, x: f64) -> Result<f64> {
    let dist = SpacingModel::with_edges(n)?.distribution(StatKind::kth(k))?;
    dist.pdf(x, &EvalPolicy::default())
}

/// P(k-th smallest gap <= x).
pub fn kth_spacing_cdf(n: u32, k: u32, x: f64) -> Result<f64> {
    let dist = SpacingModel::with_edges(n)?.distribution(StatKind::kth(k))?;
    dist.cdf(x, &EvalPolicy::default())
}

/// Density of the sum of the k smallest gaps at s.
pub fn sum_smallest_pdf(n: u32, k: u32, s: f64) -> Result<f64> {
    let dist = SpacingModel::with_edges(n)?.distribution(StatKind::sum_smallest(k))?;
    dist.pdf(s, &EvalPolicy::default())
}

/// P(sum of the k smallest gaps <= s).
pub fn sum_smallest_cdf(n: u32, k: u32, s: f64) -> Result<f64> {
    let dist = SpacingModel::with_edges(n)?.distribution(StatKind::sum_smallest(k))?;
    dist.cdf(s, &EvalPolicy::default())
}

/// Density of the sum of the k largest gaps at s.
pub fn sum_largest_pdf(n: u32, k: u32, s: f64) -> Result<f64> {
    let dist = SpacingModel::with_edges(n)?.distribution(StatKind::sum_largest(k))?;
    dist.pdf(s, &EvalPolicy::default())
}

/// P(sum of the k largest gaps <= s).
pub fn sum_largest_cdf(n: u32, k: u32, s: f64) -> Result<f64> {
    let dist = SpacingModel::with_edges(n)?.distribution(StatKind::sum_largest(k))?;
    dist.cdf(s, &EvalPolicy::default())
}

/// P(sum of the k largest gaps >= s).
pub fn sum_largest_sf(n: u32, k: u32, s: f64) -> Result<f64> {
    let dist = SpacingModel::with_edges(n)?.distribution(StatKind::sum_largest(k))?;
    dist.sf(s, &EvalPolicy::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rational_int_pow, rational_to_f64};
    use crate::quad;
    use approx::assert_relative_eq;

    /// Smallest-gap law, written independently of the series machinery.
    fn smallest_gap_pdf(n: u32, x: f64) -> f64 {
        let nf = f64::from(n);
        if x < 0.0 || x > 1.0 / (nf + 1.0) {
            return 0.0;
        }
        nf * (nf + 1.0) * (1.0 - (nf + 1.0) * x).powi(n as i32 - 1)
    }

    fn smallest_gap_cdf(n: u32, x: f64) -> f64 {
        let nf = f64::from(n);
        if x <= 0.0 {
            0.0
        } else if x >= 1.0 / (nf + 1.0) {
            1.0
        } else {
            1.0 - (1.0 - (nf + 1.0) * x).powi(n as i32)
        }
    }

    /// Two-smallest-sum density, exact rational, straight from the
    /// two-branch closed form with prefactor n^2(n+1)/(n-1).
    fn two_smallest_sum_pdf_exact(n: u32, s: &Rational) -> Rational {
        let n_i = i64::from(n);
        let pref = ratio(n_i * n_i * (n_i + 1), n_i - 1);
        let mut v = Rational::from_integer(0.into());
        let first_hi = ratio(2, n_i + 1);
        let second_hi = ratio(1, n_i);
        let zero = ratio(0, 1);
        if *s >= zero && *s <= first_hi {
            let base = ratio(1, 1) - ratio(n_i + 1, 2) * s;
            v += rational_int_pow(&base, n - 1);
        }
        if *s >= zero && *s <= second_hi {
            let base = ratio(1, 1) - ratio(n_i, 1) * s;
            v -= rational_int_pow(&base, n - 1);
        }
        pref * v
    }

    /// Largest-gap upper tail by inclusion-exclusion over which gaps exceed
    /// x: P(max gap >= x) = sum_j (-1)^(j-1) C(n+1,j) (1-jx)_+^n.
    fn largest_gap_sf_inclusion_exclusion(n: u32, x: f64) -> f64 {
        let mut acc = 0.0;
        for j in 1..=(n + 1) {
            let base = 1.0 - f64::from(j) * x;
            if base <= 0.0 {
                break;
            }
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            let binom = (ln_binomial(u64::from(n) + 1, u64::from(j))).exp();
            acc += sign * binom * base.powi(n as i32);
        }
        acc
    }

    fn dist(n: u32, kind: StatKind) -> SpacingDistribution {
        SpacingModel::with_edges(n)
            .unwrap()
            .distribution(kind)
            .unwrap()
    }

    #[test]
    fn kth_at_order_one_is_the_smallest_gap_law() {
        let policy = EvalPolicy::default();
        for n in [1u32, 2, 5, 12] {
            let d = dist(n, StatKind::kth(1));
            for &x in &[0.0, 0.01, 0.05, 1.0 / (f64::from(n) + 1.0) * 0.93] {
                assert_relative_eq!(
                    d.pdf(x, &policy).unwrap(),
                    smallest_gap_pdf(n, x),
                    max_relative = 1e-12
                );
                assert_relative_eq!(
                    d.cdf(x, &policy).unwrap(),
                    smallest_gap_cdf(n, x),
                    max_relative = 1e-12,
                    epsilon = 1e-15
                );
            }
        }
    }

    #[test]
    fn sum_of_one_equals_kth_of_one() {
        let policy = EvalPolicy::default();
        for n in [1u32, 4, 9] {
            let a = dist(n, StatKind::kth(1));
            let b = dist(n, StatKind::sum_smallest(1));
            for &x in &[0.0, 0.03, 0.11] {
                assert_eq!(
                    a.pdf_exact(&crate::numeric::rational_from_f64(x)).unwrap(),
                    b.pdf_exact(&crate::numeric::rational_from_f64(x)).unwrap()
                );
                assert_relative_eq!(
                    a.cdf(x, &policy).unwrap(),
                    b.cdf(x, &policy).unwrap(),
                    max_relative = 1e-13,
                    epsilon = 1e-15
                );
            }
        }
    }

    #[test]
    fn sum_of_two_matches_two_branch_closed_form_exactly() {
        for n in [2u32, 3, 5, 9, 14] {
            let d = dist(n, StatKind::sum_smallest(2));
            // Points straddling the branch point 1/n, as exact rationals.
            let n_i = i64::from(n);
            let pts = [
                ratio(1, 10 * n_i),
                ratio(1, 2 * n_i),
                ratio(1, n_i),
                ratio(3, 2 * (n_i + 1)),
                ratio(2, n_i + 1),
            ];
            for s in pts {
                let got = d.pdf_exact(&s).unwrap();
                let want = two_smallest_sum_pdf_exact(n, &s);
                assert_eq!(got, want, "n={n} s={s}");
            }
        }
    }

    #[test]
    fn frozen_value_for_five_samples_two_smallest() {
        // 37.5 * (0.55^4 - 0.25^4) at s = 3/20.
        let exact = dist(5, StatKind::sum_smallest(2))
            .pdf_exact(&ratio(3, 20))
            .unwrap();
        assert_eq!(exact, ratio(657, 200));
        assert_relative_eq!(
            sum_smallest_pdf(5, 2, 0.15).unwrap(),
            3.285,
            max_relative = 1e-13
        );
    }

    #[test]
    fn largest_gap_tail_matches_inclusion_exclusion() {
        let policy = EvalPolicy::default();
        for n in [2u32, 4, 7, 11] {
            let d = dist(n, StatKind::kth(n + 1));
            for &x in &[0.08, 0.2, 0.35, 0.6, 0.9] {
                let got = 1.0 - d.cdf(x, &policy).unwrap();
                let want = largest_gap_sf_inclusion_exclusion(n, x);
                assert_relative_eq!(got, want, max_relative = 1e-10, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn largest_sum_complement_of_smallest_sum() {
        // Complements partition the total: lower tail of one is the upper
        // tail of the other at the mirrored point, exactly.
        for (n, k) in [(5u32, 2u32), (8, 3), (12, 7)] {
            let k_comp = n + 1 - k;
            let largest = dist(n, StatKind::sum_largest(k));
            let smallest = dist(n, StatKind::sum_smallest(k_comp));
            for s in [ratio(1, 3), ratio(3, 5), ratio(9, 10)] {
                let mirrored = ratio(1, 1) - &s;
                assert_eq!(
                    largest.sf_exact(&s).unwrap(),
                    smallest.cdf_exact(&mirrored).unwrap(),
                    "n={n} k={k} s={s}"
                );
            }
        }
    }

    #[test]
    fn largest_sum_direct_lower_tail_complements_upper_exactly() {
        // cdf is built directly, sf by reflection: their sum being exactly 1
        // checks the direct construction against the complement identity.
        for (n, k) in [(4u32, 1u32), (4, 4), (7, 2), (9, 5), (13, 11)] {
            let d = dist(n, StatKind::sum_largest(k));
            for s in [
                ratio(1, 4),
                ratio(2, 5),
                ratio(1, 2),
                ratio(7, 10),
                ratio(24, 25),
            ] {
                let total = d.cdf_exact(&s).unwrap() + d.sf_exact(&s).unwrap();
                assert_eq!(total, Rational::one(), "n={n} k={k} s={s}");
            }
        }
    }

    #[test]
    fn cdf_and_sf_complement_exactly_across_families() {
        for kind in [
            StatKind::kth(3),
            StatKind::sum_smallest(4),
            StatKind::sum_largest(2),
        ] {
            let d = dist(7, kind);
            for s in [ratio(1, 16), ratio(1, 8), ratio(1, 4), ratio(1, 2)] {
                let total = d.cdf_exact(&s).unwrap() + d.sf_exact(&s).unwrap();
                assert_eq!(total, Rational::one(), "{kind:?} s={s}");
            }
        }
    }

    #[test]
    fn densities_integrate_to_one() {
        for (n, kind) in [
            (6u32, StatKind::kth(3)),
            (6, StatKind::sum_smallest(4)),
            (6, StatKind::sum_largest(2)),
            (11, StatKind::kth(12)),
            (11, StatKind::sum_largest(11)),
        ] {
            let d = dist(n, kind);
            let policy = EvalPolicy::default();
            let r = quad::integrate(
                |x| d.pdf(x, &policy).unwrap(),
                &d.breakpoints(),
                1e-12,
                400_000,
            );
            assert!(
                (r.value - 1.0).abs() < 1e-10,
                "{kind:?} n={n}: integral {} err {}",
                r.value,
                r.error_estimate
            );
        }
    }

    #[test]
    fn cdf_matches_integrated_pdf() {
        let (n, k) = (8u32, 3u32);
        let d = dist(n, StatKind::sum_smallest(k));
        let policy = EvalPolicy::default();
        let (lo, hi) = d.support();
        let pieces = d.breakpoints();
        for j in 1..=20 {
            let x = lo + (hi - lo) * f64::from(j) / 20.0;
            let mut seeds: Vec<f64> = pieces.iter().copied().filter(|b| *b < x).collect();
            seeds.push(x);
            let integral = quad::integrate(
                |t| d.pdf(t, &policy).unwrap(),
                &seeds,
                1e-12,
                400_000,
            );
            let cdf = d.cdf(x, &policy).unwrap();
            assert!(
                (integral.value - cdf).abs() < 1e-10,
                "x={x}: quadrature {} vs cdf {cdf}",
                integral.value
            );
        }
    }

    #[test]
    fn degenerate_total_sum_is_a_point_mass() {
        let d = dist(4, StatKind::sum_smallest(5));
        assert!(d.is_degenerate());
        let policy = EvalPolicy::default();
        assert!(matches!(
            d.pdf(0.5, &policy),
            Err(crate::Error::DegenerateDensity { .. })
        ));
        assert_eq!(d.cdf(1.0, &policy).unwrap(), 1.0);
        assert_eq!(d.cdf(0.999, &policy).unwrap(), 0.0);
        assert_eq!(d.sf(1.0, &policy).unwrap(), 1.0);
        assert_eq!(d.sf(0.999, &policy).unwrap(), 1.0);
        let d2 = dist(4, StatKind::sum_largest(5));
        assert!(d2.is_degenerate());
    }

    #[test]
    fn out_of_range_queries() {
        let d = dist(5, StatKind::sum_smallest(2));
        let policy = EvalPolicy::default();
        // Inside [0,1] but off the support.
        assert_eq!(d.pdf(0.9, &policy).unwrap(), 0.0);
        assert_eq!(d.cdf(0.9, &policy).unwrap(), 1.0);
        assert_eq!(d.sf(0.9, &policy).unwrap(), 0.0);
        // Outside [0,1]: domain errors.
        assert!(d.pdf(-0.1, &policy).is_err());
        assert!(d.cdf(1.5, &policy).is_err());
        assert!(d.sf(f64::NAN, &policy).is_err());
    }

    #[test]
    fn monotone_cdf_with_pinned_endpoints() {
        for kind in [StatKind::kth(4), StatKind::sum_smallest(3), StatKind::sum_largest(6)] {
            let d = dist(9, kind);
            let policy = EvalPolicy::default();
            let (lo, hi) = d.support();
            assert!(d.cdf(lo, &policy).unwrap().abs() < 1e-12);
            assert!((d.cdf(hi, &policy).unwrap() - 1.0).abs() < 1e-12);
            let mut prev = -1.0;
            for j in 0..=500 {
                let x = lo + (hi - lo) * f64::from(j) / 500.0;
                let v = d.cdf(x, &policy).unwrap();
                assert!(v >= prev - 1e-13, "cdf dipped at x={x}");
                prev = v;
            }
        }
    }

    #[test]
    fn pdf_matches_cdf_finite_differences() {
        let d = dist(10, StatKind::sum_smallest(4));
        let policy = EvalPolicy::default();
        let (lo, hi) = d.support();
        let breaks = d.breakpoints();
        let h = 1e-6;
        for j in 1..40 {
            let x = lo + (hi - lo) * f64::from(j) / 40.0;
            if breaks.iter().any(|b| (b - x).abs() < 50.0 * h) {
                continue;
            }
            let deriv =
                (d.cdf(x + h, &policy).unwrap() - d.cdf(x - h, &policy).unwrap()) / (2.0 * h);
            let pdf = d.pdf(x, &policy).unwrap();
            assert!(
                (deriv - pdf).abs() <= (1e-6f64).max(1e-4 * pdf),
                "x={x}: centered difference {deriv} vs density {pdf}"
            );
        }
    }

    #[test]
    fn convenience_functions_agree_with_distributions() {
        assert_relative_eq!(
            single_spacing_pdf(5, 0.2).unwrap(),
            5.0 * 0.8f64.powi(4),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            single_spacing_cdf(1, 0.3).unwrap(),
            0.3,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            kth_spacing_pdf(5, 1, 0.05).unwrap(),
            30.0 * 0.7f64.powi(4),
            max_relative = 1e-13
        );
        // Uniform density of the smaller half: constant 2 on [0, 1/2].
        assert_relative_eq!(sum_smallest_pdf(1, 1, 0.2).unwrap(), 2.0, max_relative = 1e-15);
        assert_relative_eq!(sum_smallest_cdf(1, 1, 0.25).unwrap(), 0.5, max_relative = 1e-15);
        // f64(1/6) sits a hair inside the true support, so expect ~1, not 1.
        assert_relative_eq!(
            sum_smallest_cdf(5, 1, 1.0 / 6.0).unwrap(),
            1.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(sum_largest_sf(1, 1, 0.75).unwrap(), 0.5, max_relative = 1e-14);
        assert_relative_eq!(
            sum_largest_pdf(5, 5, 0.9).unwrap(),
            sum_smallest_pdf(5, 1, 0.1).unwrap(),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            sum_largest_cdf(1, 1, 0.75).unwrap(),
            0.5,
            max_relative = 1e-14
        );
    }

    #[test]
    fn reflected_support_for_largest_sums() {
        let d = dist(9, StatKind::sum_largest(3));
        let (lo, hi) = d.support();
        assert_relative_eq!(lo, 0.3, max_relative = 1e-15);
        assert_eq!(hi, 1.0);
        let v = rational_to_f64(&d.cdf_exact(&ratio(3, 10)).unwrap());
        assert_eq!(v, 0.0, "lower support endpoint has zero mass below it");
    }
}
