//! Quantiles and significance tests on top of the closed-form laws.

use serde::Serialize;

use crate::distribution::SpacingDistribution;
use crate::error::{Error, Result};
use crate::model::{
    spacings_from_sorted, statistic_from_sorted_spacings, BoundaryMode, SpacingModel, StatKind,
};
use crate::series::EvalPolicy;

/// Residual tolerance for inverted CDFs: |CDF(q) - p| stays below this.
pub const QUANTILE_TOLERANCE: f64 = 1e-9;

/// Both tail probabilities of an observed statistic. `p_small` is P[X <=
/// observed] (small values flag clustering), `p_large` is P[X >= observed];
/// for continuous laws they sum to 1, at a point mass both equal 1.
#[derive(Debug, Clone, Serialize)]
pub struct TestResult {
    pub stat: StatKind,
    pub observed: f64,
    pub p_small: f64,
    pub p_large: f64,
    pub n: u32,
    pub boundary_mode: BoundaryMode,
}

/// Inverts the CDF by bisection. p = 0 and p = 1 return the exact support
/// endpoints; a point mass returns its atom for every p.
///
/// Panics if bisection fails to meet [`QUANTILE_TOLERANCE`]: the CDF is
/// monotone by construction, so a residual there means evaluation is
/// inconsistent with itself and no answer should be returned.
pub fn quantile(dist: &SpacingDistribution, p: f64, policy: &EvalPolicy) -> Result<f64> {
    if !p.is_finite() || !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    if let SpacingDistribution::PointMass { at, .. } = dist {
        return Ok(*at);
    }
    let (lo, hi) = dist.support();
    if p == 0.0 {
        return Ok(lo);
    }
    if p == 1.0 {
        return Ok(hi);
    }

    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if dist.cdf(mid, policy)? < p {
            a = mid;
        } else {
            b = mid;
        }
    }
    let q = 0.5 * (a + b);
    let residual = (dist.cdf(q, policy)? - p).abs();
    assert!(
        residual <= QUANTILE_TOLERANCE,
        "quantile bisection stalled at q={q} with |CDF(q) - p| = {residual:.3e} \
         for p={p}; the CDF is not behaving monotonically"
    );
    Ok(q)
}

/// Tail probabilities of an already-computed statistic value.
pub fn test_statistic(
    dist: &SpacingDistribution,
    observed: f64,
    policy: &EvalPolicy,
) -> Result<TestResult> {
    Ok(TestResult {
        stat: dist.kind(),
        observed,
        p_small: dist.cdf(observed, policy)?,
        p_large: dist.sf(observed, policy)?,
        n: dist.model().n(),
        boundary_mode: dist.model().mode(),
    })
}

/// Full pipeline for raw data: validates the values, sorts them (input
/// order never matters), forms the gaps, computes the statistic, and tests
/// it. The sample size is whatever the data provides.
pub fn evaluate_data(
    mode: BoundaryMode,
    kind: StatKind,
    values: &[f64],
    policy: &EvalPolicy,
) -> Result<TestResult> {
    let needed = match mode {
        BoundaryMode::WithEdges => 1,
        BoundaryMode::WithoutEdges => 3,
    };
    if values.len() < needed {
        return Err(Error::DataCount {
            needed,
            got: values.len(),
        });
    }
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(Error::DataValue { index, value });
        }
    }
    let mut points = values.to_vec();
    points.sort_unstable_by(f64::total_cmp);

    let model = SpacingModel::new(points.len() as u32, mode)?;
    let dist = model.distribution(kind)?;
    let mut spacings = spacings_from_sorted(&points, mode)?;
    spacings.sort_unstable_by(f64::total_cmp);
    let observed = statistic_from_sorted_spacings(&spacings, kind.family, kind.k);
    test_statistic(&dist, observed, policy)
}
