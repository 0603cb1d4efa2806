//! A statistic's distribution: guarded evaluation over the full unit
//! interval, with the support handled so callers never see raw series
//! artifacts outside it.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{SpacingModel, StatKind};
use crate::numeric::{rational_from_f64, Rational};
use crate::series::{EvalPolicy, PiecewiseSeries};

/// Law of one ordered-gap statistic.
///
/// Almost all cases are continuous with piecewise polynomial density. The
/// boundary order "sum of every gap" collapses: with edges the total is the
/// constant 1.
#[derive(Clone, Debug)]
pub enum SpacingDistribution {
    Continuous {
        model: SpacingModel,
        kind: StatKind,
        pdf: PiecewiseSeries,
        cdf: PiecewiseSeries,
        sf: PiecewiseSeries,
    },
    PointMass {
        model: SpacingModel,
        kind: StatKind,
        at: f64,
    },
}

fn check_unit_interval(x: f64) -> Result<()> {
    if !x.is_finite() || !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "statistic value {x} outside the unit interval"
        )));
    }
    Ok(())
}

fn check_unit_interval_exact(x: &Rational) -> Result<()> {
    if x < &Rational::zero() || x > &Rational::one() {
        return Err(Error::Domain(format!(
            "statistic value {x} outside the unit interval"
        )));
    }
    Ok(())
}

/// Clamp small numerical excursions out of [lo, hi], error on large ones.
fn clamp_unit(value: f64, lo: f64, hi: f64, policy: &EvalPolicy, what: &str) -> Result<f64> {
    if value >= lo && value <= hi {
        return Ok(value);
    }
    let excess = if value < lo { lo - value } else { value - hi };
    if policy.clamp_negative && excess <= policy.negative_tolerance {
        return Ok(value.clamp(lo, hi));
    }
    Err(Error::Precision {
        context: format!("{what} = {value} outside [{lo}, {hi}] beyond tolerance"),
        surviving_digits: -excess.log10(),
        minimum_digits: 0,
    })
}

impl SpacingDistribution {
    pub fn model(&self) -> SpacingModel {
        match self {
            SpacingDistribution::Continuous { model, .. } => *model,
            SpacingDistribution::PointMass { model, .. } => *model,
        }
    }

    pub fn kind(&self) -> StatKind {
        match self {
            SpacingDistribution::Continuous { kind, .. } => *kind,
            SpacingDistribution::PointMass { kind, .. } => *kind,
        }
    }

    pub fn describe(&self) -> String {
        let (model, kind) = (self.model(), self.kind());
        format!(
            "{} k={} ({} edges, n={})",
            kind.family.label(),
            kind.k,
            model.mode().label(),
            model.n()
        )
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, SpacingDistribution::PointMass { .. })
    }

    /// Support as floats; a point mass reports a zero-length interval.
    pub fn support(&self) -> (f64, f64) {
        match self {
            SpacingDistribution::Continuous { pdf, .. } => pdf.support(),
            SpacingDistribution::PointMass { at, .. } => (*at, *at),
        }
    }

    /// Support as exact rationals.
    pub fn support_exact(&self) -> (Rational, Rational) {
        match self {
            SpacingDistribution::Continuous { pdf, .. } => {
                let (lo, hi) = pdf.support_exact();
                (lo.clone(), hi.clone())
            }
            SpacingDistribution::PointMass { at, .. } => {
                let a = rational_from_f64(*at);
                (a.clone(), a)
            }
        }
    }

    pub fn pdf_series(&self) -> Option<&PiecewiseSeries> {
        match self {
            SpacingDistribution::Continuous { pdf, .. } => Some(pdf),
            SpacingDistribution::PointMass { .. } => None,
        }
    }

    pub fn cdf_series(&self) -> Option<&PiecewiseSeries> {
        match self {
            SpacingDistribution::Continuous { cdf, .. } => Some(cdf),
            SpacingDistribution::PointMass { .. } => None,
        }
    }

    pub fn sf_series(&self) -> Option<&PiecewiseSeries> {
        match self {
            SpacingDistribution::Continuous { sf, .. } => Some(sf),
            SpacingDistribution::PointMass { .. } => None,
        }
    }

    /// Density at x. Zero off the support, error outside [0,1] or for a
    /// point mass (which has no density).
    pub fn pdf(&self, x: f64, policy: &EvalPolicy) -> Result<f64> {
        check_unit_interval(x)?;
        match self {
            SpacingDistribution::PointMass { at, .. } => {
                Err(Error::DegenerateDensity { at: *at })
            }
            SpacingDistribution::Continuous { pdf, .. } => {
                let (lo, hi) = pdf.support();
                if x < lo || x > hi {
                    return Ok(0.0);
                }
                let v = pdf.eval(x, policy)?.value;
                clamp_unit(v, 0.0, f64::INFINITY, policy, "density")
            }
        }
    }

    /// P(X <= x).
    pub fn cdf(&self, x: f64, policy: &EvalPolicy) -> Result<f64> {
        check_unit_interval(x)?;
        match self {
            SpacingDistribution::PointMass { at, .. } => {
                Ok(if x < *at { 0.0 } else { 1.0 })
            }
            SpacingDistribution::Continuous { cdf, .. } => {
                let (lo, hi) = cdf.support();
                if x < lo {
                    return Ok(0.0);
                }
                if x > hi {
                    return Ok(1.0);
                }
                let v = cdf.eval(x, policy)?.value;
                clamp_unit(v, 0.0, 1.0, policy, "lower tail probability")
            }
        }
    }

    /// P(X >= x). At the atom of a point mass both tails equal 1.
    pub fn sf(&self, x: f64, policy: &EvalPolicy) -> Result<f64> {
        check_unit_interval(x)?;
        match self {
            SpacingDistribution::PointMass { at, .. } => {
                Ok(if x > *at { 0.0 } else { 1.0 })
            }
            SpacingDistribution::Continuous { sf, .. } => {
                let (lo, hi) = sf.support();
                if x < lo {
                    return Ok(1.0);
                }
                if x > hi {
                    return Ok(0.0);
                }
                let v = sf.eval(x, policy)?.value;
                clamp_unit(v, 0.0, 1.0, policy, "upper tail probability")
            }
        }
    }

    /// Exact density at an exact point.
    pub fn pdf_exact(&self, x: &Rational) -> Result<Rational> {
        check_unit_interval_exact(x)?;
        match self {
            SpacingDistribution::PointMass { at, .. } => {
                Err(Error::DegenerateDensity { at: *at })
            }
            SpacingDistribution::Continuous { pdf, .. } => {
                let (lo, hi) = pdf.support_exact();
                if x < lo || x > hi {
                    return Ok(Rational::zero());
                }
                pdf.eval_exact(x)
            }
        }
    }

    pub fn cdf_exact(&self, x: &Rational) -> Result<Rational> {
        check_unit_interval_exact(x)?;
        match self {
            SpacingDistribution::PointMass { at, .. } => {
                let at = rational_from_f64(*at);
                Ok(if *x < at { Rational::zero() } else { Rational::one() })
            }
            SpacingDistribution::Continuous { cdf, .. } => {
                let (lo, hi) = cdf.support_exact();
                if x < lo {
                    return Ok(Rational::zero());
                }
                if x > hi {
                    return Ok(Rational::one());
                }
                cdf.eval_exact(x)
            }
        }
    }

    pub fn sf_exact(&self, x: &Rational) -> Result<Rational> {
        check_unit_interval_exact(x)?;
        match self {
            SpacingDistribution::PointMass { at, .. } => {
                let at = rational_from_f64(*at);
                Ok(if *x > at { Rational::zero() } else { Rational::one() })
            }
            SpacingDistribution::Continuous { sf, .. } => {
                let (lo, hi) = sf.support_exact();
                if x < lo {
                    return Ok(Rational::one());
                }
                if x > hi {
                    return Ok(Rational::zero());
                }
                sf.eval_exact(x)
            }
        }
    }

    /// Density breakpoints (support ends plus interior window edges), the
    /// natural grid seeds for integration and tabulation.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            SpacingDistribution::Continuous { pdf, .. } => pdf.breakpoints(),
            SpacingDistribution::PointMass { at, .. } => vec![*at],
        }
    }

    /// True when every series carries exact coefficients.
    pub fn has_exact(&self) -> bool {
        match self {
            SpacingDistribution::Continuous { pdf, cdf, sf, .. } => {
                pdf.has_exact() && cdf.has_exact() && sf.has_exact()
            }
            SpacingDistribution::PointMass { .. } => true,
        }
    }
}
