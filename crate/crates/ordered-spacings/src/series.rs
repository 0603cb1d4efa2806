//! Windowed-polynomial series and their guarded evaluation.
//!
//! Every continuous law in this crate has the shape
//!
//! ```text
//! prefactor * sum_i coeff_i * (shift_i + slope_i * x)^power_i   on [window_lo_i, window_hi_i]
//! ```
//!
//! with rational shifts, slopes, and windows. Terms alternate in sign and can
//! cancel almost completely near the lower end of a support, so the float
//! path computes each term in sign/log space, sums with sorted compensated
//! accumulation, and estimates how many decimal digits survived. When too few
//! survive, evaluation transparently retries in exact rational arithmetic
//! (policy permitting) or reports a precision error rather than returning
//! noise.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result, RATIONAL_NMAX_ENV};
use crate::numeric::{
    rational_from_f64, rational_to_f64, signed_log_sum, Rational, SignedLog,
};

/// Decimal digits carried by an f64.
const F64_DECIMAL_DIGITS: f64 = 15.95;

/// Below this many surviving digits a float result is considered unusable.
pub const MIN_SURVIVING_DIGITS: f64 = 6.0;

/// Sample counts up to this always get exact coefficients materialized.
pub const EXACT_BUILD_CAP: u32 = 512;

/// Default cap on n for the exact fallback and for forced rational mode.
pub const DEFAULT_RATIONAL_NMAX: u32 = 60;

/// How a value is computed: pure float, float with exact retry, or exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EvalMode {
    Auto,
    FloatLog,
    Rational,
}

/// Evaluation controls shared by every distribution operation.
#[derive(Clone, Debug)]
pub struct EvalPolicy {
    pub mode: EvalMode,
    /// Clamp tiny negative densities (and tiny CDF overshoots) to range.
    pub clamp_negative: bool,
    /// Magnitude beyond which a negative density is an error, not noise.
    pub negative_tolerance: f64,
    /// Largest n for which the exact fallback may run.
    pub rational_n_max: u32,
    /// Float results claiming fewer decimal digits than this are rejected
    /// (FloatLog) or retried exactly (Auto). Raise it to demand more
    /// accuracy per point at the cost of more exact-arithmetic retries.
    pub min_surviving_digits: f64,
}

impl Default for EvalPolicy {
    fn default() -> Self {
        EvalPolicy {
            mode: EvalMode::Auto,
            clamp_negative: true,
            negative_tolerance: 1e-10,
            rational_n_max: DEFAULT_RATIONAL_NMAX,
            min_surviving_digits: MIN_SURVIVING_DIGITS,
        }
    }
}

impl EvalPolicy {
    pub fn float_only() -> Self {
        EvalPolicy {
            mode: EvalMode::FloatLog,
            ..Default::default()
        }
    }

    pub fn rational() -> Self {
        EvalPolicy {
            mode: EvalMode::Rational,
            ..Default::default()
        }
    }
}

/// Which route produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalRoute {
    Float,
    RationalFallback,
    Rational,
}

/// A value plus the diagnostics the stability checks need.
#[derive(Clone, Copy, Debug)]
pub struct Evaluated {
    pub value: f64,
    pub route: EvalRoute,
    /// Estimated decimal digits surviving cancellation (infinite on the
    /// exact route).
    pub surviving_digits: f64,
}

/// Coefficient in both representations. The two sides are always computed
/// through independent codepaths so their agreement stays a meaningful check.
#[derive(Clone, Debug)]
pub(crate) struct Dual {
    pub log: SignedLog,
    pub exact: Option<Rational>,
}

impl Dual {
    pub fn new(log: SignedLog, exact: Option<Rational>) -> Self {
        Dual { log, exact }
    }

    #[cfg(test)]
    pub fn from_ratio(r: &Rational, want_exact: bool) -> Self {
        Dual {
            log: SignedLog::from_f64(rational_to_f64(r)),
            exact: want_exact.then(|| r.clone()),
        }
    }

    pub fn mul(&self, other: &Dual) -> Dual {
        Dual {
            log: self.log.mul(other.log),
            exact: match (&self.exact, &other.exact) {
                (Some(a), Some(b)) => Some(a * b),
                _ => None,
            },
        }
    }

    pub fn neg(&self) -> Dual {
        Dual {
            log: self.log.neg(),
            exact: self.exact.as_ref().map(|r| -r),
        }
    }
}

/// One windowed polynomial term: coeff * (shift + slope*x)^power on
/// [window_lo, window_hi] (closed; outside it the term contributes nothing).
#[derive(Clone, Debug)]
pub struct Term {
    coeff: SignedLog,
    coeff_exact: Option<Rational>,
    shift: Rational,
    slope: Rational,
    power: u32,
    window_lo: Rational,
    window_hi: Rational,
    shift_f: f64,
    slope_f: f64,
    window_lo_f: f64,
    window_hi_f: f64,
}

impl Term {
    pub(crate) fn new(
        coeff: Dual,
        shift: Rational,
        slope: Rational,
        power: u32,
        window_lo: Rational,
        window_hi: Rational,
    ) -> Self {
        debug_assert!(window_lo <= window_hi, "inverted window");
        Term {
            shift_f: rational_to_f64(&shift),
            slope_f: rational_to_f64(&slope),
            window_lo_f: rational_to_f64(&window_lo),
            window_hi_f: rational_to_f64(&window_hi),
            coeff: coeff.log,
            coeff_exact: coeff.exact,
            shift,
            slope,
            power,
            window_lo,
            window_hi,
        }
    }

    pub fn power(&self) -> u32 {
        self.power
    }
}

/// A complete law: terms, a common prefactor, and the support.
#[derive(Clone, Debug)]
pub struct PiecewiseSeries {
    terms: Vec<Term>,
    prefactor: SignedLog,
    prefactor_exact: Option<Rational>,
    support_lo: Rational,
    support_hi: Rational,
    support_lo_f: f64,
    support_hi_f: f64,
    /// Sample count of the model this series belongs to; gates the exact
    /// fallback cap.
    n: u32,
}

impl PiecewiseSeries {
    pub(crate) fn new(
        n: u32,
        prefactor: Dual,
        terms: Vec<Term>,
        support_lo: Rational,
        support_hi: Rational,
    ) -> Self {
        PiecewiseSeries {
            support_lo_f: rational_to_f64(&support_lo),
            support_hi_f: rational_to_f64(&support_hi),
            terms,
            prefactor: prefactor.log,
            prefactor_exact: prefactor.exact,
            support_lo,
            support_hi,
            n,
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.support_lo_f, self.support_hi_f)
    }

    pub fn support_exact(&self) -> (&Rational, &Rational) {
        (&self.support_lo, &self.support_hi)
    }

    pub fn sample_count(&self) -> u32 {
        self.n
    }

    pub fn has_exact(&self) -> bool {
        self.prefactor_exact.is_some() && self.terms.iter().all(|t| t.coeff_exact.is_some())
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Window boundaries inside the support, plus the support endpoints,
    /// sorted and deduplicated.
    pub fn breakpoints_exact(&self) -> Vec<Rational> {
        let mut pts = vec![self.support_lo.clone(), self.support_hi.clone()];
        for t in &self.terms {
            for b in [&t.window_lo, &t.window_hi] {
                if *b > self.support_lo && *b < self.support_hi {
                    pts.push(b.clone());
                }
            }
        }
        pts.sort();
        pts.dedup();
        pts
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.breakpoints_exact().iter().map(rational_to_f64).collect();
        pts.dedup();
        pts
    }

    /// The series for x -> f(1 - x): shifts fold the slope in, windows and
    /// support reflect. Exact parts map exactly, so reflected series agree
    /// with the original at mirrored rational points bit-for-bit.
    pub fn reflected(&self) -> PiecewiseSeries {
        let one = Rational::from_integer(1.into());
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Term::new(
                    Dual::new(t.coeff, t.coeff_exact.clone()),
                    &t.shift + &t.slope,
                    -&t.slope,
                    t.power,
                    &one - &t.window_hi,
                    &one - &t.window_lo,
                )
            })
            .collect();
        PiecewiseSeries::new(
            self.n,
            Dual::new(self.prefactor, self.prefactor_exact.clone()),
            terms,
            &one - &self.support_hi,
            &one - &self.support_lo,
        )
    }

    /// The series for x -> 1 - f(x), valid on the same support. Adds a
    /// constant term 1/prefactor and negates every existing term, so the
    /// cancellation guard sees the full sum including the constant.
    pub fn one_minus(&self) -> PiecewiseSeries {
        let prefactor = Dual::new(self.prefactor, self.prefactor_exact.clone());
        let inv_exact = self
            .prefactor_exact
            .as_ref()
            .map(|p| Rational::from_integer(1.into()) / p);
        let mut terms = Vec::with_capacity(self.terms.len() + 1);
        terms.push(Term::new(
            Dual::new(SignedLog::ONE.div(self.prefactor), inv_exact),
            Rational::from_integer(1.into()),
            Rational::zero(),
            0,
            self.support_lo.clone(),
            self.support_hi.clone(),
        ));
        for t in &self.terms {
            terms.push(Term::new(
                Dual::new(t.coeff.neg(), t.coeff_exact.as_ref().map(|r| -r)),
                t.shift.clone(),
                t.slope.clone(),
                t.power,
                t.window_lo.clone(),
                t.window_hi.clone(),
            ));
        }
        PiecewiseSeries::new(
            self.n,
            prefactor,
            terms,
            self.support_lo.clone(),
            self.support_hi.clone(),
        )
    }

    fn eval_float(&self, x: f64) -> (SignedLog, f64) {
        let mut parts = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if x < t.window_lo_f || x > t.window_hi_f {
                continue;
            }
            let base = t.shift_f + t.slope_f * x;
            parts.push(t.coeff.mul(SignedLog::from_f64(base).powi(t.power)));
        }
        let (sum, diag) = signed_log_sum(&parts);
        let surviving = if sum.is_zero() && diag.cancellation_digits.is_infinite() {
            0.0
        } else {
            F64_DECIMAL_DIGITS - diag.cancellation_digits
        };
        (sum.mul(self.prefactor), surviving)
    }

    /// Exact evaluation at an exact point.
    ///
    /// Every active term is coeff * (shift + slope*x)^power. Summing those
    /// as Ratio values would run a multi-thousand-bit gcd per addition, so
    /// the terms are accumulated as integers over one shared denominator
    /// S * qx^P (S built from the small shift/slope/coefficient
    /// denominators, qx from x alone) and reduced once at the end.
    pub fn eval_exact(&self, x: &Rational) -> Result<Rational> {
        let prefactor = self.prefactor_exact.as_ref().ok_or(Error::RationalCap {
            n: self.n,
            cap: EXACT_BUILD_CAP,
            env: RATIONAL_NMAX_ENV,
        })?;

        let mut active: Vec<(&Term, &Rational)> = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if *x < t.window_lo || *x > t.window_hi {
                continue;
            }
            let coeff = t.coeff_exact.as_ref().ok_or(Error::RationalCap {
                n: self.n,
                cap: EXACT_BUILD_CAP,
                env: RATIONAL_NMAX_ENV,
            })?;
            active.push((t, coeff));
        }
        if active.is_empty() {
            return Ok(Rational::zero());
        }

        let (px, qx) = (x.numer(), x.denom());
        let power_max = active.iter().map(|(t, _)| t.power).max().unwrap_or(0);
        let smalls: Vec<BigInt> = active
            .iter()
            .map(|(t, coeff)| {
                (t.shift.denom() * t.slope.denom()).pow(t.power) * coeff.denom()
            })
            .collect();
        let shared = smalls
            .iter()
            .fold(BigInt::from(1u32), |acc, s| acc.lcm(s));

        let mut numer_sum = BigInt::from(0u32);
        for ((t, coeff), small) in active.iter().zip(&smalls) {
            // shift + slope*x over the unreduced denominator sb*mb*qx.
            let base_num = t.shift.numer() * t.slope.denom() * qx
                + t.slope.numer() * px * t.shift.denom();
            let mut term = coeff.numer() * base_num.pow(t.power) * (&shared / small);
            if t.power < power_max {
                term *= qx.pow(power_max - t.power);
            }
            numer_sum += term;
        }

        Ok(Rational::new(
            numer_sum * prefactor.numer(),
            shared * qx.pow(power_max) * prefactor.denom(),
        ))
    }

    /// The exact lift of a float evaluation point. The float support edges
    /// round toward the interior or the exterior depending on the value,
    /// so a float-in-support x can lift to a rational a hair outside the
    /// exact windows; snapping onto the exact edge keeps the two numeric
    /// frames agreeing about which pieces are active.
    fn exact_point(&self, x: f64) -> Rational {
        let xr = rational_from_f64(x);
        if xr < self.support_lo {
            self.support_lo.clone()
        } else if xr > self.support_hi {
            self.support_hi.clone()
        } else {
            xr
        }
    }

    /// Policy-directed evaluation. The caller is responsible for support
    /// clipping; this evaluates the raw series.
    pub fn eval(&self, x: f64, policy: &EvalPolicy) -> Result<Evaluated> {
        match policy.mode {
            EvalMode::Rational => {
                if self.n > policy.rational_n_max {
                    return Err(Error::RationalCap {
                        n: self.n,
                        cap: policy.rational_n_max,
                        env: RATIONAL_NMAX_ENV,
                    });
                }
                let exact = self.eval_exact(&self.exact_point(x))?;
                Ok(Evaluated {
                    value: rational_to_f64(&exact),
                    route: EvalRoute::Rational,
                    surviving_digits: f64::INFINITY,
                })
            }
            EvalMode::FloatLog => {
                let (v, surviving) = self.eval_float(x);
                if surviving < policy.min_surviving_digits {
                    return Err(Error::Precision {
                        context: format!("series evaluation at x = {x}"),
                        surviving_digits: surviving,
                        minimum_digits: policy.min_surviving_digits as u32,
                    });
                }
                Ok(Evaluated {
                    value: v.to_f64(),
                    route: EvalRoute::Float,
                    surviving_digits: surviving,
                })
            }
            EvalMode::Auto => {
                let (v, surviving) = self.eval_float(x);
                if surviving >= policy.min_surviving_digits {
                    return Ok(Evaluated {
                        value: v.to_f64(),
                        route: EvalRoute::Float,
                        surviving_digits: surviving,
                    });
                }
                if self.n <= policy.rational_n_max && self.has_exact() {
                    let exact = self.eval_exact(&self.exact_point(x))?;
                    return Ok(Evaluated {
                        value: rational_to_f64(&exact),
                        route: EvalRoute::RationalFallback,
                        surviving_digits: f64::INFINITY,
                    });
                }
                Err(Error::Precision {
                    context: format!("series evaluation at x = {x}"),
                    surviving_digits: surviving,
                    minimum_digits: policy.min_surviving_digits as u32,
                })
            }
        }
    }

    /// Structural dump: terms with sign/log coefficients, float shifts,
    /// slopes, powers, windows, the prefactor, and the support.
    pub fn to_debug_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|t| {
                serde_json::json!({
                    "coeff": t.coeff,
                    "shift": t.shift_f,
                    "slope": t.slope_f,
                    "power": t.power,
                    "window_lo": t.window_lo_f,
                    "window_hi": t.window_hi_f,
                })
            })
            .collect();
        serde_json::json!({
            "terms": terms,
            "prefactor": self.prefactor,
            "support_lo": self.support_lo_f,
            "support_hi": self.support_hi_f,
        })
    }
}
