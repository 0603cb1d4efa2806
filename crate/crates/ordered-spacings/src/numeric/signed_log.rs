use serde::Serialize;

/// A real number stored as a sign and the natural log of its magnitude.
///
/// Products, quotients, and integer powers are exact in this representation
/// up to rounding of the log; sums go through a shift-by-max so that terms
/// spanning hundreds of orders of magnitude combine without overflow. Zero
/// is `sign == 0` (the log field is then ignored and kept at -inf).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SignedLog {
    sign: i8,
    log_magnitude: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog {
        sign: 0,
        log_magnitude: f64::NEG_INFINITY,
    };
    pub const ONE: SignedLog = SignedLog {
        sign: 1,
        log_magnitude: 0.0,
    };

    pub fn new(sign: i8, log_magnitude: f64) -> Self {
        assert!(
            sign == 0 || sign == 1 || sign == -1,
            "sign must be -1, 0, or 1"
        );
        if sign == 0 || log_magnitude == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            SignedLog {
                sign,
                log_magnitude,
            }
        }
    }

    pub fn from_f64(v: f64) -> Self {
        assert!(!v.is_nan(), "cannot build SignedLog from NaN");
        if v == 0.0 {
            Self::ZERO
        } else {
            SignedLog {
                sign: if v > 0.0 { 1 } else { -1 },
                log_magnitude: v.abs().ln(),
            }
        }
    }

    /// Positive value given directly as ln(v).
    pub fn from_ln(ln: f64) -> Self {
        SignedLog {
            sign: 1,
            log_magnitude: ln,
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn ln_abs(&self) -> f64 {
        self.log_magnitude
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// May round to 0.0 or +/-inf when the magnitude leaves f64 range.
    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.log_magnitude.exp()
        }
    }

    pub fn neg(self) -> Self {
        SignedLog {
            sign: -self.sign,
            log_magnitude: self.log_magnitude,
        }
    }

    pub fn mul(self, other: Self) -> Self {
        if self.sign == 0 || other.sign == 0 {
            return Self::ZERO;
        }
        SignedLog {
            sign: self.sign * other.sign,
            log_magnitude: self.log_magnitude + other.log_magnitude,
        }
    }

    pub fn div(self, other: Self) -> Self {
        assert!(other.sign != 0, "division by SignedLog zero");
        if self.sign == 0 {
            return Self::ZERO;
        }
        SignedLog {
            sign: self.sign * other.sign,
            log_magnitude: self.log_magnitude - other.log_magnitude,
        }
    }

    /// Integer power; 0^0 = 1 by the windowed-polynomial convention.
    pub fn powi(self, exp: u32) -> Self {
        if exp == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        let sign = if self.sign < 0 && exp % 2 == 1 { -1 } else { 1 };
        SignedLog {
            sign,
            log_magnitude: self.log_magnitude * f64::from(exp),
        }
    }

    /// Addition with exact cancellation: equal magnitudes of opposite sign
    /// return exactly zero rather than a noise-level residual.
    pub fn add(self, other: Self) -> Self {
        if self.sign == 0 {
            return other;
        }
        if other.sign == 0 {
            return self;
        }
        let (hi, lo) = if self.log_magnitude >= other.log_magnitude {
            (self, other)
        } else {
            (other, self)
        };
        let d = lo.log_magnitude - hi.log_magnitude; // d <= 0
        if hi.sign == lo.sign {
            return SignedLog {
                sign: hi.sign,
                log_magnitude: hi.log_magnitude + d.exp().ln_1p(),
            };
        }
        if d == 0.0 {
            return Self::ZERO;
        }
        SignedLog {
            sign: hi.sign,
            log_magnitude: hi.log_magnitude + (-d.exp()).ln_1p(),
        }
    }

    pub fn abs_cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self.sign == 0 && other.sign == 0 {
            return std::cmp::Ordering::Equal;
        }
        if self.sign == 0 {
            return std::cmp::Ordering::Less;
        }
        if other.sign == 0 {
            return std::cmp::Ordering::Greater;
        }
        self.log_magnitude
            .partial_cmp(&other.log_magnitude)
            .expect("log magnitudes are never NaN")
    }
}

/// Diagnostics from a compensated signed-log sum.
#[derive(Clone, Copy, Debug)]
pub struct SumDiagnostics {
    /// ln of the largest term magnitude (NEG_INFINITY if all terms are zero).
    pub max_ln: f64,
    /// Decimal digits destroyed by the summation: log10 of the worst-case
    /// input rounding (a few ulp per term, totalled over the terms' gross
    /// magnitude) amplified by however much the terms cancel. About half a
    /// digit for a benign sum; +inf when the sum is exactly zero but
    /// nonzero terms were present.
    pub cancellation_digits: f64,
}

/// Sum terms of wildly different magnitudes and signs.
///
/// Terms are rescaled by the largest magnitude, sorted descending, and
/// accumulated with Neumaier compensation, so the result is faithful to the
/// rescaled sum to ~1 ulp and the cancellation estimate is trustworthy.
pub fn signed_log_sum(terms: &[SignedLog]) -> (SignedLog, SumDiagnostics) {
    let max_ln = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| t.ln_abs())
        .fold(f64::NEG_INFINITY, f64::max);
    if max_ln == f64::NEG_INFINITY {
        return (
            SignedLog::ZERO,
            SumDiagnostics {
                max_ln,
                cancellation_digits: 0.0,
            },
        );
    }
    let mut scaled: Vec<f64> = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| f64::from(t.sign()) * (t.ln_abs() - max_ln).exp())
        .collect();
    scaled.sort_by(|a, b| b.abs().partial_cmp(&a.abs()).expect("no NaN terms"));

    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut gross = 0.0f64;
    for &x in &scaled {
        gross += x.abs();
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    let total = sum + comp;

    if total == 0.0 {
        return (
            SignedLog::ZERO,
            SumDiagnostics {
                max_ln,
                cancellation_digits: f64::INFINITY,
            },
        );
    }
    let result = SignedLog::new(
        if total > 0.0 { 1 } else { -1 },
        max_ln + total.abs().ln(),
    );
    // Each scaled term arrives with a few ulp of ln/exp rounding, so the
    // sum's worst-case input error is ~3 eps * gross; dividing by |total|
    // is the cancellation amplification. The compensated summation itself
    // contributes nothing at this scale.
    let cancellation_digits = (3.0 * gross / total.abs()).log10().max(0.0);
    (
        result,
        SumDiagnostics {
            max_ln,
            cancellation_digits,
        },
    )
}
