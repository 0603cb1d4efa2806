//! Combinatorial coefficients of the ordered-spacing series.
//!
//! Every closed-form law in this crate is a short alternating sum of windowed
//! polynomials. The two coefficient families that appear are the per-term
//! alternating weights (they depend only on the term index i and the order k
//! of the statistic) and a normalization prefactor (which also depends on the
//! sample count n). Both are kept in two independent representations: a
//! sign/log-magnitude float for fast evaluation at any scale, and an exact
//! big-integer rational for the validation path. The two are computed from
//! separate codepaths so their agreement is a real check, not a tautology.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::numeric::{
    big_factorial, ln_factorial, rational_int_pow, ratio, Rational, SignedLog,
};

/// Alternating weight of the i-th window term in the sum-of-k-smallest
/// series: sign (-1)^(i-1), magnitude (k+1-i)^(k-2) / ((k-i)! (i-1)!).
/// The k = 1 case is the convention value 1 (the base is 1, so the negative
/// exponent is harmless).
pub fn term_weight_log(i: u32, k: u32) -> Result<SignedLog> {
    check_weight_domain(i, k)?;
    let sign = if (i - 1) % 2 == 0 { 1 } else { -1 };
    let ln = (f64::from(k) - 2.0) * f64::from(k + 1 - i).ln()
        - ln_factorial(u64::from(k - i))
        - ln_factorial(u64::from(i - 1));
    Ok(SignedLog::new(sign, ln))
}

/// Exact twin of [`term_weight_log`].
pub fn term_weight_exact(i: u32, k: u32) -> Result<Rational> {
    check_weight_domain(i, k)?;
    let base = i64::from(k + 1 - i);
    let numer = if k >= 2 {
        rational_int_pow(&ratio(base, 1), k - 2)
    } else {
        // k = 1 forces i = 1 and base 1; 1^(-1) = 1.
        ratio(1, 1)
    };
    let denom = big_factorial(u64::from(k - i)) * big_factorial(u64::from(i - 1));
    let sign = if (i - 1) % 2 == 0 { 1 } else { -1 };
    Ok(numer * Rational::new(BigInt::from(sign), denom))
}

/// Normalization prefactor of the sum-of-k-smallest series:
/// n (n+1)! / ((n+1-k)^(k-1) (n+1-k)!), valid for 1 <= k <= n.
/// k = n+1 (the sum of every spacing) is a point mass and is handled by the
/// distribution layer, never through this formula.
pub fn sum_prefactor_log(k: u32, n: u32) -> Result<SignedLog> {
    check_prefactor_domain(k, n)?;
    let m = u64::from(n + 1 - k);
    let ln = f64::from(n).ln() + ln_factorial(u64::from(n) + 1)
        - f64::from(k - 1) * (m as f64).ln()
        - ln_factorial(m);
    Ok(SignedLog::new(1, ln))
}

/// Exact twin of [`sum_prefactor_log`].
pub fn sum_prefactor_exact(k: u32, n: u32) -> Result<Rational> {
    check_prefactor_domain(k, n)?;
    let m = u64::from(n + 1 - k);
    let numer = BigInt::from(n) * big_factorial(u64::from(n) + 1);
    let denom = BigInt::from(m).pow(k - 1) * big_factorial(m);
    Ok(Rational::new(numer, denom))
}

fn check_weight_domain(i: u32, k: u32) -> Result<()> {
    if i == 0 || k == 0 || i > k {
        return Err(Error::Domain(format!(
            "term weight needs 1 <= i <= k, got i = {i}, k = {k}"
        )));
    }
    Ok(())
}

fn check_prefactor_domain(k: u32, n: u32) -> Result<()> {
    if k == 0 || n == 0 || k > n {
        return Err(Error::Domain(format!(
            "sum prefactor needs 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    Ok(())
}

/// All weights and prefactors for one sample count, built eagerly.
///
/// Exact values are materialized alongside the logs when `with_exact` is set;
/// the table is immutable afterwards and safe to share across threads.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    n: u32,
    k_max: u32,
    weights_log: Vec<Vec<SignedLog>>,
    weights_exact: Option<Vec<Vec<Rational>>>,
    prefactors_log: Vec<SignedLog>,
    prefactors_exact: Option<Vec<Rational>>,
}

impl CoefficientTable {
    pub fn build(n: u32, k_max: u32, with_exact: bool) -> Result<Self> {
        if k_max == 0 || k_max > n {
            return Err(Error::Domain(format!(
                "coefficient table needs 1 <= k_max <= n, got k_max = {k_max}, n = {n}"
            )));
        }
        let mut weights_log = Vec::with_capacity(k_max as usize);
        let mut prefactors_log = Vec::with_capacity(k_max as usize);
        for k in 1..=k_max {
            weights_log.push((1..=k).map(|i| term_weight_log(i, k)).collect::<Result<_>>()?);
            prefactors_log.push(sum_prefactor_log(k, n)?);
        }
        let (weights_exact, prefactors_exact) = if with_exact {
            let mut w = Vec::with_capacity(k_max as usize);
            let mut p = Vec::with_capacity(k_max as usize);
            for k in 1..=k_max {
                w.push((1..=k).map(|i| term_weight_exact(i, k)).collect::<Result<_>>()?);
                p.push(sum_prefactor_exact(k, n)?);
            }
            (Some(w), Some(p))
        } else {
            (None, None)
        };
        Ok(CoefficientTable {
            n,
            k_max,
            weights_log,
            weights_exact,
            prefactors_log,
            prefactors_exact,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn has_exact(&self) -> bool {
        self.weights_exact.is_some()
    }

    pub fn weight_log(&self, i: u32, k: u32) -> SignedLog {
        self.weights_log[(k - 1) as usize][(i - 1) as usize]
    }

    pub fn weight_exact(&self, i: u32, k: u32) -> Option<&Rational> {
        self.weights_exact
            .as_ref()
            .map(|w| &w[(k - 1) as usize][(i - 1) as usize])
    }

    pub fn prefactor_log(&self, k: u32) -> SignedLog {
        self.prefactors_log[(k - 1) as usize]
    }

    pub fn prefactor_exact(&self, k: u32) -> Option<&Rational> {
        self.prefactors_exact.as_ref().map(|p| &p[(k - 1) as usize])
    }

    /// Debug dump. Weight rows carry their term index i >= 1; prefactor rows
    /// are flagged with i = 0. Exact columns are blank when the table was
    /// built without exact values.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "i,k,sign,log_magnitude,numerator,denominator")?;
        for k in 1..=self.k_max {
            let p = self.prefactor_log(k);
            let (num, den) = self
                .prefactor_exact(k)
                .map(|r| (r.numer().to_string(), r.denom().to_string()))
                .unwrap_or_default();
            // + 0.0 turns a negative zero into plain 0 in the output.
            writeln!(out, "0,{},{},{:.17e},{},{}", k, p.sign(), p.ln_abs() + 0.0, num, den)?;
            for i in 1..=k {
                let w = self.weight_log(i, k);
                let (num, den) = self
                    .weight_exact(i, k)
                    .map(|r| (r.numer().to_string(), r.denom().to_string()))
                    .unwrap_or_default();
                writeln!(out, "{},{},{},{:.17e},{},{}", i, k, w.sign(), w.ln_abs() + 0.0, num, den)?;
            }
        }
        Ok(())
    }
}

/// Counts of identities checked by [`verify_recursions`].
#[derive(Clone, Copy, Debug, Default)]
pub struct RecursionReport {
    pub weight_update_checks: usize,
    pub weight_reduction_checks: usize,
    pub weight_sum_checks: usize,
    pub prefactor_update_checks: usize,
}

/// First violated identity, with coordinates.
#[derive(Clone, Debug)]
pub struct RecursionFailure {
    pub identity: &'static str,
    pub i: u32,
    pub k: u32,
    pub n: u32,
}

impl std::fmt::Display for RecursionFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} violated at (i = {}, k = {}, n = {})",
            self.identity, self.i, self.k, self.n
        )
    }
}

impl std::error::Error for RecursionFailure {}

/// Exact-arithmetic sweep of the four coefficient recursions:
/// the weight update in (i, k), the reduction of any weight to a first
/// weight, the sum rule producing the next first weight, and the prefactor
/// update in (k, n). Weights sweep 1 <= i <= k <= k_max; prefactors sweep
/// k <= n <= 2 k_max, so `k_max = 30` covers orders up to 30 with sample
/// counts up to 60. Every comparison is exact; there is no tolerance.
pub fn verify_recursions(k_max: u32) -> std::result::Result<RecursionReport, RecursionFailure> {
    assert!(k_max >= 2, "recursion sweep needs k_max >= 2");
    let mut report = RecursionReport::default();
    let exact = |i: u32, k: u32| term_weight_exact(i, k).expect("in-domain weight");

    for k in 2..=k_max {
        for i in 2..=k {
            // a(i,k) = -a(i-1,k-1) (k+1-i)/(i-1)
            let lhs = exact(i, k);
            let rhs = -exact(i - 1, k - 1) * ratio(i64::from(k + 1 - i), i64::from(i - 1));
            if lhs != rhs {
                return Err(RecursionFailure {
                    identity: "weight update",
                    i,
                    k,
                    n: 0,
                });
            }
            report.weight_update_checks += 1;
        }
    }

    for k in 1..=k_max {
        for i in 1..=k {
            // a(i,k) = (-1)^(i-1) (k+1-i)^(i-1) a(1,k+1-i) / (i-1)!
            let lhs = exact(i, k);
            let sign = if (i - 1) % 2 == 0 { 1 } else { -1 };
            let rhs = rational_int_pow(&ratio(i64::from(k + 1 - i), 1), i - 1)
                * exact(1, k + 1 - i)
                * Rational::new(BigInt::from(sign), big_factorial(u64::from(i - 1)));
            if lhs != rhs {
                return Err(RecursionFailure {
                    identity: "weight reduction to first weight",
                    i,
                    k,
                    n: 0,
                });
            }
            report.weight_reduction_checks += 1;
        }
    }

    for k in 2..=k_max {
        // sum_{i=1}^{k-1} a(i,k-1) (k-i)/i = a(1,k)
        let mut acc = ratio(0, 1);
        for i in 1..=(k - 1) {
            acc += exact(i, k - 1) * ratio(i64::from(k - i), i64::from(i));
        }
        if acc != exact(1, k) {
            return Err(RecursionFailure {
                identity: "first-weight sum rule",
                i: 0,
                k,
                n: 0,
            });
        }
        report.weight_sum_checks += 1;
    }

    for k in 2..=k_max {
        for n in k..=(2 * k_max) {
            // A(k,n) = A(k-1,n-1) n(n+1) / ((n-1)(n+1-k))
            let lhs = sum_prefactor_exact(k, n).expect("in-domain prefactor");
            let rhs = sum_prefactor_exact(k - 1, n - 1).expect("in-domain prefactor")
                * ratio(i64::from(n) * i64::from(n + 1), 1)
                / ratio(i64::from(n - 1) * i64::from(n + 1 - k), 1);
            if lhs != rhs {
                return Err(RecursionFailure {
                    identity: "prefactor update",
                    i: 0,
                    k,
                    n,
                });
            }
            report.prefactor_update_checks += 1;
        }
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational_to_f64;
    use approx::assert_relative_eq;

    #[test]
    fn frozen_prefactor_values() {
        // n(n+1) at k = 1; hand-reduced exact values elsewhere.
        for n in [1u32, 2, 5, 17, 40] {
            assert_eq!(
                sum_prefactor_exact(1, n).unwrap(),
                ratio(i64::from(n) * i64::from(n + 1), 1)
            );
        }
        assert_eq!(sum_prefactor_exact(2, 5).unwrap(), ratio(75, 2));
        assert_eq!(sum_prefactor_exact(5, 5).unwrap(), ratio(3600, 1));
        // 2 * 6! / (5^1 * 5!)
        assert_eq!(sum_prefactor_exact(2, 6).unwrap(), ratio(6 * 5040, 5 * 120));
    }

    #[test]
    fn frozen_weight_values() {
        assert_eq!(term_weight_exact(1, 1).unwrap(), ratio(1, 1));
        assert_eq!(term_weight_exact(1, 2).unwrap(), ratio(1, 1));
        assert_eq!(term_weight_exact(2, 2).unwrap(), ratio(-1, 1));
        assert_eq!(term_weight_exact(1, 3).unwrap(), ratio(3, 2));
        assert_eq!(term_weight_exact(3, 5).unwrap(), ratio(27, 4));
        // First-weight closed form k^(k-2)/(k-1)!.
        for k in 2..=12u32 {
            let expect = rational_int_pow(&ratio(i64::from(k), 1), k - 2)
                * Rational::new(BigInt::from(1), big_factorial(u64::from(k - 1)));
            assert_eq!(term_weight_exact(1, k).unwrap(), expect);
        }
        // Sign alternates in i.
        for k in 1..=10u32 {
            for i in 1..=k {
                let w = term_weight_exact(i, k).unwrap();
                let positive = w.numer().sign() != num_bigint::Sign::Minus;
                assert_eq!(positive, (i - 1) % 2 == 0, "sign pattern at i={i}, k={k}");
            }
        }
    }

    #[test]
    fn domains_are_enforced() {
        assert!(term_weight_log(0, 3).is_err());
        assert!(term_weight_log(4, 3).is_err());
        assert!(sum_prefactor_log(0, 5).is_err());
        assert!(sum_prefactor_log(6, 5).is_err(), "k = n+1 is out of domain");
        assert!(CoefficientTable::build(5, 6, true).is_err());
    }

    #[test]
    fn log_and_exact_representations_agree() {
        for k in 1..=40u32 {
            for i in 1..=k {
                let log = term_weight_log(i, k).unwrap();
                let exact = term_weight_exact(i, k).unwrap();
                let e = rational_to_f64(&exact);
                assert_eq!(f64::from(log.sign()), e.signum());
                assert_relative_eq!(log.to_f64(), e, max_relative = 1e-13);
            }
        }
        for n in (2..=80u32).step_by(7) {
            for k in 1..=n {
                let log = sum_prefactor_log(k, n).unwrap();
                let exact = sum_prefactor_exact(k, n).unwrap();
                // Compare in log space; magnitudes can overflow f64.
                let ln_exact = rational_to_f64(&exact).ln();
                if ln_exact.is_finite() {
                    assert_relative_eq!(log.to_f64(), rational_to_f64(&exact), max_relative = 1e-13);
                } else {
                    let bits_num = exact.numer().bits() as f64;
                    let bits_den = exact.denom().bits() as f64;
                    let rough = (bits_num - bits_den) * std::f64::consts::LN_2;
                    assert_relative_eq!(log.ln_abs(), rough, max_relative = 1e-2);
                }
            }
        }
    }

    #[test]
    fn table_matches_single_lookups() {
        let t = CoefficientTable::build(12, 9, true).unwrap();
        assert!(t.has_exact());
        for k in 1..=9u32 {
            assert_eq!(
                t.prefactor_exact(k).unwrap(),
                &sum_prefactor_exact(k, 12).unwrap()
            );
            for i in 1..=k {
                assert_eq!(t.weight_exact(i, k).unwrap(), &term_weight_exact(i, k).unwrap());
                assert_eq!(t.weight_log(i, k).sign(), term_weight_log(i, k).unwrap().sign());
            }
        }
        let no_exact = CoefficientTable::build(12, 9, false).unwrap();
        assert!(!no_exact.has_exact());
        assert!(no_exact.weight_exact(1, 1).is_none());
    }

    #[test]
    fn csv_dump_shape() {
        let t = CoefficientTable::build(5, 3, true).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "i,k,sign,log_magnitude,numerator,denominator");
        // header + per k: one prefactor row + k weight rows = 1 + (1+1) + (1+2) + (1+3).
        assert_eq!(lines.len(), 1 + 2 + 3 + 4);
        assert!(lines[1].starts_with("0,1,1,"), "prefactor row flagged i=0");
    }

    #[test]
    fn recursions_hold_at_small_scale() {
        let report = verify_recursions(12).unwrap();
        assert!(report.weight_update_checks > 0);
        assert!(report.weight_reduction_checks > 0);
        assert!(report.weight_sum_checks > 0);
        assert!(report.prefactor_update_checks > 0);
    }
}
