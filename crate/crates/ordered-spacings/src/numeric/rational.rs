use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational arithmetic for the validation path.
///
/// `num_rational::BigRational` keeps every value in lowest terms with a
/// positive denominator, which are exactly the invariants the exact mode
/// depends on.
pub type Rational = num_rational::BigRational;

/// Small-integer ratio as an exact rational.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// n! as an exact integer.
pub fn big_factorial(n: u64) -> BigInt {
    let mut acc = BigInt::from(1u32);
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// C(n, k) as an exact integer; requires k <= n.
pub fn big_binomial(n: u64, k: u64) -> BigInt {
    assert!(k <= n, "binomial with k > n");
    let k = k.min(n - k);
    let mut acc = BigInt::from(1u32);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// r^exp (0^0 = 1 by the windowed convention). A reduced fraction stays
/// reduced under powers, so the parts are raised separately; going through
/// Ratio multiplication would redo a large gcd at every squaring step.
pub fn rational_int_pow(r: &Rational, exp: u32) -> Rational {
    if exp == 0 {
        return Rational::from_integer(BigInt::from(1u32));
    }
    Rational::new_raw(r.numer().pow(exp), r.denom().pow(exp))
}

/// Exact lift of a finite f64 (every finite f64 is a dyadic rational).
pub fn rational_from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float required for exact lift")
}

/// Nearest-ish f64 for a rational of any magnitude (<= 2 ulp error).
///
/// The num-rational conversion divides numerator and denominator as f64 and
/// returns NaN once either side overflows; this routine divides the top 64
/// bits of each and tracks the exponent explicitly, so astronomically large
/// intermediate values (factorials, high powers) convert faithfully.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.numer().sign() == Sign::Minus {
        -1.0
    } else {
        1.0
    };
    let (mn, en) = top_bits(&r.numer().abs());
    let (md, ed) = top_bits(r.denom());
    let mantissa = mn / md;
    let exp = en - ed;
    sign * ldexp(mantissa, exp)
}

/// Top <=64 bits of a positive bigint as f64, plus the dropped bit count.
fn top_bits(x: &BigInt) -> (f64, i64) {
    let bits = x.bits();
    if bits <= 64 {
        (x.to_f64().expect("fits in 64 bits"), 0)
    } else {
        let shift = bits - 64;
        let top: BigInt = x >> shift;
        (top.to_f64().expect("top bits fit"), shift as i64)
    }
}

fn ldexp(x: f64, exp: i64) -> f64 {
    // Split so each factor stays a representable power of two.
    if exp == 0 {
        return x;
    }
    let mut v = x;
    let mut remaining = exp;
    while remaining != 0 {
        let step = remaining.clamp(-1000, 1000);
        v *= 2f64.powi(step as i32);
        remaining -= step;
        if v == 0.0 || v.is_infinite() {
            break;
        }
    }
    v
}
