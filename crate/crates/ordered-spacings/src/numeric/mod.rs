//! Shared arithmetic: sign/log-magnitude floats, exact rationals, and the
//! integer log-factorial that feeds every closed-form coefficient.

mod logfact;
mod rational;
mod signed_log;

pub use logfact::{ln_binomial, ln_factorial};
pub use rational::{
    big_binomial, big_factorial, rational_from_f64, rational_int_pow, rational_to_f64, ratio,
    Rational,
};
pub use signed_log::{signed_log_sum, SignedLog, SumDiagnostics};
