//! Composite Gauss-Legendre integration with whole-vs-halves refinement.
//!
//! The integrands in this crate are piecewise polynomials, so a 32-node rule
//! seeded at the breakpoints is already exact up to degree 63 per piece;
//! adaptivity only has to mop up higher degrees. The error estimate is the
//! usual |whole - (left + right)| accumulated over accepted intervals, which
//! for polynomial pieces is a conservative bound.

use std::f64::consts::PI;
use std::sync::OnceLock;

const GL_N: usize = 32;

/// Integral value with its self-reported error bound and cost.
#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evals: usize,
}

/// Nodes and weights on [-1, 1], found by Newton iteration on the Legendre
/// recurrence. Converges to full precision in a handful of steps.
fn gauss_legendre() -> &'static ([f64; GL_N], [f64; GL_N]) {
    static TABLE: OnceLock<([f64; GL_N], [f64; GL_N])> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = GL_N;
        let mut nodes = [0.0; GL_N];
        let mut weights = [0.0; GL_N];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..64 {
                let mut p0 = 1.0;
                let mut p1 = x;
                for j in 2..=n {
                    let jf = j as f64;
                    let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let step = p1 / dp;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        (nodes, weights)
    })
}

fn fixed_rule<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gauss_legendre();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    let mut comp = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        let term = w * f(mid + half * x);
        let t = acc + term;
        comp += if acc.abs() >= term.abs() {
            (acc - t) + term
        } else {
            (term - t) + acc
        };
        acc = t;
    }
    (acc + comp) * half
}

/// One pass of the 32-node rule over each piece, no refinement. Exact for
/// piecewise polynomials up to degree 63, which covers every density in
/// this crate; use it when the integrand's pointwise noise would defeat
/// adaptive error estimation. The error estimate only accounts for
/// rounding in the node sums, not for noise in f itself.
pub fn integrate_polynomial<F: FnMut(f64) -> f64>(
    mut f: F,
    pieces: &[f64],
    max_degree: u32,
) -> QuadResult {
    assert!(
        max_degree < 2 * GL_N as u32,
        "degree {max_degree} exceeds the 32-node exactness limit"
    );
    let mut value = 0.0;
    let mut magnitude = 0.0;
    let mut evals = 0usize;
    for w in pieces.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let piece = fixed_rule(&mut f, a, b);
        value += piece;
        magnitude += piece.abs();
        evals += GL_N;
    }
    QuadResult {
        value,
        error_estimate: magnitude * 1e-15 * GL_N as f64,
        evals,
    }
}

/// Integrate f over [pieces[0], pieces[last]] with every listed point used
/// as a mandatory subdivision. Points must be sorted ascending.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    pieces: &[f64],
    tol: f64,
    max_evals: usize,
) -> QuadResult {
    if pieces.len() < 2 {
        return QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evals: 0,
        };
    }
    let span: f64 = pieces[pieces.len() - 1] - pieces[0];
    let mut value = 0.0;
    let mut error = 0.0;
    let mut evals = 0usize;

    // Interval stack: (a, b, 32-point estimate over [a,b]).
    let mut stack: Vec<(f64, f64, f64)> = Vec::new();
    for w in pieces.windows(2).rev() {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let whole = fixed_rule(&mut f, a, b);
        evals += GL_N;
        stack.push((a, b, whole));
    }

    while let Some((a, b, whole)) = stack.pop() {
        let mid = 0.5 * (a + b);
        let left = fixed_rule(&mut f, a, mid);
        let right = fixed_rule(&mut f, mid, b);
        evals += 2 * GL_N;
        let refined = left + right;
        let disc = (whole - refined).abs();
        let local_tol = tol * ((b - a) / span).max(f64::EPSILON);
        if disc <= local_tol || mid <= a || mid >= b || evals >= max_evals {
            value += refined;
            error += disc;
        } else {
            stack.push((mid, b, right));
            stack.push((a, mid, left));
        }
    }

    QuadResult {
        value,
        error_estimate: error,
        evals,
    }
}
