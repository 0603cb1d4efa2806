//! Monte Carlo sampler for ordered-gap statistics, independent of the
//! closed-form machinery so the two can referee each other.
//!
//! Draws land on the dyadic grid {m 2^-53}, and every derived quantity
//! (differences of sorted points, partial sums of sorted gaps bounded by 1)
//! stays on that grid, so each replicated statistic is computed without any
//! rounding. Identities like "k smallest plus the rest is exactly 1" hold
//! bit for bit and are asserted as such in tests.
//!
//! Replications are chunked (65536 per chunk) onto separate ChaCha streams
//! of one seed, so a batch's prefix never depends on the requested count.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    spacings_from_sorted, statistic_from_sorted_spacings, SpacingModel, StatFamily, StatKind,
};

/// Replications per RNG stream.
const CHUNK: usize = 65536;

/// Replicated values of one statistic, in replication order.
#[derive(Debug, Clone)]
pub struct SampleBatch {
    model: SpacingModel,
    kind: StatKind,
    seed: u64,
    values: Vec<f64>,
}

/// Five-number digest of a batch, serialized by the CLI's JSON mode.
#[derive(Debug, Clone, Serialize)]
pub struct SampleSummary {
    pub seed: u64,
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub min: f64,
    pub max: f64,
}

/// Draws `count` independent replications of each requested statistic from
/// shared point sets: batch j of the result holds `kinds[j]`. The point
/// stream depends only on the model and seed, so adding a statistic never
/// perturbs the others.
pub fn draw_statistics(
    model: SpacingModel,
    kinds: &[StatKind],
    seed: u64,
    count: usize,
) -> Result<Vec<SampleBatch>> {
    if count == 0 {
        return Err(Error::Domain("replication count must be at least 1".into()));
    }
    for kind in kinds {
        model.validate_k(kind.family, kind.k)?;
    }
    let bounds: Vec<(f64, f64)> = kinds.iter().map(|k| hard_bounds(model, *k)).collect();

    let n = model.n() as usize;
    let mut batches: Vec<Vec<f64>> = kinds.iter().map(|_| Vec::with_capacity(count)).collect();
    let mut points: Vec<f64> = Vec::with_capacity(n);
    let mut spacings: Vec<f64>;

    let mut rep = 0usize;
    while rep < count {
        let chunk_index = (rep / CHUNK) as u64;
        let chunk_end = count.min((rep / CHUNK + 1) * CHUNK);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk_index);
        while rep < chunk_end {
            points.clear();
            for _ in 0..n {
                points.push(rng.random::<f64>());
            }
            points.sort_unstable_by(f64::total_cmp);
            spacings = spacings_from_sorted(&points, model.mode())?;
            spacings.sort_unstable_by(f64::total_cmp);
            for (j, kind) in kinds.iter().enumerate() {
                let v = statistic_from_sorted_spacings(&spacings, kind.family, kind.k);
                let (lo, hi) = bounds[j];
                assert!(
                    v >= lo && v <= hi,
                    "statistic {kind:?} = {v} escaped its support [{lo}, {hi}]; \
                     the sampler or the support bound is wrong"
                );
                batches[j].push(v);
            }
            rep += 1;
        }
    }

    Ok(kinds
        .iter()
        .zip(batches)
        .map(|(kind, values)| SampleBatch {
            model,
            kind: *kind,
            seed,
            values,
        })
        .collect())
}

/// Single-statistic convenience over [`draw_statistics`].
pub fn draw_statistic(
    model: SpacingModel,
    kind: StatKind,
    seed: u64,
    count: usize,
) -> Result<SampleBatch> {
    Ok(draw_statistics(model, &[kind], seed, count)?.pop().unwrap())
}

/// Closed bounds every replication must respect. f64 division of exact
/// integers rounds once, so no grid-valued statistic can land strictly
/// between the true bound and its f64 image; the containment assert in the
/// sampler is therefore sound even at rounded endpoints.
fn hard_bounds(model: SpacingModel, kind: StatKind) -> (f64, f64) {
    let n = model.n();
    match (model.mode(), kind.family) {
        (crate::model::BoundaryMode::WithEdges, StatFamily::KthSmallest) => {
            (0.0, 1.0 / f64::from(n + 2 - kind.k))
        }
        (crate::model::BoundaryMode::WithEdges, StatFamily::SumSmallest) => {
            (0.0, f64::from(kind.k) / f64::from(n + 1))
        }
        (crate::model::BoundaryMode::WithEdges, StatFamily::SumLargest) => {
            (f64::from(kind.k) / f64::from(n + 1), 1.0)
        }
        (crate::model::BoundaryMode::WithoutEdges, StatFamily::KthSmallest) => {
            (0.0, 1.0 / f64::from(n - kind.k))
        }
        (crate::model::BoundaryMode::WithoutEdges, StatFamily::SumSmallest) => {
            (0.0, f64::from(kind.k) / f64::from(n - 1))
        }
        (crate::model::BoundaryMode::WithoutEdges, StatFamily::SumLargest) => (0.0, 1.0),
    }
}

impl SampleBatch {
    pub fn model(&self) -> SpacingModel {
        self.model
    }

    pub fn kind(&self) -> StatKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values in replication order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Ascending copy of the values.
    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_unstable_by(f64::total_cmp);
        v
    }

    /// Mean, unbiased variance, min, and max in one pass.
    pub fn summary(&self) -> SampleSummary {
        let mut mean = 0.0f64;
        let mut m2 = 0.0f64;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for (i, &v) in self.values.iter().enumerate() {
            let delta = v - mean;
            mean += delta / (i + 1) as f64;
            m2 += delta * (v - mean);
            min = min.min(v);
            max = max.max(v);
        }
        let count = self.values.len();
        SampleSummary {
            seed: self.seed,
            count,
            mean,
            variance: if count > 1 { m2 / (count - 1) as f64 } else { 0.0 },
            min,
            max,
        }
    }

    /// CSV rows `replication,value`, replication indices from 0, 17
    /// significant digits, `\n` line endings.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "replication,value")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{i},{v:.16e}")?;
        }
        Ok(())
    }
}

/// Two-sided Kolmogorov-Smirnov distance between an ascending sample and a
/// model CDF: max over order statistics of both one-sided gaps.
pub fn ks_distance<F>(sorted: &[f64], mut cdf: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if sorted.is_empty() {
        return Err(Error::Domain("KS distance needs at least one value".into()));
    }
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x)?;
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}
