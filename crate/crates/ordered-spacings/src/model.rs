//! Sample model: how many points, which gaps count, which statistic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether the gaps to the interval endpoints participate.
///
/// With edges, n points on [0,1] produce n+1 gaps (the two edge gaps
/// included) that always sum to 1. Without edges only the n-1 gaps between
/// consecutive points count, and they sum to the sample range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryMode {
    #[serde(rename = "with")]
    WithEdges,
    #[serde(rename = "without")]
    WithoutEdges,
}

impl BoundaryMode {
    pub fn label(self) -> &'static str {
        match self {
            BoundaryMode::WithEdges => "with",
            BoundaryMode::WithoutEdges => "without",
        }
    }
}

/// Which ordered-gap statistic to study.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StatFamily {
    /// The k-th smallest gap.
    #[serde(rename = "kth")]
    KthSmallest,
    /// The sum of the k smallest gaps.
    #[serde(rename = "sum-min")]
    SumSmallest,
    /// The sum of the k largest gaps.
    #[serde(rename = "sum-max")]
    SumLargest,
}

impl StatFamily {
    pub fn label(self) -> &'static str {
        match self {
            StatFamily::KthSmallest => "kth",
            StatFamily::SumSmallest => "sum-min",
            StatFamily::SumLargest => "sum-max",
        }
    }
}

/// A statistic choice: the family plus its order k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StatKind {
    pub family: StatFamily,
    pub k: u32,
}

impl StatKind {
    pub fn new(family: StatFamily, k: u32) -> Self {
        StatKind { family, k }
    }

    pub fn kth(k: u32) -> Self {
        StatKind::new(StatFamily::KthSmallest, k)
    }

    pub fn sum_smallest(k: u32) -> Self {
        StatKind::new(StatFamily::SumSmallest, k)
    }

    pub fn sum_largest(k: u32) -> Self {
        StatKind::new(StatFamily::SumLargest, k)
    }
}

/// n points dropped uniformly on the unit interval, plus the boundary rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpacingModel {
    n: u32,
    mode: BoundaryMode,
}

impl SpacingModel {
    pub fn new(n: u32, mode: BoundaryMode) -> Result<Self> {
        match mode {
            BoundaryMode::WithEdges if n < 1 => Err(Error::Domain(
                "with-edges model needs at least 1 point".into(),
            )),
            BoundaryMode::WithoutEdges if n < 3 => Err(Error::Domain(format!(
                "no-edges model needs at least 3 points, got {n}"
            ))),
            _ => Ok(SpacingModel { n, mode }),
        }
    }

    pub fn with_edges(n: u32) -> Result<Self> {
        SpacingModel::new(n, BoundaryMode::WithEdges)
    }

    pub fn without_edges(n: u32) -> Result<Self> {
        SpacingModel::new(n, BoundaryMode::WithoutEdges)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mode(&self) -> BoundaryMode {
        self.mode
    }

    /// Number of gaps the model works with.
    pub fn spacing_count(&self) -> u32 {
        match self.mode {
            BoundaryMode::WithEdges => self.n + 1,
            BoundaryMode::WithoutEdges => self.n - 1,
        }
    }

    /// Largest admissible k for a family. For sums this includes the
    /// boundary order whose law collapses (all gaps: a point mass with
    /// edges, the sample range without).
    pub fn max_k(&self, family: StatFamily) -> u32 {
        match family {
            StatFamily::KthSmallest => self.spacing_count(),
            StatFamily::SumSmallest | StatFamily::SumLargest => self.spacing_count(),
        }
    }

    pub fn validate_k(&self, family: StatFamily, k: u32) -> Result<()> {
        let max = self.max_k(family);
        if k < 1 || k > max {
            return Err(Error::Domain(format!(
                "order k = {k} out of range 1..={max} for {} gaps ({} edges, n = {})",
                self.spacing_count(),
                self.mode.label(),
                self.n
            )));
        }
        Ok(())
    }

    /// Build the statistic's distribution: exact series up to the build cap,
    /// signed-log always.
    pub fn distribution(&self, kind: StatKind) -> Result<crate::SpacingDistribution> {
        self.validate_k(kind.family, kind.k)?;
        match self.mode {
            BoundaryMode::WithEdges => crate::dist_edges::build(*self, kind),
            BoundaryMode::WithoutEdges => crate::dist_noedges::build(*self, kind),
        }
    }
}

/// Gaps of a sorted sample under a boundary mode, in position order.
///
/// `points` must already be sorted ascending and lie in [0,1]; this is the
/// empirical counterpart of what the model describes.
pub fn spacings_from_sorted(points: &[f64], mode: BoundaryMode) -> Result<Vec<f64>> {
    let n = points.len();
    let needed = match mode {
        BoundaryMode::WithEdges => 1,
        BoundaryMode::WithoutEdges => 3,
    };
    if n < needed {
        return Err(Error::DataCount { needed, got: n });
    }
    let mut out = Vec::with_capacity(n + 1);
    match mode {
        BoundaryMode::WithEdges => {
            out.push(points[0]);
            for w in points.windows(2) {
                out.push(w[1] - w[0]);
            }
            out.push(1.0 - points[n - 1]);
        }
        BoundaryMode::WithoutEdges => {
            for w in points.windows(2) {
                out.push(w[1] - w[0]);
            }
        }
    }
    Ok(out)
}

/// The statistic value from gaps sorted ascending.
///
/// Gap values on the 2^-53 grid keep every partial sum below 1 exactly
/// representable, so plain left-to-right addition here is exact, and
/// complementary sums satisfy their identities bit for bit.
pub fn statistic_from_sorted_spacings(sorted: &[f64], family: StatFamily, k: u32) -> f64 {
    let k = k as usize;
    debug_assert!(k >= 1 && k <= sorted.len());
    match family {
        StatFamily::KthSmallest => sorted[k - 1],
        StatFamily::SumSmallest => sorted[..k].iter().sum(),
        StatFamily::SumLargest => sorted[sorted.len() - k..].iter().sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_bounds() {
        assert!(SpacingModel::with_edges(1).is_ok());
        assert!(SpacingModel::with_edges(0).is_err());
        assert!(SpacingModel::without_edges(3).is_ok());
        assert!(SpacingModel::without_edges(2).is_err());
    }

    #[test]
    fn spacing_counts_and_k_ranges() {
        let we = SpacingModel::with_edges(5).unwrap();
        assert_eq!(we.spacing_count(), 6);
        assert!(we.validate_k(StatFamily::KthSmallest, 6).is_ok());
        assert!(we.validate_k(StatFamily::KthSmallest, 7).is_err());
        assert!(we.validate_k(StatFamily::SumSmallest, 6).is_ok());
        assert!(we.validate_k(StatFamily::SumLargest, 0).is_err());

        let ne = SpacingModel::without_edges(5).unwrap();
        assert_eq!(ne.spacing_count(), 4);
        assert!(ne.validate_k(StatFamily::KthSmallest, 4).is_ok());
        assert!(ne.validate_k(StatFamily::KthSmallest, 5).is_err());
        assert!(ne.validate_k(StatFamily::SumSmallest, 4).is_ok());
    }

    #[test]
    fn spacings_match_hand_computation() {
        let pts = [0.1, 0.4, 0.75];
        let we = spacings_from_sorted(&pts, BoundaryMode::WithEdges).unwrap();
        assert_eq!(we, vec![0.1, 0.30000000000000004, 0.35, 0.25]);
        let ne = spacings_from_sorted(&pts, BoundaryMode::WithoutEdges).unwrap();
        assert_eq!(ne.len(), 2);
        assert!((ne[0] - 0.3).abs() < 1e-15 && (ne[1] - 0.35).abs() < 1e-15);
    }

    #[test]
    fn statistics_from_sorted_gaps() {
        let sorted = [0.05, 0.1, 0.2, 0.65];
        assert_eq!(
            statistic_from_sorted_spacings(&sorted, StatFamily::KthSmallest, 2),
            0.1
        );
        assert_eq!(
            statistic_from_sorted_spacings(&sorted, StatFamily::SumSmallest, 3),
            0.05 + 0.1 + 0.2
        );
        assert_eq!(
            statistic_from_sorted_spacings(&sorted, StatFamily::SumLargest, 1),
            0.65
        );
        let total: f64 = statistic_from_sorted_spacings(&sorted, StatFamily::SumSmallest, 4);
        assert_eq!(
            total,
            statistic_from_sorted_spacings(&sorted, StatFamily::SumLargest, 4)
        );
    }

    #[test]
    fn insufficient_data_is_reported() {
        assert!(matches!(
            spacings_from_sorted(&[0.5, 0.6], BoundaryMode::WithoutEdges),
            Err(Error::DataCount { needed: 3, got: 2 })
        ));
    }
}
