//! Scalar rate primitives and two-dimensional Pareto frontiers.
//!
//! Rates are in bits per channel use. The default convention is the
//! real-channel `C(x) = ½·log2(1 + x)` with unit noise power; system-level
//! code can switch to the complex-baseband `log2(1 + x)` through
//! [`RateConvention`].

use std::cmp::Ordering;
use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Linear (not dB) received signal-to-noise ratio.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Snr(f64);

impl Snr {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::Domain(format!(
                "SNR must be finite and nonnegative, got {value}"
            )));
        }
        Ok(Snr(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Achievable rate in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Rate(f64);

impl Rate {
    pub const ZERO: Rate = Rate(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::Domain(format!(
                "rate must be finite and nonnegative, got {value}"
            )));
        }
        Ok(Rate(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Which capacity formula to apply to an SINR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RateConvention {
    /// `½·log2(1 + x)`, the real-channel form used for all region plots.
    #[default]
    Half,
    /// `log2(1 + x)`, common in system-level work.
    Full,
}

impl RateConvention {
    /// Multiplier in front of `log2(1 + x)`.
    pub fn factor(self) -> f64 {
        match self {
            RateConvention::Half => 0.5,
            RateConvention::Full => 1.0,
        }
    }

    /// Rate for a (nonnegative) SINR under this convention.
    #[inline]
    pub fn rate(self, sinr: f64) -> f64 {
        self.factor() * sinr.ln_1p() / LN_2
    }

    /// Converts a rate computed under this convention into bits/s/Hz.
    pub fn to_bits_per_hz(self, rate: f64) -> f64 {
        rate / self.factor()
    }
}

/// `C(x) = ½·log2(1 + x)` on a raw `f64`. Callers guarantee `x ≥ 0`.
#[inline]
pub fn capacity(x: f64) -> f64 {
    RateConvention::Half.rate(x)
}

/// `C(snr) = ½·log2(1 + snr)`.
pub fn shannon_rate(snr: Snr) -> Rate {
    Rate(capacity(snr.value()))
}

/// An achievable rate pair, optionally carrying a third (cell-edge) rate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RatePoint {
    pub r1: f64,
    pub r2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge: Option<f64>,
}

impl RatePoint {
    pub const fn new(r1: f64, r2: f64) -> Self {
        RatePoint { r1, r2, edge: None }
    }

    pub const fn with_edge(r1: f64, r2: f64, edge: f64) -> Self {
        RatePoint {
            r1,
            r2,
            edge: Some(edge),
        }
    }

    pub fn sum(&self) -> f64 {
        self.r1 + self.r2 + self.edge.unwrap_or(0.0)
    }

    fn is_valid(&self) -> bool {
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        ok(self.r1) && ok(self.r2) && self.edge.is_none_or(ok)
    }
}

/// Upper-right boundary of a two-user rate region, sorted by `r1`.
///
/// The region described is the down-closure of the points. When `convex`
/// is set, every segment between consecutive points is also achievable
/// (time-sharing), otherwise only the points themselves are.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoFrontier {
    points: Vec<RatePoint>,
    convex: bool,
}

impl ParetoFrontier {
    /// Wraps boundary points that are already ordered: `r1` strictly
    /// increasing and `r2` non-increasing. Flat pieces such as the axis
    /// extensions of a MAC pentagon are allowed.
    pub fn from_boundary(points: Vec<RatePoint>, convex: bool) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("frontier points"));
        }
        if let Some(p) = points.iter().find(|p| !p.is_valid()) {
            return Err(Error::Domain(format!("invalid rate point {p:?}")));
        }
        for w in points.windows(2) {
            if w[1].r1 <= w[0].r1 || w[1].r2 > w[0].r2 {
                return Err(Error::Domain(format!(
                    "frontier not monotone between {:?} and {:?}",
                    w[0], w[1]
                )));
            }
        }
        Ok(ParetoFrontier { points, convex })
    }

    pub fn points(&self) -> &[RatePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    pub fn max_r1(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.r1)
    }

    pub fn max_r2(&self) -> f64 {
        self.points.first().map_or(0.0, |p| p.r2)
    }

    /// Largest `r2` achievable together with some `r1' ≥ r1`, or `None`
    /// when `r1` lies beyond the region.
    pub fn best_r2_at(&self, r1: f64) -> Option<f64> {
        let first = self.points.first()?;
        let last = self.points.last()?;
        if r1 > last.r1 {
            return None;
        }
        if r1 <= first.r1 {
            return Some(first.r2);
        }
        // first index with points[i].r1 >= r1; i >= 1 here
        let i = self.points.partition_point(|p| p.r1 < r1);
        let hi = &self.points[i];
        if !self.convex || hi.r1 == r1 {
            return Some(hi.r2);
        }
        let lo = &self.points[i - 1];
        let t = (r1 - lo.r1) / (hi.r1 - lo.r1);
        Some(lo.r2 + t * (hi.r2 - lo.r2))
    }

    /// Largest `r2` on the boundary at equal rates `r1 = r2`, i.e. the
    /// symmetric operating point.
    pub fn equal_rate_point(&self) -> f64 {
        // bisection on f(x) = best_r2_at(x) - x, which is decreasing
        let (mut lo, mut hi) = (0.0, self.max_r1().min(self.max_r2()));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            match self.best_r2_at(mid) {
                Some(y) if y >= mid => lo = mid,
                _ => hi = mid,
            }
        }
        lo
    }
}

fn cmp_desc(a: &RatePoint, b: &RatePoint) -> Ordering {
    b.r1.total_cmp(&a.r1).then(b.r2.total_cmp(&a.r2))
}

/// Non-dominated subset of `points`, sorted by `r1`. With `convexify` the
/// result is the upper concave envelope, i.e. the boundary reachable by
/// time-sharing between the operating points.
pub fn pareto_frontier(points: &[RatePoint], convexify: bool) -> Result<ParetoFrontier> {
    if points.is_empty() {
        return Err(Error::Empty("rate points"));
    }
    if let Some(p) = points.iter().find(|p| !p.is_valid()) {
        return Err(Error::Domain(format!("invalid rate point {p:?}")));
    }

    let mut sorted = points.to_vec();
    sorted.sort_by(cmp_desc);
    let mut kept: Vec<RatePoint> = Vec::with_capacity(sorted.len());
    let mut best_r2 = f64::NEG_INFINITY;
    for p in sorted {
        if p.r2 > best_r2 {
            best_r2 = p.r2;
            kept.push(p);
        }
    }
    kept.reverse();

    if convexify && kept.len() > 2 {
        let mut hull: Vec<RatePoint> = Vec::with_capacity(kept.len());
        for p in kept {
            while hull.len() >= 2 {
                let o = &hull[hull.len() - 2];
                let a = &hull[hull.len() - 1];
                let cross = (a.r1 - o.r1) * (p.r2 - o.r2) - (a.r2 - o.r2) * (p.r1 - o.r1);
                if cross >= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        kept = hull;
    }

    Ok(ParetoFrontier {
        points: kept,
        convex: convexify,
    })
}

/// True when every point of `b` is (within `tol` per coordinate) inside
/// the region described by `a`.
pub fn region_dominates(a: &ParetoFrontier, b: &ParetoFrontier, tol: f64) -> bool {
    b.points.iter().all(|q| {
        a.best_r2_at(q.r1 - tol)
            .is_some_and(|r2| r2 >= q.r2 - tol)
    })
}

/// Default absolute tolerance for frontier comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Default number of points in α/β/λ parameter sweeps.
pub const DEFAULT_GRID: usize = 1001;

/// `n` evenly spaced values covering `[0, 1]`.
pub fn unit_grid(n: usize) -> impl Iterator<Item = f64> {
    let last = (n.max(2) - 1) as f64;
    (0..n).map(move |i| i as f64 / last)
}
