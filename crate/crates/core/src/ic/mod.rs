//! Two-user Gaussian interference channel: TDMA, basic Han-Kobayashi and
//! Han-Kobayashi with time-sharing.

mod vertex;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rate::{capacity, pareto_frontier, unit_grid, ParetoFrontier, RatePoint, Snr};
use crate::single_cell::boosted_rate;

pub use vertex::Polytope;

/// Direct SNRs `a1, a2` and cross INRs `b1` (tx2 → rx1), `b2` (tx1 → rx2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IcChannel {
    pub a1: Snr,
    pub a2: Snr,
    pub b1: Snr,
    pub b2: Snr,
}

impl IcChannel {
    pub fn new(a1: f64, a2: f64, b1: f64, b2: f64) -> Result<Self> {
        Ok(IcChannel {
            a1: Snr::new(a1)?,
            a2: Snr::new(a2)?,
            b1: Snr::new(b1)?,
            b2: Snr::new(b2)?,
        })
    }

    pub fn symmetric(a: f64, b: f64) -> Result<Self> {
        Self::new(a, a, b, b)
    }
}

/// Fraction of each transmitter's power spent on its private message.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HkSplit {
    lambda1: f64,
    lambda2: f64,
}

impl HkSplit {
    pub fn new(lambda1: f64, lambda2: f64) -> Result<Self> {
        for l in [lambda1, lambda2] {
            if !(0.0..=1.0).contains(&l) {
                return Err(Error::Domain(format!("private fraction must lie in [0, 1], got {l}")));
            }
        }
        Ok(HkSplit { lambda1, lambda2 })
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }
}

/// Private and common rates of both users, in the LP variable order
/// `(Rp1, Rc1, Rp2, Rc2)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HkRates {
    pub rp1: f64,
    pub rc1: f64,
    pub rp2: f64,
    pub rc2: f64,
}

impl HkRates {
    fn from_array(x: [f64; 4]) -> Self {
        // vertices may carry -1e-16 style noise from elimination
        let c = |v: f64| v.max(0.0);
        HkRates { rp1: c(x[0]), rc1: c(x[1]), rp2: c(x[2]), rc2: c(x[3]) }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.rp1, self.rc1, self.rp2, self.rc2]
    }

    pub fn point(&self) -> RatePoint {
        RatePoint::new(self.rp1 + self.rc1, self.rp2 + self.rc2)
    }
}

/// Grid sizes for the HK sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HkGrids {
    /// Points per `λ` axis.
    pub split: usize,
    /// Number of log-spaced weights in `[2^-6, 2^6]`.
    pub weight: usize,
    /// `α` points for the TDMA component.
    pub oma: usize,
}

impl Default for HkGrids {
    fn default() -> Self {
        HkGrids { split: 41, weight: 25, oma: crate::rate::DEFAULT_GRID }
    }
}

/// TDMA with per-slot power control; slots are orthogonal so there is no
/// cross interference.
pub fn ic_oma_frontier(ch: &IcChannel, grid_size: usize) -> Result<ParetoFrontier> {
    check_grid("alpha grid", grid_size)?;
    let pts: Vec<_> = unit_grid(grid_size).map(|a| ic_oma_point(ch, a)).collect();
    pareto_frontier(&pts, true)
}

pub fn ic_oma_point(ch: &IcChannel, alpha: f64) -> RatePoint {
    RatePoint::new(
        boosted_rate(alpha, ch.a1.value()),
        boosted_rate(1.0 - alpha, ch.a2.value()),
    )
}

/// The 14 MAC constraints (7 per receiver) plus nonnegativity, as rows
/// `a·x ≤ b` over `x = (Rp1, Rc1, Rp2, Rc2)`.
pub fn hk_polytope(ch: &IcChannel, split: HkSplit) -> Polytope<4> {
    let (a1, a2, b1, b2) = (ch.a1.value(), ch.a2.value(), ch.b1.value(), ch.b2.value());
    let (l1, l2) = (split.lambda1, split.lambda2);
    let mut rows = Vec::with_capacity(18);

    // receiver 1 decodes (p1, c1, c2) with p2 as noise
    let noise1 = 1.0 + b1 * l2;
    push_mac(&mut rows, [0, 1, 3], [a1 * l1, a1 * (1.0 - l1), b1 * (1.0 - l2)], noise1);
    // receiver 2 decodes (p2, c2, c1) with p1 as noise
    let noise2 = 1.0 + b2 * l1;
    push_mac(&mut rows, [2, 3, 1], [a2 * l2, a2 * (1.0 - l2), b2 * (1.0 - l1)], noise2);

    for v in 0..4 {
        let mut a = [0.0; 4];
        a[v] = -1.0;
        rows.push((a, 0.0));
    }
    Polytope::new(rows)
}

fn push_mac(rows: &mut Vec<([f64; 4], f64)>, vars: [usize; 3], powers: [f64; 3], noise: f64) {
    for mask in 1u8..8 {
        let mut a = [0.0; 4];
        let mut p = 0.0;
        for k in 0..3 {
            if mask & (1 << k) != 0 {
                a[vars[k]] = 1.0;
                p += powers[k];
            }
        }
        rows.push((a, capacity(p / noise)));
    }
}

/// Vertices of the HK polytope, computed once per split and reused for
/// every weight.
fn hk_vertices(ch: &IcChannel, split: HkSplit) -> Vec<[f64; 4]> {
    hk_polytope(ch, split).vertices()
}

fn best_vertex(vertices: &[[f64; 4]], weight: f64) -> HkRates {
    let obj = |x: &[f64; 4]| weight * (x[0] + x[1]) + x[2] + x[3];
    let mut best = [0.0; 4];
    let mut best_v = f64::NEG_INFINITY;
    for x in vertices {
        let v = obj(x);
        if v > best_v {
            best_v = v;
            best = *x;
        }
    }
    HkRates::from_array(best)
}

/// Maximizes `weight·R1 + R2` over the HK polytope of one split.
pub fn hk_basic_solution(ch: &IcChannel, split: HkSplit, weight: f64) -> Result<HkRates> {
    check_weight(weight)?;
    Ok(best_vertex(&hk_vertices(ch, split), weight))
}

/// Rate pair `(R1, R2)` maximizing `weight·R1 + R2` for one split.
pub fn hk_basic_rate_bound(ch: &IcChannel, split: HkSplit, weight: f64) -> Result<RatePoint> {
    hk_basic_solution(ch, split, weight).map(|r| r.point())
}

fn check_weight(weight: f64) -> Result<()> {
    if weight.is_finite() && weight >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("weight must be finite and >= 0, got {weight}")))
    }
}

/// `n` weights log-spaced over `[2^-6, 2^6]`.
pub fn hk_weights(n: usize) -> Vec<f64> {
    unit_grid(n).map(|t| (-6.0 + 12.0 * t).exp2()).collect()
}

fn hk_basic_points(ch: &IcChannel, grids: &HkGrids) -> Result<Vec<RatePoint>> {
    check_grid("split grid", grids.split)?;
    check_grid("weight grid", grids.weight)?;
    let lambdas: Vec<f64> = unit_grid(grids.split).collect();
    let weights = hk_weights(grids.weight);
    let n = grids.split;
    let per_split: Vec<Vec<RatePoint>> = (0..n * n)
        .into_par_iter()
        .map(|i| {
            let split = HkSplit { lambda1: lambdas[i / n], lambda2: lambdas[i % n] };
            let v = hk_vertices(ch, split);
            weights.iter().map(|&w| best_vertex(&v, w).point()).collect()
        })
        .collect();
    Ok(per_split.into_iter().flatten().collect())
}

/// Basic HK frontier: all split × weight optima, Pareto-filtered but not
/// convexified (no time-sharing).
pub fn hk_basic_frontier(ch: &IcChannel, grids: &HkGrids) -> Result<ParetoFrontier> {
    pareto_frontier(&hk_basic_points(ch, grids)?, false)
}

/// HK with time-sharing: convex hull of the basic HK points, the two
/// single-user points and the power-controlled TDMA points.
pub fn hk_timeshare_frontier(ch: &IcChannel, grids: &HkGrids) -> Result<ParetoFrontier> {
    check_grid("alpha grid", grids.oma)?;
    let mut pts = hk_basic_points(ch, grids)?;
    pts.push(RatePoint::new(capacity(ch.a1.value()), 0.0));
    pts.push(RatePoint::new(0.0, capacity(ch.a2.value())));
    pts.extend(unit_grid(grids.oma).map(|a| ic_oma_point(ch, a)));
    pareto_frontier(&pts, true)
}

fn check_grid(name: &'static str, size: usize) -> Result<()> {
    if size < 2 {
        Err(Error::Grid { name, size, min: 2 })
    } else {
        Ok(())
    }
}
