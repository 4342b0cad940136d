//! OMA and NOMA operating points for the single-cell uplink (MAC) and
//! downlink (BC), for two users and for the K-user extension.

use crate::error::{Error, Result};
use crate::rate::{capacity, pareto_frontier, unit_grid, ParetoFrontier, Rate, RatePoint, Snr};

/// Received SNRs `γ_i = |h_i|²·P` of the two users (unit noise).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoUserGains {
    pub gamma1: Snr,
    pub gamma2: Snr,
}

impl TwoUserGains {
    pub fn new(gamma1: f64, gamma2: f64) -> Result<Self> {
        Ok(TwoUserGains {
            gamma1: Snr::new(gamma1)?,
            gamma2: Snr::new(gamma2)?,
        })
    }

    fn values(&self) -> (f64, f64) {
        (self.gamma1.value(), self.gamma2.value())
    }
}

/// Fraction `α` of time given to user 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeShare(f64);

impl TimeShare {
    pub fn new(alpha: f64) -> Result<Self> {
        unit_interval(alpha, "time share").map(TimeShare)
    }

    pub fn alpha(self) -> f64 {
        self.0
    }
}

/// Fraction `β` of the transmit power given to user 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit(f64);

impl PowerSplit {
    pub fn new(beta: f64) -> Result<Self> {
        unit_interval(beta, "power split").map(PowerSplit)
    }

    pub fn beta(self) -> f64 {
        self.0
    }
}

fn unit_interval(x: f64, what: &str) -> Result<f64> {
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(Error::Domain(format!("{what} must lie in [0, 1], got {x}")))
    }
}

/// Below this fraction `α·C(γ/α)` is taken as its limit, zero.
const FRACTION_FLOOR: f64 = 1e-12;

/// `α·C(γ/α)`: a user transmitting a fraction `α` of the time with its
/// energy concentrated into that fraction.
pub fn boosted_rate(fraction: f64, gamma: f64) -> f64 {
    if fraction < FRACTION_FLOOR {
        0.0
    } else {
        fraction * capacity(gamma / fraction)
    }
}

/// TDMA point of the uplink, with or without power control.
pub fn mac_oma_point(g: TwoUserGains, t: TimeShare, power_control: bool) -> RatePoint {
    let (g1, g2) = g.values();
    let a = t.alpha();
    let abar = 1.0 - a;
    if power_control {
        RatePoint::new(boosted_rate(a, g1), boosted_rate(abar, g2))
    } else {
        RatePoint::new(a * capacity(g1), abar * capacity(g2))
    }
}

/// Sorts boundary points by `r1`, merges equal-`r1` entries (keeping the
/// larger `r2`) and wraps them as a convex frontier.
fn polygon(mut pts: Vec<RatePoint>) -> ParetoFrontier {
    pts.sort_by(|a, b| a.r1.total_cmp(&b.r1).then(b.r2.total_cmp(&a.r2)));
    pts.dedup_by(|next, prev| next.r1 <= prev.r1);
    ParetoFrontier::from_boundary(pts, true).expect("polygon vertices are ordered")
}

/// Capacity region of the two-user MAC: both SIC corners, the sum-rate
/// face between them and the axis extensions.
pub fn mac_noma_frontier(g: TwoUserGains) -> ParetoFrontier {
    let (g1, g2) = g.values();
    let (c1, c2) = (capacity(g1), capacity(g2));
    // corner A decodes user 2 first, corner B decodes user 1 first
    let corner_a = RatePoint::new(c1, capacity(g2 / (g1 + 1.0)));
    let corner_b = RatePoint::new(capacity(g1 / (g2 + 1.0)), c2);
    polygon(vec![
        RatePoint::new(0.0, c2),
        corner_b,
        corner_a,
        RatePoint::new(c1, 0.0),
    ])
}

/// Uplink TDMA frontier over a uniform `α` grid.
pub fn mac_oma_frontier(g: TwoUserGains, power_control: bool, grid: usize) -> Result<ParetoFrontier> {
    check_grid("alpha grid", grid)?;
    let pts: Vec<_> = unit_grid(grid)
        .map(|a| mac_oma_point(g, TimeShare(a), power_control))
        .collect();
    pareto_frontier(&pts, true)
}

/// Downlink TDMA point `(α·C(γ1), ᾱ·C(γ2))`.
pub fn bc_oma_point(g: TwoUserGains, t: TimeShare) -> RatePoint {
    let (g1, g2) = g.values();
    RatePoint::new(t.alpha() * capacity(g1), (1.0 - t.alpha()) * capacity(g2))
}

/// Downlink TDMA frontier over a uniform `α` grid.
pub fn bc_oma_frontier(g: TwoUserGains, grid: usize) -> Result<ParetoFrontier> {
    check_grid("alpha grid", grid)?;
    let pts: Vec<_> = unit_grid(grid).map(|a| bc_oma_point(g, TimeShare(a))).collect();
    pareto_frontier(&pts, true)
}

fn require_ordered(g1: f64, g2: f64) -> Result<()> {
    if g1 < g2 {
        Err(Error::Ordering(format!(
            "user 1 must be the stronger user (gamma1 = {g1} < gamma2 = {g2})"
        )))
    } else {
        Ok(())
    }
}

/// Superposition coding with SIC at the stronger user 1.
pub fn bc_noma_point(g: TwoUserGains, p: PowerSplit) -> Result<RatePoint> {
    let (g1, g2) = g.values();
    require_ordered(g1, g2)?;
    let r = sc_rates(&[g1, g2], &[p.beta(), 1.0 - p.beta()]);
    Ok(RatePoint::new(r[0], r[1]))
}

/// Downlink superposition-coding boundary over a uniform `β` grid.
pub fn bc_noma_frontier(g: TwoUserGains, grid: usize) -> Result<ParetoFrontier> {
    check_grid("beta grid", grid)?;
    let pts = unit_grid(grid)
        .map(|b| bc_noma_point(g, PowerSplit(b)))
        .collect::<Result<Vec<_>>>()?;
    pareto_frontier(&pts, true)
}

/// Interval width at which the golden-section search stops.
const GOLDEN_TOL: f64 = 1e-10;

/// Maximizes `μ·R1 + R2` over the downlink power split. The objective is
/// quasi-concave in `β` (its derivative changes sign at most once), so a
/// golden-section search plus the two endpoints finds the optimum.
pub fn bc_optimal_split(g: TwoUserGains, mu: f64) -> Result<(PowerSplit, RatePoint)> {
    let (g1, g2) = g.values();
    require_ordered(g1, g2)?;
    if !mu.is_finite() || mu < 0.0 {
        return Err(Error::Domain(format!("weight must be finite and >= 0, got {mu}")));
    }
    let objective = |beta: f64| {
        let r = sc_rates(&[g1, g2], &[beta, 1.0 - beta]);
        mu * r[0] + r[1]
    };
    let beta = golden_section_max(objective, 0.0, 1.0, GOLDEN_TOL);
    let best = [beta, 0.0, 1.0]
        .into_iter()
        .max_by(|a, b| objective(*a).total_cmp(&objective(*b)))
        .unwrap();
    let split = PowerSplit(best);
    Ok((split, bc_noma_point(g, split)?))
}

/// Maximizer of a unimodal function on `[lo, hi]`.
pub(crate) fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// K-user uplink with SIC. `decode_order[j]` is the user decoded j-th; it
/// sees every user decoded after it as noise.
pub fn k_user_mac_sic_rates(gains: &[Snr], decode_order: &[usize]) -> Result<Vec<Rate>> {
    let k = gains.len();
    if k == 0 {
        return Err(Error::Empty("gains"));
    }
    if decode_order.len() != k {
        return Err(Error::Permutation(format!(
            "expected {k} entries, got {}",
            decode_order.len()
        )));
    }
    let mut seen = vec![false; k];
    for &u in decode_order {
        if u >= k || std::mem::replace(&mut seen[u], true) {
            return Err(Error::Permutation(format!("{decode_order:?} is not a permutation of 0..{k}")));
        }
    }

    let mut rates = vec![Rate::ZERO; k];
    let mut remaining: f64 = gains.iter().map(|g| g.value()).sum();
    for &u in decode_order {
        let own = gains[u].value();
        remaining -= own;
        rates[u] = Rate::new(capacity(own / (1.0 + remaining.max(0.0))))?;
    }
    Ok(rates)
}

/// K-user downlink superposition coding. Users are sorted strongest first;
/// user k removes the messages of the weaker users k+1..K and treats the
/// stronger users' messages as interference.
pub fn k_user_bc_sc_rates(gains: &[Snr], splits: &[f64]) -> Result<Vec<Rate>> {
    if gains.is_empty() {
        return Err(Error::Empty("gains"));
    }
    if splits.len() != gains.len() {
        return Err(Error::Domain(format!(
            "{} gains but {} power splits",
            gains.len(),
            splits.len()
        )));
    }
    if let Some(w) = gains.windows(2).find(|w| w[0].value() < w[1].value()) {
        return Err(Error::Ordering(format!(
            "gains must be sorted descending ({} < {})",
            w[0].value(),
            w[1].value()
        )));
    }
    let total: f64 = splits.iter().sum();
    if splits.iter().any(|s| !s.is_finite() || *s < 0.0) || (total - 1.0).abs() > 1e-12 {
        return Err(Error::Splits(total));
    }
    let g: Vec<f64> = gains.iter().map(|x| x.value()).collect();
    sc_rates(&g, splits).into_iter().map(Rate::new).collect()
}

/// Superposition-coding rates for users sorted strongest first.
pub(crate) fn sc_rates(gains: &[f64], splits: &[f64]) -> Vec<f64> {
    let mut stronger = 0.0;
    gains
        .iter()
        .zip(splits)
        .map(|(&g, &b)| {
            let r = capacity(b * g / (g * stronger + 1.0));
            stronger += b;
            r
        })
        .collect()
}

fn check_grid(name: &'static str, size: usize) -> Result<()> {
    if size < 2 {
        Err(Error::Grid { name, size, min: 2 })
    } else {
        Ok(())
    }
}
