//! Monte Carlo harness: paired scheme evaluation over random drops,
//! location sweeps and CDF summaries.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{sample_trial, LinkBudget, Topology};
use crate::error::{Error, Result};
use crate::schemes::{evaluate_scheme, SchemeId, SchemeParams, UserClass};

/// Experiment description. Rates in results are in bits/s/Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub topology: Topology,
    pub link_budget: LinkBudget,
    pub params: SchemeParams,
    pub schemes: Vec<SchemeId>,
    pub trials: usize,
    pub seed: u64,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
    pub sweep_locations_km: Vec<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            topology: Topology::default(),
            link_budget: LinkBudget::default(),
            params: SchemeParams::default(),
            schemes: SchemeId::ALL.to_vec(),
            trials: 2000,
            seed: 42,
            workers: 0,
            sweep_locations_km: default_sweep_locations(),
        }
    }
}

/// 0.125 km to 0.25 km in 0.025 km steps.
pub fn default_sweep_locations() -> Vec<f64> {
    (0..=5).map(|i| 0.125 + 0.025 * i as f64).collect()
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if self.schemes.is_empty() {
            return Err(Error::Config("scheme list is empty".into()));
        }
        self.topology.validate()?;
        self.link_budget.validate()?;
        self.params.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub class: UserClass,
    pub rate_bps_hz: f64,
}

/// Per-scheme user samples, paired across schemes trial by trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSet {
    pub schemes: Vec<SchemeId>,
    /// `samples[i]` belongs to `schemes[i]`, ordered by trial then user.
    pub samples: Vec<Vec<Sample>>,
    pub trials_used: usize,
    pub skipped: usize,
}

impl TrialSet {
    pub fn of(&self, id: SchemeId) -> Option<&[Sample]> {
        self.schemes.iter().position(|&s| s == id).map(|i| self.samples[i].as_slice())
    }
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Evaluates every scheme on one draw; `None` when any scheme fails.
fn one_trial(cfg: &SimConfig, key: u64, edge_km: Option<f64>) -> Result<Option<Vec<Vec<Sample>>>> {
    let sample = sample_trial(cfg.seed, key, &cfg.topology, &cfg.link_budget, edge_km)?;
    if log::log_enabled!(log::Level::Trace) {
        log::trace!("trial {key}: channel {:016x}", sample.channel.fingerprint());
    }
    let conv = cfg.params.rate_convention;
    let mut out = Vec::with_capacity(cfg.schemes.len());
    for &id in &cfg.schemes {
        match evaluate_scheme(id, &sample.channel, &cfg.params) {
            Ok(r) => out.push(
                r.rates
                    .iter()
                    .map(|u| Sample { class: u.user.class, rate_bps_hz: conv.to_bits_per_hz(u.rate) })
                    .collect(),
            ),
            Err(e) => {
                log::warn!("trial {key}: {id} failed ({e}); dropping the draw for every scheme");
                return Ok(None);
            }
        }
    }
    Ok(Some(out))
}

fn collect(cfg: &SimConfig, keys: Vec<u64>, edge_km: Option<f64>) -> Result<TrialSet> {
    cfg.validate()?;
    let per_trial: Vec<Result<Option<Vec<Vec<Sample>>>>> =
        with_pool(cfg.workers, || keys.par_iter().map(|&k| one_trial(cfg, k, edge_km)).collect())?;
    let mut samples = vec![Vec::new(); cfg.schemes.len()];
    let (mut used, mut skipped) = (0, 0);
    for r in per_trial {
        match r? {
            Some(per_scheme) => {
                used += 1;
                for (acc, s) in samples.iter_mut().zip(per_scheme) {
                    acc.extend(s);
                }
            }
            None => skipped += 1,
        }
    }
    if skipped > 0 {
        log::info!("{skipped} of {} trials skipped", keys.len());
    }
    Ok(TrialSet { schemes: cfg.schemes.clone(), samples, trials_used: used, skipped })
}

/// Random drops: every scheme sees the same channel in each trial.
pub fn run_trials(cfg: &SimConfig) -> Result<TrialSet> {
    collect(cfg, (0..cfg.trials as u64).collect(), None)
}

/// Like [`run_trials`] with every edge user on the inter-BS axis at
/// `edge_km` from its BS. `location_index` selects independent draws per
/// sweep point.
pub fn run_trials_with_edge(cfg: &SimConfig, edge_km: f64, location_index: usize) -> Result<TrialSet> {
    if !(edge_km > 0.0 && edge_km <= cfg.topology.cell_radius_km) {
        return Err(Error::Domain(format!(
            "edge location {edge_km} km outside (0, {}]",
            cfg.topology.cell_radius_km
        )));
    }
    let base = (location_index as u64 + 1) << 32;
    collect(cfg, (0..cfg.trials as u64).map(|t| base | t).collect(), Some(edge_km))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub location_km: f64,
    pub scheme: SchemeId,
    pub center_rate: f64,
    pub edge_rate: f64,
}

fn class_mean(samples: &[Sample], class: UserClass) -> f64 {
    let (sum, n) = samples
        .iter()
        .filter(|s| s.class == class)
        .fold((0.0, 0usize), |(s, n), x| (s + x.rate_bps_hz, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Mean center and edge rate of every scheme at each edge location.
pub fn sweep_edge_location(cfg: &SimConfig, locations: &[f64]) -> Result<Vec<SweepPoint>> {
    if locations.is_empty() {
        return Err(Error::Empty("sweep locations"));
    }
    let mut out = Vec::with_capacity(locations.len() * cfg.schemes.len());
    for (i, &loc) in locations.iter().enumerate() {
        let set = run_trials_with_edge(cfg, loc, i)?;
        for (id, s) in set.schemes.iter().zip(&set.samples) {
            out.push(SweepPoint {
                location_km: loc,
                scheme: *id,
                center_rate: class_mean(s, UserClass::Center),
                edge_rate: class_mean(s, UserClass::Edge),
            });
        }
    }
    Ok(out)
}

/// Empirical distribution of a set of samples.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfSummary {
    sorted: Vec<f64>,
    mean: f64,
}

impl CdfSummary {
    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Percentile `p ∈ [0, 100]` by linear interpolation between order
    /// statistics.
    pub fn percentile(&self, p: f64) -> f64 {
        let n = self.sorted.len();
        let pos = p.clamp(0.0, 100.0) / 100.0 * (n - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = (lo + 1).min(n - 1);
        let t = pos - lo as f64;
        self.sorted[lo] + t * (self.sorted[hi] - self.sorted[lo])
    }

    /// Fraction of samples `≤ x`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&s| s <= x) as f64 / self.sorted.len() as f64
    }
}

pub fn summarize_cdf(samples: &[f64]) -> Result<CdfSummary> {
    if samples.is_empty() {
        return Err(Error::Empty("samples"));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("samples must be finite".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    Ok(CdfSummary { sorted, mean })
}
