//! Command-line front end: `region`, `simulate`, `sweep` and `users`.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{Config, RegionChannel};
use crate::error::{Error, Result};
use crate::ic::{hk_basic_frontier, hk_timeshare_frontier, ic_oma_frontier, IcChannel};
use crate::rate::ParetoFrontier;
use crate::schemes::{supported_users, SchemeId};
use crate::sim::{run_trials, summarize_cdf, sweep_edge_location, SimConfig};
use crate::single_cell::{bc_noma_frontier, bc_oma_frontier, mac_noma_frontier, mac_oma_frontier, TwoUserGains};

#[derive(Debug, Parser)]
#[command(name = "noma", version, about = "NOMA rate regions and two-cell Monte Carlo experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rate-region frontiers of the configured MAC, BC and IC channels.
    Region {
        #[command(flatten)]
        common: CommonArgs,
        /// Only channels of this kind.
        #[arg(long, value_enum)]
        kind: Option<ChannelKind>,
    },
    /// Per-user throughput samples and their mean / 5th percentile.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Mean center / edge rate against the edge user's distance to its BS.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Supported-user counts of every scheme.
    Users {
        #[command(flatten)]
        common: CommonArgs,
        /// Antennas per node (defaults to the configured topology).
        #[arg(short = 'k', long)]
        antennas: Option<usize>,
        /// Count NOMA-JT as serving 4K users.
        #[arg(long)]
        jt_4k: bool,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated scheme names; empty means all.
    #[arg(long)]
    pub schemes: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Worker threads (0 = one per core).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelKind {
    Mac,
    Bc,
    Ic,
}

impl CommonArgs {
    /// Configuration file (or defaults) with the command-line overrides.
    pub fn load(&self) -> Result<Config> {
        let mut cfg = match &self.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        if let Some(s) = self.seed {
            cfg.harness.seed = s;
        }
        if let Some(t) = self.trials {
            cfg.harness.trials = t;
        }
        if let Some(w) = self.workers {
            cfg.harness.workers = w;
        }
        if let Some(list) = &self.schemes {
            cfg.schemes.enabled = SchemeId::parse_list(list)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// `%.9g`: 9 significant digits, trailing zeros dropped.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let mant = trim_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mant}e{sign}{:02}", exp.abs());
    }
    let decimals = (8 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Region schemes: `OMA`, `NOMA` for MAC/BC; `OMA`, `NOMA`, `TS` for IC.
const REGION_SCHEMES: [&str; 3] = ["OMA", "NOMA", "TS"];

fn region_filter(list: Option<&str>) -> Result<Vec<&'static str>> {
    let Some(list) = list else { return Ok(REGION_SCHEMES.to_vec()) };
    let mut out = Vec::new();
    for t in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let s = REGION_SCHEMES
            .iter()
            .find(|s| s.eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::UnknownScheme(t.to_string()))?;
        out.push(*s);
    }
    Ok(if out.is_empty() { REGION_SCHEMES.to_vec() } else { out })
}

fn push_frontier(out: &mut String, id: &str, scheme: &str, f: &ParetoFrontier) {
    for p in f.points() {
        let _ = writeln!(out, "{id},{scheme},{},{}", fmt_g(p.r1), fmt_g(p.r2));
    }
}

/// Frontier traces in rate per channel use.
pub fn region_csv(cfg: &Config, kind: Option<ChannelKind>, schemes: Option<&str>) -> Result<String> {
    let wanted = region_filter(schemes)?;
    let grids = cfg.region.hk_grids();
    let mut out = String::from("channel_id,scheme,r1,r2\n");
    for ch in &cfg.region.channels {
        let this_kind = match ch {
            RegionChannel::Mac { .. } => ChannelKind::Mac,
            RegionChannel::Bc { .. } => ChannelKind::Bc,
            RegionChannel::Ic { .. } => ChannelKind::Ic,
        };
        if kind.is_some_and(|k| k != this_kind) {
            continue;
        }
        let mut traces: Vec<(&str, ParetoFrontier)> = Vec::new();
        match *ch {
            RegionChannel::Mac { gamma1, gamma2, .. } => {
                let g = TwoUserGains::new(gamma1, gamma2)?;
                if wanted.contains(&"OMA") {
                    traces.push(("OMA", mac_oma_frontier(g, true, cfg.region.grid)?));
                }
                if wanted.contains(&"NOMA") {
                    traces.push(("NOMA", mac_noma_frontier(g)));
                }
            }
            RegionChannel::Bc { gamma1, gamma2, .. } => {
                let g = TwoUserGains::new(gamma1, gamma2)?;
                if wanted.contains(&"OMA") {
                    traces.push(("OMA", bc_oma_frontier(g, cfg.region.grid)?));
                }
                if wanted.contains(&"NOMA") {
                    traces.push(("NOMA", bc_noma_frontier(g, cfg.region.grid)?));
                }
            }
            RegionChannel::Ic { a1, a2, b1, b2, .. } => {
                let c = IcChannel::new(a1, a2, b1, b2)?;
                if wanted.contains(&"OMA") {
                    traces.push(("OMA", ic_oma_frontier(&c, cfg.region.grid)?));
                }
                if wanted.contains(&"NOMA") {
                    traces.push(("NOMA", hk_basic_frontier(&c, &grids)?));
                }
                if wanted.contains(&"TS") {
                    traces.push(("TS", hk_timeshare_frontier(&c, &grids)?));
                }
            }
        }
        for (s, f) in &traces {
            push_frontier(&mut out, ch.id(), s, f);
        }
    }
    Ok(out)
}

/// Per-user samples followed by a blank line and a `scheme,mean,p05` block.
pub fn simulate_csv(sim: &SimConfig) -> Result<String> {
    let set = run_trials(sim)?;
    let mut out = String::from("scheme,user_class,rate_bps_hz\n");
    for (id, samples) in set.schemes.iter().zip(&set.samples) {
        for s in samples {
            let _ = writeln!(out, "{id},{},{}", s.class.name(), fmt_g(s.rate_bps_hz));
        }
    }
    out.push_str("\nscheme,mean,p05\n");
    for (id, samples) in set.schemes.iter().zip(&set.samples) {
        let rates: Vec<f64> = samples.iter().map(|s| s.rate_bps_hz).collect();
        let c = summarize_cdf(&rates)?;
        let _ = writeln!(out, "{id},{},{}", fmt_g(c.mean()), fmt_g(c.percentile(5.0)));
    }
    Ok(out)
}

pub fn sweep_csv(sim: &SimConfig) -> Result<String> {
    let rows = sweep_edge_location(sim, &sim.sweep_locations_km)?;
    let mut out = String::from("location_km,scheme,center_rate,edge_rate\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_g(r.location_km),
            r.scheme,
            fmt_g(r.center_rate),
            fmt_g(r.edge_rate)
        );
    }
    Ok(out)
}

/// Table of supported users, plus warnings for degenerate entries.
pub fn users_table(schemes: &[SchemeId], k: usize, jt_4k: bool) -> Result<(String, Vec<String>)> {
    if k == 0 {
        return Err(Error::Domain("antennas must be >= 1".into()));
    }
    let mut out = format!("{:<10} {}\n", "scheme", format_args!("supported_users (K={k})"));
    let mut warnings = Vec::new();
    for &id in schemes {
        let n = supported_users(id, k, jt_4k);
        let _ = writeln!(out, "{:<10} {n}", id.name());
        if n.total() == Some(0) {
            warnings.push(format!("{id} supports no users with K={k}: zero ICI needs K >= 2"));
        }
    }
    Ok((out, warnings))
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes()).map_err(Error::from)
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Region { common, kind } => {
            let cfg = common.load()?;
            emit(common.out.as_ref(), &region_csv(&cfg, kind, common.schemes.as_deref())?)
        }
        Command::Simulate { common } => {
            let cfg = common.load()?;
            emit(common.out.as_ref(), &simulate_csv(&cfg.sim_config())?)
        }
        Command::Sweep { common } => {
            let cfg = common.load()?;
            emit(common.out.as_ref(), &sweep_csv(&cfg.sim_config())?)
        }
        Command::Users { common, antennas, jt_4k } => {
            let cfg = common.load()?;
            let k = antennas.unwrap_or(cfg.topology.antennas);
            let (table, warnings) = users_table(&cfg.schemes.enabled, k, jt_4k || cfg.scheme_params.jt_4k)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            emit(common.out.as_ref(), &table)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format() {
        assert_eq!(fmt_g(0.0), "0");
        assert_eq!(fmt_g(0.5), "0.5");
        assert_eq!(fmt_g(1.0), "1");
        assert_eq!(fmt_g(0.292481250360578), "0.29248125");
        assert_eq!(fmt_g(123456789.0), "123456789");
        assert_eq!(fmt_g(1234567890.0), "1.23456789e+09");
        assert_eq!(fmt_g(0.0001), "0.0001");
        assert_eq!(fmt_g(0.00001234), "1.234e-05");
        assert_eq!(fmt_g(-2.5), "-2.5");
        assert_eq!(fmt_g(9.999999999), "10");
    }

    #[test]
    fn region_filter_names() {
        assert_eq!(region_filter(None).unwrap(), REGION_SCHEMES.to_vec());
        assert_eq!(region_filter(Some("")).unwrap(), REGION_SCHEMES.to_vec());
        assert_eq!(region_filter(Some("ts,oma")).unwrap(), vec!["TS", "OMA"]);
        assert!(matches!(region_filter(Some("HK")), Err(Error::UnknownScheme(_))));
    }

    #[test]
    fn single_antenna_cb_warns() {
        let (t, w) = users_table(&SchemeId::ALL, 1, false).unwrap();
        assert!(t.contains("NOMA-CB    0"));
        assert_eq!(w.len(), 1);
    }
}
