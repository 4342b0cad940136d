//! TOML experiment configuration. Every section is optional and defaults
//! to the standard two-cell setup.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{LinkBudget, Topology};
use crate::error::{Error, Result};
use crate::ic::HkGrids;
use crate::schemes::{SchemeId, SchemeParams};
use crate::sim::{default_sweep_locations, SimConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchemesSection {
    pub enabled: Vec<SchemeId>,
}

impl Default for SchemesSection {
    fn default() -> Self {
        SchemesSection { enabled: SchemeId::ALL.to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarnessSection {
    pub trials: usize,
    pub seed: u64,
    /// 0 = one worker per core.
    pub workers: usize,
    pub sweep_locations_km: Vec<f64>,
}

impl Default for HarnessSection {
    fn default() -> Self {
        HarnessSection { trials: 2000, seed: 42, workers: 0, sweep_locations_km: default_sweep_locations() }
    }
}

/// A two-user channel whose regions `region` traces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RegionChannel {
    Mac { id: String, gamma1: f64, gamma2: f64 },
    Bc { id: String, gamma1: f64, gamma2: f64 },
    Ic { id: String, a1: f64, a2: f64, b1: f64, b2: f64 },
}

impl RegionChannel {
    pub fn id(&self) -> &str {
        match self {
            RegionChannel::Mac { id, .. } | RegionChannel::Bc { id, .. } | RegionChannel::Ic { id, .. } => id,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RegionChannel::Mac { .. } => "mac",
            RegionChannel::Bc { .. } => "bc",
            RegionChannel::Ic { .. } => "ic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegionSection {
    /// Points per time-share / power-split sweep.
    pub grid: usize,
    /// Per-axis HK split grid.
    pub split_grid: usize,
    /// Weighted-sum directions per HK split.
    pub weight_grid: usize,
    pub channels: Vec<RegionChannel>,
}

impl Default for RegionSection {
    fn default() -> Self {
        let g = HkGrids::default();
        RegionSection {
            grid: g.oma,
            split_grid: g.split,
            weight_grid: g.weight,
            channels: vec![
                RegionChannel::Mac { id: "mac-sym".into(), gamma1: 1.0, gamma2: 1.0 },
                RegionChannel::Mac { id: "mac-asym".into(), gamma1: 10.0, gamma2: 1.0 },
                RegionChannel::Bc { id: "bc-asym".into(), gamma1: 10.0, gamma2: 1.0 },
                RegionChannel::Ic { id: "ic-weak".into(), a1: 0.2, a2: 0.2, b1: 10.0, b2: 10.0 },
                RegionChannel::Ic { id: "ic-strong".into(), a1: 1.0, a2: 1.0, b1: 10.0, b2: 10.0 },
            ],
        }
    }
}

impl RegionSection {
    pub fn hk_grids(&self) -> HkGrids {
        HkGrids { split: self.split_grid, weight: self.weight_grid, oma: self.grid }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub topology: Topology,
    pub link_budget: LinkBudget,
    pub schemes: SchemesSection,
    pub scheme_params: SchemeParams,
    pub harness: HarnessSection,
    pub region: RegionSection,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.sim_config().validate()?;
        let r = &self.region;
        if r.grid < 2 || r.split_grid < 2 || r.weight_grid < 1 {
            return Err(Error::Config("region grids need grid >= 2, split_grid >= 2, weight_grid >= 1".into()));
        }
        let mut ids: Vec<&str> = r.channels.iter().map(RegionChannel::id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("region channel ids must be unique".into()));
        }
        Ok(())
    }

    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            topology: self.topology.clone(),
            link_budget: self.link_budget,
            params: self.scheme_params,
            schemes: self.schemes.enabled.clone(),
            trials: self.harness.trials,
            seed: self.harness.seed,
            workers: self.harness.workers,
            sweep_locations_km: self.harness.sweep_locations_km.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = Config::default();
        let text = cfg.to_toml().unwrap();
        assert_eq!(Config::from_toml(&text).unwrap(), cfg);
        assert_eq!(Config::from_toml("").unwrap(), cfg);
    }

    #[test]
    fn partial_sections_keep_other_defaults() {
        let cfg = Config::from_toml(
            "[harness]\ntrials = 7\n[scheme_params]\nrate_convention = \"full\"\n\
             [schemes]\nenabled = [\"NOMA-CB\", \"OMA\"]\n",
        )
        .unwrap();
        assert_eq!(cfg.harness.trials, 7);
        assert_eq!(cfg.harness.seed, 42);
        assert_eq!(cfg.scheme_params.rate_convention, crate::RateConvention::Full);
        assert_eq!(cfg.schemes.enabled, vec![SchemeId::NomaCb, SchemeId::Oma]);
        assert_eq!(cfg.topology, Topology::default());
        let back = Config::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            "[harness]\ntrials = 0\n",
            "[harness]\ntrialz = 3\n",
            "[schemes]\nenabled = [\"NOMA-XX\"]\n",
            "[schemes]\nenabled = []\n",
            "[topology]\ncell_radius_km = 0.1\n",
            "[[region.channels]]\nkind = \"zc\"\nid = \"x\"\n",
            "[link_budget]\nbandwidth_hz = -1.0\n",
        ] {
            assert!(matches!(Config::from_toml(bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn region_channels_parse() {
        let cfg = Config::from_toml(
            "[[region.channels]]\nkind = \"ic\"\nid = \"s\"\na1 = 1.0\na2 = 1.0\nb1 = 10.0\nb2 = 10.0\n",
        )
        .unwrap();
        assert_eq!(cfg.region.channels.len(), 1);
        assert_eq!(cfg.region.channels[0].kind(), "ic");
    }
}
