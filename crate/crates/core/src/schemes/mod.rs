//! Per-drop rate evaluation of the multi-cell NOMA schemes and the
//! single-cell and orthogonal baselines.

mod beamforming;
mod mimo;
mod network;
mod scalar;
mod users;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rate::RateConvention;
use crate::single_cell::{bc_noma_point, PowerSplit, TwoUserGains};

pub use beamforming::{coordinated_beamformer, noma_cb_rates, noma_cb_round_robin, BeamSet};
pub use mimo::{
    cs_rates, noma_cs_decision, noma_cs_schedule, noma_dcs_network, noma_jt_network, noma_tdm_rates,
    oma_ffr_rates, single_cell_noma_rates, single_cell_oma_rates, zf_sinrs, CsAction,
};
pub use network::{MimoNetworkChannel, TwoCellScalarChannels, UserId};
pub use scalar::{dcs_serving_bs, noma_dcs_rates, noma_jt_rates};
pub use users::{supported_users, SupportedUsers};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SchemeId {
    #[serde(rename = "OMA")]
    Oma,
    #[serde(rename = "OMA-FFR")]
    OmaFfr,
    #[serde(rename = "NOMA")]
    Noma,
    #[serde(rename = "NOMA-TDM")]
    NomaTdm,
    #[serde(rename = "NOMA-JT")]
    NomaJt,
    #[serde(rename = "NOMA-DCS")]
    NomaDcs,
    #[serde(rename = "NOMA-CB")]
    NomaCb,
    #[serde(rename = "NOMA-CS")]
    NomaCs,
}

impl SchemeId {
    pub const ALL: [SchemeId; 8] = [
        SchemeId::Oma,
        SchemeId::OmaFfr,
        SchemeId::Noma,
        SchemeId::NomaTdm,
        SchemeId::NomaJt,
        SchemeId::NomaDcs,
        SchemeId::NomaCb,
        SchemeId::NomaCs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Oma => "OMA",
            SchemeId::OmaFfr => "OMA-FFR",
            SchemeId::Noma => "NOMA",
            SchemeId::NomaTdm => "NOMA-TDM",
            SchemeId::NomaJt => "NOMA-JT",
            SchemeId::NomaDcs => "NOMA-DCS",
            SchemeId::NomaCb => "NOMA-CB",
            SchemeId::NomaCs => "NOMA-CS",
        }
    }

    /// Parses a comma-separated list; an empty list means every scheme.
    pub fn parse_list(s: &str) -> Result<Vec<SchemeId>> {
        let ids = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        Ok(if ids.is_empty() { SchemeId::ALL.to_vec() } else { ids })
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownScheme(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UserClass {
    Center,
    Edge,
}

impl UserClass {
    pub fn name(self) -> &'static str {
        match self {
            UserClass::Center => "center",
            UserClass::Edge => "edge",
        }
    }
}

/// Rate of one user and the time/band fraction already folded into it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserRate {
    pub user: UserId,
    pub rate: f64,
    pub fraction: f64,
}

/// Per-user rates of one scheme on one channel realization, in the units
/// of the configured [`RateConvention`].
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeResult {
    pub scheme: SchemeId,
    pub rates: Vec<UserRate>,
    /// Set when a QoS constraint could not be met and the scheduler fell
    /// back to the unconstrained choice.
    pub qos_violated: bool,
}

impl SchemeResult {
    pub(crate) fn new(scheme: SchemeId, rates: Vec<UserRate>) -> Self {
        SchemeResult { scheme, rates, qos_violated: false }
    }

    pub fn rate_of(&self, user: UserId) -> Option<f64> {
        self.rates.iter().find(|r| r.user == user).map(|r| r.rate)
    }

    pub fn class_rates(&self, class: UserClass) -> impl Iterator<Item = f64> + '_ {
        self.rates.iter().filter(move |r| r.user.class == class).map(|r| r.rate)
    }

    pub fn sum_rate(&self) -> f64 {
        self.rates.iter().map(|r| r.rate).sum()
    }

    /// Smallest resource fraction applied to any user.
    pub fn normalization(&self) -> f64 {
        self.rates.iter().map(|r| r.fraction).fold(1.0, f64::min)
    }
}

/// Knobs shared by the system-level scheme evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchemeParams {
    pub rate_convention: RateConvention,
    /// Power share of the effectively weaker user of a NOMA pair.
    pub weak_user_power_share: f64,
    /// Shared band fraction used by cell-center users under FFR.
    pub ffr_center_band: f64,
    /// Minimum edge rate, bits/s/Hz, for scheduled edge users under CS.
    pub cs_qos_min_edge_rate: f64,
    /// Count JT as serving 4K users instead of 3K.
    pub jt_4k: bool,
    pub beam_tol: f64,
    pub beam_max_iter: usize,
}

impl Default for SchemeParams {
    fn default() -> Self {
        SchemeParams {
            rate_convention: RateConvention::Half,
            weak_user_power_share: 0.8,
            ffr_center_band: 1.0 / 3.0,
            cs_qos_min_edge_rate: 0.0,
            jt_4k: false,
            beam_tol: 1e-6,
            beam_max_iter: 500,
        }
    }
}

impl SchemeParams {
    pub fn validate(&self) -> Result<()> {
        let share = self.weak_user_power_share;
        if !(0.0..=1.0).contains(&share) {
            return Err(Error::Config(format!("weak_user_power_share must lie in [0, 1], got {share}")));
        }
        let band = self.ffr_center_band;
        if !(band > 0.0 && band < 1.0) {
            return Err(Error::Config(format!("ffr_center_band must lie in (0, 1), got {band}")));
        }
        if !(self.cs_qos_min_edge_rate >= 0.0 && self.cs_qos_min_edge_rate.is_finite()) {
            return Err(Error::Config("cs_qos_min_edge_rate must be finite and >= 0".into()));
        }
        if self.beam_tol.is_nan() || self.beam_tol <= 0.0 || self.beam_max_iter == 0 {
            return Err(Error::Config("beam_tol must be > 0 and beam_max_iter >= 1".into()));
        }
        Ok(())
    }

    /// Multiplier turning a half-convention rate into this convention.
    pub(crate) fn scale(&self) -> f64 {
        2.0 * self.rate_convention.factor()
    }
}

/// Rates `(center, edge)` of a superposed pair with effective SNRs
/// `s_center`, `s_edge`. The effectively stronger user runs SIC (ties go to
/// the center user) and the weaker one gets `weak_share` of the power.
pub(crate) fn noma_pair(s_center: f64, s_edge: f64, weak_share: f64) -> (f64, f64) {
    let strong_share = PowerSplit::new(1.0 - weak_share).expect("share validated");
    if s_center >= s_edge {
        let g = TwoUserGains::new(s_center, s_edge).expect("finite SNR");
        let p = bc_noma_point(g, strong_share).expect("ordered");
        (p.r1, p.r2)
    } else {
        log::trace!("SIC order swapped: edge user is effectively stronger");
        let g = TwoUserGains::new(s_edge, s_center).expect("finite SNR");
        let p = bc_noma_point(g, strong_share).expect("ordered");
        (p.r2, p.r1)
    }
}

/// Power share of the center message under [`noma_pair`]'s rule.
pub(crate) fn center_share(s_center: f64, s_edge: f64, weak_share: f64) -> f64 {
    if s_center >= s_edge {
        1.0 - weak_share
    } else {
        weak_share
    }
}

/// Evaluates one scheme on one network realization.
pub fn evaluate_scheme(id: SchemeId, ch: &MimoNetworkChannel, params: &SchemeParams) -> Result<SchemeResult> {
    match id {
        SchemeId::Oma => single_cell_oma_rates(ch, params),
        SchemeId::OmaFfr => oma_ffr_rates(ch, params.ffr_center_band, params),
        SchemeId::Noma => single_cell_noma_rates(ch, params),
        SchemeId::NomaTdm => noma_tdm_rates(ch, params),
        SchemeId::NomaJt => noma_jt_network(ch, params),
        SchemeId::NomaDcs => noma_dcs_network(ch, params),
        SchemeId::NomaCb => noma_cb_round_robin(ch, params),
        SchemeId::NomaCs => noma_cs_schedule(ch, params.cs_qos_min_edge_rate, params),
    }
}

/// Random network with unit-variance links scaled by `snr` (own cell) and
/// `snr * cross` (other cell).
#[cfg(test)]
pub(crate) fn random_network(seed: u64, k: usize, c: usize, snr: f64, cross: f64) -> MimoNetworkChannel {
    use num_complex::Complex64;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut links = Vec::new();
    for cell in 0..2 {
        for _ in 0..2 * c {
            links.push([0, 1].map(|bs| {
                let p = if bs == cell { snr } else { snr * cross };
                crate::linalg::crandn(&mut rng, k, k) * Complex64::from(p.sqrt())
            }));
        }
    }
    MimoNetworkChannel::new(k, c, links).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme_names_round_trip() {
        for id in SchemeId::ALL {
            assert_eq!(id.name().parse::<SchemeId>().unwrap(), id);
            assert_eq!(id.name().to_lowercase().parse::<SchemeId>().unwrap(), id);
        }
        assert!(matches!("NOMA-XX".parse::<SchemeId>(), Err(Error::UnknownScheme(_))));
        assert_eq!(SchemeId::parse_list("").unwrap(), SchemeId::ALL.to_vec());
        assert_eq!(
            SchemeId::parse_list("noma-cb, OMA").unwrap(),
            vec![SchemeId::NomaCb, SchemeId::Oma]
        );
    }

    #[test]
    fn weaker_user_gets_the_large_share() {
        let (c, e) = noma_pair(3.0, 1.0, 0.8);
        assert!((c - crate::rate::capacity(0.6)).abs() < 1e-15);
        assert!((e - crate::rate::capacity(0.8 / 1.2)).abs() < 1e-15);
        // swapped roles mirror the rates
        let (c2, e2) = noma_pair(1.0, 3.0, 0.8);
        assert_eq!((c2, e2), (e, c));
        assert_eq!(center_share(1.0, 1.0, 0.8), 1.0 - 0.8);
    }
}
