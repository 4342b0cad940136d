//! Two-cell topology, user drops and Rayleigh-faded MIMO channels.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::crandn;
use crate::schemes::{MimoNetworkChannel, UserClass, UserId};

pub type Point = [f64; 2];

/// Closest distance used in path-loss computations (1 m).
pub const MIN_DISTANCE_KM: f64 = 0.001;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Topology {
    pub bs_positions_km: [Point; 2],
    pub cell_radius_km: f64,
    pub center_disc_radius_km: f64,
    pub pathloss_exponent: f64,
    /// Transmit and receive antennas per node.
    pub antennas: usize,
    pub clusters_per_cell: usize,
}

impl Default for Topology {
    fn default() -> Self {
        Topology {
            bs_positions_km: [[0.0, 0.0], [0.5, 0.0]],
            cell_radius_km: 0.25,
            center_disc_radius_km: 0.125,
            pathloss_exponent: 4.0,
            antennas: 4,
            clusters_per_cell: 4,
        }
    }
}

impl Topology {
    pub fn validate(&self) -> Result<()> {
        let (r, rc) = (self.cell_radius_km, self.center_disc_radius_km);
        if !(rc > 0.0 && r > rc && r.is_finite()) {
            return Err(Error::Config(format!(
                "need cell_radius_km > center_disc_radius_km > 0, got {r} and {rc}"
            )));
        }
        if !(self.pathloss_exponent > 2.0 && self.pathloss_exponent.is_finite()) {
            return Err(Error::Config(format!("pathloss_exponent must exceed 2, got {}", self.pathloss_exponent)));
        }
        if self.antennas == 0 || self.clusters_per_cell == 0 {
            return Err(Error::Config("antennas and clusters_per_cell must be >= 1".into()));
        }
        if self.bs_positions_km.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Config("BS positions must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkBudget {
    pub tx_power_w: f64,
    pub noise_psd_w_per_hz: f64,
    pub bandwidth_hz: f64,
    /// Extra loss applied on top of `d_km^-exponent`.
    pub pathloss_intercept_db: f64,
}

impl Default for LinkBudget {
    fn default() -> Self {
        LinkBudget {
            tx_power_w: 10.0,
            noise_psd_w_per_hz: 1e-10,
            bandwidth_hz: 1e7,
            pathloss_intercept_db: 50.0,
        }
    }
}

impl LinkBudget {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tx_power_w", self.tx_power_w),
            ("noise_psd_w_per_hz", self.noise_psd_w_per_hz),
            ("bandwidth_hz", self.bandwidth_hz),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        if !self.pathloss_intercept_db.is_finite() {
            return Err(Error::Config("pathloss_intercept_db must be finite".into()));
        }
        Ok(())
    }

    pub fn noise_power_w(&self) -> f64 {
        self.noise_psd_w_per_hz * self.bandwidth_hz
    }

    /// Mean received SNR at `distance_km`.
    pub fn snr_scale(&self, distance_km: f64, exponent: f64) -> f64 {
        let intercept = 10f64.powf(-self.pathloss_intercept_db / 10.0);
        self.tx_power_w * link_gain(distance_km, exponent) * intercept / self.noise_power_w()
    }
}

/// Large-scale gain `d^-exponent` with `d` in km; distances below 1 m are
/// clamped to 1 m.
pub fn link_gain(distance_km: f64, exponent: f64) -> f64 {
    let d = if distance_km < MIN_DISTANCE_KM || distance_km.is_nan() {
        log::debug!("distance {distance_km} km clamped to {MIN_DISTANCE_KM} km");
        MIN_DISTANCE_KM
    } else {
        distance_km
    };
    d.powf(-exponent)
}

/// User positions: per cell, one `(center, edge)` pair per cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct UserDrop {
    pub clusters: [Vec<(Point, Point)>; 2],
}

impl UserDrop {
    pub fn position(&self, u: UserId) -> Point {
        let (c, e) = self.clusters[u.cell][u.cluster];
        match u.class {
            UserClass::Center => c,
            UserClass::Edge => e,
        }
    }
}

pub fn distance(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const DROP_STREAM: u64 = 0;

/// Generator for substream `stream` of trial `trial`. Every (seed, trial,
/// stream) triple is independent of scheduling.
pub fn substream(seed: u64, trial: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(trial)));
    rng.set_stream(stream);
    rng
}

fn polar(rng: &mut impl Rng, origin: Point, r: f64) -> Point {
    let th = std::f64::consts::TAU * rng.random::<f64>();
    [origin[0] + r * th.cos(), origin[1] + r * th.sin()]
}

/// Area-uniform drop: centers in the inner disc, edges in the outer ring,
/// or on the inter-BS axis at `edge_distance_km` when given.
pub fn drop_users_at(
    rng: &mut impl Rng,
    topo: &Topology,
    edge_distance_km: Option<f64>,
) -> UserDrop {
    let (r, rc) = (topo.cell_radius_km, topo.center_disc_radius_km);
    let clusters = [0, 1].map(|m| {
        let bs = topo.bs_positions_km[m];
        let other = topo.bs_positions_km[1 - m];
        (0..topo.clusters_per_cell)
            .map(|_| {
                let rad = rc * rng.random::<f64>().sqrt();
                let center = polar(rng, bs, rad);
                let edge = match edge_distance_km {
                    Some(d) => {
                        let len = distance(bs, other).max(f64::MIN_POSITIVE);
                        [bs[0] + d * (other[0] - bs[0]) / len, bs[1] + d * (other[1] - bs[1]) / len]
                    }
                    None => {
                        let rad = (rc * rc + (r * r - rc * rc) * rng.random::<f64>()).sqrt();
                        polar(rng, bs, rad)
                    }
                };
                (center, edge)
            })
            .collect()
    });
    UserDrop { clusters }
}

pub fn drop_users(seed: u64, topo: &Topology) -> UserDrop {
    drop_users_at(&mut substream(seed, 0, DROP_STREAM), topo, None)
}

/// One drop and its channels.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSample {
    pub drop: UserDrop,
    pub channel: MimoNetworkChannel,
}

/// Drop plus Rayleigh-faded MIMO links for trial `trial`. Each link draws
/// from its own substream.
pub fn sample_trial(
    seed: u64,
    trial: u64,
    topo: &Topology,
    lb: &LinkBudget,
    edge_distance_km: Option<f64>,
) -> Result<NetworkSample> {
    let drop = drop_users_at(&mut substream(seed, trial, DROP_STREAM), topo, edge_distance_km);
    let k = topo.antennas;
    let c = topo.clusters_per_cell;
    let mut links = Vec::with_capacity(4 * c);
    for cell in 0..2 {
        for cluster in 0..c {
            for class in [UserClass::Center, UserClass::Edge] {
                let u = UserId::new(cell, cluster, class);
                let pos = drop.position(u);
                let idx = links.len() as u64;
                let pair = [0, 1].map(|bs| {
                    let d = distance(pos, topo.bs_positions_km[bs]);
                    let amp = lb.snr_scale(d, topo.pathloss_exponent).sqrt();
                    let mut rng = substream(seed, trial, 1 + 2 * idx + bs as u64);
                    crandn(&mut rng, k, k) * Complex64::from(amp)
                });
                links.push(pair);
            }
        }
    }
    let channel = MimoNetworkChannel::new(k, c, links)?;
    Ok(NetworkSample { drop, channel })
}

pub fn sample_network(seed: u64, topo: &Topology, lb: &LinkBudget) -> Result<NetworkSample> {
    sample_trial(seed, 0, topo, lb, None)
}
