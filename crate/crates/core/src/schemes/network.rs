use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::UserClass;
use crate::error::{Error, Result};
use crate::linalg::CMat;

/// A user of the two-cell network: cell `0|1`, cluster index, role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UserId {
    pub cell: usize,
    pub cluster: usize,
    pub class: UserClass,
}

impl UserId {
    pub const fn new(cell: usize, cluster: usize, class: UserClass) -> Self {
        UserId { cell, cluster, class }
    }
}

/// Channel power gains for the three-user JT/DCS model: two cell-center
/// users and one common cell-edge user, each seen from both BSs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoCellScalarChannels {
    /// BS 1 → center user 1.
    pub g11: f64,
    /// BS 2 → center user 1.
    pub g12: f64,
    /// BS 1 → center user 2.
    pub g21: f64,
    /// BS 2 → center user 2.
    pub g22: f64,
    /// BS 1 → edge user.
    pub ge1: f64,
    /// BS 2 → edge user.
    pub ge2: f64,
    /// Per-BS power `P` of each center message.
    pub p_center: f64,
    /// Per-BS power `P_c` of the edge message.
    pub p_edge: f64,
}

impl TwoCellScalarChannels {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        g11: f64,
        g12: f64,
        g21: f64,
        g22: f64,
        ge1: f64,
        ge2: f64,
        p_center: f64,
        p_edge: f64,
    ) -> Result<Self> {
        let ch = TwoCellScalarChannels { g11, g12, g21, g22, ge1, ge2, p_center, p_edge };
        if ch.values().iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Domain(format!("gains and powers must be finite and >= 0: {ch:?}")));
        }
        Ok(ch)
    }

    fn values(&self) -> [f64; 8] {
        [self.g11, self.g12, self.g21, self.g22, self.ge1, self.ge2, self.p_center, self.p_edge]
    }

    /// The same network with BS and center-user labels exchanged.
    pub fn relabeled(&self) -> Self {
        TwoCellScalarChannels {
            g11: self.g22,
            g12: self.g21,
            g21: self.g12,
            g22: self.g11,
            ge1: self.ge2,
            ge2: self.ge1,
            ..*self
        }
    }
}

/// All BS → user MIMO channels of the two-cell network, scaled so that the
/// receiver noise has unit power. Users are ordered cell-major, then
/// cluster, then center before edge.
#[derive(Debug, Clone, PartialEq)]
pub struct MimoNetworkChannel {
    antennas: usize,
    clusters: usize,
    /// `links[user][bs]`, each `antennas × antennas` (rx × tx).
    links: Vec<[CMat; 2]>,
}

impl MimoNetworkChannel {
    pub fn new(antennas: usize, clusters: usize, links: Vec<[CMat; 2]>) -> Result<Self> {
        if antennas == 0 || clusters == 0 {
            return Err(Error::Dimension("need at least one antenna and one cluster".into()));
        }
        if links.len() != 4 * clusters {
            return Err(Error::Dimension(format!(
                "expected {} users for {clusters} clusters per cell, got {}",
                4 * clusters,
                links.len()
            )));
        }
        for (u, pair) in links.iter().enumerate() {
            for h in pair {
                if h.nrows() != antennas || h.ncols() != antennas {
                    return Err(Error::Dimension(format!(
                        "user {u}: link is {}x{}, expected {antennas}x{antennas}",
                        h.nrows(),
                        h.ncols()
                    )));
                }
            }
        }
        Ok(MimoNetworkChannel { antennas, clusters, links })
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    /// Clusters per cell.
    pub fn clusters(&self) -> usize {
        self.clusters
    }

    pub fn index(&self, u: UserId) -> usize {
        (u.cell * self.clusters + u.cluster) * 2 + (u.class == UserClass::Edge) as usize
    }

    pub fn users(&self) -> impl Iterator<Item = UserId> + '_ {
        (0..2).flat_map(move |cell| {
            (0..self.clusters).flat_map(move |k| {
                [UserClass::Center, UserClass::Edge].map(|c| UserId::new(cell, k, c))
            })
        })
    }

    /// Channel from `bs` to `user`.
    pub fn link(&self, bs: usize, user: UserId) -> &CMat {
        &self.links[self.index(user)][bs]
    }

    /// Keeps only the listed clusters (same indices in both cells),
    /// renumbered in the given order.
    pub fn select_clusters(&self, keep: &[usize]) -> Result<Self> {
        if keep.iter().any(|&k| k >= self.clusters) {
            return Err(Error::Dimension(format!("cluster index out of range in {keep:?}")));
        }
        let mut links = Vec::with_capacity(4 * keep.len());
        for cell in 0..2 {
            for &k in keep {
                for class in [UserClass::Center, UserClass::Edge] {
                    links.push(self.links[self.index(UserId::new(cell, k, class))].clone());
                }
            }
        }
        Self::new(self.antennas, keep.len(), links)
    }

    /// Every channel matrix multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let z = Complex64::from(c);
        let links = self.links.iter().map(|[a, b]| [a * z, b * z]).collect();
        MimoNetworkChannel { links, ..*self }
    }

    /// Cross-cell links set to zero.
    pub fn without_cross_links(&self) -> Self {
        let mut out = self.clone();
        for u in self.users().collect::<Vec<_>>() {
            let i = self.index(u);
            out.links[i][1 - u.cell].fill(Complex64::from(0.0));
        }
        out
    }

    /// Scalar JT/DCS view of cluster `k`: its two center users and the
    /// edge user of `common_cell`. Gains are `‖H‖²_F / K²`, the mean
    /// per-antenna-pair power gain.
    pub fn scalar_view(&self, k: usize, common_cell: usize, p_center: f64, p_edge: f64) -> Result<TwoCellScalarChannels> {
        let n = (self.antennas * self.antennas) as f64;
        let g = |bs: usize, u: UserId| self.link(bs, u).norm_squared() / n;
        let c1 = UserId::new(0, k, UserClass::Center);
        let c2 = UserId::new(1, k, UserClass::Center);
        let e = UserId::new(common_cell, k, UserClass::Edge);
        TwoCellScalarChannels::new(g(0, c1), g(1, c1), g(0, c2), g(1, c2), g(0, e), g(1, e), p_center, p_edge)
    }

    /// Hash of every matrix entry, for logging that paired schemes saw the
    /// same draw.
    pub fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        for pair in &self.links {
            for m in pair {
                for z in m.iter() {
                    z.re.to_bits().hash(&mut h);
                    z.im.to_bits().hash(&mut h);
                }
            }
        }
        h.finish()
    }
}
