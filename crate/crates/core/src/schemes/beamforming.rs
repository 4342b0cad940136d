//! NOMA-CB: transmit beams and receive combiners with zero inter-cluster
//! interference and zero ICI at the other cell's edge users.

use super::{noma_pair, MimoNetworkChannel, SchemeId, SchemeParams, SchemeResult, UserClass, UserId, UserRate};
use crate::error::{Error, Result};
use crate::linalg::{basis, gain, normalized, null_space, outer_sum, CMat, CVec};

/// Beams `w[cell][cluster]` and combiners `v[user]` (indexed like
/// [`MimoNetworkChannel::index`]), all unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSet {
    pub w: [Vec<CVec>; 2],
    pub v: Vec<CVec>,
    /// Total leakage on the Frobenius-normalized channels.
    pub leakage: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl BeamSet {
    pub fn combiner(&self, ch: &MimoNetworkChannel, u: UserId) -> &CVec {
        &self.v[ch.index(u)]
    }
}

/// Channels scaled to unit Frobenius norm, so leakage is scale-free.
struct Normalized<'a> {
    ch: &'a MimoNetworkChannel,
    links: Vec<[CMat; 2]>,
}

impl<'a> Normalized<'a> {
    fn new(ch: &'a MimoNetworkChannel) -> Self {
        let links = ch
            .users()
            .map(|u| {
                [0, 1].map(|b| {
                    let h = ch.link(b, u);
                    let n = h.norm();
                    if n > 0.0 {
                        h.unscale(n)
                    } else {
                        h.clone()
                    }
                })
            })
            .collect();
        Normalized { ch, links }
    }

    fn h(&self, bs: usize, u: UserId) -> &CMat {
        &self.links[self.ch.index(u)][bs]
    }
}

/// Interference vectors `H w` seen by user `u`: other clusters of its own
/// cell, plus every beam of the other cell for edge users.
fn interferers(n: &Normalized, w: &[Vec<CVec>; 2], u: UserId) -> Vec<CVec> {
    let c = n.ch.clusters();
    let mut out: Vec<CVec> = (0..c)
        .filter(|&j| j != u.cluster)
        .map(|j| n.h(u.cell, u) * &w[u.cell][j])
        .collect();
    if u.class == UserClass::Edge {
        let o = 1 - u.cell;
        out.extend((0..c).map(|j| n.h(o, u) * &w[o][j]));
    }
    out
}

fn leakage(n: &Normalized, w: &[Vec<CVec>; 2], v: &[CVec]) -> f64 {
    n.ch.users()
        .map(|u| {
            let vu = &v[n.ch.index(u)];
            interferers(n, w, u).iter().map(|x| gain(vu, x)).sum::<f64>()
        })
        .sum()
}

/// Interference-free combiner closest to the desired direction, else the
/// MMSE-style `Q⁻¹ d`, else the least-interfered direction.
fn update_combiners(n: &Normalized, w: &[Vec<CVec>; 2], v: &mut [CVec]) {
    let k = n.ch.antennas();
    for u in n.ch.users() {
        let d = n.h(u.cell, u) * &w[u.cell][u.cluster];
        let q = outer_sum(k, &interferers(n, w, u));
        let (null, min_vec) = null_space(&q);
        let cand = if null.ncols() > 0 {
            let p = &null * (null.adjoint() * &d);
            if p.norm() > 1e-14 {
                p
            } else {
                null.column(0).into_owned()
            }
        } else {
            q.clone().try_inverse().map(|qi| qi * &d).unwrap_or(min_vec)
        };
        v[n.ch.index(u)] = normalized(cand);
    }
}

/// Rows `vᴴ H` of the users that beam `(cell, cluster)` must not reach.
fn protected_rows(n: &Normalized, v: &[CVec], cell: usize, cluster: usize) -> Vec<CVec> {
    let c = n.ch.clusters();
    let mut rows = Vec::new();
    for j in (0..c).filter(|&j| j != cluster) {
        for class in [UserClass::Center, UserClass::Edge] {
            let u = UserId::new(cell, j, class);
            rows.push(n.h(cell, u).adjoint() * &v[n.ch.index(u)]);
        }
    }
    let o = 1 - cell;
    for j in 0..c {
        let u = UserId::new(o, j, UserClass::Edge);
        rows.push(n.h(cell, u).adjoint() * &v[n.ch.index(u)]);
    }
    rows
}

/// Max-gain beam inside the null space of the protected rows, else the
/// least-leaking direction.
fn update_beams(n: &Normalized, w: &mut [Vec<CVec>; 2], v: &[CVec]) {
    let k = n.ch.antennas();
    for cell in 0..2 {
        for cluster in 0..n.ch.clusters() {
            let q = outer_sum(k, &protected_rows(n, v, cell, cluster));
            let (null, min_vec) = null_space(&q);
            let beam = if null.ncols() > 0 {
                let desired: Vec<CVec> = [UserClass::Center, UserClass::Edge]
                    .iter()
                    .map(|&class| {
                        let u = UserId::new(cell, cluster, class);
                        n.h(cell, u).adjoint() * &v[n.ch.index(u)]
                    })
                    .collect();
                let dq = outer_sum(k, &desired);
                let reduced = null.adjoint() * dq * &null;
                let (_, vecs) = crate::linalg::hermitian_eigen(&reduced);
                &null * vecs.column(vecs.ncols() - 1)
            } else {
                min_vec
            };
            w[cell][cluster] = normalized(beam);
        }
    }
}

/// Closed-form start: every edge combiner turns the other cell's channel
/// into `e1ᴴ`, the cell's center combiners copy their edge user's row, and
/// each beam is orthogonal to `e1` and to the other clusters' rows.
fn aligned_start(n: &Normalized) -> ([Vec<CVec>; 2], Vec<CVec>) {
    let k = n.ch.antennas();
    let c = n.ch.clusters();
    let e1 = basis(k, 0);
    let mut v = vec![CVec::zeros(k); 4 * c];
    for cell in 0..2 {
        let o = 1 - cell;
        for j in 0..c {
            let edge = UserId::new(cell, j, UserClass::Edge);
            let center = UserId::new(cell, j, UserClass::Center);
            // vᴴ H_o = e1ᴴ  ⇔  v = H_o⁻ᴴ e1
            let ve = n.h(o, edge)
                .clone()
                .try_inverse()
                .map(|hi| hi.adjoint() * &e1)
                .unwrap_or_else(|| n.h(cell, edge).column(0).into_owned());
            let ve = normalized(ve);
            let row = n.h(cell, edge).adjoint() * &ve;
            let vc = n.h(cell, center)
                .clone()
                .try_inverse()
                .map(|hi| hi.adjoint() * &row)
                .unwrap_or_else(|| n.h(cell, center) * &row);
            v[n.ch.index(edge)] = ve;
            v[n.ch.index(center)] = normalized(vc);
        }
    }
    let mut w: [Vec<CVec>; 2] = [vec![CVec::zeros(k); c], vec![CVec::zeros(k); c]];
    for (cell, beams) in w.iter_mut().enumerate() {
        for (cluster, beam) in beams.iter_mut().enumerate() {
            let mut rows = vec![e1.clone()];
            for j in (0..c).filter(|&j| j != cluster) {
                let u = UserId::new(cell, j, UserClass::Edge);
                rows.push(n.h(cell, u).adjoint() * &v[n.ch.index(u)]);
            }
            let (null, min_vec) = null_space(&outer_sum(k, &rows));
            *beam = if null.ncols() > 0 { null.column(0).into_owned() } else { min_vec };
        }
    }
    (w, v)
}

/// Alternating leakage minimization. Each cell can host at most `K − 1`
/// clusters: the other cell's edge users must see its beams in a space of
/// dimension at most `K − 1`, while its own clusters need distinct
/// directions inside that space.
pub fn coordinated_beamformer(ch: &MimoNetworkChannel, tol: f64, max_iter: usize) -> Result<BeamSet> {
    let k = ch.antennas();
    let c = ch.clusters();
    if c + 1 > k {
        return Err(Error::Dimension(format!(
            "{c} clusters per cell with {k} antennas: zero ICI needs at most {} clusters",
            k.saturating_sub(1)
        )));
    }
    let n = Normalized::new(ch);
    let (mut w, mut v) = aligned_start(&n);
    update_combiners(&n, &w, &mut v);
    let mut prev = leakage(&n, &w, &v);
    let mut iterations = 0;
    let mut converged = prev <= tol;
    while !converged && iterations < max_iter {
        iterations += 1;
        update_beams(&n, &mut w, &v);
        update_combiners(&n, &w, &mut v);
        let l = leakage(&n, &w, &v);
        converged = l <= tol;
        let stalled = (prev - l).abs() < tol;
        prev = l;
        if stalled {
            break;
        }
    }
    if !converged {
        log::debug!("beamformer stopped after {iterations} iterations with leakage {prev:e}");
    }
    Ok(BeamSet { w, v, leakage: prev, iterations: iterations.max(1), converged })
}

/// Post-combining SINRs `(center, edge)` of every cluster, with the given
/// per-cluster power and residual leakage as noise.
fn cb_sinrs(ch: &MimoNetworkChannel, beams: &BeamSet, power: f64) -> Vec<(UserId, f64)> {
    let c = ch.clusters();
    ch.users()
        .map(|u| {
            let v = beams.combiner(ch, u);
            let own = ch.link(u.cell, u);
            let sig = gain(v, &(own * &beams.w[u.cell][u.cluster])) * power;
            let mut int = 0.0;
            for j in (0..c).filter(|&j| j != u.cluster) {
                int += gain(v, &(own * &beams.w[u.cell][j])) * power;
            }
            let o = 1 - u.cell;
            let cross = ch.link(o, u);
            for j in 0..c {
                int += gain(v, &(cross * &beams.w[o][j])) * power;
            }
            (u, sig / (1.0 + int))
        })
        .collect()
}

/// Per-cluster superposition on the beamformed links, full bandwidth.
/// Each BS splits its power equally across its clusters.
pub fn noma_cb_rates(ch: &MimoNetworkChannel, beams: &BeamSet, params: &SchemeParams) -> SchemeResult {
    let power = 1.0 / ch.clusters() as f64;
    let s = cb_sinrs(ch, beams, power);
    let scale = params.scale();
    let mut rates = Vec::with_capacity(s.len());
    for pair in s.chunks(2) {
        let (center, edge) = (pair[0], pair[1]);
        let (rc, re) = noma_pair(center.1, edge.1, params.weak_user_power_share);
        rates.push(UserRate { user: center.0, rate: rc * scale, fraction: 1.0 });
        rates.push(UserRate { user: edge.0, rate: re * scale, fraction: 1.0 });
    }
    SchemeResult::new(SchemeId::NomaCb, rates)
}

/// NOMA-CB over a whole drop. With up to `K − 1` clusters per cell all are
/// served at once; with `K` clusters the cells cycle through `K` sub-slots,
/// each idling one cluster, so every user is served `(K − 1)/K` of the time.
pub fn noma_cb_round_robin(ch: &MimoNetworkChannel, params: &SchemeParams) -> Result<SchemeResult> {
    let k = ch.antennas();
    let c = ch.clusters();
    if c < k {
        let beams = coordinated_beamformer(ch, params.beam_tol, params.beam_max_iter)?;
        return Ok(noma_cb_rates(ch, &beams, params));
    }
    if c > k || c < 2 {
        return Err(Error::Dimension(format!("NOMA-CB cannot serve {c} clusters per cell with {k} antennas")));
    }
    let share = 1.0 / c as f64;
    let mut acc: Vec<UserRate> = ch
        .users()
        .map(|user| UserRate { user, rate: 0.0, fraction: (c - 1) as f64 * share })
        .collect();
    for idle in 0..c {
        let active: Vec<usize> = (0..c).filter(|&j| j != idle).collect();
        let sub = ch.select_clusters(&active)?;
        let beams = coordinated_beamformer(&sub, params.beam_tol, params.beam_max_iter)?;
        for r in noma_cb_rates(&sub, &beams, params).rates {
            let user = UserId { cluster: active[r.user.cluster], ..r.user };
            acc[ch.index(user)].rate += r.rate * share;
        }
    }
    Ok(SchemeResult::new(SchemeId::NomaCb, acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::crandn;
    use crate::rate::capacity;
    use crate::schemes::random_network;
    use num_complex::Complex64;
    use rand::SeedableRng;

    fn assert_unit_norms(b: &BeamSet) {
        for x in b.w.iter().flatten().chain(&b.v) {
            assert!((x.norm() - 1.0).abs() < 1e-12, "{}", x.norm());
        }
    }

    #[test]
    fn three_clusters_on_four_antennas_reach_zero_leakage() {
        for seed in 0..20 {
            let ch = random_network(seed, 4, 3, 10.0, 0.3);
            let b = coordinated_beamformer(&ch, 1e-9, 500).unwrap();
            assert!(b.converged && b.leakage <= 1e-9, "seed {seed}: {}", b.leakage);
            assert_unit_norms(&b);
        }
    }

    #[test]
    fn block_diagonal_network_has_no_leakage() {
        let ch = random_network(3, 4, 3, 10.0, 1.0).without_cross_links();
        let b = coordinated_beamformer(&ch, 1e-9, 500).unwrap();
        assert!(b.leakage <= 1e-9);
        let r = noma_cb_rates(&ch, &b, &SchemeParams::default());
        assert!(r.rates.iter().all(|x| x.rate.is_finite() && x.rate >= 0.0));
    }

    #[test]
    fn two_antenna_single_cluster_closed_form() {
        // K = 2, one cluster: v_e ∝ H_oᴴ⁻¹ e1 kills the other cell's beam
        // e2, the beam is e2, the center user combines with MRC and sees
        // the other cell's beam as noise.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let links: Vec<[CMat; 2]> = (0..4).map(|_| [crandn(&mut rng, 2, 2), crandn(&mut rng, 2, 2)]).collect();
        let ch = MimoNetworkChannel::new(2, 1, links).unwrap();
        let params = SchemeParams::default();
        let b = coordinated_beamformer(&ch, 1e-12, 50).unwrap();
        assert!(b.leakage < 1e-20);
        let res = noma_cb_rates(&ch, &b, &params);
        let e2 = basis(2, 1);
        for cell in 0..2 {
            let c = UserId::new(cell, 0, UserClass::Center);
            let e = UserId::new(cell, 0, UserClass::Edge);
            let hc = ch.link(cell, c) * &e2;
            let vc = hc.unscale(hc.norm());
            let s_c = gain(&vc, &hc) / (1.0 + gain(&vc, &(ch.link(1 - cell, c) * &e2)));
            let ho = ch.link(1 - cell, e).clone();
            let ve = ho.try_inverse().unwrap().adjoint() * basis(2, 0);
            let ve = ve.unscale(ve.norm());
            let s_e = gain(&ve, &(ch.link(cell, e) * &e2));
            let (rc, re) = if s_c >= s_e {
                (capacity(0.2 * s_c), capacity(0.8 * s_e / (0.2 * s_e + 1.0)))
            } else {
                (capacity(0.8 * s_c / (0.2 * s_c + 1.0)), capacity(0.2 * s_e))
            };
            assert!((res.rate_of(c).unwrap() - rc).abs() < 1e-8);
            assert!((res.rate_of(e).unwrap() - re).abs() < 1e-8);
        }
    }

    #[test]
    fn k_clusters_need_round_robin() {
        let ch = random_network(1, 4, 4, 10.0, 0.3);
        assert!(matches!(coordinated_beamformer(&ch, 1e-6, 10), Err(Error::Dimension(_))));
        let r = noma_cb_round_robin(&ch, &SchemeParams::default()).unwrap();
        assert_eq!(r.rates.len(), 16);
        for x in &r.rates {
            assert_eq!(x.fraction, 0.75);
            assert!(x.rate.is_finite() && x.rate > 0.0);
        }
        let one = random_network(1, 1, 1, 10.0, 0.3);
        assert!(noma_cb_round_robin(&one, &SchemeParams::default()).is_err());
    }

    #[test]
    fn stronger_links_do_not_lose_rate() {
        let ch = random_network(9, 4, 3, 5.0, 0.3);
        let params = SchemeParams::default();
        let lo = noma_cb_round_robin(&ch, &params).unwrap();
        let hi = noma_cb_round_robin(&ch.scaled(2.0), &params).unwrap();
        for (a, b) in lo.rates.iter().zip(&hi.rates) {
            assert!(b.rate >= a.rate - 1e-9, "{a:?} {b:?}");
        }
    }

    #[test]
    fn zero_channel_gives_zero_rates() {
        let z = CMat::from_element(4, 4, Complex64::from(0.0));
        let ch = MimoNetworkChannel::new(4, 3, vec![[z.clone(), z]; 12]).unwrap();
        let r = noma_cb_round_robin(&ch, &SchemeParams::default()).unwrap();
        assert!(r.rates.iter().all(|x| x.rate == 0.0));
    }
}
