//! Single-cell baselines (OMA, NOMA, NOMA-TDM, OMA-FFR), NOMA-CS and the
//! network versions of NOMA-JT and NOMA-DCS.

use super::{
    center_share, noma_dcs_rates, noma_jt_rates, noma_pair, MimoNetworkChannel, SchemeId, SchemeParams,
    SchemeResult, UserClass, UserId, UserRate,
};
use crate::error::{Error, Result};
use crate::linalg::{gain, normalized, null_space, outer_sum, CVec};
use crate::rate::{capacity, RatePoint};

/// Desired-signal power and per-cluster ICI terms of one user under
/// receive zero-forcing.
struct ZfTerms {
    signal: f64,
    /// Interference from each cluster beam of the other cell at full power.
    ici: Vec<f64>,
}

/// Cluster `j` of each cell transmits on antenna `j` with power `1/C`;
/// every user zero-forces the other clusters of its own cell.
fn zf_terms(ch: &MimoNetworkChannel) -> Result<Vec<ZfTerms>> {
    let k = ch.antennas();
    let c = ch.clusters();
    if c > k {
        return Err(Error::Dimension(format!("{c} clusters per cell exceed {k} antennas")));
    }
    let p = 1.0 / c as f64;
    ch.users()
        .map(|u| {
            let h = ch.link(u.cell, u);
            let cols: Vec<CVec> = (0..c).filter(|&j| j != u.cluster).map(|j| h.column(j).into_owned()).collect();
            let d = h.column(u.cluster).into_owned();
            let (null, _) = null_space(&outer_sum(k, &cols));
            let proj = &null * (null.adjoint() * &d);
            let v = if proj.norm() > 0.0 { normalized(proj) } else { null.column(0).into_owned() };
            let other = ch.link(1 - u.cell, u);
            Ok(ZfTerms {
                signal: gain(&v, &d) * p,
                ici: (0..c).map(|j| gain(&v, &other.column(j).into_owned()) * p).collect(),
            })
        })
        .collect()
}

/// Effective SNR of every user, with or without inter-cell interference.
pub fn zf_sinrs(ch: &MimoNetworkChannel, with_ici: bool) -> Result<Vec<f64>> {
    let t = zf_terms(ch)?;
    Ok(t.iter()
        .map(|z| z.signal / (1.0 + if with_ici { z.ici.iter().sum() } else { 0.0 }))
        .collect())
}

fn per_user(ch: &MimoNetworkChannel, scheme: SchemeId, f: impl Fn(UserId, usize) -> (f64, f64)) -> SchemeResult {
    let rates = ch
        .users()
        .enumerate()
        .map(|(i, user)| {
            let (rate, fraction) = f(user, i);
            UserRate { user, rate, fraction }
        })
        .collect();
    SchemeResult::new(scheme, rates)
}

/// Per-cluster NOMA pairs on precomputed SNRs (center/edge adjacent).
fn noma_on(ch: &MimoNetworkChannel, s: &[f64], params: &SchemeParams, scheme: SchemeId, fraction: f64) -> SchemeResult {
    let mut r = vec![0.0; s.len()];
    for i in (0..s.len()).step_by(2) {
        let (rc, re) = noma_pair(s[i], s[i + 1], params.weak_user_power_share);
        r[i] = rc;
        r[i + 1] = re;
    }
    let scale = params.scale() * fraction;
    per_user(ch, scheme, |_, i| (r[i] * scale, fraction))
}

/// Cluster users time-share their ZF stream equally; ICI is noise.
pub fn single_cell_oma_rates(ch: &MimoNetworkChannel, params: &SchemeParams) -> Result<SchemeResult> {
    let s = zf_sinrs(ch, true)?;
    let scale = params.scale();
    Ok(per_user(ch, SchemeId::Oma, |_, i| (0.5 * capacity(s[i]) * scale, 0.5)))
}

/// Superposition within each ZF stream; ICI is noise.
pub fn single_cell_noma_rates(ch: &MimoNetworkChannel, params: &SchemeParams) -> Result<SchemeResult> {
    let s = zf_sinrs(ch, true)?;
    Ok(noma_on(ch, &s, params, SchemeId::Noma, 1.0))
}

/// Cells alternate in time, so there is no ICI but each cell is active half
/// of the time.
pub fn noma_tdm_rates(ch: &MimoNetworkChannel, params: &SchemeParams) -> Result<SchemeResult> {
    let s = zf_sinrs(ch, false)?;
    Ok(noma_on(ch, &s, params, SchemeId::NomaTdm, 0.5))
}

/// Center users share a band of fraction `center_band` (with ICI); each
/// cell's edge users get a private band of `(1 − center_band)/2`.
pub fn oma_ffr_rates(ch: &MimoNetworkChannel, center_band: f64, params: &SchemeParams) -> Result<SchemeResult> {
    if !(center_band > 0.0 && center_band <= 1.0) {
        return Err(Error::Domain(format!("center band must lie in (0, 1], got {center_band}")));
    }
    let with = zf_sinrs(ch, true)?;
    let without = zf_sinrs(ch, false)?;
    let edge_band = (1.0 - center_band) / 2.0;
    let scale = params.scale();
    Ok(per_user(ch, SchemeId::OmaFfr, |u, i| match u.class {
        UserClass::Center => (center_band * capacity(with[i]) * scale, center_band),
        UserClass::Edge => (edge_band * capacity(without[i]) * scale, edge_band),
    }))
}

/// What a BS sends under NOMA-CS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CsAction {
    /// Superposed center + edge messages on every cluster.
    Noma,
    /// Only the center messages, at the power they would have under NOMA;
    /// edge users are not scheduled.
    CenterOnly,
}

impl CsAction {
    pub const BOTH: [CsAction; 2] = [CsAction::Noma, CsAction::CenterOnly];
}

/// Rates for a fixed pair of BS actions. The center power shares come from
/// the SIC ordering when both cells run NOMA.
pub fn cs_rates(ch: &MimoNetworkChannel, actions: [CsAction; 2], params: &SchemeParams) -> Result<SchemeResult> {
    let t = zf_terms(ch)?;
    Ok(cs_rates_from(ch, &t, actions, params))
}

fn cs_rates_from(ch: &MimoNetworkChannel, t: &[ZfTerms], actions: [CsAction; 2], params: &SchemeParams) -> SchemeResult {
    let c = ch.clusters();
    let w = params.weak_user_power_share;
    let full: Vec<f64> = t.iter().map(|z| z.signal / (1.0 + z.ici.iter().sum::<f64>())).collect();
    // shares[cell][cluster]
    let shares: Vec<Vec<f64>> = (0..2)
        .map(|cell| {
            (0..c)
                .map(|k| {
                    let i = 2 * (cell * c + k);
                    center_share(full[i], full[i + 1], w)
                })
                .collect()
        })
        .collect();
    let factor = |cell: usize, k: usize| match actions[cell] {
        CsAction::Noma => 1.0,
        CsAction::CenterOnly => shares[cell][k],
    };
    let s: Vec<f64> = ch
        .users()
        .zip(t)
        .map(|(u, z)| {
            let o = 1 - u.cell;
            let ici: f64 = z.ici.iter().enumerate().map(|(j, x)| x * factor(o, j)).sum();
            z.signal / (1.0 + ici)
        })
        .collect();
    let mut r = vec![0.0; s.len()];
    for cell in 0..2 {
        for k in 0..c {
            let i = 2 * (cell * c + k);
            match actions[cell] {
                CsAction::Noma => {
                    let (rc, re) = noma_pair(s[i], s[i + 1], w);
                    r[i] = rc;
                    r[i + 1] = re;
                }
                CsAction::CenterOnly => r[i] = capacity(shares[cell][k] * s[i]),
            }
        }
    }
    let scale = params.scale();
    per_user(ch, SchemeId::NomaCs, |_, i| (r[i] * scale, 1.0))
}

/// Exhaustive search over the four BS action pairs: the largest sum rate
/// such that every scheduled edge user reaches `qos_min_edge_rate`
/// (bits/s/Hz). With a positive QoS, a pair that schedules no edge user at
/// all does not count as meeting it. When no pair meets the QoS, the best
/// unconstrained pair is used and the result is flagged.
pub fn noma_cs_decision(
    ch: &MimoNetworkChannel,
    qos_min_edge_rate: f64,
    params: &SchemeParams,
) -> Result<([CsAction; 2], SchemeResult)> {
    let t = zf_terms(ch)?;
    let conv = params.rate_convention;
    let mut best: Option<([CsAction; 2], SchemeResult, bool)> = None;
    for a0 in CsAction::BOTH {
        for a1 in CsAction::BOTH {
            let actions = [a0, a1];
            let res = cs_rates_from(ch, &t, actions, params);
            let serves_edges = actions.contains(&CsAction::Noma);
            let feasible = (serves_edges || qos_min_edge_rate <= 0.0)
                && res
                    .rates
                    .iter()
                    .filter(|r| r.user.class == UserClass::Edge && actions[r.user.cell] == CsAction::Noma)
                    .all(|r| conv.to_bits_per_hz(r.rate) >= qos_min_edge_rate);
            let better = match &best {
                None => true,
                Some((_, b, bf)) => (feasible && !bf) || (feasible == *bf && res.sum_rate() > b.sum_rate()),
            };
            if better {
                best = Some((actions, res, feasible));
            }
        }
    }
    let (actions, mut res, feasible) = best.expect("four candidates");
    if !feasible {
        log::debug!("NOMA-CS: no action pair meets the edge QoS, using the max-sum-rate pair");
        res.qos_violated = true;
    }
    Ok((actions, res))
}

pub fn noma_cs_schedule(ch: &MimoNetworkChannel, qos_min_edge_rate: f64, params: &SchemeParams) -> Result<SchemeResult> {
    noma_cs_decision(ch, qos_min_edge_rate, params).map(|(_, r)| r)
}

/// Cluster `k` of both cells forms a JT/DCS group; the two edge users take
/// turns as the group's common user, each for half of the time.
fn grouped(
    ch: &MimoNetworkChannel,
    params: &SchemeParams,
    scheme: SchemeId,
    rates: impl Fn(&super::TwoCellScalarChannels) -> RatePoint,
) -> Result<SchemeResult> {
    let c = ch.clusters() as f64;
    let w = params.weak_user_power_share;
    let (p_center, p_edge) = ((1.0 - w) / c, w / c);
    let mut acc = vec![0.0; 4 * ch.clusters()];
    for k in 0..ch.clusters() {
        for common in 0..2 {
            let view = ch.scalar_view(k, common, p_center, p_edge)?;
            let p = rates(&view);
            acc[ch.index(UserId::new(0, k, UserClass::Center))] += 0.5 * p.r1;
            acc[ch.index(UserId::new(1, k, UserClass::Center))] += 0.5 * p.r2;
            acc[ch.index(UserId::new(common, k, UserClass::Edge))] += 0.5 * p.edge.unwrap_or(0.0);
        }
    }
    let scale = params.scale();
    Ok(per_user(ch, scheme, |u, i| {
        let fraction = if u.class == UserClass::Edge { 0.5 } else { 1.0 };
        (acc[i] * scale, fraction)
    }))
}

pub fn noma_jt_network(ch: &MimoNetworkChannel, params: &SchemeParams) -> Result<SchemeResult> {
    grouped(ch, params, SchemeId::NomaJt, noma_jt_rates)
}

pub fn noma_dcs_network(ch: &MimoNetworkChannel, params: &SchemeParams) -> Result<SchemeResult> {
    grouped(ch, params, SchemeId::NomaDcs, |v| noma_dcs_rates(v).1)
}
