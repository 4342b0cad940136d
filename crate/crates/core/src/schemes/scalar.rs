//! Closed-form three-user rates of NOMA-JT and NOMA-DCS.

use super::TwoCellScalarChannels;
use crate::rate::{capacity, RatePoint};

/// Both BSs send the common edge message (Alamouti) superposed on their own
/// center message. Center users remove the edge message first, so it must
/// be decodable at both centers and at the edge user.
pub fn noma_jt_rates(ch: &TwoCellScalarChannels) -> RatePoint {
    let (p, pc) = (ch.p_center, ch.p_edge);
    let r1 = capacity(ch.g11 * p / (ch.g12 * p + 1.0));
    let r2 = capacity(ch.g22 * p / (ch.g21 * p + 1.0));
    let common = |g: f64| capacity(g * pc / (g * p + 1.0));
    let rc = common(ch.g11 + ch.g12)
        .min(common(ch.g21 + ch.g22))
        .min(common(ch.ge1 + ch.ge2));
    RatePoint::with_edge(r1, r2, rc)
}

/// Serving BS (1 or 2) of the edge user: the stronger link, ties to BS 1.
pub fn dcs_serving_bs(ch: &TwoCellScalarChannels) -> usize {
    if ch.ge2 > ch.ge1 {
        2
    } else {
        1
    }
}

/// Only the serving BS superposes the edge message on its center message;
/// the other BS sends its center message alone. Returns the serving BS and
/// `(R1, R2, Rc)`.
pub fn noma_dcs_rates(ch: &TwoCellScalarChannels) -> (usize, RatePoint) {
    let s = dcs_serving_bs(ch);
    let pt = if s == 2 { *ch } else { ch.relabeled() };
    let (p, pc) = (pt.p_center, pt.p_edge);
    // written for serving BS 2; BS 1 is the center-only cell
    let r1 = capacity(pt.g11 * p / (pt.g12 * (p + pc) + 1.0));
    let r2 = capacity(pt.g22 * p / (pt.g21 * p + 1.0));
    let at_center = capacity(pt.g22 * pc / (pt.g22 * p + pt.g21 * p + 1.0));
    let at_edge = capacity(pt.ge2 * pc / (pt.ge2 * p + pt.ge1 * p + 1.0));
    let rc = at_center.min(at_edge);
    let point = if s == 2 {
        RatePoint::with_edge(r1, r2, rc)
    } else {
        RatePoint::with_edge(r2, r1, rc)
    };
    (s, point)
}
