//! Weighted-sum HK optima from vertex enumeration against a simplex solve of
//! the same rate constraints.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use noma_core::ic::{hk_basic_solution, HkSplit, IcChannel};
use proptest::prelude::*;

fn c(x: f64) -> f64 {
    0.5 * (1.0 + x).log2()
}

/// Receiver 1 sees own private power a1·λ1, own common a1·(1−λ1), the
/// other common b1·(1−λ2) and treats the other private b1·λ2 as noise.
fn lp_optimum(a1: f64, a2: f64, b1: f64, b2: f64, l1: f64, l2: f64, w: f64) -> f64 {
    let mut p = Problem::new(OptimizationDirection::Maximize);
    let rp1 = p.add_var(w, (0.0, f64::INFINITY));
    let rc1 = p.add_var(w, (0.0, f64::INFINITY));
    let rp2 = p.add_var(1.0, (0.0, f64::INFINITY));
    let rc2 = p.add_var(1.0, (0.0, f64::INFINITY));
    let receivers = [
        ([(rp1, a1 * l1), (rc1, a1 * (1.0 - l1)), (rc2, b1 * (1.0 - l2))], 1.0 + b1 * l2),
        ([(rp2, a2 * l2), (rc2, a2 * (1.0 - l2)), (rc1, b2 * (1.0 - l1))], 1.0 + b2 * l1),
    ];
    for (streams, noise) in receivers {
        for mask in 1..8 {
            let chosen: Vec<_> = (0..3).filter(|k| mask & (1 << k) != 0).map(|k| streams[k]).collect();
            let power: f64 = chosen.iter().map(|s| s.1).sum();
            let terms: Vec<_> = chosen.iter().map(|s| (s.0, 1.0)).collect();
            p.add_constraint(&terms, ComparisonOp::Le, c(power / noise));
        }
    }
    p.solve().expect("bounded and feasible").objective()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]
    #[test]
    fn vertex_enumeration_matches_simplex(
        a1 in 0.1..100.0f64, a2 in 0.1..100.0f64, b1 in 0.0..100.0f64, b2 in 0.0..100.0f64,
        l1 in 0.0..=1.0f64, l2 in 0.0..=1.0f64, lw in -6.0..6.0f64,
    ) {
        let w = lw.exp2();
        let ch = IcChannel::new(a1, a2, b1, b2).unwrap();
        let r = hk_basic_solution(&ch, HkSplit::new(l1, l2).unwrap(), w).unwrap();
        let got = w * (r.rp1 + r.rc1) + r.rp2 + r.rc2;
        let want = lp_optimum(a1, a2, b1, b2, l1, l2, w);
        prop_assert!((got - want).abs() <= 1e-7 * want.max(1.0), "vertex {got} vs simplex {want}");
    }
}
