#![allow(dead_code)]

use std::sync::OnceLock;

use hyperseed::exactcircle::{Angle, PrecisionPolicy};
use hyperseed::induction::{construct, ConstructionState, SearchLimits};

/// The default-seed construction at depth 10, built once per test binary.
pub fn deep() -> &'static ConstructionState {
    static STATE: OnceLock<ConstructionState> = OnceLock::new();
    STATE.get_or_init(|| {
        construct(&Angle::normalize(1, 6), 10, PrecisionPolicy::default(), SearchLimits::default(), |_| {})
            .expect("default construction succeeds")
    })
}

/// The first `k` steps of the depth-10 state; a prefix of a valid state is itself valid.
pub fn prefix(k: usize) -> ConstructionState {
    let mut s = deep().clone();
    s.steps.truncate(k);
    s
}

pub fn small_policy() -> PrecisionPolicy {
    PrecisionPolicy { initial_bits: 512, ceiling_bits: 1 << 14 }
}

/// `2 sin(πt)` for `t = p/2^q`, in f64.
pub fn chord_f64(p: f64, q: i32) -> f64 {
    2.0 * (std::f64::consts::PI * p / 2f64.powi(q)).sin().abs()
}
