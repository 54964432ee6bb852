#![allow(dead_code)]

use epa_core::{q, AuctionGame, ValuationProfile, Variant, Q};
use proptest::prelude::*;

/// `(v_low, v_high, p_bar)` with `4 <= v_low <= v_high` even and `p_bar`
/// between `c_high + 2` and `c_high + 6`.
pub fn valuations() -> impl Strategy<Value = ValuationProfile> {
    (2u32..=10, 0u32..=8, 2u32..=6).prop_map(|(cl, es, extra)| {
        let ch = cl + es;
        ValuationProfile::new(2 * cl, 2 * ch, ch + extra).unwrap()
    })
}

pub fn distinct_valuations() -> impl Strategy<Value = ValuationProfile> {
    valuations().prop_filter("v_low < v_high", |p| !p.equal_values())
}

pub fn variant() -> impl Strategy<Value = Variant> {
    prop_oneof![Just(Variant::WinnerBid), Just(Variant::LoserBid)]
}

pub fn gamma() -> impl Strategy<Value = Q> {
    (0i128..=4).prop_map(|k| q(4 + k, 8))
}

pub fn game() -> impl Strategy<Value = AuctionGame> {
    (valuations(), variant(), gamma())
        .prop_map(|(p, v, g)| AuctionGame::with_gamma(p, v, g).unwrap())
}

/// An exact distribution over `n` bids built from small integer weights.
pub fn rational_dist(n: usize) -> impl Strategy<Value = Vec<Q>> {
    proptest::collection::vec(0i128..=5, n)
        .prop_filter("some weight", |w| w.iter().any(|&x| x > 0))
        .prop_map(|w| {
            let total: i128 = w.iter().sum();
            w.into_iter().map(|x| q(x, total)).collect()
        })
}

/// A strictly positive floating-point distribution over `n` bids.
pub fn interior_dist(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.01f64..1.0, n).prop_map(|w| {
        let total: f64 = w.iter().sum();
        w.into_iter().map(|x| x / total).collect()
    })
}

/// Every profile with `v_high <= max_vh` and a cap of `c_high + 2` or
/// `c_low + c_high`.
pub fn small_grid(max_vh: u32) -> Vec<ValuationProfile> {
    let mut out = Vec::new();
    for vh in (4..=max_vh).step_by(2) {
        for vl in (4..=vh).step_by(2) {
            let (cl, ch) = (vl / 2, vh / 2);
            let mut caps = vec![ch + 2, cl + ch];
            caps.sort_unstable();
            caps.dedup();
            for pb in caps {
                if let Ok(p) = ValuationProfile::new(vl, vh, pb) {
                    out.push(p);
                }
            }
        }
    }
    out
}
