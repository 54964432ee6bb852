mod common;

use std::collections::BTreeSet;

use common::*;
use epa_core::nash::{
    efficient_nash_payoffs, enumerate_pure_nash, is_nash, pure_nash_bids, separating_bid,
};
use epa_core::{q, AuctionGame, Role, StrategyProfile, ValuationProfile, Variant, Q};
use proptest::prelude::*;

fn value(v: u32) -> Q {
    Q::from_integer(v as i128)
}

proptest! {
    #[test]
    fn pure_outcomes_conserve_value(g in game(), bl in 0usize..20, bh in 0usize..20) {
        let n = g.num_bids();
        let (bl, bh) = (bl % n, bh % n);
        let prof = g.profile();
        let total = g.payoff(Role::Low, bl, bh) + g.payoff(Role::High, bh, bl);
        let expected = if bl > bh {
            value(prof.v_low())
        } else if bh > bl {
            value(prof.v_high())
        } else {
            g.gamma() * value(prof.v_high()) + (q(1, 1) - g.gamma()) * value(prof.v_low())
        };
        prop_assert_eq!(total, expected);
    }

    #[test]
    fn expected_utility_is_affine(
        (g, a, b) in game().prop_flat_map(|g| {
            let n = g.num_bids();
            (Just(g), rational_dist(n), rational_dist(n))
        }),
        k in 0i128..=10,
        bid in 0usize..20,
    ) {
        let alpha = q(k, 10);
        let bid = bid % g.num_bids();
        let mix: Vec<Q> = a.iter().zip(&b).map(|(x, y)| alpha * x + (q(1, 1) - alpha) * y).collect();
        for role in Role::BOTH {
            let lhs = g.expected_utility(role, bid, &mix).unwrap();
            let rhs = alpha * g.expected_utility(role, bid, &a).unwrap()
                + (q(1, 1) - alpha) * g.expected_utility(role, bid, &b).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn reflected_game_preserves_utilities(
        (g, low, high) in game().prop_flat_map(|g| {
            let n = g.num_bids();
            (Just(g), rational_dist(n), rational_dist(n))
        }),
    ) {
        let m = g.mirror();
        let profile = StrategyProfile::new(low, high).unwrap();
        let reflected = profile.mirror();
        let pb = g.p_bar();
        for role in Role::BOTH {
            let shift = value(g.profile().value(role)) - value(pb as u32);
            for bid in 0..g.num_bids() {
                let u = g.expected_utility(role, bid, profile.get(role.other())).unwrap();
                let u_m = m.expected_utility(role.other(), pb - bid, reflected.get(role)).unwrap();
                prop_assert_eq!(u, u_m + shift);
            }
        }
        prop_assert_eq!(m.mirror(), g);
        prop_assert_eq!(reflected.mirror(), profile);
    }

    #[test]
    fn reflection_maps_nash_to_nash(g in game()) {
        let m = g.mirror();
        let pb = g.p_bar();
        let here: BTreeSet<(usize, usize)> = pure_nash_bids(&g).into_iter().collect();
        let there: BTreeSet<(usize, usize)> = pure_nash_bids(&m)
            .into_iter()
            .map(|(l, h)| (pb - h, pb - l))
            .collect();
        prop_assert_eq!(here, there);
    }
}

fn separating_bids(game: &AuctionGame) -> BTreeSet<usize> {
    enumerate_pure_nash(game)
        .iter()
        .map(|s| separating_bid(game, s).unwrap().p)
        .collect()
}

#[test]
fn pure_equilibria_have_the_extreme_price_structure() {
    for prof in small_grid(16).into_iter().filter(|p| !p.equal_values()) {
        for gamma in [q(1, 2), q(3, 4), q(1, 1)] {
            for variant in [Variant::WinnerBid, Variant::LoserBid] {
                let g = AuctionGame::with_gamma(prof, variant, gamma).unwrap();
                let efficient = efficient_nash_payoffs(&prof);
                let equilibria = enumerate_pure_nash(&g);
                assert!(!equilibria.is_empty());
                for s in &equilibria {
                    let sep = separating_bid(&g, s).unwrap();
                    assert!(prof.nash_range().contains(&sep.p), "{prof:?} {variant}");
                    let (pl, ph) = g.payoffs(s);
                    let pair = (pl.to_integer() as u32, ph.to_integer() as u32);
                    if sep.efficient {
                        assert!(pl.is_integer() && ph.is_integer());
                        assert!(efficient.contains(&pair), "{prof:?} {variant} {pair:?}");
                    } else {
                        assert!(pl + ph >= value(prof.v_high() - 1));
                    }
                }
            }
        }
    }
}

#[test]
fn every_efficient_payoff_is_attained() {
    for prof in small_grid(20).into_iter().filter(|p| !p.equal_values()) {
        for variant in [Variant::WinnerBid, Variant::LoserBid] {
            let g = AuctionGame::new(prof, variant);
            let n = g.num_bids();
            let attained: BTreeSet<(u32, u32)> = prof
                .nash_range()
                .map(|p| {
                    let s = match variant {
                        Variant::WinnerBid => StrategyProfile::<Q>::pure(n, p - 1, p),
                        Variant::LoserBid => StrategyProfile::<Q>::pure(n, p, p + 1),
                    };
                    let report = is_nash(&g, &s, q(0, 1)).unwrap();
                    assert!(
                        report.is_nash && report.efficient,
                        "{prof:?} {variant} p = {p}"
                    );
                    let (pl, ph) = report.payoffs;
                    (pl.to_integer() as u32, ph.to_integer() as u32)
                })
                .collect();
            let expected: BTreeSet<(u32, u32)> =
                efficient_nash_payoffs(&prof).into_iter().collect();
            assert_eq!(attained, expected, "{prof:?} {variant}");
        }
    }
}

#[test]
fn variants_are_dual_on_symmetric_caps() {
    for vh in (4..=24).step_by(2) {
        for vl in (4..vh).step_by(2) {
            let Ok(prof) = ValuationProfile::with_symmetric_cap(vl, vh) else {
                continue;
            };
            let s = (prof.c_low() + prof.c_high()) as usize;
            let wb = separating_bids(&AuctionGame::new(prof, Variant::WinnerBid));
            let lb = separating_bids(&AuctionGame::new(prof, Variant::LoserBid));
            let reflected: BTreeSet<usize> = wb.iter().map(|p| s - p).collect();
            assert_eq!(lb, reflected, "({vl}, {vh})");
        }
    }
}
