//! Best responses, Nash verification and the structure of extreme-price
//! equilibria.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::game::{AuctionGame, Role, Variant};
use crate::scalar::{max_of, Scalar, Q};
use crate::strategy::{support, StrategyProfile};
use crate::valuation::ValuationProfile;

/// Outcome of a Nash check.
#[derive(Debug, Clone, PartialEq)]
pub struct NashReport<T = Q> {
    pub is_nash: bool,
    /// Largest utility shortfall of a supported bid against the best bid.
    pub max_regret: T,
    pub separating_bid: Option<usize>,
    pub efficient: bool,
    pub payoffs: (T, T),
}

/// The payoff-determinant bid of an equilibrium and whether the high-value
/// agent always receives the object.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeparatingBid {
    pub p: usize,
    pub efficient: bool,
}

/// Every bid of `role` whose expected utility against `opp` is within `tol`
/// of the best one.
pub fn best_response_set<T: Scalar>(
    game: &AuctionGame,
    role: Role,
    opp: &[T],
    tol: T,
) -> Result<Vec<usize>> {
    let utils = game.utilities(role, opp)?;
    let best = max_of(&utils);
    Ok(utils
        .iter()
        .enumerate()
        .filter(|(_, &u)| !(best - u > tol))
        .map(|(b, _)| b)
        .collect())
}

/// Largest regret over both agents and all supported bids.
pub fn max_regret<T: Scalar>(game: &AuctionGame, profile: &StrategyProfile<T>) -> Result<T> {
    game.check_len(&profile.low)?;
    game.check_len(&profile.high)?;
    let mut worst = T::zero();
    for role in Role::BOTH {
        let utils = game.utilities_unchecked(role, profile.get(role.other()));
        let best = max_of(&utils);
        for b in support(profile.get(role)) {
            let r = best - utils[b];
            if r > worst {
                worst = r;
            }
        }
    }
    Ok(worst)
}

pub fn is_nash<T: Scalar>(
    game: &AuctionGame,
    profile: &StrategyProfile<T>,
    tol: T,
) -> Result<NashReport<T>> {
    let regret = max_regret(game, profile)?;
    let is_nash = !(regret > tol);
    let sep = if is_nash {
        separating_bid(game, profile).ok()
    } else {
        None
    };
    Ok(NashReport {
        is_nash,
        max_regret: regret,
        separating_bid: sep.map(|s| s.p),
        efficient: sep.is_some_and(|s| s.efficient),
        payoffs: game.payoffs(profile),
    })
}

/// Locates the bid `p` in the Nash range separating the two supports:
/// `supp(low) ⊆ {0..p}` and `supp(high) ⊆ {p..p_bar}`, with `p` supported by
/// the high agent in the winner-bid auction and by the low agent in the
/// loser-bid auction.
pub fn separating_bid<T: Scalar>(
    game: &AuctionGame,
    profile: &StrategyProfile<T>,
) -> Result<SeparatingBid> {
    game.check_len(&profile.low)?;
    game.check_len(&profile.high)?;
    let p = match game.variant() {
        Variant::WinnerBid => support(&profile.high).next(),
        Variant::LoserBid => support(&profile.low).last(),
    }
    .ok_or(Error::NoSeparatingBid)?;
    let low_ok = support(&profile.low).all(|b| b <= p);
    let high_ok = support(&profile.high).all(|b| b >= p);
    if !low_ok || !high_ok || !game.profile().nash_range().contains(&p) {
        return Err(Error::NoSeparatingBid);
    }
    Ok(SeparatingBid {
        p,
        efficient: game.prob_low_receives(profile).negligible(),
    })
}

/// Pure bid pairs `(low, high)` from which neither agent gains by deviating,
/// found by exhaustive exact scan.
pub fn pure_nash_bids(game: &AuctionGame) -> Vec<(usize, usize)> {
    let n = game.num_bids();
    // best[role][opponent bid]
    let best: [Vec<Q>; 2] = Role::BOTH.map(|role| {
        (0..n)
            .map(|theirs| {
                (0..n)
                    .map(|mine| game.payoff(role, mine, theirs))
                    .max()
                    .expect("bid set is non-empty")
            })
            .collect()
    });
    let mut out = Vec::new();
    for low in 0..n {
        for high in 0..n {
            if game.payoff(Role::Low, low, high) == best[0][high]
                && game.payoff(Role::High, high, low) == best[1][low]
            {
                out.push((low, high));
            }
        }
    }
    out
}

pub fn enumerate_pure_nash(game: &AuctionGame) -> Vec<StrategyProfile<Q>> {
    let n = game.num_bids();
    pure_nash_bids(game)
        .into_iter()
        .map(|(l, h)| StrategyProfile::pure(n, l, h))
        .collect()
}

/// Payoff pairs `(pi_low, pi_high)` of the efficient equilibria:
/// `(c_low + ES - t, c_high + t)` for `t` in `0..=ES`.
pub fn efficient_nash_payoffs(profile: &ValuationProfile) -> Vec<(u32, u32)> {
    let es = profile.equity_surplus();
    (0..=es)
        .map(|t| (profile.c_low() + es - t, profile.c_high() + t))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::strategy::{point_mass, uniform};
    use alloc::vec;

    fn game(vl: u32, vh: u32, pb: u32, variant: Variant) -> AuctionGame {
        AuctionGame::new(ValuationProfile::new(vl, vh, pb).unwrap(), variant)
    }

    #[test]
    fn best_responses() {
        let g = game(4, 8, 6, Variant::WinnerBid);
        let zero = q(0, 1);
        let br = |role, bid| best_response_set(&g, role, &point_mass::<Q>(7, bid), zero).unwrap();
        assert_eq!(br(Role::High, 1), vec![2]);
        // bids 0, 1 and the tie at 2 all give the low agent 2
        assert_eq!(br(Role::Low, 2), vec![0, 1, 2]);
        let all = best_response_set(&g, Role::Low, &uniform::<f64>(7), f64::INFINITY).unwrap();
        assert_eq!(all, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn nash_examples() {
        let g = game(4, 8, 6, Variant::WinnerBid);
        let zero = q(0, 1);
        let r = is_nash(&g, &StrategyProfile::pure(7, 1, 2), zero).unwrap();
        assert!(r.is_nash);
        assert_eq!(r.payoffs, (q(2, 1), q(6, 1)));
        assert_eq!(r.separating_bid, Some(2));
        assert!(r.efficient);

        let r = is_nash(&g, &StrategyProfile::pure(7, 0, 2), zero).unwrap();
        assert!(!r.is_nash);
        assert_eq!(r.max_regret, q(1, 1));
        assert_eq!(r.separating_bid, None);
    }

    #[test]
    fn separating_bid_examples() {
        let g = game(4, 8, 6, Variant::WinnerBid);
        let s = separating_bid(&g, &StrategyProfile::<Q>::pure(7, 3, 4)).unwrap();
        assert_eq!(
            s,
            SeparatingBid {
                p: 4,
                efficient: true
            }
        );
        assert_eq!(
            separating_bid(&g, &StrategyProfile::<Q>::uniform(7)),
            Err(Error::NoSeparatingBid)
        );
    }

    #[test]
    fn pure_nash_enumeration() {
        let wb = game(4, 8, 6, Variant::WinnerBid);
        assert_eq!(pure_nash_bids(&wb), vec![(1, 2), (2, 3), (3, 4)]);
        let lb = game(4, 8, 6, Variant::LoserBid);
        let seps: Vec<usize> = enumerate_pure_nash(&lb)
            .iter()
            .map(|s| separating_bid(&lb, s).unwrap().p)
            .collect();
        assert_eq!(seps, vec![2, 3, 4]);
    }

    #[test]
    fn equal_values_split_evenly() {
        let g = game(4, 4, 4, Variant::WinnerBid);
        let all = enumerate_pure_nash(&g);
        assert!(!all.is_empty());
        for s in all {
            assert_eq!(g.payoffs(&s), (q(2, 1), q(2, 1)));
        }
    }

    #[test]
    fn efficient_payoff_sets() {
        let p = |a, b| ValuationProfile::with_min_cap(a, b).unwrap();
        assert_eq!(
            efficient_nash_payoffs(&p(4, 8)),
            vec![(4, 4), (3, 5), (2, 6)]
        );
        assert_eq!(efficient_nash_payoffs(&p(6, 6)), vec![(3, 3)]);
        let s = efficient_nash_payoffs(&p(4, 16));
        assert_eq!(s.len(), 7);
        assert_eq!((s[0], s[6]), ((8, 8), (2, 14)));
    }

    #[test]
    fn float_profiles_use_support_threshold() {
        let g = game(4, 8, 6, Variant::WinnerBid);
        let mut low = point_mass::<f64>(7, 1);
        low[1] -= 1e-12;
        low[6] = 1e-12;
        let prof = StrategyProfile::new(low, point_mass(7, 2)).unwrap();
        let r = is_nash(&g, &prof, 1e-9).unwrap();
        assert!(r.is_nash);
        assert_eq!(r.separating_bid, Some(2));
        assert!(r.efficient);
    }
}
