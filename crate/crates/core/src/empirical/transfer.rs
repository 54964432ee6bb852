//! Moving an efficient equitable equilibrium between valuation profiles.

use crate::error::{Error, Result};
use crate::game::AuctionGame;
use crate::nash::is_nash;
use crate::scalar::{q, Q};
use crate::strategy::StrategyProfile;
use crate::valuation::ValuationProfile;

#[derive(Debug, Clone, PartialEq)]
pub struct TransferReport {
    /// `(2 (c_low + t), 2 (c_low + t) + 2)` with the original cap.
    pub v_star: ValuationProfile,
    pub nash_at_v: bool,
    pub pi_low: Q,
    /// `c_low + t <= pi_low <= c_low + t + 1`.
    pub in_band: bool,
    pub holds: bool,
}

/// Checks that `profile`, an efficient equilibrium of the game with values
/// `v* = (2 (c_low + t), 2 (c_low + t) + 2)` in which each agent gets at
/// least half its value, is also an equilibrium of `game` with the low
/// agent's payoff in `[c_low + t, c_low + t + 1]`.
///
/// Returns [`Error::TransferRejected`] when `profile` does not have the
/// required properties at `v*`.
pub fn transfer_equilibrium(
    game: &AuctionGame,
    profile: &StrategyProfile<Q>,
    t: u32,
) -> Result<TransferReport> {
    let v = game.profile();
    if v.equal_values() {
        return Err(Error::EqualValuations);
    }
    if t + 1 > v.equity_surplus() {
        return Err(Error::InvalidConfig("transfer needs t + 1 <= ES"));
    }
    game.check_len(&profile.low)?;
    game.check_len(&profile.high)?;
    let vl_star = 2 * (v.c_low() + t);
    let v_star = ValuationProfile::new(vl_star, vl_star + 2, v.p_bar())?;
    let star = AuctionGame::with_gamma(v_star, game.variant(), game.gamma())?;
    let zero = q(0, 1);
    let at_star = is_nash(&star, profile, zero)?;
    if !at_star.is_nash {
        return Err(Error::TransferRejected(
            "profile is not a Nash equilibrium at v*",
        ));
    }
    if star.prob_low_receives(profile) != zero {
        return Err(Error::TransferRejected("profile is not efficient at v*"));
    }
    let (pl, ph) = at_star.payoffs;
    let half = |x: u32| Q::from_integer(x as i128);
    if pl < half(v_star.c_low()) || ph < half(v_star.c_high()) {
        return Err(Error::TransferRejected("profile is not equitable at v*"));
    }
    let at_v = is_nash(game, profile, zero)?;
    let pi_low = at_v.payoffs.0;
    let lo = half(v.c_low() + t);
    let in_band = lo <= pi_low && pi_low <= lo + 1;
    Ok(TransferReport {
        v_star,
        nash_at_v: at_v.is_nash,
        pi_low,
        in_band,
        holds: at_v.is_nash && in_band,
    })
}
