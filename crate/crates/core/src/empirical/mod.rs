//! Empirical equilibria: payoff bounds, witness sequences and related
//! checks.

pub mod bounds;
pub mod transfer;
pub mod witness;

pub use bounds::{
    allowed_bids, classify_payoff, BoundCase, Classification, EmpiricalBounds, Thresholds,
};
pub use transfer::{transfer_equilibrium, TransferReport};
pub use witness::{
    construct_witness, default_witness_schedule, plan_witness, witness_sequence, LimitCheck,
    Witness, WitnessCase, WitnessConfig, WitnessPlan, WitnessSequence,
};

use crate::error::{Error, Result};
use crate::game::{AuctionGame, Role, Variant};
use crate::scalar::Q;
use crate::strategy::StrategyProfile;
use crate::valuation::ValuationProfile;

/// Winner-bid gain of bidding below `r` over bidding `d >= r`, when the
/// co-player bids `r`: `r - U_role(d | r)`.
pub fn delta(game: &AuctionGame, role: Role, r: usize, d: usize) -> Result<Q> {
    if game.variant() != Variant::WinnerBid {
        return Err(Error::UnsupportedVariant(game.variant()));
    }
    game.check_bid(d)?;
    if r > d {
        return Err(Error::DeltaOrder { r, d });
    }
    Ok(Q::from_integer(r as i128) - game.payoff(role, d, r))
}

/// The pure equilibrium at the extreme of the allowed set: winner-bid
/// `(delta_{c_low - 1}, delta_{c_low})`, loser-bid
/// `(delta_{c_high}, delta_{c_high + 1})`.
pub fn pure_empirical(profile: &ValuationProfile, variant: Variant) -> Result<StrategyProfile<Q>> {
    if profile.equal_values() {
        return Err(Error::EqualValuations);
    }
    let n = profile.num_bids();
    let (cl, ch) = (profile.c_low() as usize, profile.c_high() as usize);
    Ok(match variant {
        Variant::WinnerBid => StrategyProfile::pure(n, cl - 1, cl),
        Variant::LoserBid => StrategyProfile::pure(n, ch, ch + 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nash::is_nash;
    use crate::scalar::q;

    fn wb(vl: u32, vh: u32) -> AuctionGame {
        AuctionGame::new(
            ValuationProfile::with_min_cap(vl, vh).unwrap(),
            Variant::WinnerBid,
        )
    }

    #[test]
    fn delta_examples() {
        let g = wb(4, 16);
        assert_eq!(delta(&g, Role::Low, 3, 3), Ok(q(1, 1)));
        assert_eq!(delta(&g, Role::Low, 1, 3), Ok(q(0, 1)));
        assert_eq!(
            delta(&g, Role::Low, 5, 3),
            Err(Error::DeltaOrder { r: 5, d: 3 })
        );
        let lb = AuctionGame::new(*g.profile(), Variant::LoserBid);
        assert!(delta(&lb, Role::Low, 1, 3).is_err());
    }

    #[test]
    fn delta_closed_forms() {
        // Delta_l(d, d) = d - c_l and Delta_l(r, d) = 2 (d - c_l) - (d - r)
        let g = wb(8, 20);
        let cl = 4;
        for d in 0..g.num_bids() {
            let t = d as i128 - cl;
            assert_eq!(delta(&g, Role::Low, d, d).unwrap(), q(t, 1));
            for r in 0..d {
                let n = (d - r) as i128;
                assert_eq!(delta(&g, Role::Low, r, d).unwrap(), q(2 * t - n, 1));
            }
        }
    }

    #[test]
    fn pure_empirical_profiles() {
        let p = ValuationProfile::new(4, 8, 6).unwrap();
        assert_eq!(
            pure_empirical(&p, Variant::WinnerBid).unwrap(),
            StrategyProfile::pure(7, 1, 2)
        );
        assert_eq!(
            pure_empirical(&p, Variant::LoserBid).unwrap(),
            StrategyProfile::pure(7, 4, 5)
        );
        for variant in [Variant::WinnerBid, Variant::LoserBid] {
            let s = pure_empirical(&p, variant).unwrap();
            let g = AuctionGame::new(p, variant);
            assert!(is_nash(&g, &s, q(0, 1)).unwrap().is_nash);
        }
    }
}
