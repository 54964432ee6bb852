//! The winner-bid and loser-bid auctions as finite two-player games.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::scalar::{q, Scalar, Q};
use crate::strategy::StrategyProfile;
use crate::valuation::ValuationProfile;

/// Which bid the object recipient transfers to the other agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// The recipient pays its own (winning) bid.
    WinnerBid,
    /// The recipient pays the losing bid.
    LoserBid,
}

impl Variant {
    pub fn other(self) -> Self {
        match self {
            Variant::WinnerBid => Variant::LoserBid,
            Variant::LoserBid => Variant::WinnerBid,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Variant::WinnerBid => "wb",
            Variant::LoserBid => "lb",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::WinnerBid => "winner-bid",
            Variant::LoserBid => "loser-bid",
        })
    }
}

/// Agent identified by the rank of its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Low,
    High,
}

impl Role {
    pub const BOTH: [Role; 2] = [Role::Low, Role::High];

    pub fn other(self) -> Self {
        match self {
            Role::Low => Role::High,
            Role::High => Role::Low,
        }
    }

    fn index(self) -> usize {
        match self {
            Role::Low => 0,
            Role::High => 1,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Low => "low",
            Role::High => "high",
        })
    }
}

/// A concrete extreme-price auction game.
///
/// Both agents bid in `{0, ..., p_bar}`. The strictly higher bidder receives
/// the object and transfers the winner bid (winner-bid) or the loser bid
/// (loser-bid) to the other agent. On a tie the high-value agent receives
/// the object with probability `gamma`. Utilities are quasi-linear: a
/// recipient gets `value - price`, the other agent gets `price`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuctionGame {
    profile: ValuationProfile,
    variant: Variant,
    gamma: Q,
    n: usize,
    exact: [Vec<Q>; 2],
    float: [Vec<f64>; 2],
}

impl AuctionGame {
    /// Game with uniform tie-breaking.
    pub fn new(profile: ValuationProfile, variant: Variant) -> Self {
        Self::build(profile, variant, q(1, 2))
    }

    pub fn with_gamma(profile: ValuationProfile, variant: Variant, gamma: Q) -> Result<Self> {
        if gamma < q(1, 2) || gamma > q(1, 1) {
            return Err(Error::GammaOutOfRange(gamma));
        }
        Ok(Self::build(profile, variant, gamma))
    }

    fn build(profile: ValuationProfile, variant: Variant, gamma: Q) -> Self {
        let n = profile.num_bids();
        let mut exact = [Vec::with_capacity(n * n), Vec::with_capacity(n * n)];
        for role in Role::BOTH {
            let value = Q::from_integer(profile.value(role) as i128);
            let receive_on_tie = match role {
                Role::High => gamma,
                Role::Low => q(1, 1) - gamma,
            };
            let table = &mut exact[role.index()];
            for mine in 0..n {
                for theirs in 0..n {
                    let price = match variant {
                        Variant::WinnerBid => mine.max(theirs),
                        Variant::LoserBid => mine.min(theirs),
                    };
                    let price = Q::from_integer(price as i128);
                    let u = if mine > theirs {
                        value - price
                    } else if mine < theirs {
                        price
                    } else {
                        receive_on_tie * (value - price) + (q(1, 1) - receive_on_tie) * price
                    };
                    table.push(u);
                }
            }
        }
        let float = [
            exact[0].iter().map(|&u| u.to_f64()).collect(),
            exact[1].iter().map(|&u| u.to_f64()).collect(),
        ];
        Self {
            profile,
            variant,
            gamma,
            n,
            exact,
            float,
        }
    }

    pub fn profile(&self) -> &ValuationProfile {
        &self.profile
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn gamma(&self) -> Q {
        self.gamma
    }

    pub fn has_uniform_ties(&self) -> bool {
        self.gamma == q(1, 2)
    }

    pub fn num_bids(&self) -> usize {
        self.n
    }

    pub fn p_bar(&self) -> usize {
        self.n - 1
    }

    /// Utility of `role` when it bids `mine` and the other agent bids `theirs`.
    pub fn payoff(&self, role: Role, mine: usize, theirs: usize) -> Q {
        self.exact[role.index()][mine * self.n + theirs]
    }

    pub(crate) fn payoff_as<T: Scalar>(&self, role: Role, mine: usize, theirs: usize) -> T {
        let i = mine * self.n + theirs;
        T::pick(self.exact[role.index()][i], self.float[role.index()][i])
    }

    pub(crate) fn check_bid(&self, bid: usize) -> Result<()> {
        if bid >= self.n {
            return Err(Error::BidOutOfRange {
                bid,
                p_bar: self.p_bar(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_len<T>(&self, dist: &[T]) -> Result<()> {
        if dist.len() != self.n {
            return Err(Error::LengthMismatch {
                got: dist.len(),
                expected: self.n,
            });
        }
        Ok(())
    }

    /// Expected utility of `role` bidding `bid` against the distribution
    /// `opp` of the other agent.
    pub fn expected_utility<T: Scalar>(&self, role: Role, bid: usize, opp: &[T]) -> Result<T> {
        self.check_bid(bid)?;
        self.check_len(opp)?;
        Ok(self.utility_unchecked(role, bid, opp))
    }

    pub(crate) fn utility_unchecked<T: Scalar>(&self, role: Role, bid: usize, opp: &[T]) -> T {
        let mut total = T::zero();
        for (theirs, &w) in opp.iter().enumerate() {
            total = total + w * self.payoff_as::<T>(role, bid, theirs);
        }
        total
    }

    /// Expected utility of every bid of `role` against `opp`.
    pub fn utilities<T: Scalar>(&self, role: Role, opp: &[T]) -> Result<Vec<T>> {
        self.check_len(opp)?;
        Ok(self.utilities_unchecked(role, opp))
    }

    pub(crate) fn utilities_unchecked<T: Scalar>(&self, role: Role, opp: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|bid| self.utility_unchecked(role, bid, opp))
            .collect()
    }

    pub(crate) fn utilities_f64(&self, role: Role, opp: &[f64], out: &mut [f64]) {
        let table = &self.float[role.index()];
        for (bid, slot) in out.iter_mut().enumerate() {
            let row = &table[bid * self.n..(bid + 1) * self.n];
            *slot = row.iter().zip(opp).map(|(u, w)| u * w).sum();
        }
    }

    /// `U(a) - U(b)` accumulated outcome by outcome, so that tiny but
    /// strictly signed differences are not lost to cancellation.
    pub fn utility_gap<T: Scalar>(&self, role: Role, a: usize, b: usize, opp: &[T]) -> T {
        let mut total = T::zero();
        for (theirs, &w) in opp.iter().enumerate() {
            let d = self.payoff_as::<T>(role, a, theirs) - self.payoff_as::<T>(role, b, theirs);
            total = total + w * d;
        }
        total
    }

    /// Expected payoffs `(pi_low, pi_high)` under a profile.
    pub fn payoffs<T: Scalar>(&self, profile: &StrategyProfile<T>) -> (T, T) {
        let mut out = [T::zero(); 2];
        for role in Role::BOTH {
            let own = profile.get(role);
            let opp = profile.get(role.other());
            let mut total = T::zero();
            for (bid, &w) in own.iter().enumerate() {
                total = total + w * self.utility_unchecked(role, bid, opp);
            }
            out[role.index()] = total;
        }
        (out[0], out[1])
    }

    /// Probability that the low-value agent ends up with the object.
    pub fn prob_low_receives<T: Scalar>(&self, profile: &StrategyProfile<T>) -> T {
        let low_on_tie = T::from_q(q(1, 1) - self.gamma);
        let mut total = T::zero();
        for (bl, &wl) in profile.low.iter().enumerate() {
            for (bh, &wh) in profile.high.iter().enumerate() {
                if bl > bh {
                    total = total + wl * wh;
                } else if bl == bh {
                    total = total + wl * wh * low_on_tie;
                }
            }
        }
        total
    }

    /// The strategically equivalent game obtained by reflecting bids
    /// `b -> p_bar - b` and swapping the agents' roles.
    ///
    /// The reflected game uses the other variant, the same cap and tie rule,
    /// and values `(2 p_bar - v_high, 2 p_bar - v_low)`. For every bid,
    /// `U_role(b | s) = U'_{role.other()}(p_bar - b | s') + v_role - p_bar`
    /// where `s'` is the reflected co-player distribution.
    pub fn mirror(&self) -> AuctionGame {
        let p_bar = self.profile.p_bar();
        let profile = ValuationProfile::new(
            2 * p_bar - self.profile.v_high(),
            2 * p_bar - self.profile.v_low(),
            p_bar,
        )
        .expect("reflected valuations satisfy the profile invariants");
        Self::build(profile, self.variant.other(), self.gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::point_mass;

    fn wb48() -> AuctionGame {
        AuctionGame::new(ValuationProfile::new(4, 8, 6).unwrap(), Variant::WinnerBid)
    }

    #[test]
    fn construction_examples() {
        let g = wb48();
        assert_eq!(g.num_bids(), 7);
        let p = ValuationProfile::new(4, 8, 6).unwrap();
        assert_eq!(
            AuctionGame::with_gamma(p, Variant::WinnerBid, q(1, 4)),
            Err(Error::GammaOutOfRange(q(1, 4)))
        );
        assert!(AuctionGame::with_gamma(p, Variant::WinnerBid, q(1, 1)).is_ok());
        assert!(AuctionGame::with_gamma(p, Variant::WinnerBid, q(5, 4)).is_err());
    }

    #[test]
    fn expected_utility_examples() {
        let g = wb48();
        let d2 = point_mass::<Q>(7, 2);
        assert_eq!(g.expected_utility(Role::High, 3, &d2).unwrap(), q(5, 1));
        assert_eq!(g.expected_utility(Role::High, 2, &d2).unwrap(), q(4, 1));
        assert_eq!(g.expected_utility(Role::High, 1, &d2).unwrap(), q(2, 1));
        assert!(matches!(
            g.expected_utility(Role::High, 7, &d2),
            Err(Error::BidOutOfRange { .. })
        ));
    }

    #[test]
    fn loser_bid_outcomes() {
        let g = AuctionGame::new(ValuationProfile::new(4, 8, 6).unwrap(), Variant::LoserBid);
        // high bids 5 against 4: receives the object, pays the losing bid 4
        assert_eq!(g.payoff(Role::High, 5, 4), q(4, 1));
        assert_eq!(g.payoff(Role::Low, 4, 5), q(4, 1));
        // tie at 3
        assert_eq!(g.payoff(Role::High, 3, 3), q(4, 1));
        assert_eq!(g.payoff(Role::Low, 3, 3), q(2, 1));
    }

    #[test]
    fn gamma_one_gives_ties_to_high() {
        let p = ValuationProfile::new(4, 8, 6).unwrap();
        let g = AuctionGame::with_gamma(p, Variant::WinnerBid, q(1, 1)).unwrap();
        assert_eq!(g.payoff(Role::High, 2, 2), q(6, 1));
        assert_eq!(g.payoff(Role::Low, 2, 2), q(2, 1));
    }

    #[test]
    fn pure_outcomes_conserve_value() {
        for variant in [Variant::WinnerBid, Variant::LoserBid] {
            let g = AuctionGame::new(ValuationProfile::new(6, 12, 9).unwrap(), variant);
            for a in 0..g.num_bids() {
                for b in 0..g.num_bids() {
                    let total = g.payoff(Role::Low, a, b) + g.payoff(Role::High, b, a);
                    let expected = if a > b {
                        q(6, 1)
                    } else if a < b {
                        q(12, 1)
                    } else {
                        q(9, 1)
                    };
                    assert_eq!(total, expected, "{variant} low {a} high {b}");
                }
            }
        }
    }

    #[test]
    fn mirror_is_an_involution() {
        let g = AuctionGame::new(ValuationProfile::new(4, 10, 9).unwrap(), Variant::LoserBid);
        let m = g.mirror();
        assert_eq!(m.variant(), Variant::WinnerBid);
        assert_eq!(m.profile().v_low(), 8);
        assert_eq!(m.profile().v_high(), 14);
        assert_eq!(m.mirror(), g);
    }

    #[test]
    fn mirror_preserves_payoffs_up_to_constant() {
        let gamma = q(2, 3);
        let p = ValuationProfile::new(6, 10, 9).unwrap();
        for variant in [Variant::WinnerBid, Variant::LoserBid] {
            let g = AuctionGame::with_gamma(p, variant, gamma).unwrap();
            let m = g.mirror();
            let pb = g.p_bar();
            for role in Role::BOTH {
                let shift = Q::from_integer(p.value(role) as i128 - pb as i128);
                for a in 0..g.num_bids() {
                    for b in 0..g.num_bids() {
                        assert_eq!(
                            g.payoff(role, a, b),
                            m.payoff(role.other(), pb - a, pb - b) + shift
                        );
                    }
                }
            }
        }
    }
}
