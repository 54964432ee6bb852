//! Closed-form bounds on the payoff-determinant bids of efficient empirical
//! equilibria.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::game::Variant;
use crate::scalar::{q, Q};
use crate::valuation::ValuationProfile;

/// Which branch of the bound applies to a valuation profile.
///
/// Loser-bid labels are those of the winner-bid auction after reflecting
/// bids about the cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundCase {
    /// `v_low == v_high`: the only equilibrium payoff splits the value.
    EqualValues,
    /// `ES <= 2`: only the extreme bid of the Nash range survives.
    SmallSurplus,
    /// The low value is close to the bottom of the bid range (winner-bid:
    /// `v_low <= 3 v_high / 8`).
    FarApart,
    /// Cutoff `c_low + ES/5 + 4/5` (winner-bid), inclusive.
    WeakCutoff,
    /// Same cutoff, exclusive.
    StrictCutoff,
}

impl BoundCase {
    pub fn label(self) -> &'static str {
        match self {
            BoundCase::EqualValues => "equal_values",
            BoundCase::SmallSurplus => "es_le_2",
            BoundCase::FarApart => "far_apart",
            BoundCase::WeakCutoff => "weak_cutoff",
            BoundCase::StrictCutoff => "strict_cutoff",
        }
    }
}

impl fmt::Display for BoundCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The two case-selection thresholds evaluated at a profile.
///
/// Winner-bid: `3 v_high / 8` and `7 v_high / 12 - 7/6`, compared with
/// `v_low`. Loser-bid: `c_low + 5 (p_bar - c_low) / 8` and
/// `p_bar - 7 (p_bar - c_low) / 12 + 7/12`, compared with `c_high`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Thresholds {
    pub far_apart: Q,
    pub strict: Q,
}

/// Payoff-determinant bids of efficient empirical equilibria.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalBounds {
    pub variant: Variant,
    pub profile: ValuationProfile,
    pub case: BoundCase,
    /// Allowed bids in increasing order.
    pub allowed: Vec<usize>,
    /// Bid cutoff of the active case: an upper bound on `p` for the
    /// winner-bid auction, a lower bound for the loser-bid auction.
    pub cutoff: Q,
    pub strict: bool,
    pub thresholds: Thresholds,
}

impl EmpiricalBounds {
    pub fn contains(&self, p: usize) -> bool {
        self.allowed.contains(&p)
    }

    /// Whether `p` satisfies the cutoff, ignoring the Nash range.
    pub fn meets_cutoff(&self, p: usize) -> bool {
        let p = Q::from_integer(p as i128);
        match (self.variant, self.strict) {
            (Variant::WinnerBid, false) => p <= self.cutoff,
            (Variant::WinnerBid, true) => p < self.cutoff,
            (Variant::LoserBid, false) => p >= self.cutoff,
            (Variant::LoserBid, true) => p > self.cutoff,
        }
    }

    /// Payoff pairs `(pi_low, pi_high)` of the allowed equilibria.
    pub fn payoffs(&self) -> Vec<(u32, u32)> {
        let vh = self.profile.v_high();
        self.allowed
            .iter()
            .map(|&p| (p as u32, vh - p as u32))
            .collect()
    }
}

fn int(x: u32) -> Q {
    Q::from_integer(x as i128)
}

/// Winner-bid case and cutoff in terms of `(c_low, c_high)`.
fn winner_bid_rule(cl: Q, ch: Q) -> (BoundCase, Q, bool, Thresholds) {
    let vl = cl * 2;
    let vh = ch * 2;
    let es = ch - cl;
    let thresholds = Thresholds {
        far_apart: vh * q(3, 8),
        strict: vh * q(7, 12) - q(7, 6),
    };
    let fifth = cl + es / 5 + q(4, 5);
    let (case, cutoff, strict) = if es <= q(2, 1) {
        (BoundCase::SmallSurplus, cl, false)
    } else if vl <= thresholds.far_apart {
        (BoundCase::FarApart, ch / 2 + q(1, 2), false)
    } else if vl < thresholds.strict {
        (BoundCase::WeakCutoff, fifth, false)
    } else {
        (BoundCase::StrictCutoff, fifth, true)
    };
    (case, cutoff, strict, thresholds)
}

/// Evaluates the empirical-equilibrium bound for `variant` at `profile`.
///
/// The loser-bid rule is the winner-bid rule applied to the reflected
/// game with values `(2 p_bar - v_high, 2 p_bar - v_low)` and bids
/// `p -> p_bar - p`.
pub fn allowed_bids(profile: &ValuationProfile, variant: Variant) -> EmpiricalBounds {
    let cl = int(profile.c_low());
    let ch = int(profile.c_high());
    let pb = int(profile.p_bar());
    let (case, cutoff, strict, thresholds) = if profile.equal_values() {
        let thresholds = Thresholds {
            far_apart: cl,
            strict: cl,
        };
        (BoundCase::EqualValues, cl, false, thresholds)
    } else {
        match variant {
            Variant::WinnerBid => winner_bid_rule(cl, ch),
            Variant::LoserBid => {
                let (case, cutoff, strict, _) = winner_bid_rule(pb - ch, pb - cl);
                let thresholds = Thresholds {
                    far_apart: cl + (pb - cl) * q(5, 8),
                    strict: pb - (pb - cl) * q(7, 12) + q(7, 12),
                };
                (case, pb - cutoff, strict, thresholds)
            }
        }
    };
    let mut bounds = EmpiricalBounds {
        variant,
        profile: *profile,
        case,
        allowed: Vec::new(),
        cutoff,
        strict,
        thresholds,
    };
    bounds.allowed = profile
        .nash_range()
        .filter(|&p| match case {
            BoundCase::EqualValues => true,
            BoundCase::SmallSurplus => match variant {
                Variant::WinnerBid => p == profile.c_low() as usize,
                Variant::LoserBid => p == profile.c_high() as usize,
            },
            _ => bounds.meets_cutoff(p),
        })
        .collect();
    bounds
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub p: usize,
    pub empirical: bool,
    pub case: BoundCase,
    pub cutoff: Q,
    pub strict: bool,
    pub variant: Variant,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.empirical {
            "empirical"
        } else {
            "not empirical"
        };
        let op = match (self.variant, self.strict) {
            (_, _)
                if self.case == BoundCase::EqualValues || self.case == BoundCase::SmallSurplus =>
            {
                "="
            }
            (Variant::WinnerBid, false) => "<=",
            (Variant::WinnerBid, true) => "<",
            (Variant::LoserBid, false) => ">=",
            (Variant::LoserBid, true) => ">",
        };
        write!(
            f,
            "p = {}: {} (case {}, requires p {} {})",
            self.p, verdict, self.case, op, self.cutoff
        )
    }
}

/// Whether the efficient equilibria with payoff-determinant bid `p` are
/// empirical equilibria.
pub fn classify_payoff(
    profile: &ValuationProfile,
    variant: Variant,
    p: usize,
) -> Result<Classification> {
    if !profile.nash_range().contains(&p) {
        return Err(Error::NotInNashRange { p });
    }
    let b = allowed_bids(profile, variant);
    Ok(Classification {
        p,
        empirical: b.contains(p),
        case: b.case,
        cutoff: b.cutoff,
        strict: b.strict,
        variant,
    })
}
