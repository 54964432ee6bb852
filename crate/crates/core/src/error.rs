use crate::game::Variant;
use crate::scalar::Q;

/// Errors raised by the auction, equilibrium and witness computations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("valuation {0} is not even")]
    OddValuation(u32),
    #[error("valuations must satisfy 2 < v_low <= v_high, got ({low}, {high})")]
    ValuationOrder { low: u32, high: u32 },
    #[error("bid cap {p_bar} is below v_high/2 + 2 = {min}")]
    BidCapTooLow { p_bar: u32, min: u32 },
    #[error("tie-break weight {0} is outside [1/2, 1]")]
    GammaOutOfRange(Q),
    #[error("bid {bid} is outside 0..={p_bar}")]
    BidOutOfRange { bid: usize, p_bar: usize },
    #[error("strategy vector has {got} entries, the game has {expected} bids")]
    LengthMismatch { got: usize, expected: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(&'static str),
    #[error("payoff vector contains a non-finite entry")]
    NonFinitePayoff,
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error(
        "no separating bid: the profile is not a Nash equilibrium of an extreme-price auction"
    )]
    NoSeparatingBid,
    #[error("delta requires r <= d, got r = {r}, d = {d}")]
    DeltaOrder { r: usize, d: usize },
    #[error("operation is only defined for the {0} auction")]
    UnsupportedVariant(Variant),
    #[error("operation requires uniform tie-breaking (gamma = 1/2)")]
    UnsupportedTieRule,
    #[error("operation requires v_low < v_high")]
    EqualValuations,
    #[error("bid {p} is outside the Nash range")]
    NotInNashRange { p: usize },
    #[error("bid {p} is not an empirical-equilibrium payoff-determinant bid")]
    BidNotAllowed { p: usize },
    #[error("fixed-point iteration did not converge: residual {residual:e} after {iterations} iterations")]
    NotConverged { residual: f64, iterations: usize },
    #[error("witness is not weakly payoff monotone ({violations} violations); decrease epsilon or increase t")]
    NotMonotone { violations: usize },
    #[error("witness sequence broken at element {index}: {reason}")]
    SequenceBroken { index: usize, reason: &'static str },
    #[error("rounded path limit is not a Nash equilibrium (max regret {max_regret:e})")]
    LimitNotNash { max_regret: f64 },
    #[error("transfer check rejected its input: {0}")]
    TransferRejected(&'static str),
    #[error("quantal response path is empty")]
    EmptyPath,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
