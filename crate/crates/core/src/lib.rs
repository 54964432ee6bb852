//! Extreme-price auctions for dissolving a jointly owned object: game
//! model, Nash and quantal-response equilibria, payoff monotonicity and
//! empirical-equilibrium bounds.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod empirical;
pub mod error;
pub mod fixed_point;
pub mod game;
pub mod monotonicity;
pub mod nash;
pub mod qre;
pub mod scalar;
pub mod strategy;
pub mod valuation;

pub use error::{Error, Result};
pub use game::{AuctionGame, Role, Variant};
pub use scalar::{q, Scalar, Q};
pub use strategy::StrategyProfile;
pub use valuation::ValuationProfile;
