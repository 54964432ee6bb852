//! Mixed strategies over the bid set and profiles of them.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::game::Role;
use crate::scalar::{Scalar, MASS_TOLERANCE, Q};

/// Distribution placing all mass on `bid`.
pub fn point_mass<T: Scalar>(num_bids: usize, bid: usize) -> Vec<T> {
    let mut d = vec![T::zero(); num_bids];
    d[bid] = T::one();
    d
}

/// Uniform distribution over the bids in `bids`.
pub fn uniform_on<T: Scalar>(num_bids: usize, bids: impl IntoIterator<Item = usize>) -> Vec<T> {
    let bids: Vec<usize> = bids.into_iter().collect();
    let w = T::one() / T::from_q(Q::from_integer(bids.len() as i128));
    let mut d = vec![T::zero(); num_bids];
    for b in bids {
        d[b] = w;
    }
    d
}

pub fn uniform<T: Scalar>(num_bids: usize) -> Vec<T> {
    uniform_on(num_bids, 0..num_bids)
}

/// Bids carrying positive mass (beyond the support threshold for floats).
pub fn support<T: Scalar>(dist: &[T]) -> impl Iterator<Item = usize> + '_ {
    dist.iter()
        .enumerate()
        .filter(|(_, w)| w.in_support())
        .map(|(b, _)| b)
}

/// Checks non-negativity and unit mass.
pub fn validate<T: Scalar>(dist: &[T]) -> Result<()> {
    let mut total = T::zero();
    for &w in dist {
        if !w.is_finite() {
            return Err(Error::InvalidDistribution("non-finite probability"));
        }
        if w < T::zero() {
            return Err(Error::InvalidDistribution("negative probability"));
        }
        total = total + w;
    }
    let excess = (total - T::one()).abs();
    let ok = if T::EXACT {
        excess == T::zero()
    } else {
        excess.to_f64() <= MASS_TOLERANCE
    };
    if !ok {
        return Err(Error::InvalidDistribution(
            "probabilities do not sum to one",
        ));
    }
    Ok(())
}

/// A pair of mixed strategies, one per agent.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile<T = f64> {
    pub low: Vec<T>,
    pub high: Vec<T>,
}

impl<T: Scalar> StrategyProfile<T> {
    /// Builds a profile after validating both distributions.
    pub fn new(low: Vec<T>, high: Vec<T>) -> Result<Self> {
        if low.len() != high.len() {
            return Err(Error::LengthMismatch {
                got: high.len(),
                expected: low.len(),
            });
        }
        validate(&low)?;
        validate(&high)?;
        Ok(Self { low, high })
    }

    pub fn pure(num_bids: usize, low_bid: usize, high_bid: usize) -> Self {
        Self {
            low: point_mass(num_bids, low_bid),
            high: point_mass(num_bids, high_bid),
        }
    }

    pub fn uniform(num_bids: usize) -> Self {
        Self {
            low: uniform(num_bids),
            high: uniform(num_bids),
        }
    }

    pub fn num_bids(&self) -> usize {
        self.low.len()
    }

    pub fn get(&self, role: Role) -> &[T] {
        match role {
            Role::Low => &self.low,
            Role::High => &self.high,
        }
    }

    pub fn get_mut(&mut self, role: Role) -> &mut Vec<T> {
        match role {
            Role::Low => &mut self.low,
            Role::High => &mut self.high,
        }
    }

    /// Every bid of both agents carries strictly positive probability.
    pub fn is_interior(&self) -> bool {
        self.low.iter().chain(&self.high).all(|&w| w > T::zero())
    }

    /// `max |self - other|` over both agents and all bids.
    pub fn sup_distance(&self, other: &StrategyProfile<T>) -> T {
        let mut best = T::zero();
        for (a, b) in self
            .low
            .iter()
            .zip(&other.low)
            .chain(self.high.iter().zip(&other.high))
        {
            let d = (*a - *b).abs();
            if d > best {
                best = d;
            }
        }
        best
    }

    /// Reflects bids `b -> p_bar - b` and swaps the roles; maps profiles of a
    /// game onto profiles of [`crate::AuctionGame::mirror`].
    pub fn mirror(&self) -> StrategyProfile<T> {
        let mut low = self.high.clone();
        let mut high = self.low.clone();
        low.reverse();
        high.reverse();
        StrategyProfile { low, high }
    }

    pub fn to_f64(&self) -> StrategyProfile<f64> {
        StrategyProfile {
            low: self.low.iter().map(|w| w.to_f64()).collect(),
            high: self.high.iter().map(|w| w.to_f64()).collect(),
        }
    }
}

impl StrategyProfile<f64> {
    /// Sets probabilities at or below `threshold` to zero and renormalizes.
    pub fn round_support(&self, threshold: f64) -> StrategyProfile<f64> {
        fn round(dist: &[f64], threshold: f64) -> Vec<f64> {
            let mut out: Vec<f64> = dist
                .iter()
                .map(|&w| if w > threshold { w } else { 0.0 })
                .collect();
            let total: f64 = out.iter().sum();
            if total > 0.0 {
                out.iter_mut().for_each(|w| *w /= total);
            }
            out
        }
        StrategyProfile {
            low: round(&self.low, threshold),
            high: round(&self.high, threshold),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn validation() {
        assert!(StrategyProfile::<f64>::new(vec![0.5, 0.5], vec![1.0, 0.0]).is_ok());
        assert!(StrategyProfile::<f64>::new(vec![0.5, 0.6], vec![1.0, 0.0]).is_err());
        assert!(StrategyProfile::<f64>::new(vec![1.5, -0.5], vec![1.0, 0.0]).is_err());
        assert!(StrategyProfile::<f64>::new(vec![1.0], vec![1.0, 0.0]).is_err());
        assert!(StrategyProfile::<Q>::new(vec![q(1, 3), q(2, 3)], vec![q(1, 1), q(0, 1)]).is_ok());
        assert!(StrategyProfile::<Q>::new(vec![q(1, 3), q(1, 3)], vec![q(1, 1), q(0, 1)]).is_err());
    }

    #[test]
    fn float_support_uses_threshold() {
        let d = [0.5, 1e-10, 0.5 - 1e-10];
        assert_eq!(support(&d).collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn rounding_renormalizes() {
        let p = StrategyProfile {
            low: vec![0.25, 0.75 - 1e-12, 1e-12],
            high: vec![0.0, 0.0, 1.0],
        };
        let r = p.round_support(1e-9);
        assert_eq!(r.low[2], 0.0);
        assert!((r.low.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mirror_swaps_and_reflects() {
        let p = StrategyProfile::<Q>::pure(7, 1, 2);
        let m = p.mirror();
        assert_eq!(m, StrategyProfile::pure(7, 4, 5));
        assert_eq!(m.mirror(), p);
    }
}
