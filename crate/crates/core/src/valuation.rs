//! Valuation profiles and the quantities derived from them.

use core::ops::RangeInclusive;

use crate::error::{Error, Result};

/// The two agents' (even) values for the jointly owned object together
/// with the bid cap. The agents are identified by their rank: `low` holds
/// the smaller value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ValuationProfile {
    v_low: u32,
    v_high: u32,
    p_bar: u32,
}

impl ValuationProfile {
    pub fn new(v_low: u32, v_high: u32, p_bar: u32) -> Result<Self> {
        for v in [v_low, v_high] {
            if v % 2 != 0 {
                return Err(Error::OddValuation(v));
            }
        }
        if v_low <= 2 || v_low > v_high {
            return Err(Error::ValuationOrder {
                low: v_low,
                high: v_high,
            });
        }
        let min = v_high / 2 + 2;
        if p_bar < min {
            return Err(Error::BidCapTooLow { p_bar, min });
        }
        Ok(Self {
            v_low,
            v_high,
            p_bar,
        })
    }

    /// Cap `v_high/2 + 2`, the smallest admissible.
    pub fn with_min_cap(v_low: u32, v_high: u32) -> Result<Self> {
        Self::new(v_low, v_high, v_high / 2 + 2)
    }

    /// Cap `v_low/2 + v_high/2`: as many bids above the Nash range as below it.
    pub fn with_symmetric_cap(v_low: u32, v_high: u32) -> Result<Self> {
        Self::new(v_low, v_high, v_low / 2 + v_high / 2)
    }

    pub fn v_low(&self) -> u32 {
        self.v_low
    }

    pub fn v_high(&self) -> u32 {
        self.v_high
    }

    pub fn p_bar(&self) -> u32 {
        self.p_bar
    }

    /// Half of the low value.
    pub fn c_low(&self) -> u32 {
        self.v_low / 2
    }

    /// Half of the high value.
    pub fn c_high(&self) -> u32 {
        self.v_high / 2
    }

    pub fn value(&self, role: crate::game::Role) -> u32 {
        match role {
            crate::game::Role::Low => self.v_low,
            crate::game::Role::High => self.v_high,
        }
    }

    /// `|v_high/2 - v_low/2|`.
    pub fn equity_surplus(&self) -> u32 {
        self.c_high() - self.c_low()
    }

    /// Bids `{v_low/2, ..., v_high/2}`.
    pub fn nash_range(&self) -> RangeInclusive<usize> {
        self.c_low() as usize..=self.c_high() as usize
    }

    pub fn equal_values(&self) -> bool {
        self.v_low == self.v_high
    }

    pub fn num_bids(&self) -> usize {
        self.p_bar as usize + 1
    }

    /// `p_bar == c_low + c_high`.
    pub fn has_symmetric_cap(&self) -> bool {
        self.p_bar == self.c_low() + self.c_high()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equity_surplus_examples() {
        assert_eq!(
            ValuationProfile::with_min_cap(4, 10)
                .unwrap()
                .equity_surplus(),
            3
        );
        assert_eq!(
            ValuationProfile::with_min_cap(6, 6)
                .unwrap()
                .equity_surplus(),
            0
        );
        assert_eq!(
            ValuationProfile::with_min_cap(4, 8)
                .unwrap()
                .equity_surplus(),
            2
        );
    }

    #[test]
    fn nash_range_examples() {
        let r = |a, b| ValuationProfile::with_min_cap(a, b).unwrap().nash_range();
        assert_eq!(r(4, 8), 2..=4);
        assert_eq!(r(6, 6), 3..=3);
        assert_eq!(r(4, 16), 2..=8);
    }

    #[test]
    fn rejects_bad_profiles() {
        assert_eq!(ValuationProfile::new(3, 8, 6), Err(Error::OddValuation(3)));
        assert_eq!(ValuationProfile::new(4, 9, 7), Err(Error::OddValuation(9)));
        assert!(matches!(
            ValuationProfile::new(2, 8, 6),
            Err(Error::ValuationOrder { .. })
        ));
        assert!(matches!(
            ValuationProfile::new(8, 4, 6),
            Err(Error::ValuationOrder { .. })
        ));
        assert_eq!(
            ValuationProfile::new(4, 8, 5),
            Err(Error::BidCapTooLow { p_bar: 5, min: 6 })
        );
    }

    #[test]
    fn symmetric_cap_is_always_admissible() {
        for vh in (4..=40).step_by(2) {
            for vl in (4..=vh).step_by(2) {
                let p = ValuationProfile::with_symmetric_cap(vl, vh).unwrap();
                assert!(p.has_symmetric_cap());
            }
        }
    }
}
