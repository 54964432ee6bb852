//! Weak payoff monotonicity and its `m`-relaxation.

use alloc::vec::Vec;

use crate::error::Result;
use crate::game::{AuctionGame, Role};
use crate::scalar::Scalar;
use crate::strategy::StrategyProfile;

/// Slack on probability comparisons and on utility comparisons.
///
/// Utility differences are accumulated outcome by outcome, so the default
/// utility slack is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityTolerance<T = f64> {
    pub prob: T,
    pub util: T,
}

impl<T: Scalar> MonotonicityTolerance<T> {
    pub fn new(prob: T, util: T) -> Self {
        Self { prob, util }
    }

    pub fn prob(prob: T) -> Self {
        Self {
            prob,
            util: T::zero(),
        }
    }

    pub fn exact() -> Self {
        Self::prob(T::zero())
    }
}

/// Bid `a` is played more often than `b` without doing strictly better
/// (weak check), or `a` does at least as well as `b` but is played with
/// less than `m` times its probability (`m` check).
#[derive(Debug, Clone, PartialEq)]
pub struct Violation<T = f64> {
    pub role: Role,
    pub bid_a: usize,
    pub bid_b: usize,
    pub prob_a: T,
    pub prob_b: T,
    pub util_a: T,
    pub util_b: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport<T = f64> {
    pub holds: bool,
    pub violations: Vec<Violation<T>>,
    pub tolerance: MonotonicityTolerance<T>,
}

fn report<T: Scalar>(
    violations: Vec<Violation<T>>,
    tolerance: MonotonicityTolerance<T>,
) -> MonotonicityReport<T> {
    MonotonicityReport {
        holds: violations.is_empty(),
        violations,
        tolerance,
    }
}

fn check_profile<T: Scalar>(game: &AuctionGame, profile: &StrategyProfile<T>) -> Result<()> {
    game.check_len(&profile.low)?;
    game.check_len(&profile.high)
}

/// Relative margin by which the positive part of a log-domain utility gap
/// must exceed the negative part to count as strictly positive.
const LOG_MARGIN: f64 = 1e-9;

fn log_add(x: f64, y: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        return y;
    }
    if y == f64::NEG_INFINITY {
        return x;
    }
    let (hi, lo) = if x > y { (x, y) } else { (y, x) };
    hi + libm::log1p(libm::exp(lo - hi))
}

/// `U(a) - U(b) > slack` with the co-player given by log-probabilities.
fn log_gap_exceeds(
    game: &AuctionGame,
    role: Role,
    a: usize,
    b: usize,
    log_opp: &[f64],
    slack: f64,
) -> bool {
    let (mut pos, mut neg) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (d, &lw) in log_opp.iter().enumerate() {
        let delta = game.payoff_as::<f64>(role, a, d) - game.payoff_as::<f64>(role, b, d);
        if delta > 0.0 {
            pos = log_add(pos, lw + libm::log(delta));
        } else if delta < 0.0 {
            neg = log_add(neg, lw + libm::log(-delta));
        }
    }
    if slack == 0.0 {
        pos > neg + LOG_MARGIN
    } else {
        libm::exp(pos) - libm::exp(neg) > slack
    }
}

fn weak_violations<T: Scalar>(
    game: &AuctionGame,
    profile: &StrategyProfile<T>,
    tol: MonotonicityTolerance<T>,
    exceeds: impl Fn(Role, usize, usize, T) -> bool,
) -> Vec<Violation<T>> {
    let mut violations = Vec::new();
    for role in Role::BOTH {
        let own = profile.get(role);
        let utils = game.utilities_unchecked(role, profile.get(role.other()));
        for (a, &pa) in own.iter().enumerate() {
            for (b, &pb) in own.iter().enumerate() {
                if pa > pb + tol.prob && !exceeds(role, a, b, tol.util) {
                    violations.push(Violation {
                        role,
                        bid_a: a,
                        bid_b: b,
                        prob_a: pa,
                        prob_b: pb,
                        util_a: utils[a],
                        util_b: utils[b],
                    });
                }
            }
        }
    }
    violations
}

/// Flags every ordered pair `(a, b)` of one agent's bids with
/// `sigma(a) > sigma(b) + tol.prob` and `U(a) - U(b) <= tol.util`.
pub fn check_weak_monotonicity<T: Scalar>(
    game: &AuctionGame,
    profile: &StrategyProfile<T>,
    tol: MonotonicityTolerance<T>,
) -> Result<MonotonicityReport<T>> {
    check_profile(game, profile)?;
    let violations = weak_violations(game, profile, tol, |role, a, b, slack| {
        game.utility_gap(role, a, b, profile.get(role.other())) > slack
    });
    Ok(report(violations, tol))
}

/// [`check_weak_monotonicity`] with utility gaps evaluated from
/// `log_profile`, the natural logarithms of the probabilities of `profile`.
///
/// Gaps carried by probabilities below the `f64` range keep their sign. A
/// gap counts as positive when its positive part exceeds its negative part
/// by a relative margin of `1e-9`.
pub fn check_weak_monotonicity_log(
    game: &AuctionGame,
    profile: &StrategyProfile<f64>,
    log_profile: &StrategyProfile<f64>,
    tol: MonotonicityTolerance<f64>,
) -> Result<MonotonicityReport<f64>> {
    check_profile(game, profile)?;
    check_profile(game, log_profile)?;
    let violations = weak_violations(game, profile, tol, |role, a, b, slack| {
        log_gap_exceeds(game, role, a, b, log_profile.get(role.other()), slack)
    });
    Ok(report(violations, tol))
}

/// Flags every ordered pair `(a, b)` with `U(a) - U(b) >= -tol.util` and
/// `sigma(a) < m sigma(b) - tol.prob`.
pub fn check_m_monotonicity<T: Scalar>(
    game: &AuctionGame,
    profile: &StrategyProfile<T>,
    m: T,
    tol: MonotonicityTolerance<T>,
) -> Result<MonotonicityReport<T>> {
    check_profile(game, profile)?;
    let mut violations = Vec::new();
    for role in Role::BOTH {
        let own = profile.get(role);
        let opp = profile.get(role.other());
        let utils = game.utilities_unchecked(role, opp);
        for (a, &pa) in own.iter().enumerate() {
            for (b, &pb) in own.iter().enumerate() {
                if a != b
                    && pa < m * pb - tol.prob
                    && !(game.utility_gap(role, a, b, opp) < -tol.util)
                {
                    violations.push(Violation {
                        role,
                        bid_a: a,
                        bid_b: b,
                        prob_a: pa,
                        prob_b: pb,
                        util_a: utils[a],
                        util_b: utils[b],
                    });
                }
            }
        }
    }
    Ok(report(violations, tol))
}

/// Largest `m` in `[0, 1]` for which the profile passes
/// [`check_m_monotonicity`] with the given tolerances.
pub fn m_index(
    game: &AuctionGame,
    profile: &StrategyProfile<f64>,
    tol: MonotonicityTolerance<f64>,
) -> Result<f64> {
    check_profile(game, profile)?;
    let mut m: f64 = 1.0;
    for role in Role::BOTH {
        let own = profile.get(role);
        let opp = profile.get(role.other());
        for (a, &pa) in own.iter().enumerate() {
            for (b, &pb) in own.iter().enumerate() {
                if a != b && pb > 0.0 && !(game.utility_gap(role, a, b, opp) < -tol.util) {
                    m = m.min((pa + tol.prob) / pb);
                }
            }
        }
    }
    Ok(m.max(0.0))
}

/// Number of weakly better alternatives to a bid and the probability cap
/// they impose on a weakly monotone profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityCap<T = f64> {
    /// Bids other than `bid` whose utility is at least that of `bid`
    /// (within `1e-12` for floating point).
    pub k: usize,
    /// `1 / (k + 1)`.
    pub cap: T,
    pub prob: T,
    pub satisfied: bool,
}

fn cap_of<T: Scalar>(
    game: &AuctionGame,
    profile: &StrategyProfile<T>,
    role: Role,
    bid: usize,
    tol: T,
    bid_exceeds: impl Fn(usize) -> bool,
) -> ProbabilityCap<T> {
    let k = (0..game.num_bids())
        .filter(|&b| b != bid && !bid_exceeds(b))
        .count();
    let cap = T::one() / (T::one() + T::from_q(crate::scalar::Q::from_integer(k as i128)));
    let prob = profile.get(role)[bid];
    ProbabilityCap {
        k,
        cap,
        prob,
        satisfied: !(prob > cap + tol),
    }
}

/// Checks `sigma_role(bid) <= 1 / (k + 1) + tol`, where `k` counts the
/// alternatives doing at least as well as `bid`.
pub fn monotone_probability_cap<T: Scalar>(
    game: &AuctionGame,
    profile: &StrategyProfile<T>,
    role: Role,
    bid: usize,
    tol: T,
) -> Result<ProbabilityCap<T>> {
    check_profile(game, profile)?;
    game.check_bid(bid)?;
    let opp = profile.get(role.other());
    let slack = if T::EXACT {
        T::zero()
    } else {
        T::from_q(crate::scalar::q(1, 1_000_000_000_000))
    };
    Ok(cap_of(game, profile, role, bid, tol, |b| {
        game.utility_gap(role, bid, b, opp) > slack
    }))
}

/// [`monotone_probability_cap`] with utility comparisons evaluated from the
/// log-probabilities `log_profile`, as in [`check_weak_monotonicity_log`].
pub fn monotone_probability_cap_log(
    game: &AuctionGame,
    profile: &StrategyProfile<f64>,
    log_profile: &StrategyProfile<f64>,
    role: Role,
    bid: usize,
    tol: f64,
) -> Result<ProbabilityCap<f64>> {
    check_profile(game, profile)?;
    check_profile(game, log_profile)?;
    game.check_bid(bid)?;
    let log_opp = log_profile.get(role.other());
    Ok(cap_of(game, profile, role, bid, tol, |b| {
        log_gap_exceeds(game, role, bid, b, log_opp, 0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Variant;
    use crate::scalar::{q, Q};
    use crate::strategy::point_mass;
    use crate::valuation::ValuationProfile;
    use alloc::vec;

    fn wb48() -> AuctionGame {
        AuctionGame::new(ValuationProfile::new(4, 8, 6).unwrap(), Variant::WinnerBid)
    }

    #[test]
    fn uniform_profile_is_monotone() {
        let g = wb48();
        let r = check_weak_monotonicity(
            &g,
            &StrategyProfile::<Q>::uniform(7),
            MonotonicityTolerance::exact(),
        )
        .unwrap();
        assert!(r.holds);
    }

    #[test]
    fn flags_probability_on_worse_bid() {
        let g = wb48();
        let mut low = vec![q(0, 1); 7];
        low[2] = q(1, 10);
        low[3] = q(9, 10);
        let prof = StrategyProfile::new(low, point_mass(7, 2)).unwrap();
        let r = check_weak_monotonicity(&g, &prof, MonotonicityTolerance::exact()).unwrap();
        assert!(!r.holds);
        // against bid 2, bid 3 earns 1 while bid 0 earns 2
        let v = r
            .violations
            .iter()
            .find(|v| v.role == Role::Low && v.bid_a == 3 && v.bid_b == 0)
            .unwrap();
        assert_eq!((v.util_a, v.util_b), (q(1, 1), q(2, 1)));
        assert_eq!(r.holds, r.violations.is_empty());
    }

    #[test]
    fn utility_ties_with_probability_gap_violate() {
        // bids 0 and 1 of the low agent earn the same against bid 2
        let g = wb48();
        let mut low = vec![0.0; 7];
        low[0] = 0.6;
        low[1] = 0.4;
        let prof = StrategyProfile::new(low, point_mass(7, 2)).unwrap();
        let r = check_weak_monotonicity(&g, &prof, MonotonicityTolerance::prob(1e-9)).unwrap();
        assert!(r.violations.iter().any(|v| v.bid_a == 0 && v.bid_b == 1));
    }

    #[test]
    fn m_zero_imposes_nothing() {
        let g = wb48();
        let prof = StrategyProfile::<f64>::pure(7, 6, 0);
        let r = check_m_monotonicity(&g, &prof, 0.0, MonotonicityTolerance::exact()).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn m_half_example() {
        // two-bid slice of a profile: a = 1 has higher utility than b = 0
        let g = wb48();
        let mut low = vec![0.0; 7];
        low[0] = 0.5;
        low[1] = 0.2;
        low[6] = 0.3;
        let mut high = vec![0.0; 7];
        high[0] = 1.0;
        let prof = StrategyProfile::new(low, high).unwrap();
        let opp = prof.get(Role::High);
        assert!(g.utility_gap(Role::Low, 1, 0, opp) > 0.0);
        let r = check_m_monotonicity(&g, &prof, 0.5, MonotonicityTolerance::exact()).unwrap();
        assert!(r
            .violations
            .iter()
            .any(|v| v.role == Role::Low && v.bid_a == 1 && v.bid_b == 0));
    }

    #[test]
    fn m_index_of_uniform_is_one() {
        let g = wb48();
        let m = m_index(
            &g,
            &StrategyProfile::uniform(7),
            MonotonicityTolerance::exact(),
        )
        .unwrap();
        assert_eq!(m, 1.0);
    }

    #[test]
    fn log_gaps_keep_sign_below_f64_range() {
        // the high agent's only mass below bid 2 is exp(-800) on bid 0
        let g = wb48();
        let n = 7;
        let low = point_mass::<f64>(n, 1);
        let mut log_high = vec![f64::NEG_INFINITY; n];
        log_high[0] = -800.0;
        log_high[2] = 0.0;
        let high = point_mass::<f64>(n, 2);
        let prof = StrategyProfile { low, high };
        let logs = StrategyProfile {
            low: prof.low.iter().map(|w| libm::log(*w)).collect(),
            high: log_high,
        };
        // for the low agent bid 1 beats bid 0 only when the high agent bids 0
        let plain = check_weak_monotonicity(&g, &prof, MonotonicityTolerance::prob(1e-9)).unwrap();
        assert!(plain
            .violations
            .iter()
            .any(|v| v.bid_a == 1 && v.bid_b == 0));
        let log = check_weak_monotonicity_log(&g, &prof, &logs, MonotonicityTolerance::prob(1e-9))
            .unwrap();
        assert!(!log
            .violations
            .iter()
            .any(|v| v.role == Role::Low && v.bid_a == 1 && v.bid_b == 0));
        let c = monotone_probability_cap_log(&g, &prof, &logs, Role::Low, 1, 0.0).unwrap();
        let plain_cap = monotone_probability_cap(&g, &prof, Role::Low, 1, 0.0).unwrap();
        assert!(c.k < plain_cap.k);
    }

    #[test]
    fn cap_counts_weakly_better_bids() {
        // against bid 2 the low agent's bids 0, 1, 2 all earn 2
        let g = wb48();
        let prof =
            StrategyProfile::new(crate::strategy::uniform_on(7, 0..3), point_mass(7, 2)).unwrap();
        for bid in 0..3 {
            let c = monotone_probability_cap(&g, &prof, Role::Low, bid, q(0, 1)).unwrap();
            assert_eq!(
                (c.k, c.cap, c.prob, c.satisfied),
                (2, q(1, 3), q(1, 3), true)
            );
        }
        let c = monotone_probability_cap(&g, &prof, Role::Low, 3, q(0, 1)).unwrap();
        assert_eq!(c.k, 3);
    }
}
