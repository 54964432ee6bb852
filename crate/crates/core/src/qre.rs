//! Logistic quantal response equilibria and lambda-homotopy paths.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fixed_point::{self, FixedPoint, FixedPointConfig, PerturbedLogit};
use crate::game::AuctionGame;
use crate::nash::{is_nash, NashReport};
use crate::scalar::SUPPORT_THRESHOLD;
use crate::strategy::StrategyProfile;

/// Nash tolerance applied to rounded path profiles.
pub const LIMIT_TOLERANCE: f64 = 1e-6;

/// Nash tolerance for a support-rounded logistic QRE at precision `lambda`:
/// `(2 ln lambda + 8) / lambda`.
///
/// Mixed limits approach the equilibrium at rate `O(ln lambda / lambda)`,
/// so a fixed tolerance rejects them at any finite `lambda`.
pub fn limit_tolerance(lambda: f64) -> f64 {
    (2.0 * libm::log(lambda) + 8.0) / lambda
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticConfig {
    pub lambda: f64,
    pub damping: f64,
    pub residual_tol: f64,
    pub max_iter: usize,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        let fp = FixedPointConfig::default();
        Self {
            lambda: 1.0,
            damping: fp.damping,
            residual_tol: fp.residual_tol,
            max_iter: fp.max_iter,
        }
    }
}

impl LogisticConfig {
    fn fixed_point(&self) -> FixedPointConfig {
        FixedPointConfig {
            damping: self.damping,
            residual_tol: self.residual_tol,
            max_iter: self.max_iter,
            newton: true,
        }
    }
}

/// Logistic QRE at `cfg.lambda`, iterated from `init`.
pub fn qre_fixed_point(
    game: &AuctionGame,
    cfg: &LogisticConfig,
    init: &StrategyProfile<f64>,
) -> Result<FixedPoint> {
    let map = PerturbedLogit::logistic(game.num_bids(), cfg.lambda);
    fixed_point::solve(game, &map, init, &cfg.fixed_point())
}

#[derive(Debug, Clone, PartialEq)]
pub struct QreRecord {
    pub lambda: f64,
    pub profile: StrategyProfile<f64>,
    pub residual: f64,
    pub converged: bool,
    /// Separating bid of the support-rounded profile, when that is Nash.
    pub bid_estimate: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct QrePath {
    pub records: Vec<QreRecord>,
}

impl QrePath {
    pub fn last(&self) -> Option<&QreRecord> {
        self.records.last()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn all_converged(&self) -> bool {
        self.records.iter().all(|r| r.converged)
    }
}

/// `0.1 * 1.3^k` for increasing `k`, capped at 500 (the cap is included).
pub fn default_schedule() -> Vec<f64> {
    let mut out = Vec::new();
    let mut lambda = 0.1;
    while lambda < 500.0 {
        out.push(lambda);
        lambda *= 1.3;
    }
    out.push(500.0);
    out
}

fn rounded_report(game: &AuctionGame, profile: &StrategyProfile<f64>) -> NashReport<f64> {
    let rounded = profile.round_support(SUPPORT_THRESHOLD);
    is_nash(game, &rounded, LIMIT_TOLERANCE).expect("profile matches the game")
}

fn check_schedule(schedule: &[f64]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::EmptyPath);
    }
    if schedule.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidConfig(
            "lambda schedule must be strictly increasing",
        ));
    }
    Ok(())
}

fn trace(
    game: &AuctionGame,
    schedule: &[f64],
    cfg: &LogisticConfig,
    stable_stop: Option<usize>,
) -> Result<QrePath> {
    check_schedule(schedule)?;
    let mut path = QrePath::default();
    let mut current = StrategyProfile::uniform(game.num_bids());
    let mut stable = 0;
    let mut last_bid = None;
    for &lambda in schedule {
        let c = LogisticConfig { lambda, ..*cfg };
        let fp = qre_fixed_point(game, &c, &current)?;
        let report = rounded_report(game, &fp.profile);
        let bid = if report.is_nash {
            report.separating_bid
        } else {
            None
        };
        if bid.is_some() && bid == last_bid {
            stable += 1;
        } else {
            stable = usize::from(bid.is_some());
        }
        last_bid = bid;
        current = fp.profile.clone();
        path.records.push(QreRecord {
            lambda,
            profile: fp.profile,
            residual: fp.residual,
            converged: fp.converged,
            bid_estimate: bid,
        });
        if stable_stop.is_some_and(|k| stable >= k) {
            break;
        }
    }
    Ok(path)
}

/// Solves for the QRE at each lambda of `schedule`, warm-starting from the
/// previous fixed point (uniform for the first). Non-converged points are
/// recorded and flagged rather than aborting the path.
pub fn trace_qre_path(
    game: &AuctionGame,
    schedule: &[f64],
    cfg: &LogisticConfig,
) -> Result<QrePath> {
    trace(game, schedule, cfg, None)
}

/// Traces [`default_schedule`], stopping once the rounded profile has been
/// Nash with the same separating bid for 5 consecutive lambdas.
pub fn trace_default_path(game: &AuctionGame, cfg: &LogisticConfig) -> Result<QrePath> {
    trace(game, &default_schedule(), cfg, Some(5))
}

/// How the last profile of a path is read as an equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitRule {
    /// Probabilities at or below this are dropped before the Nash check.
    pub support_threshold: f64,
    pub tolerance: f64,
}

impl LimitRule {
    /// Rounds at `1e-3` and checks against [`limit_tolerance`].
    ///
    /// Where an agent is indifferent between two bids at the limit, the
    /// probability of the unused one decays only like `1 / lambda`.
    pub fn for_lambda(lambda: f64) -> Self {
        Self {
            support_threshold: 1e-3,
            tolerance: limit_tolerance(lambda),
        }
    }
}

/// Rounds the last profile of `path` to its support and checks that it is a
/// Nash equilibrium within the rule's tolerance.
pub fn path_limit(
    game: &AuctionGame,
    path: &QrePath,
    rule: LimitRule,
) -> Result<(StrategyProfile<f64>, NashReport<f64>)> {
    let last = path.last().ok_or(Error::EmptyPath)?;
    let rounded = last.profile.round_support(rule.support_threshold);
    let report = is_nash(game, &rounded, rule.tolerance)?;
    if !report.is_nash {
        return Err(Error::LimitNotNash {
            max_regret: report.max_regret,
        });
    }
    Ok((rounded, report))
}

/// Traces [`default_schedule`] and, while the rounded last profile has no
/// separating bid under [`LimitRule::for_lambda`], keeps multiplying lambda
/// by 1.3 up to `max_lambda`.
pub fn trace_to_limit(
    game: &AuctionGame,
    cfg: &LogisticConfig,
    max_lambda: f64,
) -> Result<QrePath> {
    let mut path = trace_default_path(game, cfg)?;
    loop {
        let last = path.last().ok_or(Error::EmptyPath)?;
        let lambda = last.lambda;
        let settled = path_limit(game, &path, LimitRule::for_lambda(lambda))
            .is_ok_and(|(_, r)| r.separating_bid.is_some());
        if settled || lambda * 1.3 > max_lambda {
            return Ok(path);
        }
        let next = LogisticConfig {
            lambda: lambda * 1.3,
            ..*cfg
        };
        let fp = qre_fixed_point(game, &next, &last.profile)?;
        let report = rounded_report(game, &fp.profile);
        path.records.push(QreRecord {
            lambda: next.lambda,
            bid_estimate: if report.is_nash {
                report.separating_bid
            } else {
                None
            },
            profile: fp.profile,
            residual: fp.residual,
            converged: fp.converged,
        });
    }
}
