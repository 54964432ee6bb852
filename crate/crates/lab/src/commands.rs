//! Serializable summaries behind the `epa` subcommands.

use std::fmt;

use anyhow::{bail, Result};
use epa_core::empirical::{
    allowed_bids, classify_payoff, default_witness_schedule, transfer_equilibrium,
    witness_sequence, BoundCase, EmpiricalBounds, WitnessConfig,
};
use epa_core::nash::{efficient_nash_payoffs, enumerate_pure_nash, separating_bid};
use epa_core::qre::{path_limit, trace_to_limit, LimitRule, LogisticConfig};
use epa_core::strategy::support;
use epa_core::{AuctionGame, StrategyProfile, ValuationProfile, Variant, Q};
use serde::Serialize;

fn bids(s: &[Q]) -> Vec<usize> {
    support(s).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct GameInfo {
    pub variant: String,
    pub v_low: u32,
    pub v_high: u32,
    pub p_bar: u32,
    pub gamma: String,
}

impl GameInfo {
    pub fn new(game: &AuctionGame) -> Self {
        let p = game.profile();
        Self {
            variant: game.variant().short_name().into(),
            v_low: p.v_low(),
            v_high: p.v_high(),
            p_bar: p.p_bar(),
            gamma: game.gamma().to_string(),
        }
    }
}

impl fmt::Display for GameInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} auction, v = ({}, {}), p_bar = {}, gamma = {}",
            self.variant, self.v_low, self.v_high, self.p_bar, self.gamma
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PureEquilibrium {
    pub low_bid: usize,
    pub high_bid: usize,
    pub separating_bid: Option<usize>,
    pub efficient: bool,
    /// Exact payoffs `(pi_low, pi_high)` as rationals.
    pub payoffs: (String, String),
}

#[derive(Debug, Clone, Serialize)]
pub struct NashSummary {
    pub game: GameInfo,
    pub equity_surplus: u32,
    pub nash_range: (usize, usize),
    pub equilibria: Vec<PureEquilibrium>,
    pub efficient_payoffs: Vec<(u32, u32)>,
}

pub fn nash_summary(game: &AuctionGame) -> NashSummary {
    let prof = game.profile();
    let equilibria = enumerate_pure_nash(game)
        .iter()
        .map(|eq| {
            let sep = separating_bid(game, eq).ok();
            let (pl, ph) = game.payoffs(eq);
            PureEquilibrium {
                low_bid: bids(&eq.low)[0],
                high_bid: bids(&eq.high)[0],
                separating_bid: sep.map(|s| s.p),
                efficient: sep.is_some_and(|s| s.efficient),
                payoffs: (pl.to_string(), ph.to_string()),
            }
        })
        .collect();
    let range = prof.nash_range();
    NashSummary {
        game: GameInfo::new(game),
        equity_surplus: prof.equity_surplus(),
        nash_range: (*range.start(), *range.end()),
        equilibria,
        efficient_payoffs: efficient_nash_payoffs(prof),
    }
}

impl fmt::Display for NashSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.game)?;
        writeln!(
            f,
            "ES = {}, Nash range {}..={}",
            self.equity_surplus, self.nash_range.0, self.nash_range.1
        )?;
        writeln!(f, "{} pure equilibria:", self.equilibria.len())?;
        for e in &self.equilibria {
            let sep = e.separating_bid.map_or("-".into(), |p| p.to_string());
            writeln!(
                f,
                "  low {:>3}  high {:>3}  p = {:>3}  payoffs ({}, {}){}",
                e.low_bid,
                e.high_bid,
                sep,
                e.payoffs.0,
                e.payoffs.1,
                if e.efficient { "" } else { "  inefficient" }
            )?;
        }
        let set: Vec<String> = self
            .efficient_payoffs
            .iter()
            .map(|(a, b)| format!("({a},{b})"))
            .collect();
        write!(f, "efficient payoff set {{{}}}", set.join(","))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassRow {
    pub p: usize,
    pub empirical: bool,
    pub payoffs: (u32, u32),
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessRow {
    pub p: usize,
    pub case: String,
    pub elements: usize,
    pub final_epsilon: f64,
    pub final_distance: f64,
    pub max_residual: f64,
    pub monotone: bool,
    pub limit_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifySummary {
    pub game: GameInfo,
    pub case: String,
    /// The active bound, e.g. `p <= 9/2`.
    pub bound: String,
    pub allowed: Vec<usize>,
    pub rows: Vec<ClassRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<WitnessRow>>,
}

fn bound_text(b: &EmpiricalBounds) -> String {
    let op = match (b.case, b.variant, b.strict) {
        (BoundCase::EqualValues | BoundCase::SmallSurplus, _, _) => "=",
        (_, Variant::WinnerBid, false) => "<=",
        (_, Variant::WinnerBid, true) => "<",
        (_, Variant::LoserBid, false) => ">=",
        (_, Variant::LoserBid, true) => ">",
    };
    format!("p {op} {}", b.cutoff)
}

/// Classifies every bid of the Nash range; with `witness`, also builds the
/// default witness sequence for each allowed bid and fails if any breaks.
pub fn classify_summary(game: &AuctionGame, witness: bool) -> Result<ClassifySummary> {
    let prof = game.profile();
    let variant = game.variant();
    let bounds = allowed_bids(prof, variant);
    let mut rows = Vec::new();
    for p in prof.nash_range() {
        let c = classify_payoff(prof, variant, p)?;
        rows.push(ClassRow {
            p,
            empirical: c.empirical,
            payoffs: (p as u32, prof.v_high() - p as u32),
        });
    }
    let witnesses = if witness {
        let mut out = Vec::new();
        for &p in &bounds.allowed {
            let seq = witness_sequence(
                game,
                p,
                &default_witness_schedule(),
                &WitnessConfig::default(),
            )?;
            let last = seq.elements.last().expect("sequences are non-empty");
            let row = WitnessRow {
                p,
                case: last.plan.case.to_string(),
                elements: seq.elements.len(),
                final_epsilon: last.epsilon,
                final_distance: seq.final_distance(),
                max_residual: seq.elements.iter().map(|w| w.residual).fold(0.0, f64::max),
                monotone: seq.elements.iter().all(|w| w.monotonicity.holds),
                limit_holds: seq.limit.holds(p),
            };
            if !row.monotone || !row.limit_holds {
                bail!(
                    "witness for p = {p} failed: monotone {}, limit {}",
                    row.monotone,
                    row.limit_holds
                );
            }
            out.push(row);
        }
        Some(out)
    } else {
        None
    };
    Ok(ClassifySummary {
        game: GameInfo::new(game),
        case: bounds.case.to_string(),
        bound: bound_text(&bounds),
        allowed: bounds.allowed,
        rows,
        witnesses,
    })
}

impl fmt::Display for ClassifySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.game)?;
        writeln!(f, "case {}, bound {}", self.case, self.bound)?;
        writeln!(f, "{:>4}  {:>10}  payoffs", "p", "empirical")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>4}  {:>10}  ({}, {})",
                r.p,
                if r.empirical { "yes" } else { "no" },
                r.payoffs.0,
                r.payoffs.1
            )?;
        }
        write!(f, "allowed {:?}", self.allowed)?;
        if let Some(ws) = &self.witnesses {
            for w in ws {
                write!(
                    f,
                    "\nwitness p = {}: {} ({} elements), final epsilon {:.1e}, distance {:.2e}, residual {:.1e}, monotone {}",
                    w.p, w.case, w.elements, w.final_epsilon, w.final_distance, w.max_residual, w.monotone
                )?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QreRow {
    pub lambda: f64,
    pub residual: f64,
    pub converged: bool,
    pub bid_estimate: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct QreSummary {
    pub game: GameInfo,
    pub path: Vec<QreRow>,
    pub limit_low: Vec<f64>,
    pub limit_high: Vec<f64>,
    pub separating_bid: Option<usize>,
    pub max_regret: f64,
    pub efficient: bool,
    pub allowed: Vec<usize>,
}

pub fn qre_summary(game: &AuctionGame, max_lambda: f64) -> Result<QreSummary> {
    let path = trace_to_limit(game, &LogisticConfig::default(), max_lambda)?;
    let lambda = path.last().map_or(0.0, |r| r.lambda);
    let (limit, report) = path_limit(game, &path, LimitRule::for_lambda(lambda))?;
    Ok(QreSummary {
        game: GameInfo::new(game),
        path: path
            .records
            .iter()
            .map(|r| QreRow {
                lambda: r.lambda,
                residual: r.residual,
                converged: r.converged,
                bid_estimate: r.bid_estimate,
            })
            .collect(),
        limit_low: limit.low,
        limit_high: limit.high,
        separating_bid: report.separating_bid,
        max_regret: report.max_regret,
        efficient: report.efficient,
        allowed: allowed_bids(game.profile(), game.variant()).allowed,
    })
}

fn fmt_dist(d: &[f64]) -> String {
    let parts: Vec<String> = d
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(b, w)| format!("{b}:{w:.4}"))
        .collect();
    parts.join(" ")
}

impl fmt::Display for QreSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.game)?;
        writeln!(f, "{:>10}  {:>10}  bid", "lambda", "residual")?;
        for r in &self.path {
            let bid = r.bid_estimate.map_or("-".into(), |b| b.to_string());
            writeln!(
                f,
                "{:>10.3}  {:>10.1e}  {}{}",
                r.lambda,
                r.residual,
                bid,
                if r.converged { "" } else { "  not converged" }
            )?;
        }
        writeln!(f, "limit low  {}", fmt_dist(&self.limit_low))?;
        writeln!(f, "limit high {}", fmt_dist(&self.limit_high))?;
        match self.separating_bid {
            Some(p) => write!(f, "separating bid {p}")?,
            None => write!(f, "no separating bid")?,
        }
        write!(
            f,
            " (allowed {:?}), regret {:.1e}, efficient {}",
            self.allowed, self.max_regret, self.efficient
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TransferSummary {
    pub game: GameInfo,
    pub t: u32,
    pub low_bid: usize,
    pub high_bid: usize,
    pub v_star: (u32, u32),
    pub nash_at_v: bool,
    pub pi_low: String,
    pub band: (u32, u32),
    pub holds: bool,
}

/// Checks the pure profile `(low_bid, high_bid)`, by default
/// `(c_low + t, c_low + t + 1)`.
pub fn transfer_summary(
    game: &AuctionGame,
    t: u32,
    pure: Option<(usize, usize)>,
) -> Result<TransferSummary> {
    let prof: &ValuationProfile = game.profile();
    let (low_bid, high_bid) = pure.unwrap_or_else(|| {
        let b = (prof.c_low() + t) as usize;
        (b, b + 1)
    });
    let n = game.num_bids();
    if low_bid >= n || high_bid >= n {
        bail!("bids must lie in 0..={}", n - 1);
    }
    let profile = StrategyProfile::pure(n, low_bid, high_bid);
    let r = transfer_equilibrium(game, &profile, t)?;
    Ok(TransferSummary {
        game: GameInfo::new(game),
        t,
        low_bid,
        high_bid,
        v_star: (r.v_star.v_low(), r.v_star.v_high()),
        nash_at_v: r.nash_at_v,
        pi_low: r.pi_low.to_string(),
        band: (prof.c_low() + t, prof.c_low() + t + 1),
        holds: r.holds,
    })
}

impl fmt::Display for TransferSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.game)?;
        writeln!(
            f,
            "profile (low {}, high {}) at v* = ({}, {}), t = {}",
            self.low_bid, self.high_bid, self.v_star.0, self.v_star.1, self.t
        )?;
        write!(
            f,
            "Nash at v: {}, pi_low = {} in [{}, {}]: {}",
            self.nash_at_v,
            self.pi_low,
            self.band.0,
            self.band.1,
            if self.holds { "holds" } else { "fails" }
        )
    }
}
