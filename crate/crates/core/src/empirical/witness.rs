//! Interior, weakly payoff monotone fixed points converging to a target
//! efficient equilibrium.
//!
//! Each construction perturbs a fixed distribution close to the target with
//! a small logistic component: `f_i = base_i + w_i * logistic_t(U_i)`. The
//! fixed point of the composed map is interior, and for small `epsilon` and
//! large `t` it is weakly payoff monotone and close to the target.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::empirical::bounds::{allowed_bids, BoundCase};
use crate::error::{Error, Result};
use crate::fixed_point::{self, FixedPointConfig, PerturbedLogit};
use crate::game::{AuctionGame, Role, Variant};
use crate::monotonicity::{
    check_weak_monotonicity_log, monotone_probability_cap_log, MonotonicityReport,
    MonotonicityTolerance,
};
use crate::nash::{is_nash, max_regret, NashReport};
use crate::scalar::{q, Scalar, Q};
use crate::strategy::{point_mass, uniform_on, StrategyProfile};

/// Which construction produces the witness (winner-bid coordinates).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessCase {
    /// `p = c_low`: target `(delta_{c_low - 1}, delta_{c_low})`.
    LowestBid,
    /// `p = c_low + 1`: the low agent splits between `c_low - 1` and `c_low`.
    SplitBelow,
    /// Far-apart values: the low agent is uniform on `{0, ..., p - 1}`.
    UniformBelow,
    /// The low agent is uniform on the window `{y, ..., p - 1}`.
    Window,
    /// As [`WitnessCase::Window`] with `p` on the cutoff, which needs extra
    /// low-agent mass below `y` and at `p`.
    WindowEdge,
}

impl WitnessCase {
    pub fn label(self) -> &'static str {
        match self {
            WitnessCase::LowestBid => "lowest_bid",
            WitnessCase::SplitBelow => "split_below",
            WitnessCase::UniformBelow => "uniform_below",
            WitnessCase::Window => "window",
            WitnessCase::WindowEdge => "window_edge",
        }
    }
}

impl fmt::Display for WitnessCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessConfig {
    /// Requested perturbation size; clamped to the case ceiling.
    pub epsilon: f64,
    /// Logistic precision of the perturbation.
    pub t: f64,
    pub fixed_point: FixedPointConfig,
    pub monotonicity: MonotonicityTolerance<f64>,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-3,
            t: 500.0,
            fixed_point: FixedPointConfig {
                residual_tol: 1e-12,
                ..FixedPointConfig::default()
            },
            monotonicity: MonotonicityTolerance::prob(1e-9),
        }
    }
}

/// `(epsilon_k, t_k) = (10^(-1-k), 20 * 5^k)` for `k = 0..4`.
pub fn default_witness_schedule() -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(4);
    let (mut eps, mut t) = (0.1, 20.0);
    for _ in 0..4 {
        out.push((eps, t));
        eps /= 10.0;
        t *= 5.0;
    }
    out
}

/// Case selection and the derived quantities of a witness construction.
///
/// Bids `y` and `r` are reported in the bids of the game being solved; for
/// the loser-bid auction the construction runs on the reflected game and
/// they are mapped back.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessPlan {
    pub variant: Variant,
    pub p: usize,
    pub case: WitnessCase,
    pub target: StrategyProfile<Q>,
    /// Bottom of the low agent's window, `c_low - 3 (p - 1 - c_low)`.
    pub y: Option<usize>,
    /// Window size `4 (p - 1 - c_low) + 1`.
    pub n: Option<usize>,
    /// Largest bid at or above `p` that does at least as well as `y` for the
    /// high agent against the target.
    pub r: Option<usize>,
    /// Largest admissible `epsilon`: half of the smaller of the case bound
    /// and the bound keeping every strict utility ordering of the target.
    pub epsilon_ceiling: f64,
    // winner-bid coordinates
    wb: WbPlan,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct WbPlan {
    p: usize,
    cl: usize,
    y: usize,
    n: usize,
    r: usize,
}

impl WitnessPlan {
    /// `epsilon / (2 (r - y + 2))`, the high agent's mass on each bid of
    /// `{y, ..., r}` in the window cases.
    pub fn eta(&self, epsilon: f64) -> Option<f64> {
        match self.case {
            WitnessCase::Window | WitnessCase::WindowEdge => {
                Some(epsilon / (2.0 * (self.wb.r - self.wb.y + 2) as f64))
            }
            _ => None,
        }
    }

    /// `(y + 3/2) epsilon / n`, the mass the low agent moves off the window
    /// in the edge case.
    pub fn tau(&self, epsilon: f64) -> Option<f64> {
        match self.case {
            WitnessCase::WindowEdge => Some((self.wb.y as f64 + 1.5) * epsilon / self.wb.n as f64),
            _ => None,
        }
    }

    /// The perturbed response map at `(epsilon, t)` in the bids of the game.
    pub fn response_map(&self, epsilon: f64, t: f64) -> PerturbedLogit {
        let map = self.wb_map(epsilon, t);
        match self.variant {
            Variant::WinnerBid => map,
            Variant::LoserBid => {
                let [mut low, mut high] = map.base;
                low.reverse();
                high.reverse();
                PerturbedLogit {
                    lambda: t,
                    base: [high, low],
                    weight: [map.weight[1], map.weight[0]],
                }
            }
        }
    }

    fn wb_map(&self, eps: f64, t: f64) -> PerturbedLogit {
        let WbPlan { p, cl, y, n, r } = self.wb;
        let nb = self.target.num_bids();
        let mut low = vec![0.0; nb];
        let mut high = vec![0.0; nb];
        let weight = match self.case {
            WitnessCase::LowestBid => {
                high[cl] = 1.0 - eps;
                low[cl - 1] = 1.0 - eps;
                [eps, eps]
            }
            WitnessCase::SplitBelow => {
                high[cl + 1] = 1.0 - eps;
                low[cl - 1] = 0.5 - eps;
                low[cl] = 0.5 - eps;
                [2.0 * eps, eps]
            }
            WitnessCase::UniformBelow => {
                high[p] = 1.0 - eps;
                let share = 1.0 / p as f64 - eps;
                low[..p].iter_mut().for_each(|w| *w = share);
                low[p] = (p - 1) as f64 * eps;
                [eps, eps]
            }
            WitnessCase::Window | WitnessCase::WindowEdge => {
                let eta = self.eta(eps).expect("window case");
                high[y..=r].iter_mut().for_each(|w| *w = eta);
                high[p] += 1.0 - eps / 2.0;
                if self.case == WitnessCase::Window {
                    let share = 1.0 / n as f64 - eps;
                    low[y..p].iter_mut().for_each(|w| *w = share);
                    [n as f64 * eps, eta]
                } else {
                    let share = 1.0 / n as f64 - self.tau(eps).expect("edge case");
                    low[y..p].iter_mut().for_each(|w| *w = share);
                    low[..y].iter_mut().for_each(|w| *w = eps);
                    low[p] = eps;
                    [eps / 2.0, eta]
                }
            }
        };
        PerturbedLogit {
            lambda: t,
            base: [low, high],
            weight,
        }
    }
}

/// Target and case for a winner-bid game.
fn plan_winner_bid(
    game: &AuctionGame,
    p: usize,
) -> Result<(WitnessCase, StrategyProfile<Q>, WbPlan, f64)> {
    let prof = game.profile();
    let nb = game.num_bids();
    let pb = game.p_bar() as f64;
    let cl = prof.c_low() as usize;
    let ch = prof.c_high() as usize;
    let bounds = allowed_bids(prof, Variant::WinnerBid);
    let mut plan = WbPlan {
        p,
        cl,
        y: 0,
        n: 0,
        r: 0,
    };
    if p == cl {
        let target = StrategyProfile::pure(nb, cl - 1, cl);
        return Ok((WitnessCase::LowestBid, target, plan, 1.0 / (pb - 2.0)));
    }
    if p == cl + 1 {
        let target = StrategyProfile {
            low: uniform_on(nb, [cl - 1, cl]),
            high: point_mass(nb, cl + 1),
        };
        return Ok((WitnessCase::SplitBelow, target, plan, 0.5 / (pb + 2.0)));
    }
    if bounds.case == BoundCase::FarApart {
        let target = StrategyProfile {
            low: uniform_on(nb, 0..p),
            high: point_mass(nb, p),
        };
        let pf = p as f64;
        let ceiling = 0.5 * (1.0 / pf).min((1.0 - 1.0 / pf) / (2.0 * ch as f64 - 1.0));
        return Ok((WitnessCase::UniformBelow, target, plan, ceiling));
    }
    let spread = 3 * (p - 1 - cl);
    if spread > cl {
        return Err(Error::BidNotAllowed { p });
    }
    plan.y = cl - spread;
    plan.n = 4 * (p - 1 - cl) + 1;
    let target = StrategyProfile {
        low: uniform_on(nb, plan.y..p),
        high: point_mass(nb, p),
    };
    let at_y = game.expected_utility(Role::High, plan.y, &target.low)?;
    let mut r = p;
    for b in (p..nb).rev() {
        if game.expected_utility(Role::High, b, &target.low)? >= at_y {
            r = b;
            break;
        }
    }
    plan.r = r;
    let on_cutoff = Q::from_integer(p as i128) == bounds.cutoff;
    if on_cutoff {
        let ceiling = 0.5 / (plan.y as f64 + 1.5);
        Ok((WitnessCase::WindowEdge, target, plan, ceiling))
    } else {
        Ok((WitnessCase::Window, target, plan, 0.5 / plan.n as f64))
    }
}

/// Selects the construction certifying that the efficient equilibria with
/// payoff-determinant bid `p` are empirical.
///
/// Requires uniform tie-breaking, `v_low < v_high` and `p` in the allowed
/// set of the game.
pub fn plan_witness(game: &AuctionGame, p: usize) -> Result<WitnessPlan> {
    if !game.has_uniform_ties() {
        return Err(Error::UnsupportedTieRule);
    }
    if game.profile().equal_values() {
        return Err(Error::EqualValuations);
    }
    if !allowed_bids(game.profile(), game.variant()).contains(p) {
        return Err(Error::BidNotAllowed { p });
    }
    let pb = game.p_bar();
    let (wb_game, wb_p) = match game.variant() {
        Variant::WinnerBid => (game.clone(), p),
        Variant::LoserBid => (game.mirror(), pb - p),
    };
    let (case, target, wb, epsilon_ceiling) = plan_winner_bid(&wb_game, wb_p)?;
    let window = matches!(case, WitnessCase::Window | WitnessCase::WindowEdge);
    let (target, y, r) = match game.variant() {
        Variant::WinnerBid => (target, wb.y, wb.r),
        Variant::LoserBid => (target.mirror(), pb - wb.y, pb - wb.r),
    };
    let mut plan = WitnessPlan {
        variant: game.variant(),
        p,
        case,
        target,
        y: window.then_some(y),
        n: window.then_some(wb.n),
        r: window.then_some(r),
        epsilon_ceiling,
        wb,
    };
    plan.epsilon_ceiling = epsilon_ceiling.min(0.5 * ordering_bound(game, &plan));
    Ok(plan)
}

/// Largest `epsilon` below which every fixed point of the response map
/// keeps each strict utility ordering of the target.
///
/// A pair `(b, d)` with gap `g = U(b) - U(d) > 0` against the target keeps
/// its sign while the co-player moves by less than `2 g / range` in L1,
/// where `range` is the spread of `payoff(b, .) - payoff(d, .)`. Fixed
/// points lie within `k epsilon` of the target in L1, with `k` read off the
/// response map.
fn ordering_bound(game: &AuctionGame, plan: &WitnessPlan) -> f64 {
    let probe = 1e-3;
    let map = plan.response_map(probe, 0.0);
    let target = plan.target.to_f64();
    let mut bound = f64::INFINITY;
    for role in Role::BOTH {
        let other = role.other();
        let i = match other {
            Role::Low => 0,
            Role::High => 1,
        };
        let shift: f64 = map.base[i]
            .iter()
            .zip(target.get(other))
            .map(|(b, s)| (b - s).abs())
            .sum::<f64>()
            + map.weight[i];
        let k = shift / probe;
        let opp = plan.target.get(other);
        let utils = game.utilities_unchecked(role, opp);
        let n = game.num_bids();
        for b in 0..n {
            for d in 0..n {
                let gap = utils[b] - utils[d];
                if gap <= q(0, 1) {
                    continue;
                }
                let diffs = (0..n).map(|x| game.payoff(role, b, x) - game.payoff(role, d, x));
                let hi = diffs.clone().max().expect("non-empty");
                let lo = diffs.min().expect("non-empty");
                let range = (hi - lo).to_f64();
                bound = bound.min(2.0 * gap.to_f64() / (range * k));
            }
        }
    }
    bound
}

/// A fixed point of a witness response map.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub plan: WitnessPlan,
    /// `epsilon` after clamping to the case ceiling.
    pub epsilon: f64,
    pub t: f64,
    pub profile: StrategyProfile<f64>,
    /// Natural logarithms of the probabilities of `profile`, accurate far
    /// below the `f64` range.
    pub log_profile: StrategyProfile<f64>,
    pub residual: f64,
    pub iterations: usize,
    /// Weak monotonicity with utility gaps evaluated from `log_profile`.
    pub monotonicity: MonotonicityReport<f64>,
}

impl Witness {
    pub fn distance_to_target(&self) -> f64 {
        self.profile.sup_distance(&self.plan.target.to_f64())
    }

    /// Whether every bid of both agents respects the monotone probability
    /// cap within `tol`.
    pub fn caps_hold(&self, game: &AuctionGame, tol: f64) -> Result<bool> {
        for role in Role::BOTH {
            for bid in 0..game.num_bids() {
                let c = monotone_probability_cap_log(
                    game,
                    &self.profile,
                    &self.log_profile,
                    role,
                    bid,
                    tol,
                )?;
                if !c.satisfied {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn solve_witness(
    game: &AuctionGame,
    plan: &WitnessPlan,
    cfg: &WitnessConfig,
    init: Option<&StrategyProfile<f64>>,
) -> Result<Witness> {
    if !(cfg.epsilon > 0.0) || !(cfg.t >= 0.0) || !cfg.t.is_finite() {
        return Err(Error::InvalidConfig(
            "epsilon must be positive and t finite and non-negative",
        ));
    }
    let eps = cfg.epsilon.min(plan.epsilon_ceiling);
    let map = plan.response_map(eps, cfg.t);
    let start = match init {
        Some(s) => s.clone(),
        None => {
            let n = game.num_bids() as f64;
            let mut s = plan.target.to_f64();
            for w in s.low.iter_mut().chain(s.high.iter_mut()) {
                *w = (1.0 - eps) * *w + eps / n;
            }
            s
        }
    };
    let fp = fixed_point::solve(game, &map, &start, &cfg.fixed_point)?;
    if !fp.converged {
        return Err(Error::NotConverged {
            residual: fp.residual,
            iterations: fp.iterations,
        });
    }
    let log_profile = fixed_point::log_image(game, &map, &fp.profile)?;
    let monotonicity =
        check_weak_monotonicity_log(game, &fp.profile, &log_profile, cfg.monotonicity)?;
    Ok(Witness {
        log_profile,
        plan: plan.clone(),
        epsilon: eps,
        t: cfg.t,
        residual: fixed_point::residual(game, &map, &fp.profile)?,
        profile: fp.profile,
        iterations: fp.iterations,
        monotonicity,
    })
}

/// Solves the witness response map of [`plan_witness`] at
/// `(cfg.epsilon, cfg.t)`.
///
/// Fails with [`Error::NotMonotone`] when the fixed point is not weakly
/// payoff monotone; decreasing `epsilon` or increasing `t` helps.
pub fn construct_witness(game: &AuctionGame, p: usize, cfg: &WitnessConfig) -> Result<Witness> {
    let plan = plan_witness(game, p)?;
    let w = solve_witness(game, &plan, cfg, None)?;
    if !w.monotonicity.holds {
        return Err(Error::NotMonotone {
            violations: w.monotonicity.violations.len(),
        });
    }
    Ok(w)
}

/// Probabilities at or below this are dropped when reading off the support
/// of the last witness.
pub const LIMIT_SUPPORT_THRESHOLD: f64 = 1e-3;

/// The last witness read as an equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitCheck {
    /// The support of the last element, rounded at
    /// [`LIMIT_SUPPORT_THRESHOLD`], equals the support of the target.
    pub support_matches: bool,
    /// Exact Nash check of the target.
    pub target: NashReport<Q>,
    /// Largest regret of the support-rounded last element.
    pub rounded_regret: f64,
}

impl LimitCheck {
    /// The rounded limit identifies the target, which is an equilibrium with
    /// separating bid `p`.
    pub fn holds(&self, p: usize) -> bool {
        self.support_matches && self.target.is_nash && self.target.separating_bid == Some(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSequence {
    pub elements: Vec<Witness>,
    /// Sup-norm distance of each element to the target.
    pub distances: Vec<f64>,
    pub limit: LimitCheck,
}

impl WitnessSequence {
    pub fn final_distance(&self) -> f64 {
        *self.distances.last().expect("sequences are non-empty")
    }

    pub fn target(&self) -> &StrategyProfile<Q> {
        &self.elements[0].plan.target
    }
}

/// Witnesses along `schedule`, a list of `(epsilon, t)` with `epsilon`
/// strictly decreasing and `t` strictly increasing. Each element is warm
/// started from the previous one.
pub fn witness_sequence(
    game: &AuctionGame,
    p: usize,
    schedule: &[(f64, f64)],
    cfg: &WitnessConfig,
) -> Result<WitnessSequence> {
    if schedule.is_empty() {
        return Err(Error::InvalidConfig("witness schedule is empty"));
    }
    if schedule
        .windows(2)
        .any(|w| !(w[1].0 < w[0].0) || !(w[1].1 > w[0].1))
    {
        return Err(Error::InvalidConfig(
            "witness schedule needs decreasing epsilon and increasing t",
        ));
    }
    let plan = plan_witness(game, p)?;
    let mut elements: Vec<Witness> = Vec::with_capacity(schedule.len());
    for (index, &(epsilon, t)) in schedule.iter().enumerate() {
        let c = WitnessConfig { epsilon, t, ..*cfg };
        let w = match solve_witness(game, &plan, &c, elements.last().map(|w| &w.profile)) {
            Ok(w) => w,
            Err(Error::NotConverged { .. }) => {
                return Err(Error::SequenceBroken {
                    index,
                    reason: "fixed point did not converge",
                })
            }
            Err(e) => return Err(e),
        };
        if !w.profile.is_interior() {
            return Err(Error::SequenceBroken {
                index,
                reason: "profile is not interior",
            });
        }
        if !w.monotonicity.holds {
            return Err(Error::SequenceBroken {
                index,
                reason: "profile is not weakly payoff monotone",
            });
        }
        elements.push(w);
    }
    let distances = elements.iter().map(Witness::distance_to_target).collect();
    let last = &elements.last().expect("schedule is non-empty").profile;
    let rounded = last.round_support(LIMIT_SUPPORT_THRESHOLD);
    let same = |a: &[f64], b: &[Q]| a.iter().zip(b).all(|(x, y)| (*x > 0.0) == (*y > q(0, 1)));
    let limit = LimitCheck {
        support_matches: same(&rounded.low, &plan.target.low)
            && same(&rounded.high, &plan.target.high),
        target: is_nash(game, &plan.target, q(0, 1))?,
        rounded_regret: max_regret(game, &rounded)?,
    };
    Ok(WitnessSequence {
        elements,
        distances,
        limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::ValuationProfile;

    fn game(vl: u32, vh: u32, pb: u32, variant: Variant) -> AuctionGame {
        AuctionGame::new(ValuationProfile::new(vl, vh, pb).unwrap(), variant)
    }

    #[test]
    fn schedule_defaults() {
        let s = default_witness_schedule();
        assert_eq!(s.len(), 4);
        assert_eq!(s[0], (0.1, 20.0));
        assert!((s[3].0 - 1e-4).abs() < 1e-18);
        assert_eq!(s[3].1, 2500.0);
    }

    #[test]
    fn lowest_bid_witness() {
        let g = game(4, 8, 6, Variant::WinnerBid);
        let cfg = WitnessConfig {
            epsilon: 0.01,
            t: 50.0,
            ..WitnessConfig::default()
        };
        let w = construct_witness(&g, 2, &cfg).unwrap();
        assert_eq!(w.plan.case, WitnessCase::LowestBid);
        assert_eq!(w.plan.target, StrategyProfile::pure(7, 1, 2));
        assert!(w.distance_to_target() < 0.02);
        assert!(w.monotonicity.holds);
        assert!(w.residual < 1e-8);
        assert!(w.profile.is_interior());
    }

    #[test]
    fn uniform_below_target() {
        let g = game(4, 16, 10, Variant::WinnerBid);
        let plan = plan_witness(&g, 4).unwrap();
        assert_eq!(plan.case, WitnessCase::UniformBelow);
        assert_eq!(plan.target.high, point_mass::<Q>(11, 4));
        assert_eq!(plan.target.low, uniform_on::<Q>(11, 0..4));
    }

    #[test]
    fn rejects_bids_outside_the_allowed_set() {
        let g = game(4, 8, 6, Variant::WinnerBid);
        assert_eq!(plan_witness(&g, 4), Err(Error::BidNotAllowed { p: 4 }));
        let eq = game(6, 6, 5, Variant::WinnerBid);
        assert_eq!(plan_witness(&eq, 3), Err(Error::EqualValuations));
        let g1 = AuctionGame::with_gamma(*g.profile(), Variant::WinnerBid, q(1, 1)).unwrap();
        assert_eq!(plan_witness(&g1, 2), Err(Error::UnsupportedTieRule));
    }

    #[test]
    fn window_quantities() {
        // v = (8, 20): cutoff 6 is attained, so p = 6 is the edge case
        let g = game(8, 20, 12, Variant::WinnerBid);
        let plan = plan_witness(&g, 6).unwrap();
        assert_eq!(plan.case, WitnessCase::WindowEdge);
        assert_eq!((plan.y, plan.n), (Some(1), Some(5)));
        let r = plan.r.unwrap();
        let at_y = g.expected_utility(Role::High, 1, &plan.target.low).unwrap();
        assert!(g.expected_utility(Role::High, r, &plan.target.low).unwrap() >= at_y);
        if r < 12 {
            assert!(
                g.expected_utility(Role::High, r + 1, &plan.target.low)
                    .unwrap()
                    < at_y
            );
        }
        let eta = plan.eta(0.01).unwrap();
        assert!((eta - 0.01 / (2.0 * (r - 1 + 2) as f64)).abs() < 1e-15);
        assert!((plan.tau(0.01).unwrap() - 2.5 * 0.01 / 5.0).abs() < 1e-15);
    }

    #[test]
    fn response_maps_are_distributions() {
        for (vl, vh, pb, p) in [
            (4, 8, 6, 2),
            (4, 10, 7, 3),
            (4, 16, 10, 4),
            (8, 20, 14, 6),
            (10, 26, 18, 7),
        ] {
            for variant in [Variant::WinnerBid, Variant::LoserBid] {
                let g = game(vl, vh, pb, variant);
                let p = match variant {
                    Variant::WinnerBid => p,
                    Variant::LoserBid => pb as usize - p,
                };
                let plan = plan_witness(&g, p).unwrap();
                let map = plan.response_map(plan.epsilon_ceiling, 10.0);
                for i in 0..2 {
                    let mass: f64 = map.base[i].iter().sum::<f64>() + map.weight[i];
                    assert!((mass - 1.0).abs() < 1e-12);
                    assert!(map.base[i].iter().all(|&b| b >= 0.0));
                }
            }
        }
    }

    #[test]
    fn sequence_converges() {
        let g = game(4, 8, 6, Variant::WinnerBid);
        let sched = [(0.1, 20.0), (0.01, 100.0), (0.001, 500.0)];
        let s = witness_sequence(&g, 2, &sched, &WitnessConfig::default()).unwrap();
        assert!(s.distances.windows(2).all(|w| w[1] < w[0]));
        assert!(s.final_distance() < 1e-2);
        assert!(s.limit.holds(2));
        for w in &s.elements {
            assert!(w.monotonicity.holds);
            assert!(w.caps_hold(&g, 1e-9).unwrap());
        }
    }

    #[test]
    fn loser_bid_sequence_mirrors() {
        let wb = game(8, 20, 14, Variant::WinnerBid);
        let lb = game(8, 20, 14, Variant::LoserBid);
        let sched = default_witness_schedule();
        let cfg = WitnessConfig::default();
        let a = witness_sequence(&wb, 6, &sched, &cfg).unwrap();
        let b = witness_sequence(&lb.mirror(), 6, &sched, &cfg).unwrap();
        assert!(a.limit.holds(6) && b.limit.holds(6));
        let c = witness_sequence(&lb, 8, &sched, &cfg).unwrap();
        assert!(c.limit.holds(8));
        assert_eq!(c.target(), &a.target().mirror());
    }

    #[test]
    fn schedule_validation() {
        let g = game(4, 8, 6, Variant::WinnerBid);
        let cfg = WitnessConfig::default();
        assert!(witness_sequence(&g, 2, &[], &cfg).is_err());
        assert!(witness_sequence(&g, 2, &[(0.1, 20.0), (0.2, 30.0)], &cfg).is_err());
        assert!(witness_sequence(&g, 2, &[(0.1, 20.0), (0.01, 20.0)], &cfg).is_err());
    }
}
