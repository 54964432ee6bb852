//! The acceptance suite: oracle and property sweeps A1 to A10 over the
//! configured valuation grid.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use anyhow::Result;
use epa_core::empirical::{
    allowed_bids, pure_empirical, transfer_equilibrium, witness_sequence, EmpiricalBounds,
    WitnessConfig, WitnessSequence,
};
use epa_core::monotonicity::{
    monotone_probability_cap, monotone_probability_cap_log, ProbabilityCap,
};
use epa_core::nash::{efficient_nash_payoffs, enumerate_pure_nash, is_nash, separating_bid};
use epa_core::qre::{path_limit, trace_to_limit, LimitRule, LogisticConfig};
use epa_core::strategy::support;
use epa_core::{q, AuctionGame, Role, StrategyProfile, ValuationProfile, Variant, Q};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::SweepConfig;
use crate::report::{CriterionResult, Status, SuiteReport};
use crate::sampling::sample_monotone;

/// Source of empirical bid bounds; swapped out to exercise failure paths.
pub type BoundsFn = fn(&ValuationProfile, Variant) -> EmpiricalBounds;

/// Proposals per accepted sample before the cap sweep gives up on a game.
const MAX_PROPOSALS: usize = 100_000;

struct Outcome {
    ok: bool,
    measured: Value,
    tolerance: Value,
    details: Vec<String>,
}

pub struct Suite {
    pub config: SweepConfig,
    pub bounds: BoundsFn,
    gamma: Q,
    variants: Vec<Variant>,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn pair(prof: &ValuationProfile) -> String {
    format!("({}, {}, {})", prof.v_low(), prof.v_high(), prof.p_bar())
}

fn first_failures(mut failures: Vec<String>, limit: usize) -> Vec<String> {
    let extra = failures.len().saturating_sub(limit);
    failures.truncate(limit);
    if extra > 0 {
        failures.push(format!("... and {extra} more"));
    }
    failures
}

impl Suite {
    pub fn new(config: SweepConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            gamma: config.gamma()?,
            variants: config.variants()?,
            config,
            bounds: allowed_bids,
        })
    }

    pub fn with_bounds(mut self, bounds: BoundsFn) -> Self {
        self.bounds = bounds;
        self
    }

    fn game(&self, prof: ValuationProfile, variant: Variant) -> AuctionGame {
        AuctionGame::with_gamma(prof, variant, self.gamma).expect("gamma was validated")
    }

    fn uniform_ties(&self) -> bool {
        self.gamma == q(1, 2)
    }

    fn games(&self) -> Vec<(ValuationProfile, Variant)> {
        self.config
            .profiles()
            .into_iter()
            .flat_map(|p| self.variants.iter().map(move |&v| (p, v)))
            .collect()
    }

    fn witness_schedule(&self) -> Vec<(f64, f64)> {
        self.config.witness_schedule()
    }

    fn run(
        &self,
        id: &'static str,
        description: &'static str,
        budget: Duration,
        check: impl FnOnce(&Self) -> Option<Outcome>,
    ) -> Option<CriterionResult> {
        if !self.config.runs(id) {
            return None;
        }
        let start = Instant::now();
        let outcome = check(self);
        let elapsed = start.elapsed();
        let mut result = match outcome {
            Some(o) => CriterionResult {
                id,
                description,
                status: if o.ok { Status::Pass } else { Status::Fail },
                measured: o.measured,
                tolerance: o.tolerance,
                details: o.details,
                elapsed,
                budget,
            },
            None => CriterionResult {
                id,
                description,
                status: Status::Skipped,
                measured: Value::Null,
                tolerance: Value::Null,
                details: vec![format!("requires gamma = 1/2, configured {}", self.gamma)],
                elapsed,
                budget,
            },
        };
        if result.status == Status::Pass && !result.within_budget() {
            result.status = Status::Fail;
            result
                .details
                .push(format!("runtime {elapsed:.2?} exceeds {budget:?}"));
        }
        Some(result)
    }

    /// Runs every selected criterion in order.
    pub fn run_all(&self) -> SuiteReport {
        let criteria: Vec<CriterionResult> = [
            self.a1(),
            self.a2(),
            self.a3(),
            self.a4(),
            self.a5(),
            self.a6(),
            self.a7(),
            self.a8(),
            self.a9(),
            self.a10(),
        ]
        .into_iter()
        .flatten()
        .collect();
        SuiteReport {
            seed: self.config.seed,
            gamma: self.gamma.to_string(),
            v_high_max: self.config.v_high_max,
            passed: criteria.iter().all(CriterionResult::passed),
            criteria,
        }
    }

    pub fn a1(&self) -> Option<CriterionResult> {
        self.run(
            "A1",
            "efficient pure-equilibrium payoffs equal the closed-form set and every pure equilibrium separates inside the Nash range",
            secs(10),
            |s| {
                let games = s.games();
                let failures: Vec<String> = games
                    .par_iter()
                    .filter_map(|&(prof, variant)| {
                        let g = s.game(prof, variant);
                        let mut efficient = BTreeSet::new();
                        for eq in enumerate_pure_nash(&g) {
                            let Ok(sep) = separating_bid(&g, &eq) else {
                                return Some(format!("{variant} {}: no separating bid", pair(&prof)));
                            };
                            if !prof.nash_range().contains(&sep.p) {
                                return Some(format!("{variant} {}: p = {} outside range", pair(&prof), sep.p));
                            }
                            if sep.efficient {
                                let (pl, ph) = g.payoffs(&eq);
                                efficient.insert((pl, ph));
                            }
                        }
                        let expected: BTreeSet<(Q, Q)> = efficient_nash_payoffs(&prof)
                            .into_iter()
                            .map(|(a, b)| (Q::from_integer(a as i128), Q::from_integer(b as i128)))
                            .collect();
                        (efficient != expected)
                            .then(|| format!("{variant} {}: payoff set differs", pair(&prof)))
                    })
                    .collect();
                Some(Outcome {
                    ok: failures.is_empty(),
                    measured: json!(failures.len()),
                    tolerance: json!(0),
                    details: [vec![format!("{} games", games.len())], first_failures(failures, 10)].concat(),
                })
            },
        )
    }

    pub fn a2(&self) -> Option<CriterionResult> {
        self.run(
            "A2",
            "empirical bid bounds reproduce the reference spot values",
            secs(1),
            |s| {
                use Variant::{LoserBid as Lb, WinnerBid as Wb};
                type Spot = (Variant, u32, u32, Option<u32>, &'static [usize]);
                let spots: [Spot; 6] = [
                    (Wb, 4, 8, None, &[2]),
                    (Wb, 4, 16, None, &[2, 3, 4]),
                    (Wb, 8, 16, None, &[4, 5]),
                    (Wb, 10, 16, None, &[5, 6]),
                    (Lb, 4, 8, Some(6), &[4]),
                    (Lb, 4, 16, Some(10), &[6, 7, 8]),
                ];
                let mut failures = Vec::new();
                for (variant, vl, vh, pb, expected) in spots {
                    let prof = match pb {
                        Some(pb) => ValuationProfile::new(vl, vh, pb),
                        None => ValuationProfile::with_min_cap(vl, vh),
                    }
                    .expect("spot profiles are valid");
                    let b = (s.bounds)(&prof, variant);
                    if b.allowed != expected {
                        failures.push(format!(
                            "{variant} {}: got {:?}, expected {expected:?}",
                            pair(&prof),
                            b.allowed
                        ));
                    }
                }
                let far = (s.bounds)(&ValuationProfile::with_min_cap(4, 16).unwrap(), Wb);
                if far.cutoff != q(9, 2) || far.strict {
                    failures.push(format!(
                        "winner-bid (4, 16) cutoff {} (strict {})",
                        far.cutoff, far.strict
                    ));
                }
                Some(Outcome {
                    ok: failures.is_empty(),
                    measured: json!(failures.len()),
                    tolerance: json!(0),
                    details: failures,
                })
            },
        )
    }

    pub fn a3(&self) -> Option<CriterionResult> {
        self.run(
            "A3",
            "winner-bid sets sit in the left half of the Nash range, loser-bid sets in the right half, and they mirror each other",
            secs(1),
            |s| {
                let profiles = s.config.symmetric_profiles();
                let mut failures = Vec::new();
                for prof in &profiles {
                    let mid = prof.c_low() + prof.c_high();
                    let wb = (s.bounds)(prof, Variant::WinnerBid).allowed;
                    let lb = (s.bounds)(prof, Variant::LoserBid).allowed;
                    if wb.iter().any(|&p| 2 * p as u32 > mid) {
                        failures.push(format!("{}: winner-bid {wb:?} crosses the midpoint", pair(prof)));
                    }
                    if lb.iter().any(|&p| (2 * p as u32) < mid) {
                        failures.push(format!("{}: loser-bid {lb:?} crosses the midpoint", pair(prof)));
                    }
                    let mirrored: BTreeSet<usize> = wb.iter().map(|&p| mid as usize - p).collect();
                    if mirrored != lb.iter().copied().collect() {
                        failures.push(format!("{}: {lb:?} is not the mirror of {wb:?}", pair(prof)));
                    }
                }
                Some(Outcome {
                    ok: failures.is_empty(),
                    measured: json!(failures.len()),
                    tolerance: json!(0),
                    details: [vec![format!("{} profiles", profiles.len())], first_failures(failures, 10)].concat(),
                })
            },
        )
    }

    fn sequence(
        &self,
        prof: ValuationProfile,
        variant: Variant,
        p: usize,
    ) -> epa_core::Result<WitnessSequence> {
        witness_sequence(
            &self.game(prof, variant),
            p,
            &self.witness_schedule(),
            &WitnessConfig::default(),
        )
    }

    pub fn a4(&self) -> Option<CriterionResult> {
        self.run(
            "A4",
            "witness sequences are interior monotone fixed points converging to a Nash target",
            secs(300),
            |s| {
                if !s.uniform_ties() {
                    return None;
                }
                let targets: Vec<(ValuationProfile, Variant, usize)> = s
                    .games()
                    .into_iter()
                    .flat_map(|(prof, v)| (s.bounds)(&prof, v).allowed.into_iter().map(move |p| (prof, v, p)))
                    .collect();
                let results: Vec<Result<(f64, f64), String>> = targets
                    .par_iter()
                    .map(|&(prof, variant, p)| {
                        let tag = format!("{variant} {} p = {p}", pair(&prof));
                        let seq = s.sequence(prof, variant, p).map_err(|e| format!("{tag}: {e}"))?;
                        let residual = seq.elements.iter().map(|w| w.residual).fold(0.0, f64::max);
                        let dist = seq.final_distance();
                        let interior = seq.elements.iter().all(|w| w.profile.is_interior());
                        let monotone = seq.elements.iter().all(|w| w.monotonicity.holds);
                        if !interior || !monotone || residual >= 1e-8 || dist >= 1e-2 || !seq.limit.holds(p) {
                            return Err(format!(
                                "{tag}: interior {interior}, monotone {monotone}, residual {residual:.1e}, distance {dist:.1e}, limit {}",
                                seq.limit.holds(p)
                            ));
                        }
                        Ok((dist, residual))
                    })
                    .collect();
                let worst_dist = results.iter().flatten().map(|r| r.0).fold(0.0, f64::max);
                let worst_res = results.iter().flatten().map(|r| r.1).fold(0.0, f64::max);
                let failures: Vec<String> = results.into_iter().filter_map(Result::err).collect();
                Some(Outcome {
                    ok: failures.is_empty(),
                    measured: json!(worst_dist),
                    tolerance: json!(1e-2),
                    details: [
                        vec![
                            format!("{} targets, {} failed", targets.len(), failures.len()),
                            format!("largest residual {worst_res:.2e}"),
                        ],
                        first_failures(failures, 10),
                    ]
                    .concat(),
                })
            },
        )
    }

    pub fn a5(&self) -> Option<CriterionResult> {
        self.run(
            "A5",
            "logistic quantal-response limits are equilibria whose separating bid is allowed",
            secs(300),
            |s| {
                if !s.uniform_ties() {
                    return None;
                }
                let games = s.games();
                let results: Vec<Result<(f64, f64), String>> = games
                    .par_iter()
                    .map(|&(prof, variant)| {
                        let tag = format!("{variant} {}", pair(&prof));
                        let g = s.game(prof, variant);
                        let path = trace_to_limit(&g, &LogisticConfig::default(), s.config.max_lambda)
                            .map_err(|e| format!("{tag}: {e}"))?;
                        let lambda = path.last().map_or(0.0, |r| r.lambda);
                        let residual = path.records.iter().map(|r| r.residual).fold(0.0, f64::max);
                        if !path.all_converged() || residual >= 1e-8 {
                            return Err(format!("{tag}: residual {residual:.1e}"));
                        }
                        let (_, report) = path_limit(&g, &path, LimitRule::for_lambda(lambda))
                            .map_err(|e| format!("{tag}: {e}"))?;
                        let allowed = (s.bounds)(&prof, variant).allowed;
                        match report.separating_bid {
                            Some(p) if allowed.contains(&p) => Ok((lambda, report.max_regret)),
                            other => Err(format!("{tag}: separating bid {other:?}, allowed {allowed:?}")),
                        }
                    })
                    .collect();
                let max_lambda = results.iter().flatten().map(|r| r.0).fold(0.0, f64::max);
                let worst_regret = results.iter().flatten().map(|r| r.1).fold(0.0, f64::max);
                let failures: Vec<String> = results.into_iter().filter_map(Result::err).collect();
                Some(Outcome {
                    ok: failures.is_empty(),
                    measured: json!(failures.len()),
                    tolerance: json!(0),
                    details: [
                        vec![
                            format!("{} paths", games.len()),
                            format!("largest lambda {max_lambda:.1}, largest limit regret {worst_regret:.2e}"),
                        ],
                        first_failures(failures, 10),
                    ]
                    .concat(),
                })
            },
        )
    }

    pub fn a6(&self) -> Option<CriterionResult> {
        self.run(
            "A6",
            "lowest-bid profiles are exact equilibria reached by witnesses; higher winner bids need a mixing low agent",
            secs(60),
            |s| {
                if !s.uniform_ties() {
                    return None;
                }
                let games = s.games();
                let failures: Vec<String> = games
                    .par_iter()
                    .flat_map_iter(|&(prof, variant)| {
                        let mut out = Vec::new();
                        let tag = format!("{variant} {}", pair(&prof));
                        let g = s.game(prof, variant);
                        let pure = pure_empirical(&prof, variant).expect("grid values differ");
                        if !is_nash(&g, &pure, q(0, 1)).expect("sizes match").is_nash {
                            out.push(format!("{tag}: pure profile is not an equilibrium"));
                        }
                        let p0 = match variant {
                            Variant::WinnerBid => prof.c_low(),
                            Variant::LoserBid => prof.c_high(),
                        } as usize;
                        match s.sequence(prof, variant, p0) {
                            Ok(seq) if seq.target() == &pure && seq.limit.holds(p0) => {}
                            Ok(_) => out.push(format!("{tag}: witness does not reach the pure profile")),
                            Err(e) => out.push(format!("{tag}: {e}")),
                        }
                        if variant == Variant::WinnerBid {
                            for p in (s.bounds)(&prof, variant).allowed.into_iter().filter(|&p| p > p0) {
                                match s.sequence(prof, variant, p) {
                                    Ok(seq) if seq.limit.holds(p) && support(&seq.target().low).count() >= 2 => {}
                                    Ok(_) => out.push(format!("{tag} p = {p}: low agent does not mix")),
                                    Err(e) => out.push(format!("{tag} p = {p}: {e}")),
                                }
                            }
                        }
                        out
                    })
                    .collect();
                Some(Outcome {
                    ok: failures.is_empty(),
                    measured: json!(failures.len()),
                    tolerance: json!(0),
                    details: [vec![format!("{} games", games.len())], first_failures(failures, 10)].concat(),
                })
            },
        )
    }

    pub fn a7(&self) -> Option<CriterionResult> {
        self.run(
            "A7",
            "with equal values every pure equilibrium pays (v/2, v/2)",
            secs(1),
            |s| {
                let mut failures = Vec::new();
                let mut count = 0;
                for prof in s.config.equal_profiles() {
                    let half = Q::from_integer(prof.c_low() as i128);
                    for &variant in &s.variants {
                        let g = s.game(prof, variant);
                        let eqs = enumerate_pure_nash(&g);
                        count += eqs.len();
                        if eqs.is_empty() {
                            failures
                                .push(format!("{variant} {}: no pure equilibrium", pair(&prof)));
                        }
                        for eq in eqs {
                            if g.payoffs(&eq) != (half, half) {
                                failures.push(format!(
                                    "{variant} {}: payoffs {:?}",
                                    pair(&prof),
                                    g.payoffs(&eq)
                                ));
                            }
                        }
                    }
                }
                Some(Outcome {
                    ok: failures.is_empty(),
                    measured: json!(failures.len()),
                    tolerance: json!(0),
                    details: [
                        vec![format!("{count} equilibria")],
                        first_failures(failures, 10),
                    ]
                    .concat(),
                })
            },
        )
    }

    pub fn a8(&self) -> Option<CriterionResult> {
        self.run(
            "A8",
            "efficient equitable equilibria of the neighbouring profile transfer with the low payoff in its band",
            secs(5),
            |s| {
                if !s.uniform_ties() {
                    return None;
                }
                let mut failures = Vec::new();
                let mut count = 0;
                for prof in s.config.profiles() {
                    let g = s.game(prof, Variant::WinnerBid);
                    for t in 0..prof.equity_surplus() {
                        count += 1;
                        let b = (prof.c_low() + t) as usize;
                        let eq = StrategyProfile::pure(g.num_bids(), b, b + 1);
                        match transfer_equilibrium(&g, &eq, t) {
                            Ok(r) if r.holds => {}
                            Ok(r) => failures.push(format!("{} t = {t}: pi_low {}", pair(&prof), r.pi_low)),
                            Err(e) => failures.push(format!("{} t = {t}: {e}", pair(&prof))),
                        }
                    }
                }
                Some(Outcome {
                    ok: failures.is_empty(),
                    measured: json!(failures.len()),
                    tolerance: json!(0),
                    details: [vec![format!("{count} transfers")], first_failures(failures, 10)].concat(),
                })
            },
        )
    }

    pub fn a9(&self) -> Option<CriterionResult> {
        self.run(
            "A9",
            "sampled monotone profiles respect the probability cap, and the bid below a winner bid is capped at 1/(t + 2)",
            secs(60),
            |s| {
                let games = s.games();
                let n = s.config.cap_samples;
                let results: Vec<Result<(f64, usize), String>> = games
                    .par_iter()
                    .enumerate()
                    .map(|(i, &(prof, variant))| {
                        let tag = format!("{variant} {}", pair(&prof));
                        let g = s.game(prof, variant);
                        let mut rng = ChaCha8Rng::seed_from_u64(s.config.seed.wrapping_add(i as u64));
                        let mut worst = f64::NEG_INFINITY;
                        let mut proposals = 0;
                        for _ in 0..n {
                            let (profile, tries) = sample_monotone(&g, &mut rng, MAX_PROPOSALS)
                                .ok_or_else(|| format!("{tag}: no monotone sample in {MAX_PROPOSALS} proposals"))?;
                            proposals += tries;
                            for role in Role::BOTH {
                                for bid in 0..g.num_bids() {
                                    let c = monotone_probability_cap(&g, &profile, role, bid, 1e-9)
                                        .expect("sizes match");
                                    worst = worst.max(c.prob - c.cap);
                                    if !c.satisfied {
                                        return Err(format!("{tag}: {role:?} bid {bid} has {} over cap {}", c.prob, c.cap));
                                    }
                                }
                            }
                        }
                        Ok((worst, proposals))
                    })
                    .collect();
                let worst = results.iter().flatten().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
                let proposals: usize = results.iter().flatten().map(|r| r.1).sum();
                let mut failures: Vec<String> = results.into_iter().filter_map(Result::err).collect();
                let instance = s.cap_instance();
                let instance_line = match &instance {
                    Ok((count, top)) => format!("instance (4, 16, 10) p = 4: {count} profiles, largest sigma_low(3) {top:.4} <= 1/3"),
                    Err(e) => {
                        failures.push(e.clone());
                        format!("instance failed: {e}")
                    }
                };
                Some(Outcome {
                    ok: failures.is_empty(),
                    measured: json!(worst),
                    tolerance: json!(1e-9),
                    details: [
                        vec![
                            format!("{} games x {n} samples, {proposals} proposals", games.len()),
                            instance_line,
                        ],
                        first_failures(failures, 10),
                    ]
                    .concat(),
                })
            },
        )
    }

    /// Winner-bid auction `(4, 16)`, cap 10, winner bid `p = 4`, so
    /// `t = p - 1 - c_low = 1`: in monotone profiles the low agent's bid 3
    /// is matched by bids 1 and 2 and so carries at most `1/3`.
    fn cap_instance(&self) -> Result<(usize, f64), String> {
        let (p, t) = (4usize, 1usize);
        let prof = ValuationProfile::new(4, 16, 10).expect("valid profile");
        let g = self.game(prof, Variant::WinnerBid);
        let bound = 1.0 / (t + 2) as f64;
        let check = |c: ProbabilityCap<f64>| -> Result<f64, String> {
            if c.k < t + 1 || c.cap > bound + 1e-12 || !c.satisfied {
                return Err(format!(
                    "cap instance: k = {}, cap {}, prob {}",
                    c.k, c.cap, c.prob
                ));
            }
            Ok(c.prob)
        };
        let mut top: f64 = 0.0;
        let mut count = 0;
        let path = trace_to_limit(&g, &LogisticConfig::default(), self.config.max_lambda)
            .map_err(|e| e.to_string())?;
        for r in &path.records {
            let c = monotone_probability_cap(&g, &r.profile, Role::Low, p - 1, 1e-9)
                .expect("sizes match");
            top = top.max(check(c)?);
            count += 1;
        }
        if self.uniform_ties() {
            let seq = self
                .sequence(prof, Variant::WinnerBid, p)
                .map_err(|e| e.to_string())?;
            for w in &seq.elements {
                let c = monotone_probability_cap_log(
                    &g,
                    &w.profile,
                    &w.log_profile,
                    Role::Low,
                    p - 1,
                    1e-9,
                )
                .expect("sizes match");
                top = top.max(check(c)?);
                count += 1;
            }
        }
        Ok((count, top))
    }

    pub fn a10(&self) -> Option<CriterionResult> {
        self.run(
            "A10",
            "winner-bid and loser-bid empirical payoff sets intersect only on the listed profiles",
            secs(1),
            |s| {
                let sweep = || -> Vec<String> {
                    s.config
                        .symmetric_profiles()
                        .iter()
                        .filter_map(|prof| {
                            let wb: BTreeSet<(u32, u32)> = (s.bounds)(prof, Variant::WinnerBid)
                                .payoffs()
                                .into_iter()
                                .collect();
                            let lb: BTreeSet<(u32, u32)> = (s.bounds)(prof, Variant::LoserBid)
                                .payoffs()
                                .into_iter()
                                .collect();
                            let common: Vec<_> = wb.intersection(&lb).collect();
                            (!common.is_empty()).then(|| format!("{}: {common:?}", pair(prof)))
                        })
                        .collect()
                };
                let exceptions = sweep();
                let stable = exceptions == sweep();
                let mut details = vec![format!("{} profiles", s.config.symmetric_profiles().len())];
                if exceptions.is_empty() {
                    details.push("no intersections".into());
                } else {
                    details.extend(exceptions.iter().map(|e| format!("intersection {e}")));
                }
                if !stable {
                    details.push("intersection list changed between runs".into());
                }
                Some(Outcome {
                    ok: stable,
                    measured: json!(exceptions.len()),
                    tolerance: json!("listed"),
                    details,
                })
            },
        )
    }
}

/// Runs the suite for `config` with the standard bounds.
pub fn verify(config: SweepConfig) -> Result<SuiteReport> {
    Ok(Suite::new(config)?.run_all())
}
