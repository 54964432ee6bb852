//! Fixed points of smooth response maps `sigma = F(sigma)` over bid
//! distributions, by damped Jacobi iteration with a Newton polish.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::game::{AuctionGame, Role};
use crate::strategy::{validate, StrategyProfile};

/// Predictor-corrector steps allowed to the continuation fallback.
const CONTINUATION_STEPS: usize = 20_000;

/// Relaxation gives up after this many iterations without a new best
/// residual.
const STALL: usize = 5_000;

/// Probabilities below this are clamped before renormalizing.
const UNDERFLOW: f64 = 1e-300;

/// Logistic choice probabilities `exp(lambda x_m) / sum_n exp(lambda x_n)`.
pub fn logistic_response(payoffs: &[f64], lambda: f64) -> Result<Vec<f64>> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidConfig(
            "lambda must be finite and non-negative",
        ));
    }
    if payoffs.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinitePayoff);
    }
    let mut out = vec![0.0; payoffs.len()];
    logistic_into(payoffs, lambda, &mut out);
    Ok(out)
}

pub(crate) fn logistic_into(payoffs: &[f64], lambda: f64, out: &mut [f64]) {
    let top = payoffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    for (o, &x) in out.iter_mut().zip(payoffs) {
        *o = libm::exp(lambda * (x - top));
        total += *o;
    }
    let mut clamped = false;
    for o in out.iter_mut() {
        *o /= total;
        if *o < UNDERFLOW {
            *o = f64::MIN_POSITIVE;
            clamped = true;
        }
    }
    if clamped {
        let total: f64 = out.iter().sum();
        out.iter_mut().for_each(|o| *o /= total);
    }
}

/// A response map of the form `base + weight * logistic_lambda(U)` for each
/// agent, where `base` is a fixed sub-probability vector of mass
/// `1 - weight`. With zero base and unit weight this is the logistic
/// quantal response.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedLogit {
    pub lambda: f64,
    pub base: [Vec<f64>; 2],
    pub weight: [f64; 2],
}

impl PerturbedLogit {
    pub fn logistic(num_bids: usize, lambda: f64) -> Self {
        Self {
            lambda,
            base: [vec![0.0; num_bids], vec![0.0; num_bids]],
            weight: [1.0, 1.0],
        }
    }

    fn idx(role: Role) -> usize {
        match role {
            Role::Low => 0,
            Role::High => 1,
        }
    }

    fn validate(&self, num_bids: usize) -> Result<()> {
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::InvalidConfig(
                "lambda must be finite and non-negative",
            ));
        }
        for i in 0..2 {
            if self.base[i].len() != num_bids {
                return Err(Error::LengthMismatch {
                    got: self.base[i].len(),
                    expected: num_bids,
                });
            }
            let w = self.weight[i];
            if !(w > 0.0 && w <= 1.0) || self.base[i].iter().any(|&b| !(b >= 0.0)) {
                return Err(Error::InvalidConfig("response weights must lie in (0, 1]"));
            }
            let mass = self.base[i].iter().sum::<f64>() + w;
            if (mass - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidConfig(
                    "response base and weight must sum to one",
                ));
            }
        }
        Ok(())
    }

    fn respond(&self, role: Role, utils: &[f64], out: &mut [f64]) {
        self.respond_at(self.lambda, role, utils, out);
    }

    fn respond_at(&self, lambda: f64, role: Role, utils: &[f64], out: &mut [f64]) {
        let i = Self::idx(role);
        logistic_into(utils, lambda, out);
        let w = self.weight[i];
        for (o, b) in out.iter_mut().zip(&self.base[i]) {
            *o = b + w * *o;
        }
    }

    /// Row-major `d out / d utils` at `utils`.
    fn jacobian(&self, role: Role, utils: &[f64], out: &mut [f64]) {
        self.jacobian_at(self.lambda, role, utils, out);
    }

    fn jacobian_at(&self, lambda: f64, role: Role, utils: &[f64], out: &mut [f64]) {
        let n = utils.len();
        let mut p = vec![0.0; n];
        logistic_into(utils, lambda, &mut p);
        let s = self.weight[Self::idx(role)] * lambda;
        for m in 0..n {
            for k in 0..n {
                let d = if m == k { p[m] } else { 0.0 };
                out[m * n + k] = s * (d - p[m] * p[k]);
            }
        }
    }

    /// `d out / d lambda` at `utils`.
    fn lambda_derivative(&self, lambda: f64, role: Role, utils: &[f64], out: &mut [f64]) {
        logistic_into(utils, lambda, out);
        let mean: f64 = out.iter().zip(utils).map(|(p, u)| p * u).sum();
        let w = self.weight[Self::idx(role)];
        for (o, u) in out.iter_mut().zip(utils) {
            *o *= w * (u - mean);
        }
    }
}

/// Iteration controls shared by the quantal-response and witness solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointConfig {
    /// Initial relaxation weight `alpha` in `(0, 1]`.
    pub damping: f64,
    /// Target for the sup-norm residual `|F(sigma) - sigma|`.
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Attempt Newton steps on `F(sigma) - sigma` once the damped
    /// iteration stalls.
    pub newton: bool,
}

impl Default for FixedPointConfig {
    fn default() -> Self {
        Self {
            damping: 0.5,
            residual_tol: 1e-10,
            max_iter: 200_000,
            newton: true,
        }
    }
}

impl FixedPointConfig {
    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidConfig("damping must lie in (0, 1]"));
        }
        if !(self.residual_tol > 0.0) {
            return Err(Error::InvalidConfig("residual tolerance must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint {
    pub profile: StrategyProfile<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

struct Solver<'a> {
    game: &'a AuctionGame,
    map: &'a PerturbedLogit,
    n: usize,
    utils: Vec<f64>,
}

impl Solver<'_> {
    /// Writes `F(sigma)` into `out` and returns the sup-norm residual.
    fn apply(&mut self, sigma: &StrategyProfile<f64>, out: &mut StrategyProfile<f64>) -> f64 {
        let mut res: f64 = 0.0;
        for role in Role::BOTH {
            self.game
                .utilities_f64(role, sigma.get(role.other()), &mut self.utils);
            let target = out.get_mut(role);
            self.map.respond(role, &self.utils, target);
            for (t, s) in target.iter().zip(sigma.get(role)) {
                res = res.max((t - s).abs());
            }
        }
        res
    }

    /// `U_role = A_role sigma_other` for both agents, stacked.
    fn utilities_of(&mut self, sigma: &StrategyProfile<f64>) -> Vec<f64> {
        let mut u = vec![0.0; 2 * self.n];
        for (i, role) in Role::BOTH.into_iter().enumerate() {
            self.game.utilities_f64(
                role,
                sigma.get(role.other()),
                &mut u[i * self.n..(i + 1) * self.n],
            );
        }
        u
    }

    fn profile_of(&self, u: &[f64]) -> StrategyProfile<f64> {
        let n = self.n;
        let mut out = StrategyProfile {
            low: vec![0.0; n],
            high: vec![0.0; n],
        };
        for (i, role) in Role::BOTH.into_iter().enumerate() {
            self.map
                .respond(role, &u[i * n..(i + 1) * n], out.get_mut(role));
        }
        out
    }

    /// Newton iteration on the utility-space form `U = A f(U)` of the fixed
    /// point problem, which has no positivity constraints. Starts from the
    /// utilities induced by `sigma` and returns the best profile found when
    /// it improves on `residual`.
    fn newton(
        &mut self,
        sigma: &StrategyProfile<f64>,
        residual: f64,
        tol: f64,
    ) -> Option<(StrategyProfile<f64>, f64)> {
        let n = self.n;
        let dim = 2 * n;
        let mut u = self.utilities_of(sigma);
        let mut best: Option<(StrategyProfile<f64>, f64)> = None;
        let mut best_res = residual;
        let mut scratch = sigma.clone();
        let mut jac = vec![0.0; dim * dim];
        let mut df = vec![0.0; n * n];
        for _ in 0..30 {
            let sig = self.profile_of(&u);
            let image_u = self.utilities_of(&sig);
            let h_norm = |a: &[f64], b: &[f64]| {
                a.iter()
                    .zip(b)
                    .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
            };
            let merit = h_norm(&u, &image_u);
            // J = I - [[0, A_l Df_h], [A_h Df_l, 0]]
            jac.iter_mut().for_each(|x| *x = 0.0);
            for d in 0..dim {
                jac[d * dim + d] = 1.0;
            }
            for (bi, role) in Role::BOTH.into_iter().enumerate() {
                // rows of role, columns of the other agent's utilities
                let other = 1 - bi;
                self.map
                    .jacobian(role.other(), &u[other * n..(other + 1) * n], &mut df);
                for m in 0..n {
                    for j in 0..n {
                        let mut acc = 0.0;
                        for k in 0..n {
                            acc += self.game.payoff_as::<f64>(role, m, k) * df[k * n + j];
                        }
                        jac[(bi * n + m) * dim + other * n + j] -= acc;
                    }
                }
            }
            let mut rhs: Vec<f64> = image_u.iter().zip(&u).map(|(a, b)| a - b).collect();
            if !solve_linear(&mut jac, &mut rhs, dim) {
                break;
            }
            let mut step = 1.0;
            let mut accepted = false;
            for _ in 0..30 {
                let trial: Vec<f64> = u.iter().zip(&rhs).map(|(a, d)| a + step * d).collect();
                let sig = self.profile_of(&trial);
                let img = self.utilities_of(&sig);
                if h_norm(&trial, &img) < merit {
                    u = trial;
                    let r = self.apply(&sig, &mut scratch);
                    if r < best_res {
                        best_res = r;
                        best = Some((sig, r));
                    }
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted || best_res <= tol {
                break;
            }
        }
        best
    }

    /// `H(u, lambda) = u - A f_lambda(u)` and its Jacobian, `dim` columns
    /// for `u` followed by one for `lambda`, row stride `dim + 1`.
    fn homotopy(&self, u: &[f64], lambda: f64, h: &mut [f64], jac: &mut [f64]) {
        let n = self.n;
        let dim = 2 * n;
        let cols = dim + 1;
        let mut sig = vec![0.0; n];
        let mut dsig = vec![0.0; n];
        let mut df = vec![0.0; n * n];
        jac.iter_mut().for_each(|x| *x = 0.0);
        for (bi, role) in Role::BOTH.into_iter().enumerate() {
            let other = 1 - bi;
            let u_other = &u[other * n..(other + 1) * n];
            self.map.respond_at(lambda, role.other(), u_other, &mut sig);
            self.map.jacobian_at(lambda, role.other(), u_other, &mut df);
            self.map
                .lambda_derivative(lambda, role.other(), u_other, &mut dsig);
            for m in 0..n {
                let row = bi * n + m;
                let mut image = 0.0;
                let mut dl = 0.0;
                for k in 0..n {
                    let a = self.game.payoff_as::<f64>(role, m, k);
                    image += a * sig[k];
                    dl += a * dsig[k];
                    if a != 0.0 {
                        for j in 0..n {
                            jac[row * cols + other * n + j] -= a * df[k * n + j];
                        }
                    }
                }
                h[row] = u[row] - image;
                jac[row * cols + row] += 1.0;
                jac[row * cols + dim] = -dl;
            }
        }
    }

    /// Newton on `H(., lambda) = 0` with `lambda` held fixed.
    fn correct_at(&mut self, u: &mut [f64], lambda: f64, tol: f64) -> Option<StrategyProfile<f64>> {
        let dim = 2 * self.n;
        let mut h = vec![0.0; dim];
        let mut full = vec![0.0; dim * (dim + 1)];
        let mut scratch = StrategyProfile::uniform(self.n);
        for _ in 0..20 {
            self.homotopy(u, lambda, &mut h, &mut full);
            let mut jac: Vec<f64> = full
                .chunks(dim + 1)
                .flat_map(|row| row[..dim].iter().copied())
                .collect();
            for x in h.iter_mut() {
                *x = -*x;
            }
            if !solve_linear(&mut jac, &mut h, dim) {
                return None;
            }
            u.iter_mut().zip(&h).for_each(|(a, d)| *a += d);
            let sig = self.profile_of(u);
            if self.apply(&sig, &mut scratch) <= tol {
                return Some(sig);
            }
        }
        None
    }

    /// Pseudo-arclength continuation of the fixed point from `lambda = 0`,
    /// where it is explicit, up to the map's own `lambda`. Follows the branch
    /// through folds that stall fixed-`lambda` iteration.
    fn continuation(
        &mut self,
        tol: f64,
        max_steps: usize,
    ) -> Option<(StrategyProfile<f64>, usize)> {
        let n = self.n;
        let dim = 2 * n;
        let cols = dim + 1;
        let target = self.map.lambda;
        let mut uniform = StrategyProfile::uniform(n);
        for role in Role::BOTH {
            let zeros = vec![0.0; n];
            self.map
                .respond_at(0.0, role, &zeros, uniform.get_mut(role));
        }
        let mut x = self.utilities_of(&uniform);
        x.push(0.0);
        let mut tangent = vec![0.0; cols];
        tangent[dim] = 1.0;
        let mut step = 0.1;
        let mut h = vec![0.0; dim];
        let mut full = vec![0.0; dim * cols];
        for steps in 1..=max_steps {
            // tangent from [H_x; t_prev] t = e_last
            self.homotopy(&x[..dim], x[dim], &mut h, &mut full);
            let mut aug = full.clone();
            aug.extend_from_slice(&tangent);
            let mut t = vec![0.0; cols];
            t[dim] = 1.0;
            if !solve_linear(&mut aug, &mut t, cols) {
                return None;
            }
            let norm = libm::sqrt(t.iter().map(|v| v * v).sum::<f64>());
            t.iter_mut().for_each(|v| *v /= norm);

            let mut next = None;
            while step > 1e-9 {
                let pred: Vec<f64> = x.iter().zip(&t).map(|(a, d)| a + step * d).collect();
                let mut z = pred.clone();
                let mut ok = false;
                for it in 0..8 {
                    if !(z[dim] >= 0.0) {
                        break;
                    }
                    self.homotopy(&z[..dim], z[dim], &mut h, &mut full);
                    let mut aug = full.clone();
                    aug.extend_from_slice(&t);
                    let mut rhs: Vec<f64> = h.iter().map(|v| -v).collect();
                    rhs.push(-(0..cols).map(|i| t[i] * (z[i] - pred[i])).sum::<f64>());
                    if !solve_linear(&mut aug, &mut rhs, cols) {
                        break;
                    }
                    z.iter_mut().zip(&rhs).for_each(|(a, d)| *a += d);
                    let size = rhs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                    if size < 1e-10 * (1.0 + z[dim]) {
                        ok = it < 6;
                        break;
                    }
                }
                if ok {
                    next = Some(z);
                    break;
                }
                step *= 0.5;
            }
            let z = next?;
            if z[dim] >= target {
                let frac = (target - x[dim]) / (z[dim] - x[dim]);
                let mut u: Vec<f64> = (0..dim).map(|i| x[i] + frac * (z[i] - x[i])).collect();
                if let Some(sig) = self.correct_at(&mut u, target, tol) {
                    return Some((sig, steps));
                }
            }
            x = z;
            tangent = t;
            step = (step * 1.5).min(1.0 + 0.1 * x[dim]);
        }
        None
    }
}

/// Gaussian elimination with partial pivoting; solution left in `b`.
fn solve_linear(a: &mut [f64], b: &mut [f64], n: usize) -> bool {
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
            .expect("non-empty range");
        if !(a[pivot * n + col].abs() > 1e-300) {
            return false;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            b.swap(pivot, col);
        }
        let d = a[col * n + col];
        for row in col + 1..n {
            let f = a[row * n + col] / d;
            if f != 0.0 {
                for k in col..n {
                    a[row * n + k] -= f * a[col * n + k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col * n + k] * b[k];
        }
        b[col] = acc / a[col * n + col];
    }
    b.iter().all(|x| x.is_finite())
}

/// Solves `sigma = F(sigma)` for the response map `map` starting from
/// `init`.
///
/// Each step relaxes `sigma <- (1 - alpha) sigma + alpha F(sigma)`; alpha is
/// halved whenever the residual has grown over the last 10 iterations and
/// regrows toward its starting value while it falls. When enabled, Newton
/// steps are tried every 50 iterations and repeated while they keep
/// improving the residual. A run that fails is restarted from `init`
/// without damping. If that fails too and Newton is enabled, the fixed point
/// is continued in `lambda` from zero. Otherwise the best iterate is
/// returned with `converged == false`.
pub fn solve(
    game: &AuctionGame,
    map: &PerturbedLogit,
    init: &StrategyProfile<f64>,
    cfg: &FixedPointConfig,
) -> Result<FixedPoint> {
    cfg.validate()?;
    let n = game.num_bids();
    map.validate(n)?;
    game.check_len(&init.low)?;
    game.check_len(&init.high)?;
    validate(&init.low)?;
    validate(&init.high)?;

    let mut solver = Solver {
        game,
        map,
        n,
        utils: vec![0.0; n],
    };
    let mut best: Option<FixedPoint> = None;
    let mut iterations = 0;
    let mut dampings = vec![cfg.damping, 1.0];
    dampings.dedup();
    for damping in dampings {
        let mut run = relax(&mut solver, init, damping, cfg);
        iterations += run.iterations;
        run.iterations = iterations;
        if run.converged {
            return Ok(run);
        }
        if best.as_ref().is_none_or(|b| run.residual < b.residual) {
            best = Some(run);
        }
    }
    if cfg.newton {
        if let Some((profile, steps)) = solver.continuation(cfg.residual_tol, CONTINUATION_STEPS) {
            let mut image = profile.clone();
            let residual = solver.apply(&profile, &mut image);
            return Ok(FixedPoint {
                profile,
                residual,
                iterations: iterations + steps,
                converged: true,
            });
        }
    }
    let mut best = best.expect("at least one run");
    best.iterations = iterations;
    Ok(best)
}

fn relax(
    solver: &mut Solver<'_>,
    init: &StrategyProfile<f64>,
    damping: f64,
    cfg: &FixedPointConfig,
) -> FixedPoint {
    let mut sigma = init.clone();
    let mut image = init.clone();
    let mut alpha = damping;
    let mut best = (f64::INFINITY, sigma.clone());
    let mut window_start = f64::INFINITY;
    let mut newton_pending = false;
    let mut last_best = 0;
    let mut iter = 0;
    while iter < cfg.max_iter {
        let res = solver.apply(&sigma, &mut image);
        if res < best.0 {
            best = (res, sigma.clone());
            last_best = iter;
        } else if iter - last_best > STALL {
            break;
        }
        if res <= cfg.residual_tol {
            return FixedPoint {
                profile: sigma,
                residual: res,
                iterations: iter,
                converged: true,
            };
        }
        if iter % 10 == 0 {
            if res > window_start && alpha > 1e-6 {
                alpha *= 0.5;
            } else if res < window_start {
                alpha = (alpha * 1.25).min(damping);
            }
            window_start = res;
        }
        if cfg.newton && (newton_pending || iter % 50 == 49) {
            newton_pending = false;
            if let Some((next, _)) = solver.newton(&sigma, res, cfg.residual_tol) {
                sigma = next;
                iter += 1;
                window_start = f64::INFINITY;
                newton_pending = true;
                continue;
            }
        }
        for role in Role::BOTH {
            let target = image.get(role).to_vec();
            for (s, t) in sigma.get_mut(role).iter_mut().zip(target) {
                *s = (1.0 - alpha) * *s + alpha * t;
            }
        }
        iter += 1;
    }
    let (residual, profile) = best;
    FixedPoint {
        profile,
        residual,
        iterations: iter,
        converged: false,
    }
}

/// Sup-norm residual `|F(sigma) - sigma|` of `profile` under `map`.
pub fn residual(
    game: &AuctionGame,
    map: &PerturbedLogit,
    profile: &StrategyProfile<f64>,
) -> Result<f64> {
    let n = game.num_bids();
    map.validate(n)?;
    game.check_len(&profile.low)?;
    game.check_len(&profile.high)?;
    let mut solver = Solver {
        game,
        map,
        n,
        utils: vec![0.0; n],
    };
    let mut image = profile.clone();
    Ok(solver.apply(profile, &mut image))
}

/// Natural logarithms of `F(sigma)`, computed without underflow. At a fixed
/// point these are the log-probabilities of the profile, including entries
/// far below the `f64` range.
pub fn log_image(
    game: &AuctionGame,
    map: &PerturbedLogit,
    profile: &StrategyProfile<f64>,
) -> Result<StrategyProfile<f64>> {
    let n = game.num_bids();
    map.validate(n)?;
    game.check_len(&profile.low)?;
    game.check_len(&profile.high)?;
    let mut out = StrategyProfile {
        low: vec![0.0; n],
        high: vec![0.0; n],
    };
    let mut utils = vec![0.0; n];
    for role in Role::BOTH {
        game.utilities_f64(role, profile.get(role.other()), &mut utils);
        let i = PerturbedLogit::idx(role);
        let scaled: Vec<f64> = utils.iter().map(|u| map.lambda * u).collect();
        let top = scaled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lse = top + libm::log(scaled.iter().map(|x| libm::exp(x - top)).sum::<f64>());
        let log_w = libm::log(map.weight[i]);
        for (b, slot) in out.get_mut(role).iter_mut().enumerate() {
            let logit = log_w + scaled[b] - lse;
            let base = map.base[i][b];
            *slot = if base > 0.0 {
                let hi = libm::log(base).max(logit);
                let lo = libm::log(base).min(logit);
                hi + libm::log1p(libm::exp(lo - hi))
            } else {
                logit
            };
        }
    }
    Ok(out)
}
