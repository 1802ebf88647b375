//! Gradient solvers for diagonal quadratics.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, norm_inf};
use crate::quadprob::{verification_problem, QuadraticProblem};
use crate::report::{Branch, IterRecord, RunReport, Status};
use crate::rng;
use crate::stepsizes::{bb1, bb2, bbq_stepsize, day_stepsize, sd_stepsize, StepPair};
use crate::termination3d::{alpha_new_bb, alpha_new_direct, gram_schmidt3, GradientHistory};

/// First iterate index at which the adaptive rule replaces the BB1 warm-up.
pub const ADAPTIVE_START: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadSolverConfig {
    /// Initial threshold on `bb2/bb1` below which a short step is taken.
    pub tau1: f64,
    /// Multiplicative update of the threshold; `1` keeps it fixed.
    pub gamma: f64,
    /// Stop once `‖g_k‖₂ ≤ eps·‖g₁‖₂`.
    pub eps: f64,
    pub max_iter: usize,
    pub record_trace: bool,
}

impl Default for QuadSolverConfig {
    fn default() -> Self {
        Self { tau1: 0.65, gamma: 1.4, eps: 1e-6, max_iter: 50_000, record_trace: false }
    }
}

impl QuadSolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau1 > 0.0 && self.tau1 <= 1.0) {
            return Err(Error::InvalidSpec(format!("tau1 must lie in (0, 1], got {}", self.tau1)));
        }
        if !(self.gamma >= 1.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidSpec(format!("gamma must be >= 1, got {}", self.gamma)));
        }
        if !(self.eps >= 0.0 && self.eps.is_finite()) {
            return Err(Error::InvalidSpec(format!("eps must be >= 0, got {}", self.eps)));
        }
        Ok(())
    }
}

/// Quadratic solver variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadMethod {
    /// SD first step, BB1 afterwards.
    Bb,
    /// Adaptive short/long rule with `α_new` on short steps.
    New,
    /// Same adaptive rule with the `α_new` candidate disabled, so short steps
    /// use `min{bb2_{k−1}, bb2_k, α_bbq}`.
    Bbq,
}

impl QuadMethod {
    pub fn name(self) -> &'static str {
        match self {
            QuadMethod::Bb => "bb",
            QuadMethod::New => "new",
            QuadMethod::Bbq => "bbq",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "bb" => Some(QuadMethod::Bb),
            "new" => Some(QuadMethod::New),
            "bbq" => Some(QuadMethod::Bbq),
            _ => None,
        }
    }

    pub fn solve(self, p: &QuadraticProblem, x0: &[f64], cfg: &QuadSolverConfig) -> RunReport {
        match self {
            QuadMethod::Bb => solve_bb(p, x0, cfg),
            QuadMethod::New => solve_new(p, x0, cfg),
            QuadMethod::Bbq => solve_adaptive(p, x0, cfg, false),
        }
    }
}

/// Short/long decision of the adaptive rule at iterate `k` given the
/// history up to `g_k`. Returns the stepsize, the branch and whether the
/// branch was short.
///
/// On a short branch the candidates are `bb2_{k−1}`, `bb2_k` and, in order of
/// preference, `α_new` (if `use_new`) or `α_bbq`. Candidates that cannot be
/// formed are dropped.
pub fn adaptive_decision(hist: &GradientHistory, tau: f64, use_new: bool) -> Result<(f64, Branch)> {
    let (bb1_prev, bb1_cur, bb2_prev, bb2_cur) = hist
        .last_two_bb()
        .ok_or(Error::NumericalFailure("BB stepsizes unavailable"))?;
    if bb2_cur / bb1_cur >= tau {
        return Ok((bb1_cur, Branch::Bb1));
    }
    let pair_min = bb2_prev.min(bb2_cur);
    if use_new {
        if let Ok(a) = alpha_new_bb(hist) {
            return Ok((pair_min.min(a), Branch::ShortNew));
        }
    }
    match bbq_stepsize(bb1_prev, bb1_cur, bb2_prev, bb2_cur) {
        Ok(a) => Ok((pair_min.min(a), Branch::ShortBbq)),
        Err(_) => Ok((pair_min, Branch::ShortBb2Pair)),
    }
}

struct Run<'a> {
    p: &'a QuadraticProblem,
    cfg: &'a QuadSolverConfig,
    x: Vec<f64>,
    g: Vec<f64>,
    gnorm: f64,
    hist: GradientHistory,
    report: RunReport,
    start: Instant,
}

impl<'a> Run<'a> {
    fn new(p: &'a QuadraticProblem, x0: &[f64], cfg: &'a QuadSolverConfig) -> Self {
        let x = x0.to_vec();
        let g = p.gradient(&x);
        let gnorm = norm2(&g);
        let mut hist = GradientHistory::new();
        hist.push(gnorm * gnorm, None);
        let report = RunReport {
            status: Status::MaxIterExceeded,
            iterations: 0,
            nfe: 0,
            ngrad: 1,
            final_gnorm: gnorm,
            final_gnorm_inf: norm_inf(&g),
            final_f: f64::NAN,
            x: Vec::new(),
            branch_counts: Default::default(),
            wall_time: 0.0,
            trace: Vec::new(),
        };
        Self { p, cfg, x, g, gnorm, hist, report, start: Instant::now() }
    }

    fn g_dot_ag(&self) -> f64 {
        dot(&self.g, &self.p.hess_vec(&self.g))
    }

    /// Takes `x ← x − αg` and refreshes gradient and history.
    fn step(&mut self, alpha: f64, branch: Branch, tau: f64) {
        if self.cfg.record_trace {
            let f = self.p.value(&self.x);
            let rec = self.hist.get(0);
            self.report.nfe += 1;
            self.report.trace.push(IterRecord {
                k: self.report.iterations + 1,
                stepsize: alpha,
                accepted: alpha,
                branch,
                bb1: rec.and_then(|r| r.bb1).unwrap_or(f64::NAN),
                bb2: rec.and_then(|r| r.bb2).unwrap_or(f64::NAN),
                bb1_prev: self.hist.get(1).and_then(|r| r.bb1).unwrap_or(f64::NAN),
                gnorm: self.gnorm,
                f,
                f_ref: f64::NAN,
                tau,
            });
        }
        self.hist.set_step(alpha);
        let mut s_dot_s = 0.0;
        for (x, g) in self.x.iter_mut().zip(&self.g) {
            *x -= alpha * g;
            s_dot_s += alpha * alpha * g * g;
        }
        let g_new = self.p.gradient(&self.x);
        let mut s_dot_y = 0.0;
        let mut y_dot_y = 0.0;
        for (gn, go) in g_new.iter().zip(&self.g) {
            let y = gn - go;
            s_dot_y += -alpha * go * y;
            y_dot_y += y * y;
        }
        self.g = g_new;
        self.gnorm = norm2(&self.g);
        self.hist.push(self.gnorm * self.gnorm, Some(StepPair::new(s_dot_s, s_dot_y, y_dot_y)));
        self.report.iterations += 1;
        self.report.ngrad += 1;
        self.report.count_branch(branch);
    }

    fn finish(mut self, status: Status) -> RunReport {
        self.report.status = status;
        self.report.final_gnorm = self.gnorm;
        self.report.final_gnorm_inf = norm_inf(&self.g);
        self.report.final_f = self.p.value(&self.x);
        self.report.nfe += 1;
        self.report.x = self.x;
        self.report.wall_time = self.start.elapsed().as_secs_f64();
        self.report
    }
}

fn invalid_report(p: &QuadraticProblem, x0: &[f64], cfg: &QuadSolverConfig) -> Option<RunReport> {
    if x0.len() == p.dim() && x0.iter().all(|v| v.is_finite()) && cfg.validate().is_ok() {
        return None;
    }
    let mut r = Run::new(p, &vec![0.0; p.dim()], cfg).finish(Status::NumericalFailure);
    r.final_gnorm = f64::NAN;
    Some(r)
}

/// Barzilai–Borwein with BB1 stepsizes and an exact SD first step.
pub fn solve_bb(p: &QuadraticProblem, x0: &[f64], cfg: &QuadSolverConfig) -> RunReport {
    if let Some(r) = invalid_report(p, x0, cfg) {
        return r;
    }
    let mut run = Run::new(p, x0, cfg);
    let target = cfg.eps * run.gnorm;
    loop {
        if run.gnorm <= target {
            return run.finish(Status::Converged);
        }
        if run.report.iterations >= cfg.max_iter {
            return run.finish(Status::MaxIterExceeded);
        }
        let (alpha, branch) = if run.report.iterations == 0 {
            match sd_stepsize(run.gnorm * run.gnorm, run.g_dot_ag()) {
                Ok(a) => (a, Branch::Sd),
                Err(_) => return run.finish(Status::NumericalFailure),
            }
        } else {
            match run.hist.get(0).and_then(|r| r.bb1) {
                Some(a) => (a, Branch::Bb1),
                None => return run.finish(Status::NumericalFailure),
            }
        };
        run.step(alpha, branch, f64::NAN);
    }
}

/// The adaptive method: SD at `k = 1`, BB1 for `k = 2, 3, 4`, then the
/// short/long rule of [`adaptive_decision`] with `α_new` on short steps.
pub fn solve_new(p: &QuadraticProblem, x0: &[f64], cfg: &QuadSolverConfig) -> RunReport {
    solve_adaptive(p, x0, cfg, true)
}

fn solve_adaptive(
    p: &QuadraticProblem,
    x0: &[f64],
    cfg: &QuadSolverConfig,
    use_new: bool,
) -> RunReport {
    if let Some(r) = invalid_report(p, x0, cfg) {
        return r;
    }
    let mut run = Run::new(p, x0, cfg);
    let target = cfg.eps * run.gnorm;
    let mut tau = cfg.tau1;
    loop {
        if run.gnorm <= target {
            return run.finish(Status::Converged);
        }
        if run.report.iterations >= cfg.max_iter {
            return run.finish(Status::MaxIterExceeded);
        }
        let k = run.report.iterations + 1;
        let (alpha, branch) = if k == 1 {
            match sd_stepsize(run.gnorm * run.gnorm, run.g_dot_ag()) {
                Ok(a) => (a, Branch::Sd),
                Err(_) => return run.finish(Status::NumericalFailure),
            }
        } else if k < ADAPTIVE_START {
            match run.hist.get(0).and_then(|r| r.bb1) {
                Some(a) => (a, Branch::Warmup),
                None => return run.finish(Status::NumericalFailure),
            }
        } else {
            match adaptive_decision(&run.hist, tau, use_new) {
                Ok(d) => d,
                Err(_) => return run.finish(Status::NumericalFailure),
            }
        };
        run.step(alpha, branch, tau);
        if k >= ADAPTIVE_START {
            if branch.is_short() {
                tau /= cfg.gamma;
            } else {
                tau *= cfg.gamma;
            }
        }
    }
}

/// Stepsize families checked for three-dimensional termination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verify3dMethod {
    Day3d,
    Bb1_3d,
    Bb2_3d,
    /// BB1 with an SD first step and no special steps, as a baseline.
    Bb1Plain,
}

impl Verify3dMethod {
    pub const ALL: [Verify3dMethod; 4] =
        [Verify3dMethod::Day3d, Verify3dMethod::Bb1_3d, Verify3dMethod::Bb2_3d, Verify3dMethod::Bb1Plain];

    pub fn name(self) -> &'static str {
        match self {
            Verify3dMethod::Day3d => "DAY3D",
            Verify3dMethod::Bb1_3d => "BB1-3D",
            Verify3dMethod::Bb2_3d => "BB2-3D",
            Verify3dMethod::Bb1Plain => "BB1",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name().eq_ignore_ascii_case(s))
    }

    fn own_step(self, pair: &StepPair) -> Result<(f64, Branch)> {
        match self {
            Verify3dMethod::Day3d => day_stepsize(pair).map(|a| (a, Branch::Day)),
            Verify3dMethod::Bb2_3d => bb2(pair).map(|a| (a, Branch::Bb2)),
            Verify3dMethod::Bb1_3d | Verify3dMethod::Bb1Plain => bb1(pair).map(|a| (a, Branch::Bb1)),
        }
    }
}

/// Number of steps in the verification schedule; the report describes `x₉`.
pub const VERIFY_STEPS: usize = 8;

/// Runs the verification schedule on `diag(1, κ/2, κ)` from a random start
/// drawn from `seed`: SD at `k = 1`, `α_new` on the Gram–Schmidt basis of
/// `g₁, g₂, g₃` at `k = 3`, the BBQ step at `k = 6`, and the method's own
/// stepsize from the previous pair elsewhere. The report's final state is
/// `x₉`; a failed special step yields status [`Status::Degenerate`].
pub fn verify_3d_termination(kappa: f64, method: Verify3dMethod, seed: u64) -> RunReport {
    let p = verification_problem(kappa);
    let x1 = rng::box_point(&mut rng::replicate_stream(seed, 0), 3);
    let cfg = QuadSolverConfig { eps: 0.0, max_iter: VERIFY_STEPS, record_trace: true, ..Default::default() };
    let mut run = Run::new(&p, &x1, &cfg);
    let special = method != Verify3dMethod::Bb1Plain;
    let mut grads: Vec<Vec<f64>> = vec![run.g.clone()];
    for k in 1..=VERIFY_STEPS {
        let pair = run.hist.get(0).and_then(|r| r.pair);
        let choice = match (k, special) {
            (1, _) => sd_stepsize(run.gnorm * run.gnorm, run.g_dot_ag()).map(|a| (a, Branch::Sd)),
            (3, true) => gram_schmidt3(&grads[0], &grads[1], &grads[2])
                .and_then(|[u, v, r]| alpha_new_direct(&u, &v, &r, |d| p.hess_vec(d)))
                .map(|a| (a, Branch::NewDirect)),
            (6, true) => match run.hist.last_two_bb() {
                Some((b1p, b1c, b2p, b2c)) => bbq_stepsize(b1p, b1c, b2p, b2c).map(|a| (a, Branch::Bbq)),
                None => Err(Error::Degenerate("BB stepsizes unavailable")),
            },
            _ => pair
                .ok_or(Error::Degenerate("no previous step"))
                .and_then(|pr| method.own_step(&pr)),
        };
        let (alpha, branch) = match choice {
            Ok(c) => c,
            Err(_) => return run.finish(Status::Degenerate),
        };
        run.step(alpha, branch, f64::NAN);
        grads.push(run.g.clone());
    }
    run.finish(Status::Converged)
}
