//! Globalized gradient method for smooth unconstrained minimization.
//!
//! Each iteration moves along `−g_k` with a trial stepsize chosen by the
//! adaptive short/long rule, safeguarded by the Dai–Fletcher nonmonotone
//! backtracking search against a reference value `f_r`.

mod linesearch;
mod reference;
mod suite;

use std::time::Instant;

pub use linesearch::{dai_fletcher_search, LineSearchOutcome};
pub use reference::{update_reference, ReferenceState};
pub use suite::{builtin_suite, QuadObjective};

use crate::error::{Error, Result};
use crate::linalg::{norm2, norm_inf};
use crate::report::{Branch, IterRecord, RunReport, Status};
use crate::stepsizes::{bbq_stepsize, StepPair};
use crate::termination3d::{alpha_new_bb, GradientHistory};

/// A smooth objective. Implementations must be deterministic and free of
/// side effects, with `gradient` consistent with `value`; the benchmark
/// runner evaluates different objectives on different threads.
pub trait ObjectiveFn: Send + Sync {
    fn name(&self) -> &str;
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
    /// Standard starting point.
    fn start(&self) -> Vec<f64>;
}

/// Stepsize rule driving the line search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UncMethod {
    /// The adaptive rule with `α_new` on short steps.
    Alg1,
    /// The adaptive rule with `α_bbq` in place of `α_new`.
    Alg1Bbq,
    /// Nonmonotone BB1.
    Bb,
}

impl UncMethod {
    pub fn name(self) -> &'static str {
        match self {
            UncMethod::Alg1 => "alg1",
            UncMethod::Alg1Bbq => "alg1-bbq",
            UncMethod::Bb => "bb",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "alg1" => Some(UncMethod::Alg1),
            "alg1-bbq" | "bbq" => Some(UncMethod::Alg1Bbq),
            "bb" => Some(UncMethod::Bb),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UncSolverConfig {
    pub method: UncMethod,
    pub alpha_min: f64,
    pub alpha_max: f64,
    /// Non-improving iterations before the reference value is reset.
    pub t_max: usize,
    pub delta: f64,
    pub eta: f64,
    pub tau1: f64,
    pub gamma: f64,
    /// Stop once `‖g‖∞ ≤ eps_inf`.
    pub eps_inf: f64,
    pub max_iter: usize,
    pub max_backtracks: usize,
    pub max_fevals: usize,
    pub record_trace: bool,
}

impl Default for UncSolverConfig {
    fn default() -> Self {
        Self {
            method: UncMethod::Alg1,
            alpha_min: 1e-10,
            alpha_max: 1e6,
            t_max: 3,
            delta: 1e-4,
            eta: 0.5,
            tau1: 0.65,
            gamma: 1.4,
            eps_inf: 1e-6,
            max_iter: 200_000,
            max_backtracks: 60,
            max_fevals: 1_000_000,
            record_trace: false,
        }
    }
}

impl UncSolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if !(self.alpha_min > 0.0 && self.alpha_min < self.alpha_max && self.alpha_max.is_finite()) {
            return bad(format!("need 0 < alpha_min < alpha_max, got {} and {}", self.alpha_min, self.alpha_max));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("delta must lie in (0, 1), got {}", self.delta));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return bad(format!("eta must lie in (0, 1), got {}", self.eta));
        }
        if !(self.tau1 > 0.0) {
            return bad(format!("tau1 must be positive, got {}", self.tau1));
        }
        if !(self.gamma >= 1.0 && self.gamma.is_finite()) {
            return bad(format!("gamma must be >= 1, got {}", self.gamma));
        }
        if self.t_max == 0 {
            return bad("T must be at least 1".into());
        }
        Ok(())
    }
}

/// `min{1/‖g‖∞, ‖x‖∞/‖g‖∞}`.
fn fallback_step(x_inf: f64, g_inf: f64) -> f64 {
    (1.0 / g_inf).min(x_inf / g_inf)
}

/// Next trial stepsize (before clamping) given the history ending at the
/// newest pair `(s_k, y_k)`. With `use_new = false` the `α_new` test is
/// replaced by the BBQ candidate.
///
/// Returns the stepsize and the branch; the threshold is divided by `γ` after
/// a short branch, multiplied after [`Branch::Bb1`] and left alone after
/// [`Branch::Fallback`].
pub fn algorithm1_decision(
    hist: &GradientHistory,
    tau: f64,
    use_new: bool,
    x_inf: f64,
    g_inf: f64,
) -> (f64, Branch) {
    let positive = |lag: usize| {
        hist.get(lag).and_then(|r| r.pair).is_some_and(|p| p.has_positive_curvature())
    };
    let newest = match hist.get(0) {
        Some(r) if positive(0) => r,
        _ => return (fallback_step(x_inf, g_inf), Branch::Fallback),
    };
    let (bb1_next, bb2_next) = (newest.bb1.unwrap(), newest.bb2.unwrap());
    if bb2_next / bb1_next >= tau {
        return (bb1_next, Branch::Bb1);
    }
    if !positive(1) {
        return (bb2_next, Branch::ShortBb2);
    }
    let bb2_cur = hist.get(1).and_then(|r| r.bb2).unwrap();
    let pair_min = bb2_cur.min(bb2_next);
    if positive(2) && use_new {
        return match alpha_new_bb(hist) {
            Ok(a) => (pair_min.min(a), Branch::ShortNew),
            Err(_) => (pair_min, Branch::ShortBb2Pair),
        };
    }
    let bbq = hist
        .last_two_bb()
        .ok_or(Error::Degenerate("BB stepsizes unavailable"))
        .and_then(|(b1p, b1c, b2p, b2c)| bbq_stepsize(b1p, b1c, b2p, b2c));
    match bbq {
        Ok(a) => (pair_min.min(a), Branch::ShortBbq),
        Err(_) => (pair_min, Branch::ShortBb2Pair),
    }
}

/// Runs the method from `x0`. Failures are reported through
/// [`RunReport::status`].
pub fn solve(f: &dyn ObjectiveFn, x0: &[f64], cfg: &UncSolverConfig) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport {
        status: Status::NumericalFailure,
        iterations: 0,
        nfe: 0,
        ngrad: 0,
        final_gnorm: f64::NAN,
        final_gnorm_inf: f64::NAN,
        final_f: f64::NAN,
        x: x0.to_vec(),
        branch_counts: Default::default(),
        wall_time: 0.0,
        trace: Vec::new(),
    };
    if cfg.validate().is_err() || x0.len() != f.dim() || x0.iter().any(|v| !v.is_finite()) {
        return report;
    }

    let mut x = x0.to_vec();
    let mut fx = f.value(&x);
    let mut g = f.gradient(&x);
    report.nfe = 1;
    report.ngrad = 1;
    let mut reference = ReferenceState::new(fx, cfg.t_max);
    let mut hist = GradientHistory::new();
    hist.push(norm2(&g).powi(2), None);
    let mut tau = cfg.tau1;

    let (x_inf, g_inf) = (norm_inf(&x), norm_inf(&g));
    let (mut alpha, mut branch) = if x_inf > 0.0 {
        (x_inf / g_inf, Branch::Initial)
    } else {
        (1.0 / g_inf, Branch::Initial)
    };

    let status = loop {
        let g_inf = norm_inf(&g);
        if g_inf <= cfg.eps_inf {
            break Status::Converged;
        }
        if !(fx.is_finite() && g_inf.is_finite()) {
            break Status::NumericalFailure;
        }
        if report.iterations >= cfg.max_iter {
            break Status::MaxIterExceeded;
        }
        if report.nfe >= cfg.max_fevals {
            break Status::FevalBudgetExceeded;
        }
        alpha = alpha.clamp(cfg.alpha_min, cfg.alpha_max);
        let d: Vec<f64> = g.iter().map(|v| -v).collect();
        let ls = dai_fletcher_search(
            |z| f.value(z),
            &x,
            &g,
            &d,
            alpha,
            reference.f_r,
            cfg.delta,
            cfg.eta,
            cfg.max_backtracks,
        );
        let ls = match ls {
            Ok(ls) => ls,
            Err(Error::LineSearchFailure { backtracks }) => {
                report.nfe += backtracks + 1;
                break Status::LineSearchFailure;
            }
            Err(_) => break Status::NumericalFailure,
        };
        if cfg.record_trace {
            let rec = hist.get(0);
            report.trace.push(IterRecord {
                k: report.iterations + 1,
                stepsize: alpha,
                accepted: ls.lambda,
                branch,
                bb1: rec.and_then(|r| r.bb1).unwrap_or(f64::NAN),
                bb2: rec.and_then(|r| r.bb2).unwrap_or(f64::NAN),
                bb1_prev: hist.get(1).and_then(|r| r.bb1).unwrap_or(f64::NAN),
                gnorm: norm2(&g),
                f: fx,
                f_ref: reference.f_r,
                tau,
            });
        }
        report.nfe += ls.nfe;
        report.iterations += 1;
        report.count_branch(branch);
        hist.set_step(ls.lambda);

        let g_new = f.gradient(&ls.x_new);
        report.ngrad += 1;
        let s: Vec<f64> = d.iter().map(|v| ls.lambda * v).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        x = ls.x_new;
        fx = ls.f_new;
        g = g_new;
        reference.update(fx);
        hist.push(norm2(&g).powi(2), Some(StepPair::from_vectors(&s, &y)));

        let (x_inf, g_inf) = (norm_inf(&x), norm_inf(&g));
        let next = report.iterations + 1;
        (alpha, branch) = match cfg.method {
            _ if next < crate::quadsolver::ADAPTIVE_START || cfg.method == UncMethod::Bb => {
                match hist.get(0).and_then(|r| r.bb1) {
                    Some(a) if next < crate::quadsolver::ADAPTIVE_START => (a, Branch::Warmup),
                    Some(a) => (a, Branch::Bb1),
                    None => (fallback_step(x_inf, g_inf), Branch::Fallback),
                }
            }
            m => {
                let d = algorithm1_decision(&hist, tau, m == UncMethod::Alg1, x_inf, g_inf);
                if d.1.is_short() {
                    tau /= cfg.gamma;
                } else if d.1 == Branch::Bb1 {
                    tau *= cfg.gamma;
                }
                d
            }
        };
    };

    report.status = status;
    report.final_f = fx;
    report.final_gnorm = norm2(&g);
    report.final_gnorm_inf = norm_inf(&g);
    report.x = x;
    report.wall_time = start.elapsed().as_secs_f64();
    report
}
