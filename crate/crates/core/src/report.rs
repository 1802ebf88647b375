use std::collections::BTreeMap;
use std::fmt;

/// Which rule produced a stepsize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    /// Exact steepest-descent step.
    Sd,
    /// Initial step of the general solver (`‖x‖∞/‖g‖∞` or `1/‖g‖∞`).
    Initial,
    /// Warm-up BB1 step before the adaptive rule is active.
    Warmup,
    /// Long BB1 step.
    Bb1,
    Bb2,
    Day,
    /// `min{bb2_{k−1}, bb2_k, α_new}`
    ShortNew,
    /// `min{bb2_{k−1}, bb2_k, α_bbq}`
    ShortBbq,
    /// `min{bb2_{k−1}, bb2_k}` (both α_new and α_bbq unavailable).
    ShortBb2Pair,
    /// Latest BB2 alone.
    ShortBb2,
    /// Non-positive curvature fallback `min{1, ‖x‖∞}/‖g‖∞`.
    Fallback,
    /// Hessian-based α_new on an explicit Gram–Schmidt basis.
    NewDirect,
    Bbq,
}

impl Branch {
    pub fn is_short(self) -> bool {
        matches!(
            self,
            Branch::ShortNew | Branch::ShortBbq | Branch::ShortBb2Pair | Branch::ShortBb2
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Sd => "sd",
            Branch::Initial => "initial",
            Branch::Warmup => "warmup",
            Branch::Bb1 => "bb1",
            Branch::Bb2 => "bb2",
            Branch::Day => "day",
            Branch::ShortNew => "short_new",
            Branch::ShortBbq => "short_bbq",
            Branch::ShortBb2Pair => "short_bb2_pair",
            Branch::ShortBb2 => "short_bb2",
            Branch::Fallback => "fallback",
            Branch::NewDirect => "new_direct",
            Branch::Bbq => "bbq",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxIterExceeded,
    FevalBudgetExceeded,
    LineSearchFailure,
    /// A scheduled special stepsize could not be formed.
    Degenerate,
    NumericalFailure,
}

impl Status {
    pub fn is_ok(self) -> bool {
        self == Status::Converged
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Converged => "ok",
            Status::MaxIterExceeded => "max_iter",
            Status::FevalBudgetExceeded => "max_fevals",
            Status::LineSearchFailure => "line_search_failure",
            Status::Degenerate => "degenerate",
            Status::NumericalFailure => "numerical_failure",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One line of an iteration trace: the stepsize chosen at iterate `k`
/// together with the state at `x_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterRecord {
    pub k: usize,
    /// Trial stepsize proposed for this iteration.
    pub stepsize: f64,
    /// Stepsize accepted by the line search (equal to `stepsize` on
    /// quadratics).
    pub accepted: f64,
    pub branch: Branch,
    /// BB1/BB2 values from the most recent pair (NaN when unavailable).
    pub bb1: f64,
    pub bb2: f64,
    /// BB1 value from the pair before that.
    pub bb1_prev: f64,
    /// `‖g_k‖₂`
    pub gnorm: f64,
    pub f: f64,
    /// Line-search reference value (NaN for solvers without a line search).
    pub f_ref: f64,
    /// Adaptive threshold `τ_k` in effect when the stepsize was chosen.
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub status: Status,
    /// Number of steps taken.
    pub iterations: usize,
    pub nfe: usize,
    pub ngrad: usize,
    /// `‖g‖₂` at the final iterate.
    pub final_gnorm: f64,
    pub final_gnorm_inf: f64,
    pub final_f: f64,
    pub x: Vec<f64>,
    pub branch_counts: BTreeMap<Branch, usize>,
    pub wall_time: f64,
    pub trace: Vec<IterRecord>,
}

impl RunReport {
    pub(crate) fn count_branch(&mut self, b: Branch) {
        *self.branch_counts.entry(b).or_insert(0) += 1;
    }

    pub fn branch_count(&self, b: Branch) -> usize {
        self.branch_counts.get(&b).copied().unwrap_or(0)
    }
}
