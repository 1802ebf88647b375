//! `H_k` for the BB1 method from scalars only.
//!
//! With `ψ = I`, the projected Hessian on the Gram–Schmidt basis of
//! `g_{k−3}, g_{k−2}, g_{k−1}` depends only on the taken stepsizes
//! `α_{k−3}, α_{k−2}`, the BB1 values at `k−2, k−1, k` and the gradient norms
//! at `k−3, k−2, k−1`. The identities behind it (`A g_j = (g_j − g_{j+1})/α_j`
//! and `g_{j+1}ᵀg_j = (1 − α_j/α_{j+1}^{BB1})‖g_j‖²`) hold exactly on
//! quadratics and are used heuristically elsewhere.

use std::collections::VecDeque;

use super::{largest_root_cubic, HMatrix, TOL_DEP};
use crate::error::{Error, Result};
use crate::stepsizes::{bb1, bb2, StepPair};

const WINDOW: usize = 4;

/// Lower bound on the normalized Gram determinant `(1 − σ)·g_r/‖g_{k−1}‖²`
/// of the three gradients. Below it the scalar recurrence loses most of its
/// digits to cancellation.
pub const TOL_VOLUME: f64 = 1e-9;

/// Scalars stored for one iterate `x_j`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HistoryRecord {
    /// `‖g_j‖²`
    pub gnorm_sq: f64,
    /// Stepsize actually taken from `x_j` (set once the step is accepted).
    pub step: Option<f64>,
    /// `α_j^{BB1}` from the pair `(s_{j−1}, y_{j−1})`, if that pair had
    /// positive curvature.
    pub bb1: Option<f64>,
    pub bb2: Option<f64>,
    /// Curvature scalars of `(s_{j−1}, y_{j−1})`.
    pub pair: Option<StepPair>,
}

/// Rolling window of the last four iterates' scalars. Owned by a single
/// solver loop.
#[derive(Debug, Clone, Default)]
pub struct GradientHistory {
    records: VecDeque<HistoryRecord>,
}

impl GradientHistory {
    pub fn new() -> Self {
        Self { records: VecDeque::with_capacity(WINDOW) }
    }

    /// Appends the record for a new iterate. `pair` is the step that led to
    /// it (absent for the first iterate).
    pub fn push(&mut self, gnorm_sq: f64, pair: Option<StepPair>) {
        if self.records.len() == WINDOW {
            self.records.pop_front();
        }
        let (bb1, bb2) = match pair {
            Some(p) => (bb1(&p).ok(), bb2(&p).ok()),
            None => (None, None),
        };
        self.records.push_back(HistoryRecord { gnorm_sq, step: None, bb1, bb2, pair });
    }

    /// Records the stepsize taken from the newest iterate.
    pub fn set_step(&mut self, step: f64) {
        if let Some(r) = self.records.back_mut() {
            r.step = Some(step);
        }
    }

    /// Record `lag` iterations back (`0` is the newest).
    pub fn get(&self, lag: usize) -> Option<&HistoryRecord> {
        self.records.len().checked_sub(lag + 1).and_then(|i| self.records.get(i))
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.records.len() == WINDOW
    }

    /// `(α_{k−1}^{BB1}, α_k^{BB1}, α_{k−1}^{BB2}, α_k^{BB2})` when all four exist.
    pub fn last_two_bb(&self) -> Option<(f64, f64, f64, f64)> {
        let cur = self.get(0)?;
        let prev = self.get(1)?;
        Some((prev.bb1?, cur.bb1?, prev.bb2?, cur.bb2?))
    }
}

/// Intermediate scalars of the recurrence (all for the newest index `k`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceScalars {
    /// Squared cosine between `g_{k−3}` and `g_{k−2}`.
    pub sigma: f64,
    /// `g_{k−2}ᵀA g_{k−3} / g_{k−2}ᵀg_{k−3}`
    pub delta: f64,
    pub zeta: f64,
    /// Coefficient of `v̄_k` in `r̄_k`.
    pub gamma: f64,
    pub varsigma: f64,
    /// `g_{k−1}ᵀ r̄_k = ‖r̄_k‖²`
    pub g_r: f64,
    /// `g_{k−1}ᵀ A r̄_k`
    pub g_ar: f64,
}

struct Inputs {
    a3: f64,
    a2: f64,
    n3: f64,
    n2: f64,
    n1: f64,
    bb1_k2: f64,
    bb1_k1: f64,
    bb1_k: f64,
}

fn inputs(hist: &GradientHistory) -> Result<Inputs> {
    const MISSING: Error = Error::Degenerate("incomplete gradient history");
    if !hist.is_full() {
        return Err(MISSING);
    }
    let r3 = hist.get(3).ok_or(MISSING)?;
    let r2 = hist.get(2).ok_or(MISSING)?;
    let r1 = hist.get(1).ok_or(MISSING)?;
    let r0 = hist.get(0).ok_or(MISSING)?;
    let inp = Inputs {
        a3: r3.step.ok_or(MISSING)?,
        a2: r2.step.ok_or(MISSING)?,
        n3: r3.gnorm_sq,
        n2: r2.gnorm_sq,
        n1: r1.gnorm_sq,
        bb1_k2: r2.bb1.ok_or(Error::Degenerate("BB1 undefined at k-2"))?,
        bb1_k1: r1.bb1.ok_or(Error::Degenerate("BB1 undefined at k-1"))?,
        bb1_k: r0.bb1.ok_or(Error::Degenerate("BB1 undefined at k"))?,
    };
    let positive = [inp.a3, inp.a2, inp.n3, inp.n2, inp.n1, inp.bb1_k2, inp.bb1_k1, inp.bb1_k];
    if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::Degenerate("non-positive stepsize or gradient norm in history"));
    }
    Ok(inp)
}

pub fn recurrence_scalars(hist: &GradientHistory) -> Result<RecurrenceScalars> {
    let Inputs { a3, a2, n3, n2, n1, bb1_k2, bb1_k1, bb1_k } = inputs(hist)?;

    // g_{k−2}ᵀg_{k−3} = overlap · ‖g_{k−3}‖²
    let overlap = 1.0 - a3 / bb1_k2;
    let zeta = overlap * n3 / n2;
    if !(zeta.abs() > TOL_DEP) {
        return Err(Error::Degenerate("consecutive gradients are orthogonal (zeta ~ 0)"));
    }
    let sigma = overlap * zeta;
    if !(sigma < 1.0 - TOL_DEP) {
        return Err(Error::Degenerate("consecutive gradients are parallel (sigma ~ 1)"));
    }
    let delta = (1.0 - 1.0 / zeta) / a3;
    let gamma = 1.0 - a2 / (1.0 - sigma) * (1.0 / bb1_k1 - sigma * delta);
    let w = 1.0 - a2 * delta;
    let g_r = n1 - (sigma * w * w + gamma * gamma * (1.0 - sigma)) * n2;
    let varsigma = ((gamma - w) / bb1_k2 - gamma / a2) * (1.0 - a2 / bb1_k1)
        - (gamma - w) / a3 * gamma * (1.0 - sigma);
    let g_ar = (1.0 / bb1_k + gamma / a2) * n1 + varsigma * n2;

    let s = RecurrenceScalars { sigma, delta, zeta, gamma, varsigma, g_r, g_ar };
    if [sigma, delta, gamma, varsigma, g_r, g_ar].iter().all(|v| v.is_finite()) {
        Ok(s)
    } else {
        Err(Error::Degenerate("non-finite recurrence scalars"))
    }
}

/// Assembles `H_k` from the recurrence scalars. The `(1,3)` entry is zero.
pub fn hmatrix_from_recurrence(scal: &RecurrenceScalars, hist: &GradientHistory) -> Result<HMatrix> {
    let Inputs { a3, a2, n3, n2, n1, bb1_k2, bb1_k1, .. } = inputs(hist)?;
    let RecurrenceScalars { sigma, delta, gamma, g_r, g_ar, .. } = *scal;
    if !(g_r > 0.0) {
        return Err(Error::Degenerate("g_{k-1}' r_k is not positive"));
    }
    if !((1.0 - sigma) * g_r > TOL_VOLUME * n1) {
        return Err(Error::Degenerate("gradients are nearly linearly dependent"));
    }
    let one_minus_sigma = 1.0 - sigma;
    let (g2, g3) = (n2.sqrt(), n3.sqrt());
    let h11 = 1.0 / bb1_k2;
    let h12 = -one_minus_sigma.sqrt() * g2 / (a3 * g3);
    let h22 = (1.0 / bb1_k1 - 2.0 * sigma * delta + sigma / bb1_k2) / one_minus_sigma;
    let h23 = -g_r.sqrt() / (a2 * g2 * one_minus_sigma.sqrt());
    let h33 = g_ar / g_r + gamma / a2;
    let h = HMatrix::from_rows3([[h11, h12, 0.0], [h12, h22, h23], [0.0, h23, h33]]);
    if h.is_finite() {
        Ok(h)
    } else {
        Err(Error::Degenerate("non-finite recurrence matrix"))
    }
}

/// `α_new` for the BB1 method from the scalar history; any guard failure is
/// reported as [`Error::Degenerate`].
pub fn alpha_new_bb(hist: &GradientHistory) -> Result<f64> {
    let scal = recurrence_scalars(hist)?;
    let h = hmatrix_from_recurrence(&scal, hist)?;
    let root = largest_root_cubic(&h)
        .map_err(|_| Error::Degenerate("cubic solve failed"))?
        .largest_root;
    let alpha = 1.0 / root;
    if alpha.is_finite() && alpha > 0.0 {
        Ok(alpha)
    } else {
        Err(Error::Degenerate("non-positive largest root"))
    }
}
