//! Scalar stepsize formulas.
//!
//! Every function here works on precomputed inner products so that callers
//! holding only a scalar history (see [`crate::termination3d`]) can reuse them
//! without touching vectors again.

use crate::error::{Error, Result};
use crate::linalg::dot;

/// Relative threshold under which two consecutive BB1 values are treated as
/// equal by [`bbq_stepsize`].
pub const BBQ_TOL_DEN: f64 = 1e-12;

/// Curvature scalars of one step: `s = x_k - x_{k-1}`, `y = g_k - g_{k-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPair {
    pub s_dot_s: f64,
    pub s_dot_y: f64,
    pub y_dot_y: f64,
}

impl StepPair {
    pub fn new(s_dot_s: f64, s_dot_y: f64, y_dot_y: f64) -> Self {
        Self { s_dot_s, s_dot_y, y_dot_y }
    }

    pub fn from_vectors(s: &[f64], y: &[f64]) -> Self {
        Self::new(dot(s, s), dot(s, y), dot(y, y))
    }

    pub fn has_positive_curvature(&self) -> bool {
        self.s_dot_y > 0.0
    }
}

/// `s's / s'y`.
pub fn bb1(pair: &StepPair) -> Result<f64> {
    if pair.s_dot_y > 0.0 {
        Ok(pair.s_dot_s / pair.s_dot_y)
    } else {
        Err(Error::NonPositiveCurvature)
    }
}

/// `s'y / y'y`.
pub fn bb2(pair: &StepPair) -> Result<f64> {
    if pair.s_dot_y > 0.0 {
        Ok(pair.s_dot_y / pair.y_dot_y)
    } else {
        Err(Error::NonPositiveCurvature)
    }
}

/// Exact steepest-descent step `g'g / g'Ag` on a quadratic.
pub fn sd_stepsize(g_dot_g: f64, g_dot_ag: f64) -> Result<f64> {
    if g_dot_ag > 0.0 {
        Ok(g_dot_g / g_dot_ag)
    } else {
        Err(Error::NonPositiveCurvature)
    }
}

/// `‖s‖ / ‖y‖`.
pub fn day_stepsize(pair: &StepPair) -> Result<f64> {
    if pair.y_dot_y > 0.0 {
        Ok((pair.s_dot_s / pair.y_dot_y).sqrt())
    } else {
        Err(Error::ZeroDenominator)
    }
}

/// The φ-ratios behind the BBQ stepsize.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BbqRatios {
    pub phi1_over_phi3: f64,
    pub phi2_over_phi3: f64,
    pub discriminant: f64,
}

impl BbqRatios {
    pub fn new(bb1_prev: f64, bb1_cur: f64, bb2_prev: f64, bb2_cur: f64) -> Result<Self> {
        let gap = bb1_prev - bb1_cur;
        if !(gap.abs() > BBQ_TOL_DEN * bb1_prev.abs().max(bb1_cur.abs())) {
            return Err(Error::Degenerate("consecutive BB1 stepsizes coincide"));
        }
        let den = bb2_prev * bb2_cur * gap;
        let phi1_over_phi3 = (bb2_prev - bb2_cur) / den;
        let phi2_over_phi3 = (bb1_prev * bb2_prev - bb1_cur * bb2_cur) / den;
        Ok(Self {
            phi1_over_phi3,
            phi2_over_phi3,
            discriminant: phi2_over_phi3 * phi2_over_phi3 - 4.0 * phi1_over_phi3,
        })
    }
}

/// Two-dimensional quadratic-termination stepsize from two consecutive
/// BB1/BB2 pairs: `2 / (φ₂/φ₃ + sqrt((φ₂/φ₃)² − 4 φ₁/φ₃))`.
pub fn bbq_stepsize(bb1_prev: f64, bb1_cur: f64, bb2_prev: f64, bb2_cur: f64) -> Result<f64> {
    let r = BbqRatios::new(bb1_prev, bb1_cur, bb2_prev, bb2_cur)?;
    if !(r.discriminant >= 0.0) {
        return Err(Error::Degenerate("negative BBQ discriminant"));
    }
    let den = r.phi2_over_phi3 + r.discriminant.sqrt();
    if !(den > 0.0) {
        return Err(Error::Degenerate("non-positive BBQ denominator"));
    }
    let alpha = 2.0 / den;
    if alpha.is_finite() && alpha > 0.0 {
        Ok(alpha)
    } else {
        Err(Error::Degenerate("non-finite BBQ stepsize"))
    }
}
