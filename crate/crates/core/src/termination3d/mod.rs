//! Three-dimensional quadratic termination.
//!
//! The stepsize `α_new` is the reciprocal of the largest eigenvalue of a
//! small projected Hessian `H_k = QᵀAQ`, where the columns of `Q` are an
//! orthonormal basis of the last three gradients. Two constructions of
//! `H_k` are provided:
//!
//! - [`project_hessian`] applied to [`gram_schmidt3`], which needs
//!   Hessian-vector products;
//! - [`hmatrix_from_recurrence`], which needs only stepsizes and gradient
//!   norms of the last few BB iterations (stored in [`GradientHistory`]).
//!
//! On a quadratic both give the same matrix up to rounding.

mod gram_schmidt;
mod hmatrix;
mod recurrence;
mod roots;

pub use gram_schmidt::{gram_schmidt, gram_schmidt3, project_hessian, TOL_DEP};
pub use hmatrix::HMatrix;
pub use recurrence::{
    alpha_new_bb, hmatrix_from_recurrence, recurrence_scalars, GradientHistory, HistoryRecord,
    RecurrenceScalars, TOL_VOLUME,
};
pub use roots::{largest_root_cubic, largest_root_quartic, CubicSolve, P_ZERO_REL, TOL_TRIPLE};

use crate::error::{Error, Result};

/// `1 / λ_max(QᵀAQ)` for the orthonormal triple `u, v, r`.
pub fn alpha_new_direct<F>(u: &[f64], v: &[f64], r: &[f64], hess_vec: F) -> Result<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let h = project_hessian(&[u, v, r], hess_vec)?;
    let root = largest_root_cubic(&h)?.largest_root;
    let alpha = 1.0 / root;
    if alpha.is_finite() && alpha > 0.0 {
        Ok(alpha)
    } else {
        Err(Error::Degenerate("projected Hessian is not positive definite"))
    }
}
