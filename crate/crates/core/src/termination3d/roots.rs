use super::HMatrix;
use crate::error::{Error, Result};

/// `|p| ≤ P_ZERO_REL · max(1, tr(H²))` triggers the triple-eigenvalue
/// shortcut.
pub const P_ZERO_REL: f64 = 1e-12;

/// Relative spread allowed between the eigenvalues when the triple-eigenvalue
/// shortcut fires. Follows from `P_ZERO_REL`: `|λ_i − tr/3| ≤ sqrt(2|p|)`.
pub const TOL_TRIPLE: f64 = 1e-5;

const RESIDUAL_REL: f64 = 1e-9;
const MAX_BISECTIONS: usize = 200;

/// Intermediate quantities of the trigonometric cubic solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicSolve {
    /// `(tr² − 3 tr(H²)) / 6`, always ≤ 0 for symmetric `H`.
    pub p: f64,
    /// `(5 tr³ − 9 tr·tr(H²)) / 54 − det`.
    pub q: f64,
    /// `arccos(−q/2 · (3/|p|)^{3/2})`, in `[0, π]`.
    pub theta: f64,
    pub largest_root: f64,
}

/// Largest root of `z³ − tr z² + ½(tr² − tr(H²)) z − det = 0`, i.e. `λ_max(H)`.
///
/// `p` and `q` are evaluated on the trace-free matrix `H − (tr/3)I`, where
/// they equal `−tr(B²)/2` and `−det(B)`; this avoids the cancellation in the
/// trace formulas when the eigenvalues are clustered.
pub fn largest_root_cubic(h: &HMatrix) -> Result<CubicSolve> {
    if h.dim() != 3 {
        return Err(Error::InvalidSpec("cubic solver needs a 3x3 matrix".into()));
    }
    if !h.is_finite() {
        return Err(Error::NumericalFailure("non-finite projected Hessian"));
    }
    let tr = h.trace();
    let mean = tr / 3.0;
    let b = h.shifted(mean);
    let p = -0.5 * b.trace_sq();
    let q = -b.det();

    let (theta, largest_root) = if p.abs() <= P_ZERO_REL * h.trace_sq().max(1.0) {
        (0.0, mean)
    } else {
        let abs_p = p.abs();
        let arg = (-0.5 * q * (3.0 / abs_p).powf(1.5)).clamp(-1.0, 1.0);
        let theta = arg.acos();
        (theta, mean + 2.0 * (theta / 3.0).cos() * (abs_p / 3.0).sqrt())
    };

    let c1 = 0.5 * (tr * tr - h.trace_sq());
    let z = largest_root;
    let residual = ((z - tr) * z + c1) * z - h.det();
    let scale = tr.abs().powi(3).max(h.trace_sq().powf(1.5)).max(1.0);
    if !residual.is_finite() || residual.abs() > RESIDUAL_REL * scale {
        return Err(Error::NumericalFailure("cubic residual too large"));
    }
    Ok(CubicSolve { p, q, theta, largest_root })
}

/// Coefficients `[a3, a2, a1, a0]` of the monic characteristic quartic
/// `z⁴ + a3 z³ + a2 z² + a1 z + a0` from the trace invariants.
fn quartic_coefficients(h: &HMatrix) -> [f64; 4] {
    let (t1, t2, t3) = (h.trace(), h.trace_sq(), h.trace_cu());
    let e2 = 0.5 * (t1 * t1 - t2);
    let e3 = (t1 * t1 * t1 + 2.0 * t3 - 3.0 * t1 * t2) / 6.0;
    [-t1, e2, -e3, h.det()]
}

/// True when `z` lies strictly above every root: the quartic and all of its
/// derivatives are positive there. Since every root is real, this is
/// equivalent to `z > λ_max`.
fn above_all_roots(c: &[f64; 4], z: f64) -> bool {
    let [a3, a2, a1, a0] = *c;
    let p = (((z + a3) * z + a2) * z + a1) * z + a0;
    let p1 = ((4.0 * z + 3.0 * a3) * z + 2.0 * a2) * z + a1;
    let p2 = (12.0 * z + 6.0 * a3) * z + 2.0 * a2;
    let p3 = 24.0 * z + 6.0 * a3;
    p > 0.0 && p1 > 0.0 && p2 > 0.0 && p3 > 0.0
}

/// `λ_max` of a symmetric 4×4 matrix by bisection on its characteristic
/// quartic, bracketed by the Gershgorin interval.
pub fn largest_root_quartic(h: &HMatrix) -> Result<f64> {
    if h.dim() != 4 {
        return Err(Error::InvalidSpec("quartic solver needs a 4x4 matrix".into()));
    }
    if !h.is_finite() {
        return Err(Error::NumericalFailure("non-finite projected Hessian"));
    }
    let shift = h.trace() / 4.0;
    let b = h.shifted(shift);
    let coeffs = quartic_coefficients(&b);
    let (mut lo, mut hi) = b.gershgorin();
    let scale = lo.abs().max(hi.abs());
    if hi - lo <= 4.0 * f64::EPSILON * scale {
        return Ok(shift + 0.5 * (lo + hi));
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * scale {
            return Ok(shift + mid);
        }
        if above_all_roots(&coeffs, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::NumericalFailure("quartic bisection did not converge"))
}
