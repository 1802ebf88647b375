use crate::error::{Error, Result};
use crate::linalg::dot;

/// Accepted point of a nonmonotone backtracking search.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSearchOutcome {
    pub lambda: f64,
    /// Function evaluations spent (`j + 1` for `λ = α₀ηʲ`).
    pub nfe: usize,
    pub x_new: Vec<f64>,
    pub f_new: f64,
}

/// Dai–Fletcher backtracking: the first `λ = α₀ηʲ`, `j = 0, 1, …`, with
/// `f(x + λd) ≤ f_r + δλ gᵀd`.
#[allow(clippy::too_many_arguments)]
pub fn dai_fletcher_search<F>(
    f: F,
    x: &[f64],
    g: &[f64],
    d: &[f64],
    alpha0: f64,
    f_r: f64,
    delta: f64,
    eta: f64,
    max_backtracks: usize,
) -> Result<LineSearchOutcome>
where
    F: Fn(&[f64]) -> f64,
{
    let gd = dot(g, d);
    if !(gd < 0.0) {
        return Err(Error::NonDescentDirection(gd));
    }
    if !(alpha0 > 0.0 && alpha0.is_finite()) {
        return Err(Error::InvalidSpec(format!("initial stepsize must be positive, got {alpha0}")));
    }
    let mut lambda = alpha0;
    let mut x_new = vec![0.0; x.len()];
    for j in 0..=max_backtracks {
        for ((xn, xi), di) in x_new.iter_mut().zip(x).zip(d) {
            *xn = xi + lambda * di;
        }
        let f_new = f(&x_new);
        if f_new <= f_r + delta * lambda * gd {
            return Ok(LineSearchOutcome { lambda, nfe: j + 1, x_new, f_new });
        }
        lambda *= eta;
    }
    Err(Error::LineSearchFailure { backtracks: max_backtracks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(x: &[f64]) -> f64 {
        x[0] * x[0]
    }

    #[test]
    fn four_halvings_on_parabola() {
        let r = dai_fletcher_search(sq, &[1.0], &[2.0], &[-2.0], 10.0, 1.0, 1e-4, 0.5, 60).unwrap();
        assert_eq!(r.lambda, 0.625);
        assert_eq!(r.nfe, 5);
        assert_eq!(r.x_new, vec![1.0 - 1.25]);
    }

    #[test]
    fn accepts_initial_step() {
        let r = dai_fletcher_search(sq, &[1.0], &[2.0], &[-2.0], 0.5, 1.0, 1e-4, 0.5, 60).unwrap();
        assert_eq!((r.lambda, r.nfe), (0.5, 1));
        assert_eq!(r.f_new, 0.0);
    }

    #[test]
    fn ascent_direction_rejected() {
        let e = dai_fletcher_search(sq, &[1.0], &[2.0], &[2.0], 1.0, 1.0, 1e-4, 0.5, 60).unwrap_err();
        assert_eq!(e, Error::NonDescentDirection(4.0));
        let e = dai_fletcher_search(sq, &[1.0], &[2.0], &[0.0], 1.0, 1.0, 1e-4, 0.5, 60).unwrap_err();
        assert!(matches!(e, Error::NonDescentDirection(_)));
    }

    #[test]
    fn reports_failure_when_budget_runs_out() {
        // reference value below the minimum: nothing is acceptable
        let e = dai_fletcher_search(sq, &[1.0], &[2.0], &[-2.0], 1.0, -1.0, 1e-4, 0.5, 10).unwrap_err();
        assert_eq!(e, Error::LineSearchFailure { backtracks: 10 });
    }
}
