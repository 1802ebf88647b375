//! Fixtures shared by the criterion benches.

use gradstep_core::quadprob::generate;
use gradstep_core::stepsizes::{bb1, StepPair};
use gradstep_core::{GradientHistory, HMatrix, QuadraticProblem};

/// Set-1 problem used by the solver benches.
pub fn bench_problem(n: usize, kappa: f64) -> QuadraticProblem {
    generate(1, n, kappa, 2024).expect("valid problem spec")
}

/// Runs plain BB1 iterations on `p` and returns a full history window.
pub fn filled_history(p: &QuadraticProblem) -> GradientHistory {
    let mut x = p.start_point(0);
    let mut g = p.gradient(&x);
    let mut hist = GradientHistory::new();
    hist.push(dot(&g, &g), None);
    let mut alpha = 1.0 / p.hessian_eigenvalues().iter().cloned().fold(f64::MIN, f64::max);
    for _ in 0..4 {
        hist.set_step(alpha);
        let s: Vec<f64> = g.iter().map(|gi| -alpha * gi).collect();
        for (xi, si) in x.iter_mut().zip(&s) {
            *xi += si;
        }
        let g_new = p.gradient(&x);
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let pair = StepPair::from_vectors(&s, &y);
        alpha = bb1(&pair).expect("positive curvature");
        hist.push(dot(&g_new, &g_new), Some(pair));
        g = g_new;
    }
    hist
}

/// A fixed symmetric positive definite 4x4 matrix.
pub fn sample_hmatrix4() -> HMatrix {
    HMatrix::from_rows4([
        [4.0, 1.0, 0.5, 0.2],
        [1.0, 3.0, 0.3, 0.1],
        [0.5, 0.3, 2.0, 0.4],
        [0.2, 0.1, 0.4, 1.0],
    ])
}

/// The leading 3x3 block of [`sample_hmatrix4`].
pub fn sample_hmatrix3() -> HMatrix {
    HMatrix::from_rows3([[4.0, 1.0, 0.5], [1.0, 3.0, 0.3], [0.5, 0.3, 2.0]])
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
