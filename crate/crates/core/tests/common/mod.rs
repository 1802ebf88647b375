//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

/// Number of eigenvalues of the symmetric matrix `a` strictly greater than
/// `z`, from the inertia of `LDLᵀ = a − zI` (Sylvester's law).
pub fn count_above(a: &[Vec<f64>], z: f64) -> usize {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, v)| if i == j { v - z } else { *v }).collect())
        .collect();
    let mut above = 0;
    for k in 0..n {
        let mut d = m[k][k];
        if d == 0.0 {
            d = f64::EPSILON * (1.0 + z.abs());
        }
        if d > 0.0 {
            above += 1;
        }
        for i in k + 1..n {
            let l = m[i][k] / d;
            for j in k + 1..n {
                m[i][j] -= l * m[k][j];
            }
        }
    }
    above
}

/// Largest eigenvalue of a symmetric matrix by bisection on the inertia
/// count, to full double precision.
pub fn largest_eigenvalue(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let radius = (0..n)
        .map(|i| a[i][i].abs() + (0..n).filter(|&j| j != i).map(|j| a[i][j].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let (mut lo, mut hi) = (-radius - 1.0, radius + 1.0);
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_above(a, mid) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Direct transcription of the reference-value update, as a pure function on
/// `(f_r, f_min, f_c, t)`.
pub fn reference_oracle(state: (f64, f64, f64, usize), f_k: f64, big_t: usize) -> (f64, f64, f64, usize) {
    let (mut f_r, mut f_min, mut f_c, mut t) = state;
    if f_k < f_min {
        f_min = f_k;
        f_c = f_k;
        t = 0;
    } else {
        f_c = if f_c > f_k { f_c } else { f_k };
        t += 1;
        if t == big_t {
            f_r = f_c;
            f_c = f_k;
            t = 0;
        }
    }
    (f_r, f_min, f_c, t)
}

/// SD first step, then BB1 steps, on `½xᵀdiag(d)x`. Returns every gradient
/// and every stepsize taken.
pub fn sd_then_bb1(d: &[f64], x0: &[f64], steps: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let grad = |x: &[f64]| -> Vec<f64> { x.iter().zip(d).map(|(x, d)| x * d).collect() };
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(a, b)| a * b).sum() };
    let mut x = x0.to_vec();
    let mut g = grad(&x);
    let mut gs = vec![g.clone()];
    let mut alphas = Vec::new();
    let ag: Vec<f64> = g.iter().zip(d).map(|(g, d)| g * d).collect();
    let mut alpha = dot(&g, &g) / dot(&g, &ag);
    for _ in 0..steps {
        alphas.push(alpha);
        let s: Vec<f64> = g.iter().map(|g| -alpha * g).collect();
        for (xi, si) in x.iter_mut().zip(&s) {
            *xi += si;
        }
        let g_new = grad(&x);
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        alpha = dot(&s, &s) / dot(&s, &y);
        g = g_new;
        gs.push(g.clone());
    }
    (gs, alphas)
}

/// Prints one verdict line and returns whether the criterion held.
pub fn verdict(name: &str, ok: bool, detail: &str) -> bool {
    verdict_with(name, ok, detail, &[])
}

/// One criterion-level line followed by indented per-case lines, written in a
/// single call so parallel tests do not interleave them. The direct handle
/// write keeps the report visible without `--nocapture`.
pub fn verdict_with(name: &str, ok: bool, detail: &str, cases: &[(String, bool)]) -> bool {
    use std::io::Write;
    let mut text = format!("[{}] {name}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    for (line, case_ok) in cases {
        text.push_str(&format!("    {} {line}\n", if *case_ok { "ok " } else { "bad" }));
    }
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    ok
}
