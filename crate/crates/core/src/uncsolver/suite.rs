//! Classic smooth test functions with their standard starting points.

use std::f64::consts::PI;

use super::ObjectiveFn;
use crate::quadprob::{generate, QuadraticProblem};

/// Diagonal quadratic exposed as an [`ObjectiveFn`], started from one of its
/// replicate points.
#[derive(Debug, Clone)]
pub struct QuadObjective {
    pub problem: QuadraticProblem,
    name: String,
    start: Vec<f64>,
}

impl QuadObjective {
    pub fn new(problem: QuadraticProblem, replicate: u64) -> Self {
        let name = format!(
            "quad-set{}-n{}-k{:e}",
            problem.set_id,
            problem.dim(),
            problem.kappa_requested
        );
        let start = problem.start_point(replicate);
        Self { problem, name, start }
    }
}

impl ObjectiveFn for QuadObjective {
    fn name(&self) -> &str {
        &self.name
    }
    fn dim(&self) -> usize {
        self.problem.dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.problem.value(x)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.problem.gradient(x)
    }
    fn start(&self) -> Vec<f64> {
        self.start.clone()
    }
}

type ValueFn = fn(&[f64]) -> f64;
type GradFn = fn(&[f64]) -> Vec<f64>;

/// A test function given by plain function pointers.
#[derive(Debug, Clone)]
pub struct TestFunction {
    name: &'static str,
    start: Vec<f64>,
    value: ValueFn,
    gradient: GradFn,
}

impl ObjectiveFn for TestFunction {
    fn name(&self) -> &str {
        self.name
    }
    fn dim(&self) -> usize {
        self.start.len()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (self.gradient)(x)
    }
    fn start(&self) -> Vec<f64> {
        self.start.clone()
    }
}

fn rosenbrock(x: &[f64]) -> f64 {
    x.chunks(2)
        .map(|p| 100.0 * (p[1] - p[0] * p[0]).powi(2) + (1.0 - p[0]).powi(2))
        .sum()
}

fn rosenbrock_grad(x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    for (p, gp) in x.chunks(2).zip(g.chunks_mut(2)) {
        let r = p[1] - p[0] * p[0];
        gp[0] = -400.0 * p[0] * r - 2.0 * (1.0 - p[0]);
        gp[1] = 200.0 * r;
    }
    g
}

fn powell_singular(x: &[f64]) -> f64 {
    let (t1, t2, t3, t4) = (x[0] + 10.0 * x[1], x[2] - x[3], x[1] - 2.0 * x[2], x[0] - x[3]);
    t1 * t1 + 5.0 * t2 * t2 + t3.powi(4) + 10.0 * t4.powi(4)
}

fn powell_singular_grad(x: &[f64]) -> Vec<f64> {
    let (t1, t2, t3, t4) = (x[0] + 10.0 * x[1], x[2] - x[3], x[1] - 2.0 * x[2], x[0] - x[3]);
    vec![
        2.0 * t1 + 40.0 * t4.powi(3),
        20.0 * t1 + 4.0 * t3.powi(3),
        10.0 * t2 - 8.0 * t3.powi(3),
        -10.0 * t2 - 40.0 * t4.powi(3),
    ]
}

const BEALE_C: [f64; 3] = [1.5, 2.25, 2.625];

fn beale(x: &[f64]) -> f64 {
    BEALE_C
        .iter()
        .enumerate()
        .map(|(i, c)| (c - x[0] + x[0] * x[1].powi(i as i32 + 1)).powi(2))
        .sum()
}

fn beale_grad(x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; 2];
    for (i, c) in BEALE_C.iter().enumerate() {
        let p = i as i32 + 1;
        let r = c - x[0] + x[0] * x[1].powi(p);
        g[0] += 2.0 * r * (x[1].powi(p) - 1.0);
        g[1] += 2.0 * r * p as f64 * x[0] * x[1].powi(p - 1);
    }
    g
}

fn helix_theta(x1: f64, x2: f64) -> f64 {
    let base = (x2 / x1).atan() / (2.0 * PI);
    if x1 < 0.0 {
        base + 0.5
    } else {
        base
    }
}

fn helical_valley(x: &[f64]) -> f64 {
    let theta = helix_theta(x[0], x[1]);
    let r = x[0].hypot(x[1]);
    100.0 * ((x[2] - 10.0 * theta).powi(2) + (r - 1.0).powi(2)) + x[2] * x[2]
}

fn helical_valley_grad(x: &[f64]) -> Vec<f64> {
    let theta = helix_theta(x[0], x[1]);
    let r2 = x[0] * x[0] + x[1] * x[1];
    let r = r2.sqrt();
    let a = x[2] - 10.0 * theta;
    let dtheta = [-x[1] / (2.0 * PI * r2), x[0] / (2.0 * PI * r2)];
    vec![
        200.0 * (-10.0 * a * dtheta[0] + (r - 1.0) * x[0] / r),
        200.0 * (-10.0 * a * dtheta[1] + (r - 1.0) * x[1] / r),
        200.0 * a + 2.0 * x[2],
    ]
}

fn wood(x: &[f64]) -> f64 {
    100.0 * (x[1] - x[0] * x[0]).powi(2)
        + (1.0 - x[0]).powi(2)
        + 90.0 * (x[3] - x[2] * x[2]).powi(2)
        + (1.0 - x[2]).powi(2)
        + 10.1 * ((x[1] - 1.0).powi(2) + (x[3] - 1.0).powi(2))
        + 19.8 * (x[1] - 1.0) * (x[3] - 1.0)
}

fn wood_grad(x: &[f64]) -> Vec<f64> {
    vec![
        -400.0 * x[0] * (x[1] - x[0] * x[0]) - 2.0 * (1.0 - x[0]),
        200.0 * (x[1] - x[0] * x[0]) + 20.2 * (x[1] - 1.0) + 19.8 * (x[3] - 1.0),
        -360.0 * x[2] * (x[3] - x[2] * x[2]) - 2.0 * (1.0 - x[2]),
        180.0 * (x[3] - x[2] * x[2]) + 20.2 * (x[3] - 1.0) + 19.8 * (x[1] - 1.0),
    ]
}

fn trig_residuals(x: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    let sum_cos: f64 = x.iter().map(|v| v.cos()).sum();
    x.iter()
        .enumerate()
        .map(|(i, v)| n - sum_cos + (i + 1) as f64 * (1.0 - v.cos()) - v.sin())
        .collect()
}

fn trigonometric(x: &[f64]) -> f64 {
    trig_residuals(x).iter().map(|r| r * r).sum()
}

fn trigonometric_grad(x: &[f64]) -> Vec<f64> {
    let r = trig_residuals(x);
    let sum_r: f64 = r.iter().sum();
    x.iter()
        .enumerate()
        .map(|(j, v)| {
            2.0 * v.sin() * sum_r + 2.0 * r[j] * ((j + 1) as f64 * v.sin() - v.cos())
        })
        .collect()
}

fn broyden_residuals(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let prev = if i > 0 { x[i - 1] } else { 0.0 };
            let next = if i + 1 < n { x[i + 1] } else { 0.0 };
            (3.0 - 2.0 * x[i]) * x[i] - prev - 2.0 * next + 1.0
        })
        .collect()
}

fn broyden_tridiagonal(x: &[f64]) -> f64 {
    broyden_residuals(x).iter().map(|r| r * r).sum()
}

fn broyden_tridiagonal_grad(x: &[f64]) -> Vec<f64> {
    let r = broyden_residuals(x);
    let n = x.len();
    (0..n)
        .map(|j| {
            let mut g = 2.0 * r[j] * (3.0 - 4.0 * x[j]);
            if j + 1 < n {
                g -= 2.0 * r[j + 1];
            }
            if j > 0 {
                g -= 4.0 * r[j - 1];
            }
            g
        })
        .collect()
}

fn dixon_price(x: &[f64]) -> f64 {
    let tail: f64 = (1..x.len())
        .map(|i| (i + 1) as f64 * (2.0 * x[i] * x[i] - x[i - 1]).powi(2))
        .sum();
    (x[0] - 1.0).powi(2) + tail
}

fn dixon_price_grad(x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    g[0] = 2.0 * (x[0] - 1.0);
    for i in 1..x.len() {
        let w = (i + 1) as f64;
        let r = 2.0 * x[i] * x[i] - x[i - 1];
        g[i] += w * 2.0 * r * 4.0 * x[i];
        g[i - 1] -= w * 2.0 * r;
    }
    g
}

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn sphere_grad(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| 2.0 * v).collect()
}

fn function(name: &'static str, start: Vec<f64>, value: ValueFn, gradient: GradFn) -> Box<dyn ObjectiveFn> {
    Box::new(TestFunction { name, start, value, gradient })
}

/// Eleven test functions: Rosenbrock (n = 2 and 100), Powell singular,
/// Beale, helical valley, Wood, trigonometric, Broyden tridiagonal,
/// Dixon–Price, a sphere and an ill-conditioned diagonal quadratic.
pub fn builtin_suite() -> Vec<Box<dyn ObjectiveFn>> {
    let ext_rosen: Vec<f64> = (0..100).map(|i| if i % 2 == 0 { -1.2 } else { 1.0 }).collect();
    let quad = generate(1, 100, 1e3, 2024).expect("valid quadratic spec");
    vec![
        function("rosenbrock", vec![-1.2, 1.0], rosenbrock, rosenbrock_grad),
        function("ext-rosenbrock-100", ext_rosen, rosenbrock, rosenbrock_grad),
        function("powell-singular", vec![3.0, -1.0, 0.0, 1.0], powell_singular, powell_singular_grad),
        function("beale", vec![1.0, 1.0], beale, beale_grad),
        function("helical-valley", vec![-1.0, 0.0, 0.0], helical_valley, helical_valley_grad),
        function("wood", vec![-3.0, -1.0, -3.0, -1.0], wood, wood_grad),
        function("trigonometric-10", vec![0.1; 10], trigonometric, trigonometric_grad),
        function("broyden-tridiagonal-10", vec![-1.0; 10], broyden_tridiagonal, broyden_tridiagonal_grad),
        function("dixon-price-10", vec![1.0; 10], dixon_price, dixon_price_grad),
        function("sphere-10", (1..=10).map(f64::from).collect(), sphere, sphere_grad),
        Box::new(QuadObjective::new(quad, 0)),
    ]
}
