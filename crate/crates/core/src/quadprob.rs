//! Diagonal quadratic test problems with known spectrum and minimizer.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::rng;

/// Quadratic-form convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadForm {
    /// `f(x) = (x − x*)ᵀ diag(v) (x − x*)`; Hessian `2 diag(v)`.
    TestQp,
    /// `f(x) = ½ xᵀ diag(v) x`; Hessian `diag(v)`, minimizer 0.
    HalfForm,
}

impl QuadForm {
    pub fn name(self) -> &'static str {
        match self {
            QuadForm::TestQp => "TESTQP",
            QuadForm::HalfForm => "HALFFORM",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "TESTQP" => Some(QuadForm::TestQp),
            "HALFFORM" => Some(QuadForm::HalfForm),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticProblem {
    /// Generator set (1..=5), or 0 for hand-built problems.
    pub set_id: u8,
    pub seed: u64,
    /// Diagonal of the quadratic form.
    pub spectrum: Vec<f64>,
    pub x_star: Vec<f64>,
    pub form: QuadForm,
    /// `max(v) / min(v)`
    pub kappa: f64,
    /// Condition number requested from the generator.
    pub kappa_requested: f64,
}

impl QuadraticProblem {
    pub fn new(spectrum: Vec<f64>, x_star: Vec<f64>, form: QuadForm) -> Result<Self> {
        if spectrum.is_empty() || spectrum.len() != x_star.len() {
            return Err(Error::InvalidSpec("spectrum and minimizer must have equal, nonzero length".into()));
        }
        if spectrum.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidSpec("spectrum must be positive and finite".into()));
        }
        let kappa = condition_number(&spectrum);
        Ok(Self { set_id: 0, seed: 0, spectrum, x_star, form, kappa, kappa_requested: kappa })
    }

    pub fn half_form(spectrum: Vec<f64>) -> Result<Self> {
        let n = spectrum.len();
        Self::new(spectrum, vec![0.0; n], QuadForm::HalfForm)
    }

    pub fn dim(&self) -> usize {
        self.spectrum.len()
    }

    fn weight(&self) -> f64 {
        match self.form {
            QuadForm::TestQp => 2.0,
            QuadForm::HalfForm => 1.0,
        }
    }

    /// Eigenvalues of the Hessian, i.e. the spectrum times the form's factor.
    pub fn hessian_eigenvalues(&self) -> Vec<f64> {
        let w = self.weight();
        self.spectrum.iter().map(|v| w * v).collect()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let quad: f64 = x
            .iter()
            .zip(&self.x_star)
            .zip(&self.spectrum)
            .map(|((x, s), v)| v * (x - s) * (x - s))
            .sum();
        match self.form {
            QuadForm::TestQp => quad,
            QuadForm::HalfForm => 0.5 * quad,
        }
    }

    pub fn gradient_into(&self, x: &[f64], g: &mut [f64]) {
        let w = self.weight();
        for (((gi, xi), si), vi) in g.iter_mut().zip(x).zip(&self.x_star).zip(&self.spectrum) {
            *gi = w * vi * (xi - si);
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        self.gradient_into(x, &mut g);
        g
    }

    pub fn hess_vec(&self, d: &[f64]) -> Vec<f64> {
        let w = self.weight();
        d.iter().zip(&self.spectrum).map(|(d, v)| w * v * d).collect()
    }

    /// Starting point for `replicate`, drawn from its own sub-stream of the
    /// problem seed.
    pub fn start_point(&self, replicate: u64) -> Vec<f64> {
        rng::box_point(&mut rng::replicate_stream(self.seed, replicate), self.dim())
    }

    /// Plain-text provenance record: a `set,n,kappa,seed,form` line followed
    /// by one spectrum value per line. Values use shortest round-trip
    /// formatting, so parsing recovers them bit-for-bit.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{},{},{:e},{},{}\n",
            self.set_id,
            self.dim(),
            self.kappa_requested,
            self.seed,
            self.form.name()
        );
        for v in &self.spectrum {
            writeln!(out, "{v:e}").unwrap();
        }
        out
    }

    /// Inverse of [`to_text`](Self::to_text). Generated problems (set 1..=5)
    /// are regenerated from their seed and checked against the stored
    /// spectrum; set 0 yields a half-form problem with the stored spectrum.
    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::InvalidSpec(format!("problem text: {m}"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("empty"))?;
        let fields: Vec<&str> = header.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(bad("header must be set,n,kappa,seed,form"));
        }
        let set_id: u8 = fields[0].parse().map_err(|_| bad("set"))?;
        let n: usize = fields[1].parse().map_err(|_| bad("n"))?;
        let kappa: f64 = fields[2].parse().map_err(|_| bad("kappa"))?;
        let seed: u64 = fields[3].parse().map_err(|_| bad("seed"))?;
        let form = QuadForm::parse(fields[4]).ok_or_else(|| bad("form"))?;
        let spectrum: Vec<f64> = lines
            .map(|l| l.trim().parse::<f64>().map_err(|_| bad("spectrum value")))
            .collect::<Result<_>>()?;
        if spectrum.len() != n {
            return Err(bad("spectrum length does not match n"));
        }
        if set_id == 0 {
            let mut p = Self::half_form(spectrum)?;
            p.seed = seed;
            p.kappa_requested = kappa;
            return Ok(p);
        }
        let mut p = generate(set_id, n, kappa, seed)?;
        p.form = form;
        if p.spectrum != spectrum {
            return Err(bad("spectrum does not match regenerated problem"));
        }
        Ok(p)
    }
}

fn condition_number(v: &[f64]) -> f64 {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    max / min
}

/// Builds a `TestQp` instance with one of the five spectrum distributions.
///
/// | set | spectrum |
/// |-----|----------|
/// | 1 | `v₁ = 1`, `v_n = κ`, interior uniform in `(1, κ)` |
/// | 2 | `v_j = 1 + (κ−1)s_j`, `s_j ∈ (0.8, 1)` for `j ≤ n/2`, `(0, 0.2)` after |
/// | 3 | `v₁ = 1`, `v_n = κ`, `j ∈ [2, n/5]` in `(1, 100)`, rest in `(κ/2, κ)` |
/// | 4 | `v_j = κ^{(n−j)/(n−1)}` |
/// | 5 | `v₁ = 1`, `v_n = κ`, `j ∈ [2, 4n/5]` in `(1, 100)`, rest in `(κ/2, κ)` |
///
/// `x*` has components uniform in `[−10, 10]`.
pub fn generate(set_id: u8, n: usize, kappa: f64, seed: u64) -> Result<QuadraticProblem> {
    if n < 3 {
        return Err(Error::InvalidSpec(format!("dimension must be at least 3, got {n}")));
    }
    if !(kappa.is_finite() && kappa > 1.0) {
        return Err(Error::InvalidSpec(format!("kappa must be finite and > 1, got {kappa}")));
    }
    match set_id {
        2 if !n.is_multiple_of(2) => return Err(Error::InvalidSpec("set 2 needs an even dimension".into())),
        3 | 5 if !n.is_multiple_of(5) => {
            return Err(Error::InvalidSpec(format!("set {set_id} needs n divisible by 5")))
        }
        3 | 5 if kappa <= 100.0 => {
            return Err(Error::InvalidSpec(format!("set {set_id} needs kappa > 100")))
        }
        1..=5 => {}
        _ => return Err(Error::InvalidSpec(format!("unknown problem set {set_id}"))),
    }
    let mut r = rng::stream(seed, rng::PROBLEM_STREAM);
    let mut v = vec![0.0; n];
    match set_id {
        1 => {
            v[0] = 1.0;
            v[n - 1] = kappa;
            for vj in &mut v[1..n - 1] {
                *vj = rng::uniform_open(&mut r, 1.0, kappa);
            }
        }
        2 => {
            for (j, vj) in v.iter_mut().enumerate() {
                let s = if j < n / 2 {
                    rng::uniform_open(&mut r, 0.8, 1.0)
                } else {
                    rng::uniform_open(&mut r, 0.0, 0.2)
                };
                *vj = 1.0 + (kappa - 1.0) * s;
            }
        }
        3 | 5 => {
            // 1-based split: j ∈ [2, m] small, j ∈ [m+1, n−1] large
            let m = if set_id == 3 { n / 5 } else { 4 * n / 5 };
            v[0] = 1.0;
            v[n - 1] = kappa;
            for j in 2..=n - 1 {
                v[j - 1] = if j <= m {
                    rng::uniform_open(&mut r, 1.0, 100.0)
                } else {
                    rng::uniform_open(&mut r, kappa / 2.0, kappa)
                };
            }
        }
        4 => {
            for (j, vj) in v.iter_mut().enumerate() {
                // 1-based j + 1
                let e = (n - 1 - j) as f64 / (n - 1) as f64;
                *vj = kappa.powf(e);
            }
        }
        _ => unreachable!(),
    }
    let x_star = rng::box_point(&mut r, n);
    let mut p = QuadraticProblem::new(v, x_star, QuadForm::TestQp)?;
    p.set_id = set_id;
    p.seed = seed;
    p.kappa_requested = kappa;
    Ok(p)
}

/// Three-dimensional half-form problem with `A = diag(1, κ/2, κ)`, `b = 0`.
pub fn verification_problem(kappa: f64) -> QuadraticProblem {
    let mut p = QuadraticProblem::half_form(vec![1.0, kappa / 2.0, kappa])
        .expect("verification spectrum is positive");
    p.kappa_requested = kappa;
    p
}
