use std::fmt::Write as _;
use std::path::PathBuf;

use gradstep_core::{QuadMethod, UncMethod, Verify3dMethod};

use crate::{CliError, Result};

/// Threshold parameters used when neither a preset nor explicit values are
/// given.
pub const DEFAULT_TAU1: f64 = 0.65;
pub const DEFAULT_GAMMA: f64 = 1.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Verify3d,
    QuadBench,
    UncBench,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Verify3d => "verify3d",
            Experiment::QuadBench => "quadbench",
            Experiment::UncBench => "uncbench",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "verify3d" => Ok(Experiment::Verify3d),
            "quadbench" => Ok(Experiment::QuadBench),
            "uncbench" => Ok(Experiment::UncBench),
            _ => Err(CliError::Spec(format!("unknown experiment '{s}'"))),
        }
    }
}

/// `(τ₁, γ)` for a named preset such as `table3-set4-new`.
pub fn preset(name: &str) -> Option<(f64, f64)> {
    let v = match name {
        "table3-set1-new" => (0.9, 1.0),
        "table3-set2-new" => (0.9, 1.0),
        "table3-set3-new" => (0.5, 1.0),
        "table3-set4-new" => (0.5, 1.0),
        "table3-set5-new" => (0.6, 1.3),
        "table3-set1-bbq" => (0.2, 1.0),
        "table3-set2-bbq" => (0.8, 1.0),
        "table3-set3-bbq" => (0.6, 1.3),
        "table3-set4-bbq" => (0.4, 1.0),
        "table3-set5-bbq" => (0.3, 1.3),
        _ => return None,
    };
    Some(v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    pub methods: Vec<String>,
    pub sets: Vec<u8>,
    pub ns: Vec<usize>,
    pub kappas: Vec<f64>,
    pub epss: Vec<f64>,
    pub seeds: u64,
    /// First seed; runs use `seed_base .. seed_base + seeds`.
    pub seed_base: u64,
    pub tau1: Option<f64>,
    pub gamma: Option<f64>,
    pub preset: Option<String>,
    pub max_iter: Option<usize>,
    pub out: PathBuf,
    pub trace: bool,
    /// Record wall times; when off, `time_ms` is written as 0 so repeated runs
    /// produce byte-identical files.
    pub timing: bool,
}

impl ExperimentSpec {
    pub fn defaults(experiment: Experiment) -> Self {
        let (methods, kappas, epss): (&[&str], Vec<f64>, Vec<f64>) = match experiment {
            Experiment::Verify3d => (&["DAY3D", "BB1-3D", "BB2-3D", "BB1"], vec![1e2, 1e4], vec![0.0]),
            Experiment::QuadBench => (&["bb", "new"], vec![1e4], vec![1e-9]),
            Experiment::UncBench => (&["alg1", "alg1-bbq"], vec![0.0], vec![1e-6]),
        };
        Self {
            experiment,
            methods: methods.iter().map(|s| s.to_string()).collect(),
            sets: vec![4],
            ns: vec![1000],
            kappas,
            epss,
            seeds: 10,
            seed_base: 0,
            tau1: None,
            gamma: None,
            preset: None,
            max_iter: None,
            out: PathBuf::from("results"),
            trace: false,
            timing: true,
        }
    }

    /// Effective `(τ₁, γ)`: explicit values win over the preset, which wins
    /// over the defaults.
    pub fn tau_gamma(&self) -> Result<(f64, f64)> {
        let base = match &self.preset {
            Some(p) => preset(p).ok_or_else(|| CliError::Spec(format!("unknown preset '{p}'")))?,
            None => (DEFAULT_TAU1, DEFAULT_GAMMA),
        };
        Ok((self.tau1.unwrap_or(base.0), self.gamma.unwrap_or(base.1)))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Spec(m));
        if self.methods.is_empty() {
            return bad("method list is empty".into());
        }
        if self.seeds == 0 {
            return bad("seeds must be at least 1".into());
        }
        for m in &self.methods {
            let known = match self.experiment {
                Experiment::Verify3d => Verify3dMethod::parse(m).is_some(),
                Experiment::QuadBench => QuadMethod::parse(m).is_some(),
                Experiment::UncBench => UncMethod::parse(m).is_some(),
            };
            if !known {
                return bad(format!("unknown method '{m}' for {}", self.experiment.name()));
            }
        }
        let (tau1, gamma) = self.tau_gamma()?;
        if !(tau1 > 0.0) || !(gamma >= 1.0) {
            return bad(format!("need tau1 > 0 and gamma >= 1, got ({tau1}, {gamma})"));
        }
        if self.experiment == Experiment::QuadBench {
            if self.sets.is_empty() || self.ns.is_empty() || self.kappas.is_empty() || self.epss.is_empty() {
                return bad("quadbench needs non-empty set, n, kappa and eps lists".into());
            }
            for &set in &self.sets {
                for &n in &self.ns {
                    for &kappa in &self.kappas {
                        gradstep_core::quadprob::generate(set, n, kappa, 0)
                            .map_err(|e| CliError::Spec(e.to_string()))?;
                    }
                }
            }
        }
        if self.experiment == Experiment::Verify3d && self.kappas.iter().any(|k| !(*k > 0.0)) {
            return bad("kappa must be positive".into());
        }
        Ok(())
    }

    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| CliError::Spec(format!("bad value '{value}' for {what}"));
        fn list<T: std::str::FromStr>(v: &str) -> Option<Vec<T>> {
            v.split(',').map(|s| s.trim().parse().ok()).collect()
        }
        match key {
            "experiment" => self.experiment = Experiment::parse(value)?,
            "methods" => self.methods = value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
            "set" => self.sets = list(value).ok_or_else(|| bad("set"))?,
            "n" => self.ns = list(value).ok_or_else(|| bad("n"))?,
            "kappa" => self.kappas = list(value).ok_or_else(|| bad("kappa"))?,
            "eps" => self.epss = list(value).ok_or_else(|| bad("eps"))?,
            "seeds" => self.seeds = value.parse().map_err(|_| bad("seeds"))?,
            "seed" => self.seed_base = value.parse().map_err(|_| bad("seed"))?,
            "tau1" => self.tau1 = Some(value.parse().map_err(|_| bad("tau1"))?),
            "gamma" => self.gamma = Some(value.parse().map_err(|_| bad("gamma"))?),
            "preset" => {
                if preset(value).is_none() {
                    return Err(CliError::Spec(format!("unknown preset '{value}'")));
                }
                self.preset = Some(value.to_string());
            }
            "max_iter" => self.max_iter = Some(value.parse().map_err(|_| bad("max_iter"))?),
            "out" => self.out = PathBuf::from(value),
            "trace" => self.trace = value.parse().map_err(|_| bad("trace"))?,
            "timing" => self.timing = value.parse().map_err(|_| bad("timing"))?,
            _ => return Err(CliError::Spec(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Reads `key=value` lines on top of the current values. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Spec(format!("line {}: expected key=value", i + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// `key=value` rendering that [`parse_config`] reads back to the same spec.
pub fn print_config(spec: &ExperimentSpec) -> String {
    let mut s = String::new();
    let (tau1, gamma) = spec.tau_gamma().unwrap_or((f64::NAN, f64::NAN));
    writeln!(s, "experiment={}", spec.experiment.name()).unwrap();
    writeln!(s, "methods={}", spec.methods.join(",")).unwrap();
    writeln!(s, "set={}", join(&spec.sets)).unwrap();
    writeln!(s, "n={}", join(&spec.ns)).unwrap();
    writeln!(s, "kappa={}", join(&spec.kappas)).unwrap();
    writeln!(s, "eps={}", join(&spec.epss)).unwrap();
    writeln!(s, "seeds={}", spec.seeds).unwrap();
    writeln!(s, "seed={}", spec.seed_base).unwrap();
    if let Some(p) = &spec.preset {
        writeln!(s, "preset={p}").unwrap();
    }
    writeln!(s, "tau1={tau1}").unwrap();
    writeln!(s, "gamma={gamma}").unwrap();
    if let Some(m) = spec.max_iter {
        writeln!(s, "max_iter={m}").unwrap();
    }
    writeln!(s, "out={}", spec.out.display()).unwrap();
    writeln!(s, "trace={}", spec.trace).unwrap();
    writeln!(s, "timing={}", spec.timing).unwrap();
    s
}

/// Builds a spec from the experiment defaults, then the config text, then
/// each `(key, value)` override in order.
pub fn parse_config(
    experiment: Experiment,
    text: Option<&str>,
    overrides: &[(&str, String)],
) -> Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::defaults(experiment);
    if let Some(t) = text {
        spec.apply_text(t)?;
    }
    for (k, v) in overrides {
        spec.set(k, v)?;
    }
    if spec.experiment != experiment {
        return Err(CliError::Spec(format!(
            "config is for '{}' but '{}' was requested",
            spec.experiment.name(),
            experiment.name()
        )));
    }
    spec.validate()?;
    Ok(spec)
}
