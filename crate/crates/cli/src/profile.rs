use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::experiment::{fmt_real, RunRow};
use crate::{CliError, Result};

/// Floors applied before forming ratios, so that zero-iteration runs and
/// sub-resolution timings still give finite ratios.
const MIN_ITERS: f64 = 1.0;
const MIN_TIME_MS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Iter,
    Time,
}

impl Metric {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "iter" | "iters" => Ok(Metric::Iter),
            "time" => Ok(Metric::Time),
            _ => Err(CliError::Spec(format!("unknown metric '{s}' (expected iter or time)"))),
        }
    }

    fn of(self, r: &RunRow) -> f64 {
        match self {
            Metric::Iter => (r.iters as f64).max(MIN_ITERS),
            Metric::Time => r.time_ms.max(MIN_TIME_MS),
        }
    }
}

/// Cumulative share of problems a method solves within ratio `ρ` of the
/// best method. `rho[i]` and `fraction[i]` form a right-continuous step
/// function; unsolved problems never enter it.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    pub method: String,
    pub rho: Vec<f64>,
    pub fraction: Vec<f64>,
    pub solved: usize,
    pub problems: usize,
}

impl ProfileCurve {
    /// Fraction at `ρ` (0 below the first breakpoint).
    pub fn at(&self, rho: f64) -> f64 {
        match self.rho.iter().rposition(|&r| r <= rho) {
            Some(i) => self.fraction[i],
            None => 0.0,
        }
    }
}

/// Dolan–Moré profiles for every method in `rows`. Each method must have
/// exactly one row per problem, and all methods must share the problem set.
pub fn performance_profile(rows: &[RunRow], metric: Metric) -> Result<Vec<ProfileCurve>> {
    type Key = (String, usize, u64, u64, u64);
    let mut table: BTreeMap<String, BTreeMap<Key, &RunRow>> = BTreeMap::new();
    for r in rows {
        if table.entry(r.method.clone()).or_default().insert(r.problem_key(), r).is_some() {
            return Err(CliError::InvalidInput(format!("duplicate problem for method '{}'", r.method)));
        }
    }
    if table.is_empty() {
        return Err(CliError::InvalidInput("no runs".into()));
    }
    let problems: BTreeSet<Key> = table.values().next().unwrap().keys().cloned().collect();
    for (m, runs) in &table {
        if runs.keys().cloned().collect::<BTreeSet<_>>() != problems {
            return Err(CliError::InvalidInput(format!("method '{m}' was run on a different problem set")));
        }
    }

    let best: BTreeMap<&Key, f64> = problems
        .iter()
        .map(|p| {
            let b = table
                .values()
                .filter(|runs| runs[p].solved())
                .map(|runs| metric.of(runs[p]))
                .fold(f64::INFINITY, f64::min);
            (p, b)
        })
        .collect();
    let ratios: BTreeMap<&String, Vec<f64>> = table
        .iter()
        .map(|(m, runs)| {
            let mut v: Vec<f64> = problems
                .iter()
                .map(|p| if runs[p].solved() { metric.of(runs[p]) / best[p] } else { f64::INFINITY })
                .collect();
            v.sort_by(f64::total_cmp);
            (m, v)
        })
        .collect();
    let mut breakpoints: Vec<f64> = ratios.values().flatten().copied().filter(|r| r.is_finite()).collect();
    breakpoints.sort_by(f64::total_cmp);
    breakpoints.dedup();

    let total = problems.len();
    Ok(ratios
        .into_iter()
        .map(|(m, v)| {
            let fraction = breakpoints
                .iter()
                .map(|&rho| v.iter().filter(|&&r| r <= rho).count() as f64 / total as f64)
                .collect();
            ProfileCurve {
                method: m.clone(),
                rho: breakpoints.clone(),
                fraction,
                solved: v.iter().filter(|r| r.is_finite()).count(),
                problems: total,
            }
        })
        .collect())
}

/// Writes `method,rho,fraction` rows.
pub fn write_profile(path: &Path, curves: &[ProfileCurve]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["method", "rho", "fraction"])?;
    for c in curves {
        for (r, f) in c.rho.iter().zip(&c.fraction) {
            w.write_record([c.method.clone(), fmt_real(*r), fmt_real(*f)])?;
        }
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(method: &str, seed: u64, iters: usize, status: &str) -> RunRow {
        RunRow {
            method: method.into(),
            set: "1".into(),
            n: 10,
            kappa: 10.0,
            eps: 1e-6,
            seed,
            iters,
            nfe: iters,
            ngrad: iters,
            final_gnorm: 0.0,
            status: status.into(),
            time_ms: iters as f64,
            final_f: 0.0,
        }
    }

    #[test]
    fn single_method() {
        let rows = vec![row("a", 0, 3, "ok"), row("a", 1, 9, "ok"), row("a", 2, 9, "max_iter")];
        let c = performance_profile(&rows, Metric::Iter).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].rho, vec![1.0]);
        assert_eq!(c[0].at(1.0), 2.0 / 3.0);
        assert_eq!(c[0].at(1e9), 2.0 / 3.0);
    }

    #[test]
    fn strictly_faster_method() {
        let rows = vec![row("a", 0, 1, "ok"), row("a", 1, 2, "ok"), row("b", 0, 5, "ok"), row("b", 1, 3, "ok")];
        let c = performance_profile(&rows, Metric::Iter).unwrap();
        assert_eq!(c[0].at(1.0), 1.0);
        assert_eq!(c[1].at(1.0), 0.0);
    }

    #[test]
    fn misaligned_problems_rejected() {
        let rows = vec![row("a", 0, 1, "ok"), row("b", 1, 1, "ok")];
        assert!(matches!(performance_profile(&rows, Metric::Iter), Err(CliError::InvalidInput(_))));
        let rows = vec![row("a", 0, 1, "ok"), row("a", 0, 2, "ok")];
        assert!(performance_profile(&rows, Metric::Iter).is_err());
    }

    #[test]
    fn time_metric_uses_floor() {
        let mut a = row("a", 0, 1, "ok");
        let mut b = row("b", 0, 1, "ok");
        a.time_ms = 0.0;
        b.time_ms = 2e-3;
        let c = performance_profile(&[a, b], Metric::Time).unwrap();
        assert_eq!(c[1].rho, vec![1.0, 2.0]);
        assert_eq!(c[1].at(1.5), 0.0);
    }
}
