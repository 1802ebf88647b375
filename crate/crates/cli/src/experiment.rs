use std::fs;
use std::path::{Path, PathBuf};

use gradstep_core::quadprob::generate;
use gradstep_core::quadsolver::verify_3d_termination;
use gradstep_core::uncsolver::{builtin_suite, solve};
use gradstep_core::{QuadMethod, QuadSolverConfig, RunReport, UncMethod, UncSolverConfig, Verify3dMethod};
use rayon::prelude::*;

use crate::config::{Experiment, ExperimentSpec};
use crate::{CliError, Result};

/// Environment variable holding the worker-thread count.
pub const WORKERS_ENV: &str = "GRADSTEP_WORKERS";

pub const RUN_HEADER: [&str; 13] = [
    "method", "set", "n", "kappa", "eps", "seed", "iters", "nfe", "ngrad", "final_gnorm", "status", "time_ms",
    "final_f",
];

pub const AGGREGATE_HEADER: [&str; 13] = [
    "method",
    "set",
    "n",
    "kappa",
    "eps",
    "runs",
    "solved",
    "iters_mean",
    "nfe_mean",
    "ngrad_mean",
    "final_gnorm_mean",
    "final_f_mean",
    "time_ms_mean",
];

const TRACE_HEADER: [&str; 14] = [
    "method", "set", "n", "kappa", "eps", "seed", "k", "stepsize", "accepted", "branch", "gnorm", "f", "f_ref", "tau",
];

/// Real numbers in every table: scientific notation, 10 significant digits.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.9e}")
}

/// One raw result row.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub method: String,
    /// Problem set, or the function name for general objectives.
    pub set: String,
    pub n: usize,
    pub kappa: f64,
    pub eps: f64,
    pub seed: u64,
    pub iters: usize,
    pub nfe: usize,
    pub ngrad: usize,
    pub final_gnorm: f64,
    pub status: String,
    pub time_ms: f64,
    pub final_f: f64,
}

impl RunRow {
    fn from_report(cell: &Cell, r: &RunReport, timing: bool) -> Self {
        Self {
            method: cell.method.clone(),
            set: cell.set.clone(),
            n: cell.n,
            kappa: cell.kappa,
            eps: cell.eps,
            seed: cell.seed,
            iters: r.iterations,
            nfe: r.nfe,
            ngrad: r.ngrad,
            final_gnorm: r.final_gnorm,
            status: r.status.name().to_string(),
            time_ms: if timing { r.wall_time * 1e3 } else { 0.0 },
            final_f: r.final_f,
        }
    }

    pub fn record(&self) -> Vec<String> {
        vec![
            self.method.clone(),
            self.set.clone(),
            self.n.to_string(),
            fmt_real(self.kappa),
            fmt_real(self.eps),
            self.seed.to_string(),
            self.iters.to_string(),
            self.nfe.to_string(),
            self.ngrad.to_string(),
            fmt_real(self.final_gnorm),
            self.status.clone(),
            fmt_real(self.time_ms),
            fmt_real(self.final_f),
        ]
    }

    pub fn from_record(rec: &csv::StringRecord) -> Result<Self> {
        let field = |i: usize| rec.get(i).ok_or_else(|| CliError::InvalidInput(format!("row has {} fields", rec.len())));
        let num = |i: usize| -> Result<f64> {
            field(i)?.parse().map_err(|_| CliError::InvalidInput(format!("bad number in column {}", RUN_HEADER[i])))
        };
        let int = |i: usize| -> Result<u64> {
            field(i)?.parse().map_err(|_| CliError::InvalidInput(format!("bad integer in column {}", RUN_HEADER[i])))
        };
        Ok(Self {
            method: field(0)?.to_string(),
            set: field(1)?.to_string(),
            n: int(2)? as usize,
            kappa: num(3)?,
            eps: num(4)?,
            seed: int(5)?,
            iters: int(6)? as usize,
            nfe: int(7)? as usize,
            ngrad: int(8)? as usize,
            final_gnorm: num(9)?,
            status: field(10)?.to_string(),
            time_ms: num(11)?,
            final_f: num(12)?,
        })
    }

    pub fn solved(&self) -> bool {
        self.status == "ok"
    }

    /// Problem identity shared across methods.
    pub fn problem_key(&self) -> (String, usize, u64, u64, u64) {
        (self.set.clone(), self.n, self.kappa.to_bits(), self.eps.to_bits(), self.seed)
    }
}

#[derive(Debug, Clone)]
struct Cell {
    order: usize,
    method: String,
    set: String,
    set_id: u8,
    n: usize,
    kappa: f64,
    eps: f64,
    seed: u64,
}

/// Everything one experiment produced.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub rows: Vec<RunRow>,
    pub aggregate: Vec<Vec<String>>,
    pub trace: Vec<Vec<String>>,
}

fn cells(spec: &ExperimentSpec) -> Vec<Cell> {
    let seeds = spec.seed_base..spec.seed_base + spec.seeds;
    let mut out = Vec::new();
    let mut push = |method: &str, set: String, set_id: u8, n: usize, kappa: f64, eps: f64, seed: u64| {
        let order = out.len();
        out.push(Cell { order, method: method.to_string(), set, set_id, n, kappa, eps, seed });
    };
    match spec.experiment {
        Experiment::Verify3d => {
            for m in &spec.methods {
                for &kappa in &spec.kappas {
                    for seed in seeds.clone() {
                        push(m, "0".into(), 0, 3, kappa, 0.0, seed);
                    }
                }
            }
        }
        Experiment::QuadBench => {
            for m in &spec.methods {
                for &set in &spec.sets {
                    for &n in &spec.ns {
                        for &kappa in &spec.kappas {
                            for &eps in &spec.epss {
                                for seed in seeds.clone() {
                                    push(m, set.to_string(), set, n, kappa, eps, seed);
                                }
                            }
                        }
                    }
                }
            }
        }
        Experiment::UncBench => {
            let eps = spec.epss.first().copied().unwrap_or(1e-6);
            for m in &spec.methods {
                for f in builtin_suite() {
                    push(m, f.name().to_string(), 0, f.dim(), f64::NAN, eps, 0);
                }
            }
        }
    }
    out
}

fn run_cell(spec: &ExperimentSpec, cell: &Cell, tau1: f64, gamma: f64) -> RunReport {
    match spec.experiment {
        Experiment::Verify3d => {
            let m = Verify3dMethod::parse(&cell.method).expect("validated method");
            verify_3d_termination(cell.kappa, m, cell.seed)
        }
        Experiment::QuadBench => {
            let m = QuadMethod::parse(&cell.method).expect("validated method");
            let p = generate(cell.set_id, cell.n, cell.kappa, cell.seed).expect("validated problem");
            let cfg = QuadSolverConfig {
                tau1,
                gamma,
                eps: cell.eps,
                max_iter: spec.max_iter.unwrap_or(QuadSolverConfig::default().max_iter),
                record_trace: spec.trace,
            };
            m.solve(&p, &p.start_point(0), &cfg)
        }
        Experiment::UncBench => {
            let m = UncMethod::parse(&cell.method).expect("validated method");
            let f = builtin_suite().into_iter().find(|f| f.name() == cell.set).expect("suite function");
            let default = UncSolverConfig::default();
            let cfg = UncSolverConfig {
                method: m,
                tau1,
                gamma,
                eps_inf: cell.eps,
                max_iter: spec.max_iter.unwrap_or(default.max_iter),
                record_trace: spec.trace,
                ..default
            };
            solve(f.as_ref(), &f.start(), &cfg)
        }
    }
}

fn trace_rows(cell: &Cell, r: &RunReport) -> Vec<Vec<String>> {
    r.trace
        .iter()
        .map(|t| {
            vec![
                cell.method.clone(),
                cell.set.clone(),
                cell.n.to_string(),
                fmt_real(cell.kappa),
                fmt_real(cell.eps),
                cell.seed.to_string(),
                t.k.to_string(),
                fmt_real(t.stepsize),
                fmt_real(t.accepted),
                t.branch.name().to_string(),
                fmt_real(t.gnorm),
                fmt_real(t.f),
                fmt_real(t.f_ref),
                fmt_real(t.tau),
            ]
        })
        .collect()
}

fn worker_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| CliError::Spec(format!("{WORKERS_ENV} must be a positive integer, got '{v}'")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Pool(e.to_string()))
}

/// Runs every (method, problem, seed) cell in parallel and returns the rows
/// in specification order, independent of scheduling.
pub fn run(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    spec.validate()?;
    let (tau1, gamma) = spec.tau_gamma()?;
    let cells = cells(spec);
    let pool = worker_pool()?;
    let mut results: Vec<(usize, RunRow, Vec<Vec<String>>)> = pool.install(|| {
        cells
            .par_iter()
            .map(|c| {
                let r = run_cell(spec, c, tau1, gamma);
                let trace = if spec.trace { trace_rows(c, &r) } else { Vec::new() };
                (c.order, RunRow::from_report(c, &r, spec.timing), trace)
            })
            .collect()
    });
    results.sort_by_key(|(order, _, _)| *order);
    let rows: Vec<RunRow> = results.iter().map(|(_, r, _)| r.clone()).collect();
    let trace = results.into_iter().flat_map(|(_, _, t)| t).collect();
    Ok(ExperimentOutput { aggregate: aggregate(&rows), rows, trace })
}

/// Per-cell means over solved runs, one line per (method, set, n, kappa,
/// eps) in first-appearance order.
pub fn aggregate(rows: &[RunRow]) -> Vec<Vec<String>> {
    type Key = (String, String, usize, u64, u64);
    let mut order: Vec<Key> = Vec::new();
    let mut groups: std::collections::HashMap<Key, Vec<&RunRow>> = Default::default();
    for r in rows {
        let key = (r.method.clone(), r.set.clone(), r.n, r.kappa.to_bits(), r.eps.to_bits());
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        groups.entry(key).or_default().push(r);
    }
    order
        .iter()
        .map(|key| {
            let g = &groups[key];
            let solved: Vec<&&RunRow> = g.iter().filter(|r| r.solved()).collect();
            let mean = |f: &dyn Fn(&RunRow) -> f64| -> f64 {
                solved.iter().map(|r| f(r)).sum::<f64>() / solved.len() as f64
            };
            vec![
                key.0.clone(),
                key.1.clone(),
                key.2.to_string(),
                fmt_real(f64::from_bits(key.3)),
                fmt_real(f64::from_bits(key.4)),
                g.len().to_string(),
                solved.len().to_string(),
                fmt_real(mean(&|r| r.iters as f64)),
                fmt_real(mean(&|r| r.nfe as f64)),
                fmt_real(mean(&|r| r.ngrad as f64)),
                fmt_real(mean(&|r| r.final_gnorm)),
                fmt_real(mean(&|r| r.final_f)),
                fmt_real(mean(&|r| r.time_ms)),
            ]
        })
        .collect()
}

fn write_table(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Writes `runs.csv`, `aggregate.csv` and, with tracing on, `trace.csv` into
/// the spec's output directory. Returns the paths written.
pub fn write_outputs(spec: &ExperimentSpec, out: &ExperimentOutput) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(&spec.out).map_err(|e| CliError::io(&spec.out, e))?;
    let runs = spec.out.join("runs.csv");
    let agg = spec.out.join("aggregate.csv");
    write_table(&runs, &RUN_HEADER, out.rows.iter().map(RunRow::record))?;
    write_table(&agg, &AGGREGATE_HEADER, out.aggregate.iter().cloned())?;
    let mut written = vec![runs, agg];
    if spec.trace {
        let trace = spec.out.join("trace.csv");
        write_table(&trace, &TRACE_HEADER, out.trace.iter().cloned())?;
        written.push(trace);
    }
    Ok(written)
}

/// Reads a raw run table written by [`write_outputs`].
pub fn read_runs(path: &Path) -> Result<Vec<RunRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != RUN_HEADER {
        return Err(CliError::InvalidInput(format!("{} does not have the run-table header", path.display())));
    }
    r.records().map(|rec| RunRow::from_record(&rec?)).collect()
}
