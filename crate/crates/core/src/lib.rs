//! Gradient methods built around a three-dimensional quadratic-termination
//! stepsize.
//!
//! The crate is organised bottom-up:
//!
//! - [`stepsizes`]: scalar BB1/BB2/SD/DAY/BBQ stepsize formulas.
//! - [`termination3d`]: the projected-Hessian matrix `H_k`, built either from
//!   an explicit Hessian or from the BB scalar recurrence, and the closed-form
//!   cubic (and bisection quartic) largest-root solvers that turn it into a
//!   stepsize.
//! - [`quadprob`]: diagonal quadratic test problems.
//! - [`quadsolver`]: BB, the adaptive short/long method and the
//!   three-dimensional termination verification schedules.
//! - [`uncsolver`]: the globalized method for general smooth functions with a
//!   Dai–Fletcher nonmonotone line search, plus a built-in test suite.

pub mod error;
pub mod linalg;
pub mod quadprob;
pub mod quadsolver;
pub mod report;
pub mod rng;
pub mod stepsizes;
pub mod termination3d;
pub mod uncsolver;

pub use error::{Error, Result};
pub use quadprob::{QuadForm, QuadraticProblem};
pub use quadsolver::{QuadMethod, QuadSolverConfig, Verify3dMethod};
pub use report::{Branch, IterRecord, RunReport, Status};
pub use stepsizes::{BbqRatios, StepPair};
pub use termination3d::{CubicSolve, GradientHistory, HMatrix, RecurrenceScalars};
pub use uncsolver::{ObjectiveFn, ReferenceState, UncMethod, UncSolverConfig};
