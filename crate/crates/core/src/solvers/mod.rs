//! Iterative estimators and the baselines they are checked against.

mod grid;
mod mm;
mod newton;
mod weaver;

use std::fmt;

use crate::error::Result;
use crate::likelihood::HessianBlock;
use crate::model::{CountModel, SimplexPoint};
use crate::recon::{thickness_profile, ThicknessProfile};

pub use grid::{grid_oracle, GRID_MAX_IONS, GRID_MAX_RESOLUTION};
pub use mm::{mm_solve, MM_STEP_TOLERANCE};
pub use newton::{newton_solve, NEWTON_STEP_TOLERANCE};
pub use weaver::{alliance, greedy_weaver, weaver, DIVERGENCE_STREAK};

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    pub sse_tolerance: f64,
    pub max_iterations: usize,
    /// Relative nudge used by Greedy Weaver to fit its parabola.
    pub perturbation_factor: f64,
    /// Report the smallest-SSE point seen rather than the last one.
    pub bookkeeping: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            sse_tolerance: 1e-13,
            max_iterations: 10_000,
            perturbation_factor: 1.05,
            bookkeeping: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Weaver,
    GreedyWeaver,
    Alliance,
    Mm,
    Newton,
    GridOracle,
}

impl SolverKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverKind::Weaver => "weaver",
            SolverKind::GreedyWeaver => "greedy_weaver",
            SolverKind::Alliance => "alliance",
            SolverKind::Mm => "mm",
            SolverKind::Newton => "newton",
            SolverKind::GridOracle => "grid_oracle",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Converged,
    IterationCap,
    DivergedWithBest,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::IterationCap => "iteration_cap",
            Status::DivergedWithBest => "diverged_with_best",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub p: SimplexPoint,
    pub thickness: ThicknessProfile,
    pub sse: f64,
    /// One entry per evaluated point, the starting point included.
    pub sse_trace: Vec<f64>,
    pub iterations: usize,
    pub solver: SolverKind,
    pub status: Status,
    /// Engines that actually ran, in order.
    pub stages: Vec<SolverKind>,
    /// Hessian at `p`, filled in by Newton.
    pub hessian: Option<HessianBlock>,
}

impl Solution {
    pub fn is_converged(&self) -> bool {
        self.status == Status::Converged
    }
}

/// Trace and best-point bookkeeping shared by the iterative engines.
pub(crate) struct Tracker {
    trace: Vec<f64>,
    best: Option<(f64, Vec<f64>)>,
    last: Option<(f64, Vec<f64>)>,
    bookkeeping: bool,
}

impl Tracker {
    pub fn new(opts: &SolverOptions) -> Self {
        Tracker {
            trace: Vec::new(),
            best: None,
            last: None,
            bookkeeping: opts.bookkeeping,
        }
    }

    pub fn record(&mut self, x: &[f64], sse: f64) {
        self.trace.push(sse);
        if self.bookkeeping && self.best.as_ref().is_none_or(|(s, _)| sse < *s) {
            self.best = Some((sse, x.to_vec()));
        }
        self.last = Some((sse, x.to_vec()));
    }

    pub fn len(&self) -> usize {
        self.trace.len()
    }

    pub fn finish(
        self,
        model: &CountModel,
        solver: SolverKind,
        status: Status,
    ) -> Result<Solution> {
        let (sse, x) = self
            .best
            .or(self.last)
            .expect("finish called before any evaluation");
        let p = SimplexPoint::new(x)?;
        let thickness = thickness_profile(model, &p)?;
        Ok(Solution {
            p,
            thickness,
            sse,
            iterations: self.trace.len(),
            sse_trace: self.trace,
            solver,
            status,
            stages: vec![solver],
            hessian: None,
        })
    }
}

/// `x / Σx`.
pub(crate) fn normalize(x: &mut [f64]) {
    let s: f64 = x.iter().sum();
    x.iter_mut().for_each(|v| *v /= s);
}
