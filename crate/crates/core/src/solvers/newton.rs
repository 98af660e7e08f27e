use log::debug;
use nalgebra::DVector;

use super::{Solution, SolverKind, SolverOptions, Status, Tracker};
use crate::error::{Error, Result};
use crate::likelihood::{hessian_raw, log_likelihood_raw, score_raw};
use crate::model::{CountModel, SimplexPoint};
use crate::recon::evaluate;

const MAX_HALVINGS: usize = 60;

/// Sup-norm Newton step below which the iteration counts as settled.
pub const NEWTON_STEP_TOLERANCE: f64 = 1e-12;

/// Newton-Raphson on the log-kernel in the `x_{-n}` chart, halving steps to
/// stay interior and to keep the log-kernel from decreasing. The returned
/// solution carries the Hessian at its point.
pub fn newton_solve(model: &CountModel, opts: &SolverOptions) -> Result<Solution> {
    let mut x = SimplexPoint::proportional(model.ionic_counts())?.into_vec();
    let n = x.len();
    let mut tracker = Tracker::new(opts);
    let mut iteration = 0;
    let status = loop {
        iteration += 1;
        let ev = evaluate(model, &x)?;
        tracker.record(&x, ev.sse);
        let g = DVector::from_vec(score_raw(model, &x)?);
        let h = hessian_raw(model, &x)?;
        let dir = h
            .matrix
            .clone()
            .lu()
            .solve(&(-&g))
            .filter(|d| d.iter().all(|v| v.is_finite()))
            .ok_or(Error::SingularHessian { iteration })?;
        if ev.sse <= opts.sse_tolerance && dir.amax() <= NEWTON_STEP_TOLERANCE {
            break Status::Converged;
        }
        if tracker.len() >= opts.max_iterations {
            break Status::IterationCap;
        }
        let base = log_likelihood_raw(model, &x)?;
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let mut y: Vec<f64> = (0..n - 1).map(|i| x[i] + t * dir[i]).collect();
            let last = 1.0 - y.iter().sum::<f64>();
            y.push(last);
            if y.iter().all(|v| *v > 0.0) {
                if let Ok(v) = log_likelihood_raw(model, &y) {
                    if v >= base - 1e-12 * base.abs().max(1.0) {
                        accepted = Some(y);
                        break;
                    }
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some(y) if y != x => x = y,
            _ if ev.sse <= opts.sse_tolerance => break Status::Converged,
            _ => {
                debug!("newton: no acceptable step at sse {}", ev.sse);
                break Status::DivergedWithBest;
            }
        }
    };
    let mut sol = tracker.finish(model, SolverKind::Newton, status)?;
    sol.hessian = Some(hessian_raw(model, sol.p.as_slice())?);
    Ok(sol)
}
