use log::debug;

use super::{normalize, Solution, SolverKind, SolverOptions, Status, Tracker};
use crate::error::{Error, Result};
use crate::model::{CountModel, SimplexPoint};
use crate::recon::evaluate;

/// Consecutive SSE increases after which Weaver gives up.
pub const DIVERGENCE_STREAK: usize = 25;

fn check_options(opts: &SolverOptions) -> Result<()> {
    if !(opts.sse_tolerance > 0.0) || opts.max_iterations == 0 {
        return Err(Error::InvalidInput(format!(
            "tolerance {} and iteration cap {} must be positive",
            opts.sse_tolerance, opts.max_iterations
        )));
    }
    if !(opts.perturbation_factor > 0.0 && opts.perturbation_factor != 1.0) {
        return Err(Error::InvalidInput(format!(
            "perturbation factor {} must be positive and differ from 1",
            opts.perturbation_factor
        )));
    }
    Ok(())
}

/// Fixed-point iteration `x ← a ÷ ((1 − Δ)τ(x) + τ₀(x)1)`, renormalised,
/// started from `a / Σa`.
pub fn weaver(model: &CountModel, opts: &SolverOptions) -> Result<Solution> {
    check_options(opts)?;
    let start = SimplexPoint::proportional(model.ionic_counts())?;
    run_weaver(model, opts, start.into_vec(), opts.max_iterations)
}

fn run_weaver(
    model: &CountModel,
    opts: &SolverOptions,
    mut x: Vec<f64>,
    budget: usize,
) -> Result<Solution> {
    let a = model.ionic_counts();
    let mut tracker = Tracker::new(opts);
    let mut streak = 0;
    let mut previous = f64::INFINITY;
    let status = loop {
        let ev = match evaluate(model, &x) {
            Ok(ev) => ev,
            Err(e) if tracker.len() > 0 => {
                debug!("weaver: evaluation failed ({e})");
                break Status::DivergedWithBest;
            }
            Err(e) => return Err(e),
        };
        tracker.record(&x, ev.sse);
        if ev.sse <= opts.sse_tolerance {
            break Status::Converged;
        }
        streak = if ev.sse > previous { streak + 1 } else { 0 };
        previous = ev.sse;
        if streak >= DIVERGENCE_STREAK {
            debug!("weaver: sse grew {streak} times in a row");
            break Status::DivergedWithBest;
        }
        if tracker.len() >= budget {
            break Status::IterationCap;
        }
        let mut next = Vec::with_capacity(x.len());
        for (ai, d) in a.iter().zip(ev.ion_thickness()) {
            if !(d > 0.0 && d.is_finite()) {
                break;
            }
            next.push(ai / d);
        }
        if next.len() < x.len() || next.iter().any(|v| !(*v > 0.0)) {
            debug!("weaver: non-positive denominator or coordinate");
            break Status::DivergedWithBest;
        }
        normalize(&mut next);
        x = next;
    };
    tracker.finish(model, SolverKind::Weaver, status)
}

/// Coordinate-wise root finding on the largest reconstruction deviation.
/// Starts from `init`, or from `a / Σa` when absent.
pub fn greedy_weaver(
    model: &CountModel,
    opts: &SolverOptions,
    init: Option<&SimplexPoint>,
) -> Result<Solution> {
    check_options(opts)?;
    let start = match init {
        Some(p) => p.clone(),
        None => SimplexPoint::proportional(model.ionic_counts())?,
    };
    run_greedy(model, opts, start.into_vec(), opts.max_iterations)
}

/// Restores `Σx = 1` after `x[i]` moved from `old` by rescaling the other
/// coordinates, which keeps their ratios. Falls back to normalising when
/// `x[i]` alone exceeds one.
fn rebalance(x: &mut [f64], i: usize, old: f64) {
    let f = (1.0 - x[i]) / (1.0 - old);
    if f > 0.0 {
        for (k, v) in x.iter_mut().enumerate() {
            if k != i {
                *v *= f;
            }
        }
        return;
    }
    normalize(x);
}

/// The larger root of `αt² + βt + γ`, with the vertex standing in when the
/// discriminant is negative and the linear root when `α` vanishes.
fn parabola_root(alpha: f64, beta: f64, gamma: f64) -> f64 {
    let scale = beta.abs().max(gamma.abs()).max(1.0);
    if alpha.abs() <= 1e-12 * scale {
        return -gamma / beta;
    }
    let disc = beta * beta - 4.0 * alpha * gamma;
    if disc < 0.0 {
        -beta / (2.0 * alpha)
    } else {
        (-beta + disc.sqrt()) / (2.0 * alpha)
    }
}

fn run_greedy(
    model: &CountModel,
    opts: &SolverOptions,
    mut x: Vec<f64>,
    budget: usize,
) -> Result<Solution> {
    let a = model.ionic_counts();
    let mut tracker = Tracker::new(opts);
    let status = loop {
        let ev = match evaluate(model, &x) {
            Ok(ev) => ev,
            Err(e) if tracker.len() > 0 => {
                debug!("greedy weaver: evaluation failed ({e})");
                break Status::DivergedWithBest;
            }
            Err(e) => return Err(e),
        };
        tracker.record(&x, ev.sse);
        if ev.sse <= opts.sse_tolerance {
            break Status::Converged;
        }
        if tracker.len() >= budget {
            break Status::IterationCap;
        }
        let mut i = 0;
        for (k, d) in ev.deviation.iter().enumerate() {
            if d.abs() > ev.deviation[i].abs() {
                i = k;
            }
        }
        let u2 = x[i];
        let u3 = opts.perturbation_factor * x[i];
        let mut temp = x.clone();
        temp[i] = u3;
        rebalance(&mut temp, i, u2);
        let d3 = match evaluate(model, &temp) {
            Ok(t) => t.deviation[i],
            Err(e) => {
                debug!("greedy weaver: perturbed evaluation failed ({e})");
                break Status::DivergedWithBest;
            }
        };
        let (v1, v2, v3) = (-a[i], ev.deviation[i], d3);
        let den = u2 * u2 * u3 - u2 * u3 * u3;
        let alpha = (u3 * (v2 - v1) - u2 * (v3 - v1)) / den;
        let beta = (-u3 * u3 * (v2 - v1) + u2 * u2 * (v3 - v1)) / den;
        let root = parabola_root(alpha, beta, v1);
        if !(root > 0.0 && root.is_finite()) {
            debug!("greedy weaver: no positive root for ion {i}");
            break Status::DivergedWithBest;
        }
        x[i] = root;
        rebalance(&mut x, i, u2);
        if x.iter().any(|v| !(*v > 0.0)) {
            break Status::DivergedWithBest;
        }
    };
    tracker.finish(model, SolverKind::GreedyWeaver, status)
}

/// Weaver first; when it diverges, Greedy Weaver from its best point.
pub fn alliance(model: &CountModel, opts: &SolverOptions) -> Result<Solution> {
    let first = weaver(model, opts)?;
    let mut out = if first.status != Status::DivergedWithBest {
        first
    } else {
        debug!(
            "alliance: weaver diverged after {} evaluations, handing over",
            first.iterations
        );
        let budget = opts.max_iterations.saturating_sub(first.iterations).max(1);
        let second = run_greedy(model, opts, first.p.as_slice().to_vec(), budget)?;
        let mut trace = first.sse_trace.clone();
        trace.extend_from_slice(&second.sse_trace);
        let keep = if second.is_converged() || second.sse <= first.sse {
            second
        } else {
            first
        };
        let status = match keep.status {
            Status::Converged => Status::Converged,
            Status::IterationCap if keep.solver == SolverKind::GreedyWeaver => Status::IterationCap,
            _ => Status::DivergedWithBest,
        };
        Solution {
            iterations: trace.len(),
            sse_trace: trace,
            status,
            stages: vec![SolverKind::Weaver, SolverKind::GreedyWeaver],
            ..keep
        }
    };
    out.solver = SolverKind::Alliance;
    Ok(out)
}
