use log::debug;

use super::{Solution, SolverKind, SolverOptions, Status, Tracker};
use crate::error::{Error, Result};
use crate::model::{CountModel, SimplexPoint};
use crate::recon::evaluate;

/// Sup-norm step below which the MM iteration counts as settled.
pub const MM_STEP_TOLERANCE: f64 = 1e-12;

/// Numerators `a_i + x_i Σ_{b_j>0} δ_ij b_j / δ_jᵀx` and the linearised
/// slopes `Σ_{b_j<0} δ_ij |b_j| / δ_jᵀx`.
fn split_terms(model: &CountModel, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let forms = model.linear_forms(x)?;
    let mut gain = vec![0.0; model.n()];
    let mut slope = vec![0.0; model.n()];
    for ((p, b), f) in model
        .patterns()
        .iter()
        .zip(model.unionic_counts())
        .zip(forms)
    {
        let target = if *b > 0.0 { &mut gain } else { &mut slope };
        for i in p.iter_ones() {
            target[i] += b.abs() / f;
        }
    }
    let num = model
        .ionic_counts()
        .iter()
        .zip(x)
        .zip(&gain)
        .map(|((a, x), g)| a + x * g)
        .collect();
    Ok((num, slope))
}

/// Finds `λ > −min d` with `Σ N_i / (λ + d_i) = 1` by bisection. The sum
/// falls from infinity to at most one over `(−min d, ΣN − min d]`.
fn solve_lambda(num: &[f64], d: &[f64]) -> f64 {
    let low = d.iter().cloned().fold(f64::INFINITY, f64::min);
    let total: f64 = num.iter().sum();
    let mass = |l: f64| -> f64 { num.iter().zip(d).map(|(n, d)| n / (l + d)).sum() };
    let (mut lo, mut hi) = (-low, total - low);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mass(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// The MM fixed point `x ← a / (λ1 − Δ(b / Δᵀx))` with `λ` chosen so the
/// update sums to 1. Only the negative powers are linearised; positive ones
/// are minorised through Jensen's inequality and join the numerator, which
/// makes every step an ascent step. With no positive unionic counts this is
/// the plain iteration. Requires every ionic count to be positive.
pub fn mm_solve(model: &CountModel, opts: &SolverOptions) -> Result<Solution> {
    let a = model.ionic_counts();
    if let Some(i) = a.iter().position(|v| !(*v > 0.0)) {
        return Err(Error::InvalidInput(format!(
            "MM needs positive ionic counts; ion {} has {}",
            model.ions()[i],
            a[i]
        )));
    }
    let mut x = SimplexPoint::proportional(a)?.into_vec();
    let mut tracker = Tracker::new(opts);
    let status = loop {
        let ev = match evaluate(model, &x) {
            Ok(ev) => ev,
            Err(e) if tracker.len() > 0 => {
                debug!("mm: evaluation failed ({e})");
                break Status::DivergedWithBest;
            }
            Err(e) => return Err(e),
        };
        tracker.record(&x, ev.sse);
        let (num, slope) = split_terms(model, &x)?;
        let lambda = solve_lambda(&num, &slope);
        let next: Vec<f64> = num
            .iter()
            .zip(&slope)
            .map(|(n, d)| n / (lambda + d))
            .collect();
        if next.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            debug!("mm: bracketing failed");
            break Status::DivergedWithBest;
        }
        let total: f64 = next.iter().sum();
        let next: Vec<f64> = next.iter().map(|v| v / total).collect();
        let step = x
            .iter()
            .zip(&next)
            .map(|(u, v)| (u - v).abs())
            .fold(0.0, f64::max);
        if ev.sse <= opts.sse_tolerance && step <= MM_STEP_TOLERANCE {
            break Status::Converged;
        }
        if step == 0.0 {
            debug!("mm: stalled at sse {}", ev.sse);
            break Status::DivergedWithBest;
        }
        if tracker.len() >= opts.max_iterations {
            break Status::IterationCap;
        }
        x = next;
    };
    tracker.finish(model, SolverKind::Mm, status)
}
