//! Thickness and reconstruction arithmetic.
//!
//! For a point `x` the unionic thicknesses `τ_j(x) = b_j / δ_jᵀx` are fixed by
//! the data. The ionic counts are then reconstructed as
//! `R_i = x_i (τ₀ + Σ_{j: δ_ij = 0} τ_j)` and compared against `a`. The error
//! `ε = ‖R − a‖²` is quadratic in `τ₀`, so the best `τ₀` for a given `x` has a
//! closed form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CountModel, SimplexPoint, SINGULAR_THRESHOLD};

/// Co-thicknesses attached to a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThicknessProfile {
    pub tau0: f64,
    pub tau: Vec<f64>,
    pub evaluated_at: SimplexPoint,
}

impl ThicknessProfile {
    /// `τ₀ + Στ_j`.
    pub fn total(&self) -> f64 {
        self.tau0 + self.tau.iter().sum::<f64>()
    }
}

/// Coefficients of `ε(τ₀ | x) = a τ₀² + b τ₀ + c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadratic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Quadratic {
    pub fn eval(&self, t: f64) -> f64 {
        (self.a * t + self.b) * t + self.c
    }

    pub fn discriminant(&self) -> f64 {
        self.b * self.b - 4.0 * self.a * self.c
    }

    pub fn argmin(&self) -> f64 {
        -self.b / (2.0 * self.a)
    }
}

/// `τ(y)` at any point whose linear forms are non-singular; `y` need not lie
/// on the simplex.
pub fn thickness_raw(model: &CountModel, y: &[f64]) -> Result<Vec<f64>> {
    model.check_len(y)?;
    let forms = model.linear_forms(y)?;
    Ok(model
        .unionic_counts()
        .iter()
        .zip(forms)
        .map(|(b, s)| b / s)
        .collect())
}

pub fn thickness(model: &CountModel, x: &SimplexPoint) -> Result<Vec<f64>> {
    thickness_raw(model, x.as_slice())
}

/// `η_i(x) = x_i Σ_{j: δ_ij = 0} τ_j(x)`: the reconstruction with `τ₀ = 0`.
fn complement_sums(model: &CountModel, tau: &[f64]) -> Vec<f64> {
    let total: f64 = tau.iter().sum();
    (0..model.n())
        .map(|i| {
            let inside: f64 = model
                .patterns()
                .iter()
                .zip(tau)
                .filter(|(p, _)| p.get(i))
                .map(|(_, t)| t)
                .sum();
            total - inside
        })
        .collect()
}

/// Everything a reconstruction iteration needs at one point.
#[derive(Clone, Debug)]
pub(crate) struct Evaluation {
    pub tau: Vec<f64>,
    /// `Σ_{j: δ_ij = 0} τ_j` per ion.
    pub complement: Vec<f64>,
    pub tau0: f64,
    pub deviation: Vec<f64>,
    pub sse: f64,
}

impl Evaluation {
    /// Denominators `τ₀ + Σ_{δ_ij=0} τ_j` of the ion block.
    pub fn ion_thickness(&self) -> impl Iterator<Item = f64> + '_ {
        self.complement.iter().map(move |c| self.tau0 + c)
    }
}

/// Evaluates at a raw point with `τ₀` set to its SSE minimiser.
pub(crate) fn evaluate(model: &CountModel, x: &[f64]) -> Result<Evaluation> {
    let tau = thickness_raw(model, x)?;
    let complement = complement_sums(model, &tau);
    let a = model.ionic_counts();
    let xx: f64 = x.iter().map(|v| v * v).sum();
    if xx < SINGULAR_THRESHOLD {
        return Err(Error::SingularEvaluation { term: 0, value: xx });
    }
    let num: f64 = (0..x.len())
        .map(|i| x[i] * (a[i] - x[i] * complement[i]))
        .sum();
    let tau0 = num / xx;
    let deviation: Vec<f64> = (0..x.len())
        .map(|i| x[i] * (tau0 + complement[i]) - a[i])
        .collect();
    let sse = deviation.iter().map(|d| d * d).sum();
    Ok(Evaluation {
        tau,
        complement,
        tau0,
        deviation,
        sse,
    })
}

/// The minimiser over `τ₀` of the reconstruction error at `x`.
pub fn tau0_star(model: &CountModel, x: &SimplexPoint) -> Result<f64> {
    Ok(evaluate(model, x.as_slice())?.tau0)
}

pub(crate) fn reconstruct_raw(model: &CountModel, x: &[f64], tau0: f64) -> Result<Vec<f64>> {
    let tau = thickness_raw(model, x)?;
    let comp = complement_sums(model, &tau);
    Ok(x.iter().zip(comp).map(|(xi, c)| xi * (tau0 + c)).collect())
}

/// `R(x, τ₀) = x ∗ (τ₀1 + (1 − Δ)τ(x))`.
pub fn reconstruct(model: &CountModel, x: &SimplexPoint, tau0: f64) -> Result<Vec<f64>> {
    reconstruct_raw(model, x.as_slice(), tau0)
}

/// `d = R(x, τ₀) − a`.
pub fn deviation(model: &CountModel, x: &SimplexPoint, tau0: f64) -> Result<Vec<f64>> {
    let r = reconstruct(model, x, tau0)?;
    Ok(r.iter()
        .zip(model.ionic_counts())
        .map(|(r, a)| r - a)
        .collect())
}

pub fn sse(model: &CountModel, x: &SimplexPoint, tau0: f64) -> Result<f64> {
    Ok(deviation(model, x, tau0)?.iter().map(|d| d * d).sum())
}

/// The coefficients of the quadratic relating the reconstruction error to
/// `τ₀` at a fixed `x`.
pub fn quadratic_coeffs(model: &CountModel, x: &SimplexPoint) -> Result<Quadratic> {
    let x = x.as_slice();
    let tau = thickness_raw(model, x)?;
    let comp = complement_sums(model, &tau);
    let a = model.ionic_counts();
    // η − a where η = diag(x)(1 − Δ)τ
    let resid: Vec<f64> = (0..x.len()).map(|i| x[i] * comp[i] - a[i]).collect();
    Ok(Quadratic {
        a: x.iter().map(|v| v * v).sum(),
        b: 2.0 * x.iter().zip(&resid).map(|(x, r)| x * r).sum::<f64>(),
        c: resid.iter().map(|r| r * r).sum(),
    })
}

/// `τ(x)` and `τ₀*(x)` bundled with the point.
pub fn thickness_profile(model: &CountModel, x: &SimplexPoint) -> Result<ThicknessProfile> {
    let ev = evaluate(model, x.as_slice())?;
    Ok(ThicknessProfile {
        tau0: ev.tau0,
        tau: ev.tau,
        evaluated_at: x.clone(),
    })
}
