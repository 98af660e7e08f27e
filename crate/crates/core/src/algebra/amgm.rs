//! The weighted AM-GM inequality in the form
//!
//! ```text
//! Π x_i^{a_i} ≤ (Π a_i^{a_i} / A^A) (Σ x_i)^A,   A = Σ a_i,
//! ```
//!
//! with equality iff `x ∝ a`. Both sides overflow quickly for realistic
//! counts, so everything is carried in logarithms.

use crate::error::{Error, Result};
use crate::model::Pattern;

/// Both sides of the inequality, in logarithms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmGmGap {
    pub log_lhs: f64,
    pub log_rhs: f64,
    /// `ln LHS − ln RHS`, computed without cancellation against the large
    /// absolute terms. Never positive up to roundoff.
    pub log_ratio: f64,
}

impl AmGmGap {
    /// `(RHS − LHS) / RHS`, in `[0, 1]`.
    pub fn relative(&self) -> f64 {
        -self.log_ratio.exp_m1()
    }

    /// `RHS − LHS`; may overflow to infinity for large counts.
    pub fn absolute(&self) -> f64 {
        self.log_rhs.exp() * self.relative()
    }
}

fn check_positive(name: &str, v: &[f64]) -> Result<()> {
    if let Some((i, x)) = v
        .iter()
        .enumerate()
        .find(|(_, x)| !(x.is_finite() && **x > 0.0))
    {
        return Err(Error::InvalidInput(format!(
            "{name}[{i}] = {x} is not positive"
        )));
    }
    Ok(())
}

/// Gap of the weighted AM-GM inequality for positive `x` and weights `a`.
pub fn weighted_amgm_gap(x: &[f64], a: &[f64]) -> Result<AmGmGap> {
    if x.len() != a.len() || x.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "x has {} entries, a has {}",
            x.len(),
            a.len()
        )));
    }
    check_positive("x", x)?;
    check_positive("a", a)?;
    Ok(gap_over(
        x.iter().copied().zip(a.iter().copied()),
        x.iter().sum(),
    ))
}

/// `(x_i, β_i)` pairs with `β_i > 0`; `base` is the sum raised on the right.
fn gap_over(pairs: impl Iterator<Item = (f64, f64)> + Clone, base: f64) -> AmGmGap {
    let total: f64 = pairs.clone().map(|(_, w)| w).sum();
    let log_lhs: f64 = pairs.clone().map(|(x, w)| w * x.ln()).sum();
    let log_rhs: f64 = pairs.clone().map(|(_, w)| w * w.ln()).sum::<f64>() - total * total.ln()
        + total * base.ln();
    // y_i = x_i/β_i against its β-weighted mean, which is base/total
    let mean = base / total;
    let log_ratio: f64 = pairs.map(|(x, w)| w * (x / w / mean).ln()).sum();
    AmGmGap {
        log_lhs,
        log_rhs,
        log_ratio: log_ratio.min(0.0),
    }
}

/// The masked form `(δᵀx)^b ≥ (b^b / Π β_i^{β_i}) Π x_i^{β_i}` with
/// `0⁰ := 1`. `β` must vanish outside `δ`.
pub fn masked_amgm_gap(x: &[f64], delta: &Pattern, beta: &[f64]) -> Result<AmGmGap> {
    if x.len() != delta.len() || beta.len() != delta.len() {
        return Err(Error::DimensionMismatch(
            "x, δ and β must have equal length".into(),
        ));
    }
    check_positive("x", x)?;
    for (i, &b) in beta.iter().enumerate() {
        if !(b.is_finite() && b >= 0.0) {
            return Err(Error::InvalidInput(format!("β[{i}] = {b} is negative")));
        }
        if b > 0.0 && !delta.get(i) {
            return Err(Error::InvalidInput(format!("β[{i}] > 0 outside δ")));
        }
    }
    if beta.iter().all(|&b| b == 0.0) {
        return Err(Error::InvalidInput("β is the zero vector".into()));
    }
    let base = delta.dot(x);
    let pairs = x
        .iter()
        .copied()
        .zip(beta.iter().copied())
        .filter(|(_, b)| *b > 0.0);
    Ok(gap_over(pairs, base))
}

/// `Σ a_i ln a_i − Σ a_i ln x_i` for simplicial `x` and `a`; non-negative,
/// zero iff `x = a`.
pub fn entropy_gap(x: &[f64], a: &[f64]) -> Result<f64> {
    if x.len() != a.len() {
        return Err(Error::DimensionMismatch("x and a differ in length".into()));
    }
    check_positive("x", x)?;
    check_positive("a", a)?;
    Ok(a.iter().zip(x).map(|(a, x)| a * (a / x).ln()).sum())
}
