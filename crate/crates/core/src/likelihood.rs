//! Log-kernel, score and Hessian of `Π x_i^{a_i} Π (δ_jᵀx)^{b_j}`.
//!
//! Derivatives are taken in the chart `x_{-n} = (x_1, …, x_{n-1})` with
//! `x_n = 1 − Σ_{i<n} x_i`, so both the score and the Hessian have dimension
//! `n − 1`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{CountModel, SimplexPoint, SINGULAR_THRESHOLD};

/// Hessian of the log-kernel in the `x_{-n}` chart.
#[derive(Clone, Debug, PartialEq)]
pub struct HessianBlock {
    /// `H = −diag(a_i/x_i²) − (a_n/x_n²)·1 − Ψ`.
    pub matrix: DMatrix<f64>,
    /// `Ψ = Σ_j Ψ(j)`, `ψ_ik(j) = b_j(δ_ij − δ_nj)(δ_kj − δ_nj)/(δ_jᵀx)²`.
    pub psi: DMatrix<f64>,
}

impl HessianBlock {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues of the symmetric matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    /// Asymptotic covariance `(−H)⁻¹` of `x_{-n}`, when `−H` is invertible.
    pub fn covariance(&self) -> Option<DMatrix<f64>> {
        (-&self.matrix).try_inverse()
    }
}

fn check_interior(model: &CountModel, x: &[f64]) -> Result<()> {
    model.check_len(x)?;
    for (i, &v) in x.iter().enumerate() {
        if !(v.is_finite() && v >= SINGULAR_THRESHOLD) {
            return Err(Error::SingularEvaluation { term: i, value: v });
        }
    }
    Ok(())
}

pub(crate) fn log_likelihood_raw(model: &CountModel, x: &[f64]) -> Result<f64> {
    check_interior(model, x)?;
    let forms = model.linear_forms(x)?;
    let ionic: f64 = model
        .ionic_counts()
        .iter()
        .zip(x)
        .filter(|(a, _)| **a != 0.0)
        .map(|(a, x)| a * x.ln())
        .sum();
    let unionic: f64 = model
        .unionic_counts()
        .iter()
        .zip(&forms)
        .map(|(b, s)| b * s.ln())
        .sum();
    Ok(ionic + unionic)
}

/// `Σ a_i ln x_i + Σ b_j ln(δ_jᵀx)`; the density's normalising constant is
/// not included.
pub fn log_likelihood(model: &CountModel, x: &SimplexPoint) -> Result<f64> {
    log_likelihood_raw(model, x.as_slice())
}

/// `∂ ln f / ∂x_i` treating all `n` coordinates as free.
fn full_gradient(model: &CountModel, x: &[f64]) -> Result<Vec<f64>> {
    check_interior(model, x)?;
    let forms = model.linear_forms(x)?;
    let mut g: Vec<f64> = model
        .ionic_counts()
        .iter()
        .zip(x)
        .map(|(a, x)| a / x)
        .collect();
    for ((p, b), s) in model
        .patterns()
        .iter()
        .zip(model.unionic_counts())
        .zip(&forms)
    {
        let w = b / s;
        for i in p.iter_ones() {
            g[i] += w;
        }
    }
    Ok(g)
}

pub(crate) fn score_raw(model: &CountModel, x: &[f64]) -> Result<Vec<f64>> {
    let g = full_gradient(model, x)?;
    let last = g[g.len() - 1];
    Ok(g[..g.len() - 1].iter().map(|gi| gi - last).collect())
}

/// Gradient of the log-kernel in the `x_{-n}` chart.
pub fn score(model: &CountModel, x: &SimplexPoint) -> Result<Vec<f64>> {
    score_raw(model, x.as_slice())
}

pub(crate) fn hessian_raw(model: &CountModel, x: &[f64]) -> Result<HessianBlock> {
    check_interior(model, x)?;
    let forms = model.linear_forms(x)?;
    let n = model.n();
    let m = n - 1;
    let a = model.ionic_counts();
    let mut psi = DMatrix::<f64>::zeros(m, m);
    for (j, (p, b)) in model
        .patterns()
        .iter()
        .zip(model.unionic_counts())
        .enumerate()
    {
        let dn = p.get(n - 1) as i32 as f64;
        let c: Vec<f64> = (0..m).map(|i| p.get(i) as i32 as f64 - dn).collect();
        if c.iter().all(|v| *v == 0.0) {
            continue;
        }
        let w = b / (forms[j] * forms[j]);
        for i in 0..m {
            if c[i] == 0.0 {
                continue;
            }
            for k in 0..m {
                psi[(i, k)] += w * c[i] * c[k];
            }
        }
    }
    let last = a[n - 1] / (x[n - 1] * x[n - 1]);
    let mut matrix = DMatrix::<f64>::from_element(m, m, -last);
    for i in 0..m {
        matrix[(i, i)] -= a[i] / (x[i] * x[i]);
    }
    matrix -= &psi;
    Ok(HessianBlock { matrix, psi })
}

pub fn hessian(model: &CountModel, x: &SimplexPoint) -> Result<HessianBlock> {
    hessian_raw(model, x.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Pattern;

    fn three_ion() -> CountModel {
        CountModel::new(
            vec![2.0, 2.0, 2.0],
            vec![4.0],
            vec![Pattern::parse("110").unwrap()],
        )
        .unwrap()
    }

    fn pt(v: &[f64]) -> SimplexPoint {
        SimplexPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn small_maximum_beats_other_point() {
        let m = three_ion();
        let hi = log_likelihood(&m, &pt(&[0.4, 0.4, 0.2])).unwrap();
        let lo = log_likelihood(&m, &pt(&[0.3, 0.3, 0.4])).unwrap();
        assert!(hi > lo);
        let s = score(&m, &pt(&[0.4, 0.4, 0.2])).unwrap();
        assert!(s.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn two_ion_multinomial_value() {
        let m = CountModel::new(vec![1.0, 1.0], vec![], vec![]).unwrap();
        let v = log_likelihood(&m, &pt(&[0.5, 0.5])).unwrap();
        assert_eq!(v, 2.0 * 0.5f64.ln());
    }

    #[test]
    fn multinomial_score_and_hessian_closed_form() {
        let a = [3.0, 5.0, 2.0];
        let m = CountModel::new(a.to_vec(), vec![], vec![]).unwrap();
        let p = SimplexPoint::proportional(&a).unwrap();
        let s = score(&m, &p).unwrap();
        assert!(s.iter().all(|v| v.abs() < 1e-12));

        let x = pt(&[0.2, 0.3, 0.5]);
        let h = hessian(&m, &x).unwrap();
        assert_eq!(h.psi, DMatrix::zeros(2, 2));
        let last = 2.0 / 0.25;
        assert!((h.matrix[(0, 0)] - (-3.0 / 0.04 - last)).abs() < 1e-9);
        assert!((h.matrix[(1, 1)] - (-5.0 / 0.09 - last)).abs() < 1e-9);
        assert!((h.matrix[(0, 1)] + last).abs() < 1e-12);
    }

    #[test]
    fn zero_ionic_count_is_skipped() {
        let m = CountModel::new(
            vec![1.0, 0.0],
            vec![-1.0],
            vec![Pattern::parse("11").unwrap()],
        )
        .unwrap();
        assert!(log_likelihood(&m, &pt(&[0.9, 0.1])).unwrap().is_finite());
    }

    #[test]
    fn boundary_point_errors() {
        let m = three_ion();
        assert!(matches!(
            log_likelihood_raw(&m, &[0.5, 0.5, 0.0]),
            Err(Error::SingularEvaluation { term: 2, .. })
        ));
    }
}
