//! The trivial slicing system.
//!
//! Each unionic term `(δ_jᵀx)^{b_j}` is completed into a slice by ionic
//! fragments on the ions outside `δ_j`, and one further slice made of ionic
//! fragments alone absorbs what is left of `a`. Requiring every slice to
//! achieve its co-thickness at `p` gives `n + q + 1` equations in the
//! `n + q + 1` unknowns `(p, τ₀, τ)`:
//!
//! ```text
//! b_j − τ_j δ_jᵀp                     = 0   j = 1..q
//! a_i − p_i (τ₀ + Σ_{j: δ_ij=0} τ_j)   = 0   i = 1..n
//! 1 − Σ p_i                           = 0
//! ```

use crate::algebra::{OrderOneFragment, ProductOfFragments};
use crate::error::{Error, Result};
use crate::model::{CountModel, Pattern, SimplexPoint};
use crate::recon::{thickness_profile, ThicknessProfile};

/// The slicing system of a model, evaluated as a residual.
#[derive(Clone, Copy, Debug)]
pub struct TsaSystem<'a> {
    model: &'a CountModel,
}

impl<'a> TsaSystem<'a> {
    pub fn model(&self) -> &'a CountModel {
        self.model
    }

    /// `n + q + 1`, both the number of rows and of unknowns.
    pub fn dim(&self) -> usize {
        self.model.n() + self.model.q() + 1
    }

    /// Residual rows in the order unionic, ionic, normalisation.
    pub fn residual(&self, p: &[f64], tau0: f64, tau: &[f64]) -> Result<Vec<f64>> {
        let m = self.model;
        m.check_len(p)?;
        if tau.len() != m.q() {
            return Err(Error::DimensionMismatch(format!(
                "τ has {} entries, model has {} unionic terms",
                tau.len(),
                m.q()
            )));
        }
        let mut out = Vec::with_capacity(self.dim());
        for ((pat, b), t) in m.patterns().iter().zip(m.unionic_counts()).zip(tau) {
            out.push(b - t * pat.dot(p));
        }
        let comp = complement(m, tau);
        for i in 0..m.n() {
            out.push(m.ionic_counts()[i] - p[i] * (tau0 + comp[i]));
        }
        out.push(1.0 - p.iter().sum::<f64>());
        Ok(out)
    }
}

pub fn build_tsa(model: &CountModel) -> TsaSystem<'_> {
    TsaSystem { model }
}

pub fn tsa_residual(sys: &TsaSystem<'_>, p: &[f64], tau0: f64, tau: &[f64]) -> Result<Vec<f64>> {
    sys.residual(p, tau0, tau)
}

fn complement(model: &CountModel, tau: &[f64]) -> Vec<f64> {
    (0..model.n())
        .map(|i| {
            model
                .patterns()
                .iter()
                .zip(tau)
                .filter(|(p, _)| !p.get(i))
                .map(|(_, t)| t)
                .sum()
        })
        .collect()
}

/// Fixing the point fixes the thicknesses: `τ(p)` and `τ₀*(p)`.
pub fn dual_of_point(model: &CountModel, p: &SimplexPoint) -> Result<ThicknessProfile> {
    thickness_profile(model, p)
}

/// Fixing the thicknesses fixes the point through the ionic rows:
/// `p_i ∝ a_i / (τ₀ + Σ_{δ_ij=0} τ_j)`.
pub fn point_of_dual(model: &CountModel, tau0: f64, tau: &[f64]) -> Result<SimplexPoint> {
    if tau.len() != model.q() {
        return Err(Error::DimensionMismatch(format!(
            "τ has {} entries, model has {} unionic terms",
            tau.len(),
            model.q()
        )));
    }
    let comp = complement(model, tau);
    let x = model
        .ionic_counts()
        .iter()
        .zip(&comp)
        .enumerate()
        .map(|(i, (a, c))| {
            let d = tau0 + c;
            if d <= 0.0 || !d.is_finite() {
                Err(Error::SingularEvaluation { term: i, value: d })
            } else {
                Ok(a / d)
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    SimplexPoint::new(x)
}

/// The slices of the trivial slicing at `(p, τ₀, τ)`: first the ionic slice
/// `Π x_i^{τ₀ p_i}`, then for each unionic term `(δ_jᵀx)^{b_j}` completed
/// with `x_i^{τ_j p_i}` on the ions outside `δ_j`.
pub fn tsa_slices(
    model: &CountModel,
    p: &[f64],
    tau0: f64,
    tau: &[f64],
) -> Result<Vec<ProductOfFragments>> {
    model.check_len(p)?;
    let n = model.n();
    let ionic = |i: usize, count: f64| OrderOneFragment::new(Pattern::unit(n, i), count);
    let mut slices = Vec::with_capacity(model.q() + 1);
    let e0 = (0..n)
        .map(|i| ionic(i, tau0 * p[i]))
        .collect::<Result<Vec<_>>>()?;
    slices.push(ProductOfFragments::new(n, e0)?);
    for ((pat, b), t) in model.patterns().iter().zip(model.unionic_counts()).zip(tau) {
        let mut frags = vec![OrderOneFragment::new(pat.clone(), *b)?];
        for i in (0..n).filter(|&i| !pat.get(i)) {
            frags.push(ionic(i, t * p[i])?);
        }
        slices.push(ProductOfFragments::new(n, frags)?);
    }
    Ok(slices)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(a: &[f64], terms: &[(&str, f64)]) -> CountModel {
        CountModel::new(
            a.to_vec(),
            terms.iter().map(|t| t.1).collect(),
            terms.iter().map(|t| Pattern::parse(t.0).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn three_ion_system_vanishes() {
        let m = model(&[2.0, 2.0, 2.0], &[("110", 4.0)]);
        let sys = build_tsa(&m);
        assert_eq!(sys.dim(), 5);
        let r = tsa_residual(&sys, &[0.4, 0.4, 0.2], 5.0, &[5.0]).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-15), "{r:?}");
        let r = tsa_residual(&sys, &[0.4, 0.401, 0.2], 5.0, &[5.0]).unwrap();
        assert!(r.iter().any(|v| v.abs() > 1e-4));
    }

    #[test]
    fn multinomial_system() {
        let m = model(&[3.0, 7.0], &[]);
        let sys = build_tsa(&m);
        assert_eq!(sys.dim(), 3);
        let r = sys.residual(&[0.3, 0.7], 10.0, &[]).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn four_ion_example() {
        // a² b³ c⁴ d⁵ / ((a+b)⁴ (c+d)⁶)
        let m = model(&[2.0, 3.0, 4.0, 5.0], &[("1100", -4.0), ("0011", -6.0)]);
        let p = [0.1, 0.15, 1.0 / 3.0, 5.0 / 12.0];
        let prof = dual_of_point(&m, &SimplexPoint::new(p.to_vec()).unwrap()).unwrap();
        assert!((prof.tau[0] + 16.0).abs() < 1e-12);
        assert!((prof.tau[1] + 8.0).abs() < 1e-12);
        assert!((prof.tau0 - 28.0).abs() < 1e-12);
        let r = build_tsa(&m).residual(&p, 28.0, &[-16.0, -8.0]).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-12), "{r:?}");

        let back = point_of_dual(&m, prof.tau0, &prof.tau).unwrap();
        assert!(back.max_abs_diff(&p) < 1e-12);

        let slices = tsa_slices(&m, &p, 28.0, &[-16.0, -8.0]).unwrap();
        let co: Vec<f64> = slices.iter().map(|s| s.co_thickness(&p).unwrap()).collect();
        for (c, e) in co.iter().zip([28.0, -16.0, -8.0]) {
            assert!((c - e).abs() < 1e-9, "{co:?}");
        }
    }

    #[test]
    fn point_of_dual_rejects_non_positive_denominator() {
        let m = model(&[2.0, 2.0, 2.0], &[("110", 4.0)]);
        assert!(point_of_dual(&m, -1.0, &[5.0]).is_err());
        assert!(point_of_dual(&m, 5.0, &[]).is_err());
    }
}
