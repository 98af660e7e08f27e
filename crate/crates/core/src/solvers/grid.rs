use crate::error::{Error, Result};
use crate::likelihood::log_likelihood_raw;
use crate::model::{CountModel, SimplexPoint};

pub const GRID_MAX_IONS: usize = 4;
pub const GRID_MAX_RESOLUTION: usize = 200;

/// Brute-force maximiser of the log-kernel over the interior lattice points
/// `k / resolution` with every `k_i ≥ 1`.
pub fn grid_oracle(model: &CountModel, resolution: usize) -> Result<SimplexPoint> {
    let n = model.n();
    if n > GRID_MAX_IONS {
        return Err(Error::SizeCap {
            size: n,
            cap: GRID_MAX_IONS,
        });
    }
    if resolution > GRID_MAX_RESOLUTION {
        return Err(Error::SizeCap {
            size: resolution,
            cap: GRID_MAX_RESOLUTION,
        });
    }
    if resolution < n {
        return Err(Error::InvalidInput(format!(
            "resolution {resolution} leaves no interior point for {n} ions"
        )));
    }
    let h = 1.0 / resolution as f64;
    let mut k = vec![1usize; n];
    let mut x = vec![0.0; n];
    let mut best: Option<(f64, Vec<f64>)> = None;
    loop {
        let used: usize = k[..n - 1].iter().sum();
        if used < resolution {
            k[n - 1] = resolution - used;
            for (xi, ki) in x.iter_mut().zip(&k) {
                *xi = *ki as f64 * h;
            }
            if let Ok(v) = log_likelihood_raw(model, &x) {
                if best.as_ref().is_none_or(|(b, _)| v > *b) {
                    best = Some((v, x.clone()));
                }
            }
        }
        // odometer over the first n − 1 coordinates
        let mut d = 0;
        loop {
            if d == n - 1 {
                let (_, x) = best.ok_or_else(|| {
                    Error::InvalidInput("no lattice point could be evaluated".into())
                })?;
                return SimplexPoint::new(x);
            }
            k[d] += 1;
            if k[..n - 1].iter().sum::<usize>() < resolution {
                break;
            }
            k[d] = 1;
            d += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Pattern;

    #[test]
    fn three_ion_model_on_the_lattice() {
        let m = CountModel::new(
            vec![2.0, 2.0, 2.0],
            vec![4.0],
            vec![Pattern::parse("110").unwrap()],
        )
        .unwrap();
        let p = grid_oracle(&m, 200).unwrap();
        assert!(p.max_abs_diff(&[0.4, 0.4, 0.2]) <= 1.0 / 200.0);
    }

    #[test]
    fn multinomial_nearest_point() {
        let m = CountModel::new(vec![3.0, 7.0], vec![], vec![]).unwrap();
        let p = grid_oracle(&m, 10).unwrap();
        assert!(p.max_abs_diff(&[0.3, 0.7]) < 1e-12);
    }

    #[test]
    fn caps() {
        let m = CountModel::new(vec![1.0; 5], vec![], vec![]).unwrap();
        assert!(matches!(grid_oracle(&m, 10), Err(Error::SizeCap { .. })));
        let m = CountModel::new(vec![1.0; 2], vec![], vec![]).unwrap();
        assert!(matches!(grid_oracle(&m, 201), Err(Error::SizeCap { .. })));
    }
}
