use super::function::ScalarFunction;
use crate::error::{Error, Result};

/// Second-order central-difference estimate of the `k`-th derivative.
///
/// Orders 1 and 2 use the three-point stencil, order 3 the five-point one.
pub fn central_derivative(f: &dyn ScalarFunction, k: usize, t: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Argument(format!("step must be positive, got {h}")));
    }
    let reach = match k {
        1 | 2 => h,
        3 => 2.0 * h,
        _ => {
            return Err(Error::Argument(format!(
                "derivative order must be 1..=3, got {k}"
            )))
        }
    };
    let dom = f.domain();
    if !dom.contains(t - reach) || !dom.contains(t + reach) {
        return Err(Error::Domain(format!(
            "stencil [{}, {}] leaves domain [{}, {}]",
            t - reach,
            t + reach,
            dom.lo,
            dom.hi
        )));
    }
    let v = |s: f64| f.eval(t + s * h);
    Ok(match k {
        1 => (v(1.0) - v(-1.0)) / (2.0 * h),
        2 => (v(1.0) - 2.0 * v(0.0) + v(-1.0)) / (h * h),
        _ => (v(2.0) - 2.0 * v(1.0) + 2.0 * v(-1.0) - v(-2.0)) / (2.0 * h * h * h),
    })
}

/// Minimum sample count for [`grid_derivatives`].
pub const MIN_SAMPLES_FOR_DERIVATIVES: usize = 7;

/// First, second and third derivative columns of uniformly spaced samples.
///
/// Interior points use fourth-order central stencils; the outermost points fall
/// back to second-order central or one-sided stencils. Points within three
/// samples of either edge are the low-order ones.
pub fn grid_derivatives(f: &[f64], h: f64) -> Result<[Vec<f64>; 3]> {
    let n = f.len();
    if n < MIN_SAMPLES_FOR_DERIVATIVES {
        return Err(Error::Argument(format!(
            "need at least {MIN_SAMPLES_FOR_DERIVATIVES} samples for third derivatives, got {n}"
        )));
    }
    let h2 = h * h;
    let h3 = h2 * h;
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    let mut d3 = vec![0.0; n];

    for i in 0..n {
        d1[i] = if i >= 2 && i + 2 < n {
            (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h)
        } else if i >= 1 && i + 1 < n {
            (f[i + 1] - f[i - 1]) / (2.0 * h)
        } else if i == 0 {
            (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
        } else {
            (3.0 * f[i] - 4.0 * f[i - 1] + f[i - 2]) / (2.0 * h)
        };

        d2[i] = if i >= 2 && i + 2 < n {
            (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h2)
        } else if i >= 1 && i + 1 < n {
            (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2
        } else if i == 0 {
            (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2
        } else {
            (2.0 * f[i] - 5.0 * f[i - 1] + 4.0 * f[i - 2] - f[i - 3]) / h2
        };

        d3[i] = if i >= 3 && i + 3 < n {
            (f[i - 3] - 8.0 * f[i - 2] + 13.0 * f[i - 1] - 13.0 * f[i + 1] + 8.0 * f[i + 2]
                - f[i + 3])
                / (8.0 * h3)
        } else if i >= 2 && i + 2 < n {
            (f[i + 2] - 2.0 * f[i + 1] + 2.0 * f[i - 1] - f[i - 2]) / (2.0 * h3)
        } else if i < 2 {
            (-5.0 * f[i] + 18.0 * f[i + 1] - 24.0 * f[i + 2] + 14.0 * f[i + 3] - 3.0 * f[i + 4])
                / (2.0 * h3)
        } else {
            (5.0 * f[i] - 18.0 * f[i - 1] + 24.0 * f[i - 2] - 14.0 * f[i - 3] + 3.0 * f[i - 4])
                / (2.0 * h3)
        };
    }
    Ok([d1, d2, d3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::function::{jet_exp, jet_fn, jet_pow};
    use crate::numkit::grid::Interval;

    #[test]
    fn quadratic_first_derivative() {
        let f = jet_fn(Interval::REAL, |t| jet_pow(t, 2.0));
        let d = central_derivative(f.as_ref(), 1, 3.0, 1e-4).unwrap();
        assert!((d - 6.0).abs() < 1e-6);
    }

    #[test]
    fn cubic_third_derivative() {
        let f = jet_fn(Interval::REAL, |t| [t * t * t, 0.0, 0.0, 0.0]);
        for &t in &[-2.0, 0.0, 1.3, 5.0] {
            let d = central_derivative(f.as_ref(), 3, t, 1e-2).unwrap();
            assert!((d - 6.0).abs() < 1e-6, "t={t}: {d}");
        }
    }

    #[test]
    fn exponential_second_derivative() {
        let f = jet_fn(Interval::REAL, |t| jet_exp([t, 1.0, 0.0, 0.0]));
        let d = central_derivative(f.as_ref(), 2, 0.0, 1e-3).unwrap();
        let exact = f.deriv(2, 0.0);
        assert!((d - exact).abs() < 1e-5);
        assert!((d - 1.0).abs() < 1e-5);
    }

    #[test]
    fn stencil_leaving_domain_is_an_error() {
        let f = jet_fn(Interval::new(0.0, 1.0), |t| [t, 1.0, 0.0, 0.0]);
        let err = central_derivative(f.as_ref(), 3, 0.01, 0.01).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        assert!(central_derivative(f.as_ref(), 1, 0.5, 0.0).is_err());
        assert!(central_derivative(f.as_ref(), 4, 0.5, 0.1).is_err());
    }

    #[test]
    fn grid_columns_exact_for_cubics_in_the_interior() {
        let h = 0.1;
        let cubic: Vec<f64> = (0..20).map(|i| (i as f64 * h).powi(3)).collect();
        let [d1, d2, d3] = grid_derivatives(&cubic, h).unwrap();
        for i in 0..20 {
            let t = i as f64 * h;
            if (2..18).contains(&i) {
                assert!((d1[i] - 3.0 * t * t).abs() < 1e-9);
            }
            assert!((d2[i] - 6.0 * t).abs() < 1e-8);
            assert!((d3[i] - 6.0).abs() < 1e-7);
        }

        let h = 1e-2;
        let s: Vec<f64> = (0..300).map(|i| (i as f64 * h).sin()).collect();
        let [_, _, d3] = grid_derivatives(&s, h).unwrap();
        for (i, v) in d3.iter().enumerate().take(297).skip(3) {
            assert!((v + (i as f64 * h).cos()).abs() < 1e-6);
        }
    }

    #[test]
    fn too_few_samples() {
        assert!(grid_derivatives(&[1.0; 6], 0.1).is_err());
    }
}
