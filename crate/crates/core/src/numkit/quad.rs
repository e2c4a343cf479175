use super::function::{Func, ScalarFunction};
use super::grid::{Grid, Interval};
use crate::error::{Error, Result};

/// Cumulative composite Simpson integral of uniformly spaced samples.
///
/// `F[0] = 0`. Even indices accumulate whole Simpson panels; odd indices add
/// a three-point closing rule over the last interval.
pub fn cumulative_simpson(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        out[1] = 0.5 * h * (f[0] + f[1]);
        return out;
    }
    out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    for i in 2..n {
        out[i] = if i % 2 == 0 {
            out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i])
        } else {
            out[i - 1] + h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i])
        };
    }
    out
}

/// Running integral `∫_{t0}^{t_i} f` on every grid point.
pub fn integrate_cumulative(f: &dyn ScalarFunction, grid: &Grid) -> Result<Vec<f64>> {
    let dom = f.domain();
    if !dom.contains_interval(&grid.interval()) {
        return Err(Error::Domain(format!(
            "grid [{}, {}] not inside integrand domain [{}, {}]",
            grid.t0(),
            grid.t1(),
            dom.lo,
            dom.hi
        )));
    }
    let samples: Vec<f64> = grid.points().iter().map(|&t| f.eval(t)).collect();
    Ok(cumulative_simpson(&samples, grid.step()))
}

const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Eight-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS) {
        acc += w * (f(mid - half * x) + f(mid + half * x));
    }
    half * acc
}

/// Antiderivative with lower limit at the grid start.
///
/// Nodal values are cumulative; between nodes the remaining partial cell is
/// integrated with Gauss–Legendre so the result is smooth off the grid.
pub struct Antiderivative {
    integrand: Func,
    grid: Grid,
    nodes: Vec<f64>,
}

impl Antiderivative {
    /// Nodal values from composite Simpson.
    pub fn simpson(integrand: Func, grid: &Grid) -> Result<Self> {
        let nodes = integrate_cumulative(integrand.as_ref(), grid)?;
        Ok(Antiderivative {
            integrand,
            grid: grid.clone(),
            nodes,
        })
    }

    /// Nodal values from per-cell Gauss–Legendre; consistent with the
    /// off-grid evaluation to roundoff.
    pub fn gauss(integrand: Func, grid: &Grid) -> Result<Self> {
        let dom = integrand.domain();
        if !dom.contains_interval(&grid.interval()) {
            return Err(Error::Domain(
                "grid not inside integrand domain".to_string(),
            ));
        }
        let pts = grid.points();
        let mut nodes = Vec::with_capacity(pts.len());
        let mut acc = 0.0;
        nodes.push(0.0);
        for w in pts.windows(2) {
            acc += gauss_legendre(|s| integrand.eval(s), w[0], w[1]);
            nodes.push(acc);
        }
        Ok(Antiderivative {
            integrand,
            grid: grid.clone(),
            nodes,
        })
    }

    pub fn nodal_values(&self) -> &[f64] {
        &self.nodes
    }
}

impl ScalarFunction for Antiderivative {
    fn deriv(&self, k: usize, t: f64) -> f64 {
        match k {
            0 => {
                let Some((i, s)) = self.grid.locate(t) else {
                    return f64::NAN;
                };
                // integrate from the nearer node
                let f = |u: f64| self.integrand.eval(u);
                let pts = self.grid.points();
                if s <= 0.5 {
                    if s == 0.0 {
                        return self.nodes[i];
                    }
                    self.nodes[i] + gauss_legendre(f, pts[i], t)
                } else {
                    if s == 1.0 {
                        return self.nodes[i + 1];
                    }
                    self.nodes[i + 1] - gauss_legendre(f, t, pts[i + 1])
                }
            }
            1..=3 => {
                if self.grid.locate(t).is_none() {
                    return f64::NAN;
                }
                self.integrand.deriv(k - 1, t)
            }
            _ => f64::NAN,
        }
    }

    fn domain(&self) -> Interval {
        self.grid.interval()
    }
}
