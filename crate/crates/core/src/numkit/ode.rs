use std::sync::Arc;

use super::function::{constant, hermite, Func, ScalarFunction};
use super::grid::{Grid, Interval};
use crate::error::{Error, Result};

/// Homogeneous linear ODE `u^(N) + Σ_{j<N} a_j(t) u^(j) = 0`.
///
/// `coeffs[j]` multiplies `u^(j)`.
#[derive(Clone)]
pub struct LinearOde {
    coeffs: Vec<Func>,
}

impl LinearOde {
    pub fn new(coeffs: Vec<Func>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Argument("ODE order must be at least 1".into()));
        }
        Ok(LinearOde { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Func] {
        &self.coeffs
    }

    pub fn domain(&self) -> Interval {
        self.coeffs
            .iter()
            .fold(Interval::REAL, |d, c| d.intersect(&c.domain()))
    }

    /// `u^(N)` solved from the equation given `u, …, u^(N-1)`.
    pub fn leading(&self, t: f64, lower: &[f64]) -> f64 {
        -self
            .coeffs
            .iter()
            .zip(lower)
            .map(|(a, u)| a.eval(t) * u)
            .sum::<f64>()
    }

    /// Left-hand side for a candidate jet `u, …, u^(N)`.
    pub fn residual(&self, t: f64, derivs: &[f64]) -> f64 {
        let n = self.order();
        derivs[n] - self.leading(t, &derivs[..n])
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let n = y.len();
        dy[..n - 1].copy_from_slice(&y[1..]);
        dy[n - 1] = self.leading(t, y);
    }

    /// Classical fixed-step fourth-order Runge–Kutta on the companion system.
    pub fn solve_rk4(&self, ics: &[f64], grid: &Grid) -> Result<OdeSolution> {
        let n = self.order();
        if ics.len() != n {
            return Err(Error::Argument(format!(
                "order-{n} ODE needs {n} initial values, got {}",
                ics.len()
            )));
        }
        let dom = self.domain();
        if !dom.contains_interval(&grid.interval()) {
            return Err(Error::Domain(format!(
                "grid [{}, {}] not inside coefficient domain [{}, {}]",
                grid.t0(),
                grid.t1(),
                dom.lo,
                dom.hi
            )));
        }
        let h = grid.step();
        let pts = grid.points();
        let mut y = ics.to_vec();
        let mut k1 = vec![0.0; n];
        let mut k2 = vec![0.0; n];
        let mut k3 = vec![0.0; n];
        let mut k4 = vec![0.0; n];
        let mut tmp = vec![0.0; n];
        let mut nodes = Vec::with_capacity(pts.len());

        let push = |nodes: &mut Vec<Vec<f64>>, t: f64, y: &[f64]| {
            let mut row = y.to_vec();
            row.push(self.leading(t, y));
            nodes.push(row);
        };
        push(&mut nodes, pts[0], &y);

        for w in pts.windows(2) {
            let t = w[0];
            self.rhs(t, &y, &mut k1);
            for j in 0..n {
                tmp[j] = y[j] + 0.5 * h * k1[j];
            }
            self.rhs(t + 0.5 * h, &tmp, &mut k2);
            for j in 0..n {
                tmp[j] = y[j] + 0.5 * h * k2[j];
            }
            self.rhs(t + 0.5 * h, &tmp, &mut k3);
            for j in 0..n {
                tmp[j] = y[j] + h * k3[j];
            }
            self.rhs(w[1], &tmp, &mut k4);
            for j in 0..n {
                y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            }
            push(&mut nodes, w[1], &y);
        }

        Ok(OdeSolution {
            ode: self.clone(),
            grid: grid.clone(),
            nodes,
        })
    }
}

/// Grid solution of a [`LinearOde`] usable as a [`ScalarFunction`].
///
/// Derivatives below the order are Hermite-interpolated against the next
/// level; the leading derivative comes from the equation itself, and one
/// more order from the differentiated equation.
#[derive(Clone)]
pub struct OdeSolution {
    ode: LinearOde,
    grid: Grid,
    /// `nodes[i] = [u, u', …, u^(N)]` at grid point `i`.
    nodes: Vec<Vec<f64>>,
}

impl OdeSolution {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn ode(&self) -> &LinearOde {
        &self.ode
    }

    /// Nodal values of the `k`-th derivative, `k <= N`.
    pub fn nodal(&self, k: usize) -> Vec<f64> {
        self.nodes.iter().map(|row| row[k]).collect()
    }

    pub fn into_func(self) -> Func {
        Arc::new(self)
    }
}

impl ScalarFunction for OdeSolution {
    fn deriv(&self, k: usize, t: f64) -> f64 {
        let Some((i, s)) = self.grid.locate(t) else {
            return f64::NAN;
        };
        let n = self.ode.order();
        let h = self.grid.step();
        if k < n {
            let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
            return hermite(a[k], b[k], a[k + 1], b[k + 1], h, s);
        }
        if k == n {
            if s == 0.0 {
                return self.nodes[i][n];
            }
            if s == 1.0 {
                return self.nodes[i + 1][n];
            }
            let lower: Vec<f64> = (0..n).map(|j| self.deriv(j, t)).collect();
            return self.ode.leading(t, &lower);
        }
        if k == n + 1 {
            let jet: Vec<f64> = (0..=n).map(|j| self.deriv(j, t)).collect();
            return -self
                .ode
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, a)| a.deriv(1, t) * jet[j] + a.eval(t) * jet[j + 1])
                .sum::<f64>();
        }
        f64::NAN
    }

    fn domain(&self) -> Interval {
        self.grid.interval()
    }
}

/// Integrates `u''' + β(t) u'' + γ(t) u' + δ u = 0`.
pub fn rk4_linear3(
    beta: Func,
    gamma: Func,
    delta: f64,
    ics: [f64; 3],
    grid: &Grid,
) -> Result<OdeSolution> {
    LinearOde::new(vec![constant(delta), gamma, beta])?.solve_rk4(&ics, grid)
}

/// Integrates `w'' + p(t) w' + q(t) w = 0`.
pub fn rk4_linear2(p: Func, q: Func, ics: [f64; 2], grid: &Grid) -> Result<OdeSolution> {
    LinearOde::new(vec![q, p])?.solve_rk4(&ics, grid)
}
