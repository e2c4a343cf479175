//! Wronskians of three functions and the identities that hold when the
//! functions solve `u''' + β(t) u'' + γ(t) u' + δ u = 0`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numkit::{constant, Func, Grid, Interval, ScalarFunction};

/// 3×3 determinant by cofactor expansion along the first row.
///
/// Shared by both Wronskians and the torsion numerator.
pub fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn rows(
    f: &dyn ScalarFunction,
    g: &dyn ScalarFunction,
    h: &dyn ScalarFunction,
    t: f64,
    first: usize,
) -> [[f64; 3]; 3] {
    let row = |k: usize| [f.deriv(k, t), g.deriv(k, t), h.deriv(k, t)];
    [row(first), row(first + 1), row(first + 2)]
}

/// `W(f, g, h)(t)`: rows are values, first and second derivatives.
pub fn wronskian3(
    f: &dyn ScalarFunction,
    g: &dyn ScalarFunction,
    h: &dyn ScalarFunction,
    t: f64,
) -> f64 {
    det3(rows(f, g, h, t, 0))
}

/// `W(f', g', h')(t)`: rows are first, second and third derivatives.
pub fn wronskian3_deriv(
    f: &dyn ScalarFunction,
    g: &dyn ScalarFunction,
    h: &dyn ScalarFunction,
    t: f64,
) -> f64 {
    det3(rows(f, g, h, t, 1))
}

fn max_row_norm(m: &[[f64; 3]; 3]) -> f64 {
    m.iter()
        .map(|r| (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt())
        .fold(0.0, f64::max)
}

/// `|det| > 1e-12 (1 + max row norm)`.
pub fn is_nonvanishing(m: &[[f64; 3]; 3]) -> bool {
    det3(*m).abs() > 1e-12 * (1.0 + max_row_norm(m))
}

/// Ordered triple of functions on a common interval.
///
/// The order is significant: swapping two members flips the sign of `W`.
#[derive(Clone)]
pub struct FundamentalSet {
    members: [Func; 3],
    domain: Interval,
}

impl fmt::Debug for FundamentalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FundamentalSet")
            .field("domain", &self.domain)
            .finish()
    }
}

impl FundamentalSet {
    pub fn new(x: Func, y: Func, z: Func) -> Self {
        let domain = x.domain().intersect(&y.domain()).intersect(&z.domain());
        FundamentalSet {
            members: [x, y, z],
            domain,
        }
    }

    pub fn members(&self) -> &[Func; 3] {
        &self.members
    }

    pub fn x(&self) -> &Func {
        &self.members[0]
    }

    pub fn y(&self) -> &Func {
        &self.members[1]
    }

    pub fn z(&self) -> &Func {
        &self.members[2]
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    fn matrix(&self, t: f64, first: usize) -> [[f64; 3]; 3] {
        let [x, y, z] = &self.members;
        rows(x.as_ref(), y.as_ref(), z.as_ref(), t, first)
    }

    pub fn wronskian(&self, t: f64) -> f64 {
        det3(self.matrix(t, 0))
    }

    pub fn wronskian_deriv(&self, t: f64) -> f64 {
        det3(self.matrix(t, 1))
    }

    /// Checks that both Wronskians are nonvanishing at every grid point.
    pub fn check_independent(&self, grid: &Grid) -> Result<()> {
        if !self.domain.contains_interval(&grid.interval()) {
            return Err(Error::Domain(format!(
                "grid [{}, {}] outside the common domain [{}, {}]",
                grid.t0(),
                grid.t1(),
                self.domain.lo,
                self.domain.hi
            )));
        }
        for &t in grid.points() {
            if !is_nonvanishing(&self.matrix(t, 0)) || !is_nonvanishing(&self.matrix(t, 1)) {
                return Err(Error::VanishingWronskian);
            }
        }
        Ok(())
    }

    /// Same set with member `i` replaced.
    pub fn with_member(&self, i: usize, f: Func) -> FundamentalSet {
        let mut m = self.members.clone();
        m[i] = f;
        FundamentalSet::new(m[0].clone(), m[1].clone(), m[2].clone())
    }
}

/// Coefficients of `u''' + β(t) u'' + γ(t) u' + δ u = 0`, `δ ≠ 0`.
#[derive(Clone)]
pub struct SideCondition {
    beta: Option<Func>,
    gamma: Func,
    delta: f64,
}

impl fmt::Debug for SideCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SideCondition")
            .field("has_beta", &self.beta.is_some())
            .field("delta", &self.delta)
            .finish()
    }
}

impl SideCondition {
    pub fn new(beta: Option<Func>, gamma: Func, delta: f64) -> Result<Self> {
        if delta == 0.0 || !delta.is_finite() {
            return Err(Error::Argument(format!(
                "side condition needs a finite nonzero δ, got {delta}"
            )));
        }
        Ok(SideCondition { beta, gamma, delta })
    }

    /// `u''' + γ(t) u' + δ u = 0`.
    pub fn without_beta(gamma: Func, delta: f64) -> Result<Self> {
        Self::new(None, gamma, delta)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn gamma(&self) -> &Func {
        &self.gamma
    }

    pub fn beta(&self) -> Func {
        self.beta.clone().unwrap_or_else(|| constant(0.0))
    }

    pub fn beta_at(&self, t: f64) -> f64 {
        self.beta.as_ref().map_or(0.0, |b| b.eval(t))
    }

    /// `u''' + β u'' + γ u' + δ u` for the given function at `t`.
    pub fn residual(&self, u: &dyn ScalarFunction, t: f64) -> f64 {
        let [u0, u1, u2, u3] = u.jet(t);
        u3 + self.beta_at(t) * u2 + self.gamma.eval(t) * u1 + self.delta * u0
    }

    /// Residual scaled by the magnitude of the largest term.
    pub fn relative_residual(&self, u: &dyn ScalarFunction, t: f64) -> f64 {
        let [u0, u1, u2, u3] = u.jet(t);
        let terms = [
            u3,
            self.beta_at(t) * u2,
            self.gamma.eval(t) * u1,
            self.delta * u0,
        ];
        let scale = terms.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        terms.iter().sum::<f64>().abs() / (1.0 + scale)
    }
}

/// Relation `F(W(x,y,z), W(x',y',z')) = 0`.
pub struct WronskianRelation {
    f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl WronskianRelation {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        WronskianRelation { f: Arc::new(f) }
    }

    /// `W' - α W²`, the Tzitzeica curve relation.
    pub fn tzitzeica(alpha: f64) -> Self {
        Self::new(move |w, wd| wd - alpha * w * w)
    }

    pub fn residual(&self, w: f64, w_der: f64) -> f64 {
        (self.f)(w, w_der)
    }

    /// `G(W; δ) = F(W, -δ W)`, the relation after substituting the
    /// derivative-Wronskian identity. Vanishes at an admissible constant.
    pub fn compatibility(&self, w: f64, delta: f64) -> f64 {
        (self.f)(w, -delta * w)
    }
}

/// `max |W(x',y',z') + δ W(x,y,z)| / (1 + |δ W|)` over the grid.
pub fn check_derivative_relation(set: &FundamentalSet, sc: &SideCondition, grid: &Grid) -> f64 {
    grid.points()
        .iter()
        .map(|&t| {
            let dw = sc.delta * set.wronskian(t);
            (set.wronskian_deriv(t) + dw).abs() / (1.0 + dw.abs())
        })
        .fold(0.0, f64::max)
}

/// `max |W'(t) + β(t) W(t)| / (1 + |W(t)|)` over interior grid points, with
/// `W'` from a fourth-order central difference of the sampled Wronskian.
pub fn abel_check(set: &FundamentalSet, sc: &SideCondition, grid: &Grid) -> f64 {
    let pts = grid.points();
    let w: Vec<f64> = pts.iter().map(|&t| set.wronskian(t)).collect();
    let h = grid.step();
    (2..pts.len() - 2)
        .map(|i| {
            let dw = (w[i - 2] - 8.0 * w[i - 1] + 8.0 * w[i + 1] - w[i + 2]) / (12.0 * h);
            (dw + sc.beta_at(pts[i]) * w[i]).abs() / (1.0 + w[i].abs())
        })
        .fold(0.0, f64::max)
}

/// Curve constant `α = -δ / W0` of a solution set with constant Wronskian.
pub fn compatibility_alpha(w0: f64, delta: f64) -> Result<f64> {
    if w0 == 0.0 {
        return Err(Error::VanishingWronskian);
    }
    Ok(-delta / w0)
}

/// Sample mean and standard deviation of `W` over the grid.
pub fn wronskian_stats(set: &FundamentalSet, grid: &Grid) -> (f64, f64) {
    let w: Vec<f64> = grid.points().iter().map(|&t| set.wronskian(t)).collect();
    mean_std(&w)
}

pub(crate) fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    if v.is_empty() {
        return (0.0, 0.0);
    }
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
