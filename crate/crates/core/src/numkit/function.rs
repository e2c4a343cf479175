use std::fmt;
use std::sync::Arc;

use super::diff::grid_derivatives;
use super::grid::{Grid, Interval};
use crate::error::Result;

/// Value and first three derivatives at a point.
pub type Jet = [f64; 4];

/// A real function of one variable with derivatives through order 3.
///
/// `deriv(0, t)` is the value. Orders above 3 are not part of the contract;
/// implementations return `NaN` for them unless they document otherwise.
/// Evaluation outside [`ScalarFunction::domain`] returns `NaN`.
pub trait ScalarFunction: Send + Sync {
    fn deriv(&self, k: usize, t: f64) -> f64;

    fn eval(&self, t: f64) -> f64 {
        self.deriv(0, t)
    }

    fn jet(&self, t: f64) -> Jet {
        [
            self.deriv(0, t),
            self.deriv(1, t),
            self.deriv(2, t),
            self.deriv(3, t),
        ]
    }

    fn domain(&self) -> Interval {
        Interval::REAL
    }
}

pub type Func = Arc<dyn ScalarFunction>;

impl fmt::Debug for dyn ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.domain();
        write!(f, "ScalarFunction on [{}, {}]", d.lo, d.hi)
    }
}

/// Closed-form function given by its jet.
pub struct JetFn<F> {
    f: F,
    domain: Interval,
}

impl<F> ScalarFunction for JetFn<F>
where
    F: Fn(f64) -> Jet + Send + Sync,
{
    fn deriv(&self, k: usize, t: f64) -> f64 {
        if k > 3 || !self.domain.contains(t) {
            return f64::NAN;
        }
        (self.f)(t)[k]
    }

    fn jet(&self, t: f64) -> Jet {
        if !self.domain.contains(t) {
            return [f64::NAN; 4];
        }
        (self.f)(t)
    }

    fn domain(&self) -> Interval {
        self.domain
    }
}

pub fn jet_fn<F>(domain: Interval, f: F) -> Func
where
    F: Fn(f64) -> Jet + Send + Sync + 'static,
{
    Arc::new(JetFn { f, domain })
}

#[derive(Debug, Clone, Copy)]
pub struct Constant(pub f64);

impl ScalarFunction for Constant {
    fn deriv(&self, k: usize, _t: f64) -> f64 {
        if k == 0 {
            self.0
        } else {
            0.0
        }
    }
}

/// `slope * t + intercept`
#[derive(Debug, Clone, Copy)]
pub struct Affine {
    pub slope: f64,
    pub intercept: f64,
}

impl ScalarFunction for Affine {
    fn deriv(&self, k: usize, t: f64) -> f64 {
        match k {
            0 => self.slope * t + self.intercept,
            1 => self.slope,
            _ => 0.0,
        }
    }
}

pub fn constant(c: f64) -> Func {
    Arc::new(Constant(c))
}

/// Finite linear combination `Σ c_i f_i`.
pub struct LinearCombination {
    terms: Vec<(f64, Func)>,
    domain: Interval,
}

impl LinearCombination {
    pub fn new(terms: Vec<(f64, Func)>) -> Self {
        let domain = terms
            .iter()
            .fold(Interval::REAL, |d, (_, f)| d.intersect(&f.domain()));
        LinearCombination { terms, domain }
    }
}

impl ScalarFunction for LinearCombination {
    fn deriv(&self, k: usize, t: f64) -> f64 {
        self.terms.iter().map(|(c, f)| c * f.deriv(k, t)).sum()
    }

    fn domain(&self) -> Interval {
        self.domain
    }
}

/// Leibniz rule for the product of two jets.
pub fn jet_mul(a: Jet, b: Jet) -> Jet {
    [
        a[0] * b[0],
        a[1] * b[0] + a[0] * b[1],
        a[2] * b[0] + 2.0 * a[1] * b[1] + a[0] * b[2],
        a[3] * b[0] + 3.0 * a[2] * b[1] + 3.0 * a[1] * b[2] + a[0] * b[3],
    ]
}

/// Jet of `exp(phi(t))` from the jet of `phi`.
pub fn jet_exp(phi: Jet) -> Jet {
    let e = phi[0].exp();
    let (p1, p2, p3) = (phi[1], phi[2], phi[3]);
    [
        e,
        p1 * e,
        (p2 + p1 * p1) * e,
        (p3 + 3.0 * p1 * p2 + p1 * p1 * p1) * e,
    ]
}

/// Jet of `t^p`.
pub fn jet_pow(t: f64, p: f64) -> Jet {
    [
        t.powf(p),
        p * t.powf(p - 1.0),
        p * (p - 1.0) * t.powf(p - 2.0),
        p * (p - 1.0) * (p - 2.0) * t.powf(p - 3.0),
    ]
}

pub fn jet_scale(a: Jet, c: f64) -> Jet {
    a.map(|v| c * v)
}

pub fn jet_add(a: Jet, b: Jet) -> Jet {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

/// Cubic Hermite interpolation on a cell of width `h` at local coordinate `s`.
pub(crate) fn hermite(y0: f64, y1: f64, m0: f64, m1: f64, h: f64, s: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1
}

/// Function known only through samples on a uniform grid.
///
/// Nodal derivatives come from finite differences; off-grid values use cubic
/// Hermite interpolation of each derivative level against the next one.
#[derive(Debug, Clone)]
pub struct Sampled {
    grid: Grid,
    levels: [Vec<f64>; 4],
}

impl Sampled {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(crate::Error::Argument(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        let [d1, d2, d3] = grid_derivatives(&values, grid.step())?;
        Ok(Sampled {
            grid,
            levels: [values, d1, d2, d3],
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
}

impl ScalarFunction for Sampled {
    fn deriv(&self, k: usize, t: f64) -> f64 {
        let Some((i, s)) = self.grid.locate(t) else {
            return f64::NAN;
        };
        let h = self.grid.step();
        match k {
            0..=2 => {
                let (a, b) = (&self.levels[k], &self.levels[k + 1]);
                hermite(a[i], a[i + 1], b[i], b[i + 1], h, s)
            }
            3 => {
                let a = &self.levels[3];
                a[i] + s * (a[i + 1] - a[i])
            }
            _ => f64::NAN,
        }
    }

    fn domain(&self) -> Interval {
        self.grid.interval()
    }
}
