//! Building a fundamental set of `u''' + γ(t) u' + δ u = 0` from a single
//! known solution `x0`:
//!
//! 1. choose `γ0(t; δ) = -(x0''' + δ x0) / x0'` so that `x0` is a solution;
//! 2. substitute `u = x0 ∫ w`, giving `w'' + p w' + q w = 0` with
//!    `p = 3 x0'/x0` and `q = 3 x0''/x0 + γ0`;
//! 3. integrate that equation from the canonical initial values `(1, 0)` and
//!    `(0, 1)`;
//! 4. return `x0, x0 ∫ w1, x0 ∫ w2` with integrals from the grid start.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Matrix3};

use crate::error::{Error, Result};
use crate::families::{classify_cubic, FamilySpec, QUADRIC_DELTA};
use crate::numkit::function::{jet_exp, jet_pow};
use crate::numkit::{
    jet_fn, rk4_linear2, Antiderivative, Func, Grid, Interval, LinearCombination, OdeSolution,
    ScalarFunction,
};
use crate::wronskian::{FundamentalSet, SideCondition};

/// Built-in seed catalog, written `power:<p>` or `exp:<v>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeedKind {
    /// `t^p`; restricted to `t > 0` unless `p` is an integer.
    Power(f64),
    /// `e^{v t}`.
    Exponential(f64),
}

impl FromStr for SeedKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| Error::Argument(format!("seed '{s}' is not of the form kind:value")))?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Argument(format!("seed parameter '{value}' is not a number")))?;
        if !v.is_finite() {
            return Err(Error::Argument(format!(
                "seed parameter must be finite, got {v}"
            )));
        }
        match kind.trim() {
            "power" => Ok(SeedKind::Power(v)),
            "exp" => Ok(SeedKind::Exponential(v)),
            other => Err(Error::Argument(format!(
                "unknown seed kind '{other}', expected power or exp"
            ))),
        }
    }
}

impl fmt::Display for SeedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedKind::Power(p) => write!(f, "power:{p}"),
            SeedKind::Exponential(v) => write!(f, "exp:{v}"),
        }
    }
}

impl SeedKind {
    pub fn function(&self) -> Func {
        match *self {
            SeedKind::Power(p) => {
                let domain = if p.fract() == 0.0 {
                    Interval::REAL
                } else {
                    Interval::POSITIVE
                };
                jet_fn(domain, move |t| jet_pow(t, p))
            }
            SeedKind::Exponential(v) => {
                jet_fn(Interval::REAL, move |t| jet_exp([v * t, v, 0.0, 0.0]))
            }
        }
    }

    /// A closed-form family solving the same side condition, when one is known.
    pub fn reference_family(&self, delta: f64) -> Option<FamilySpec> {
        match *self {
            SeedKind::Power(p) if p == -1.5 && delta == QUADRIC_DELTA => Some(FamilySpec::Quadric),
            SeedKind::Power(_) => None,
            SeedKind::Exponential(v) if v != 0.0 => {
                // γ0 = -(v³ + δ)/v is constant: the characteristic cubic has v as a root
                let gamma = -(v * v * v + delta) / v;
                if gamma.abs() < 1e-12 * (1.0 + delta.abs()) {
                    Some(FamilySpec::ExpTrig { delta })
                } else {
                    classify_cubic(gamma, delta).ok().map(|c| c.family())
                }
            }
            SeedKind::Exponential(_) => None,
        }
    }
}

fn seed_threshold(t: f64) -> f64 {
    1e-10 * (1.0 + t * t)
}

/// A known solution `x0` of the side condition for some `γ`, with `δ`.
#[derive(Clone)]
pub struct SeedSolution {
    x0: Func,
    delta: f64,
}

impl fmt::Debug for SeedSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeedSolution")
            .field("delta", &self.delta)
            .finish()
    }
}

impl SeedSolution {
    pub fn new(x0: Func, delta: f64) -> Result<Self> {
        if delta == 0.0 || !delta.is_finite() {
            return Err(Error::Argument(format!(
                "δ must be finite and nonzero, got {delta}"
            )));
        }
        Ok(SeedSolution { x0, delta })
    }

    pub fn from_kind(kind: SeedKind, delta: f64) -> Result<Self> {
        Self::new(kind.function(), delta)
    }

    pub fn x0(&self) -> &Func {
        &self.x0
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn domain(&self) -> Interval {
        self.x0.domain()
    }

    /// Requires `|x0|, |x0'| > 1e-10 (1 + t²)` at every grid point and
    /// reports the first point where that fails.
    pub fn check_on(&self, grid: &Grid) -> Result<()> {
        let dom = self.domain();
        if !dom.contains_interval(&grid.interval()) {
            return Err(Error::Domain(format!(
                "grid [{}, {}] outside seed domain [{}, {}]",
                grid.t0(),
                grid.t1(),
                dom.lo,
                dom.hi
            )));
        }
        for &t in grid.points() {
            let tol = seed_threshold(t);
            if !(self.x0.eval(t).abs() > tol) {
                return Err(Error::SingularSeed {
                    t,
                    what: "x0 vanishes".into(),
                });
            }
            if !(self.x0.deriv(1, t).abs() > tol) {
                return Err(Error::SingularSeed {
                    t,
                    what: "x0′ vanishes".into(),
                });
            }
        }
        Ok(())
    }
}

/// The `γ` for which the seed solves the side condition at `t`.
pub fn gamma_from_seed(seed: &SeedSolution, t: f64) -> Result<f64> {
    let [x, x1, _, x3] = seed.x0.jet(t);
    if !(x1.abs() > seed_threshold(t)) {
        return Err(Error::SingularSeed {
            t,
            what: "x0′ vanishes".into(),
        });
    }
    Ok(-(x3 + seed.delta * x) / x1)
}

/// Pointwise formula with central-difference derivatives.
struct Formula {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    domain: Interval,
}

impl ScalarFunction for Formula {
    fn deriv(&self, k: usize, t: f64) -> f64 {
        if !self.domain.contains(t) {
            return f64::NAN;
        }
        let f = |s: f64| (self.f)(s);
        let h = match k {
            0 => return f(t),
            1 => 1e-5,
            2 => 1e-4,
            3 => 1e-3,
            _ => return f64::NAN,
        } * (1.0 + t.abs());
        match k {
            1 => (f(t + h) - f(t - h)) / (2.0 * h),
            2 => (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h),
            _ => {
                (f(t + 2.0 * h) - 2.0 * f(t + h) + 2.0 * f(t - h) - f(t - 2.0 * h))
                    / (2.0 * h * h * h)
            }
        }
    }

    fn domain(&self) -> Interval {
        self.domain
    }
}

fn formula<F: Fn(f64) -> f64 + Send + Sync + 'static>(domain: Interval, f: F) -> Func {
    Arc::new(Formula {
        f: Arc::new(f),
        domain,
    })
}

/// `γ0(t; δ)` as a function.
pub fn gamma0_function(seed: &SeedSolution) -> Func {
    let x0 = seed.x0.clone();
    let delta = seed.delta;
    formula(x0.domain(), move |t| {
        let [x, x1, _, x3] = x0.jet(t);
        -(x3 + delta * x) / x1
    })
}

/// `w'' + p(t) w' + q(t) w = 0`, together with the `γ0` it came from.
#[derive(Clone)]
pub struct ReducedOde {
    p: Func,
    q: Func,
    gamma0: Func,
    domain: Interval,
}

impl ReducedOde {
    pub fn p(&self) -> &Func {
        &self.p
    }

    pub fn q(&self) -> &Func {
        &self.q
    }

    pub fn gamma0(&self) -> &Func {
        &self.gamma0
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }
}

pub fn reduce(seed: &SeedSolution, grid: &Grid) -> Result<ReducedOde> {
    seed.check_on(grid)?;
    let gamma0 = gamma0_function(seed);
    let x0 = seed.x0.clone();
    let p = {
        let x0 = x0.clone();
        formula(x0.domain(), move |t| 3.0 * x0.deriv(1, t) / x0.eval(t))
    };
    let q = {
        let (x0, g) = (x0.clone(), gamma0.clone());
        formula(x0.domain(), move |t| {
            3.0 * x0.deriv(2, t) / x0.eval(t) + g.eval(t)
        })
    };
    Ok(ReducedOde {
        p,
        q,
        gamma0,
        domain: seed.domain(),
    })
}

/// Two solutions of the reduced equation from `(1, 0)` and `(0, 1)` at the
/// grid start; fails if their Wronskian vanishes numerically.
pub fn solve_reduced(red: &ReducedOde, grid: &Grid) -> Result<(OdeSolution, OdeSolution)> {
    let w1 = rk4_linear2(red.p.clone(), red.q.clone(), [1.0, 0.0], grid)?;
    let w2 = rk4_linear2(red.p.clone(), red.q.clone(), [0.0, 1.0], grid)?;
    let (a, ap, b, bp) = (w1.nodal(0), w1.nodal(1), w2.nodal(0), w2.nodal(1));
    for i in 0..grid.len() {
        let wr = a[i] * bp[i] - b[i] * ap[i];
        let scale = (a[i].abs() + ap[i].abs()) * (b[i].abs() + bp[i].abs());
        if !(wr.abs() > 1e-12 * scale) {
            return Err(Error::Degenerate(format!(
                "pair Wronskian vanishes at t = {}",
                grid.points()[i]
            )));
        }
    }
    Ok((w1, w2))
}

/// `x0 ∫ w` with derivatives from the product rule; the third derivative is
/// taken from the side condition.
struct Composed {
    x0: Func,
    w: Func,
    integral: Antiderivative,
    gamma0: Func,
    delta: f64,
    domain: Interval,
}

impl ScalarFunction for Composed {
    fn deriv(&self, k: usize, t: f64) -> f64 {
        if k > 3 || !self.domain.contains(t) {
            return f64::NAN;
        }
        let [x, x1, x2, _] = self.x0.jet(t);
        let big_w = self.integral.eval(t);
        let w = self.w.eval(t);
        match k {
            0 => x * big_w,
            1 => x1 * big_w + x * w,
            2 => x2 * big_w + 2.0 * x1 * w + x * self.w.deriv(1, t),
            _ => {
                let u0 = x * big_w;
                let u1 = x1 * big_w + x * w;
                -self.gamma0.eval(t) * u1 - self.delta * u0
            }
        }
    }

    fn domain(&self) -> Interval {
        self.domain
    }
}

pub fn compose(seed: &SeedSolution, w1: Func, w2: Func, grid: &Grid) -> Result<FundamentalSet> {
    let gamma0 = gamma0_function(seed);
    let member = |w: Func| -> Result<Func> {
        Ok(Arc::new(Composed {
            x0: seed.x0.clone(),
            integral: Antiderivative::simpson(w.clone(), grid)?,
            w,
            gamma0: gamma0.clone(),
            delta: seed.delta,
            domain: grid.interval(),
        }))
    };
    Ok(FundamentalSet::new(
        seed.x0.clone(),
        member(w1)?,
        member(w2)?,
    ))
}

/// Everything the four steps produce.
#[derive(Clone)]
pub struct ReductionOutcome {
    pub seed: SeedSolution,
    pub reduced: ReducedOde,
    pub w1: Arc<OdeSolution>,
    pub w2: Arc<OdeSolution>,
    pub set: FundamentalSet,
    pub side: SideCondition,
}

pub fn run(seed: &SeedSolution, grid: &Grid) -> Result<ReductionOutcome> {
    let reduced = reduce(seed, grid)?;
    let (w1, w2) = solve_reduced(&reduced, grid)?;
    let (w1, w2) = (Arc::new(w1), Arc::new(w2));
    let set = compose(seed, w1.clone(), w2.clone(), grid)?;
    let side = SideCondition::without_beta(reduced.gamma0.clone(), seed.delta)?;
    Ok(ReductionOutcome {
        seed: seed.clone(),
        reduced,
        w1,
        w2,
        set,
        side,
    })
}

/// Least-squares change of basis `target_j ≈ Σ_k matrix[(j, k)] source_k`.
#[derive(Debug, Clone, Copy)]
pub struct BasisFit {
    pub matrix: Matrix3<f64>,
    /// Largest sup-norm residual over the three targets, relative to each
    /// target's sup norm.
    pub residual: f64,
    /// Condition number of the column-scaled design matrix.
    pub condition: f64,
}

pub fn fit_basis(
    source: &FundamentalSet,
    target: &FundamentalSet,
    grid: &Grid,
) -> Result<BasisFit> {
    let n = grid.len();
    let pts = grid.points();
    let mut a = DMatrix::<f64>::zeros(n, 3);
    for (k, f) in source.members().iter().enumerate() {
        for (i, &t) in pts.iter().enumerate() {
            a[(i, k)] = f.eval(t);
        }
    }
    let scales: Vec<f64> = (0..3).map(|k| a.column(k).amax()).collect();
    if scales.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
        return Err(Error::Degenerate(
            "source basis has a zero or non-finite column".into(),
        ));
    }
    for (k, s) in scales.iter().enumerate() {
        a.column_mut(k).scale_mut(1.0 / s);
    }
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let condition = sv.max() / sv.min();

    let mut matrix = Matrix3::zeros();
    let mut residual = 0.0f64;
    for (j, f) in target.members().iter().enumerate() {
        let b = DVector::from_iterator(n, pts.iter().map(|&t| f.eval(t)));
        let coef = svd
            .solve(&b, 1e-14)
            .map_err(|e| Error::Degenerate(format!("least-squares solve failed: {e}")))?;
        let r = (&a * &coef - &b).amax() / b.amax().max(f64::MIN_POSITIVE);
        residual = residual.max(r);
        for k in 0..3 {
            matrix[(j, k)] = coef[k] / scales[k];
        }
    }
    Ok(BasisFit {
        matrix,
        residual,
        condition,
    })
}

/// Members `Σ_k m[(j, k)] source_k`; the Wronskian scales by `det m`.
pub fn recombine(source: &FundamentalSet, m: &Matrix3<f64>) -> FundamentalSet {
    let member = |j: usize| -> Func {
        Arc::new(LinearCombination::new(
            (0..3)
                .map(|k| (m[(j, k)], source.members()[k].clone()))
                .collect(),
        ))
    };
    FundamentalSet::new(member(0), member(1), member(2))
}
