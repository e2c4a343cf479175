//! Closed-form fundamental sets of `u''' + γ(t) u' + δ u = 0` and their
//! Wronskian constants.
//!
//! | family           | γ(t)                  | W                          |
//! |------------------|-----------------------|----------------------------|
//! | `ExpTrig`        | 0                     | 3√3 δ / 2                  |
//! | `CubicDistinct`  | −(v1² + v1 v2 + v2²)  | (v2−v1)(2v1+v2)(v1+2v2)    |
//! | `CubicRepeated`  | −3 v1²                | 9 v1²                      |
//! | `CubicComplex`   | n² − 3m²              | n (9m² + n²)               |
//! | `Airy`           | δ t                   | −δ^{1/3} / π               |
//! | `Quadric`        | −(9t³ + 35) / (4t²)   | 27/4   (δ = −27/8)         |

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numkit::function::{jet_add, jet_exp, jet_mul, jet_pow, jet_scale};
use crate::numkit::{
    airy, constant, jet_fn, Affine, Antiderivative, Func, Grid, Interval, Jet, ScalarFunction,
};
use crate::wronskian::{FundamentalSet, SideCondition};

/// Real cube root, negative for negative input.
pub fn real_cbrt(x: f64) -> f64 {
    x.cbrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubicKind {
    ThreeDistinctReal,
    RepeatedReal,
    OneRealComplexPair,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CubicRoots {
    /// Ascending for distinct roots; `[v1, v1, -2 v1]` for a repeated pair.
    Real([f64; 3]),
    /// `m ± i n` and the real root `v3 = -2m`.
    Complex { m: f64, n: f64, v3: f64 },
}

/// Root structure of the depressed cubic `v³ + γ̃ v + δ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicClassification {
    pub gamma_tilde: f64,
    pub delta: f64,
    pub discriminant: f64,
    pub kind: CubicKind,
    pub roots: CubicRoots,
}

impl CubicClassification {
    /// Family whose characteristic roots these are.
    pub fn family(&self) -> FamilySpec {
        match self.roots {
            CubicRoots::Real(r) => match self.kind {
                CubicKind::RepeatedReal => FamilySpec::CubicRepeated { v1: r[0] },
                _ => FamilySpec::CubicDistinct { v1: r[0], v2: r[1] },
            },
            CubicRoots::Complex { m, n, .. } => FamilySpec::CubicComplex { m, n },
        }
    }
}

fn polish(v: f64, p: f64, q: f64) -> f64 {
    let d = 3.0 * v * v + p;
    if d == 0.0 {
        return v;
    }
    v - (v * v * v + p * v + q) / d
}

pub fn classify_cubic(gamma_tilde: f64, delta: f64) -> Result<CubicClassification> {
    if delta == 0.0 || !delta.is_finite() || !gamma_tilde.is_finite() {
        return Err(Error::Argument(format!(
            "depressed cubic needs finite γ̃ and nonzero δ, got γ̃ = {gamma_tilde}, δ = {delta}"
        )));
    }
    let (p, q) = (gamma_tilde, delta);
    let discriminant = -4.0 * p * p * p - 27.0 * q * q;
    let zero_tol = 1e-10 * (1.0 + p * p + q * q);

    let (kind, roots) = if discriminant.abs() < zero_tol {
        // p < 0 here since q ≠ 0
        let double = -3.0 * q / (2.0 * p);
        (
            CubicKind::RepeatedReal,
            CubicRoots::Real([double, double, -2.0 * double]),
        )
    } else if discriminant > 0.0 {
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let mut v = [0, 1, 2].map(|k| polish(r * (theta - 2.0 * PI * k as f64 / 3.0).cos(), p, q));
        v.sort_by(|a, b| a.total_cmp(b));
        (CubicKind::ThreeDistinctReal, CubicRoots::Real(v))
    } else {
        let s = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        let v3 = polish((-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt(), p, q);
        let m = -v3 / 2.0;
        let n = (p + 3.0 * m * m).sqrt();
        (
            CubicKind::OneRealComplexPair,
            CubicRoots::Complex { m, n, v3 },
        )
    };

    Ok(CubicClassification {
        gamma_tilde,
        delta,
        discriminant,
        kind,
        roots,
    })
}

/// Parameters of a closed-form fundamental set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilySpec {
    /// `γ = 0`: `e^{-ct}`, `e^{ct/2} cos(√3 ct/2)`, `e^{ct/2} sin(√3 ct/2)`, `c = δ^{1/3}`.
    ExpTrig { delta: f64 },
    /// `e^{v1 t}`, `e^{v2 t}`, `e^{-(v1+v2) t}`.
    CubicDistinct { v1: f64, v2: f64 },
    /// `e^{v1 t}`, `t e^{v1 t}`, `e^{-2 v1 t}`.
    CubicRepeated { v1: f64 },
    /// `e^{mt} cos(nt)`, `e^{mt} sin(nt)`, `e^{-2mt}`.
    CubicComplex { m: f64, n: f64 },
    /// `γ = δt`: `Ai(-ct)`, `Bi(-ct)` and `(π/c)(x ∫y - y ∫x)`.
    Airy { delta: f64 },
    /// `t^{-3/2}`, `(1 - 2t^{-3/2}) e^{t^{3/2}}`, `(1 + 2t^{-3/2}) e^{-t^{3/2}}`
    /// with `δ = -27/8`; lies on `yz = 1 - 4x²`.
    Quadric,
}

pub const QUADRIC_DELTA: f64 = -27.0 / 8.0;

/// Excluded lines are rejected within this distance.
const EXCLUSION_TOL: f64 = 1e-9;

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::ExpTrig { .. } => "exp-trig",
            FamilySpec::CubicDistinct { .. } => "cubic-distinct",
            FamilySpec::CubicRepeated { .. } => "cubic-repeated",
            FamilySpec::CubicComplex { .. } => "cubic-complex",
            FamilySpec::Airy { .. } => "airy",
            FamilySpec::Quadric => "example4",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |cond: &str| Err(Error::Argument(format!("condition {cond} violated")));
        let bad = |v: f64| !v.is_finite();
        match *self {
            FamilySpec::ExpTrig { delta } | FamilySpec::Airy { delta } => {
                if bad(delta) || delta == 0.0 {
                    return fail("δ ≠ 0");
                }
            }
            FamilySpec::CubicDistinct { v1, v2 } => {
                if bad(v1) || bad(v2) {
                    return fail("finite v1, v2");
                }
                if v1.abs() < EXCLUSION_TOL
                    || v2.abs() < EXCLUSION_TOL
                    || (v1 + v2).abs() < EXCLUSION_TOL
                {
                    return fail("v_i ≠ 0 (δ = v1 v2 (v1 + v2) ≠ 0)");
                }
                if (v2 - v1).abs() < EXCLUSION_TOL {
                    return fail("v2 ≠ v1");
                }
                if (v2 + 2.0 * v1).abs() < EXCLUSION_TOL {
                    return fail("v2 ≠ −2v1");
                }
                if (v2 + 0.5 * v1).abs() < EXCLUSION_TOL {
                    return fail("v2 ≠ −v1/2");
                }
            }
            FamilySpec::CubicRepeated { v1 } => {
                if bad(v1) || v1.abs() < EXCLUSION_TOL {
                    return fail("v1 ≠ 0");
                }
            }
            FamilySpec::CubicComplex { m, n } => {
                if bad(m) || m.abs() < EXCLUSION_TOL {
                    return fail("m ≠ 0");
                }
                if bad(n) || n.abs() < EXCLUSION_TOL {
                    return fail("n ≠ 0");
                }
            }
            FamilySpec::Quadric => {}
        }
        Ok(())
    }

    pub fn delta(&self) -> f64 {
        match *self {
            FamilySpec::ExpTrig { delta } | FamilySpec::Airy { delta } => delta,
            FamilySpec::CubicDistinct { v1, v2 } => v1 * v2 * (v1 + v2),
            FamilySpec::CubicRepeated { v1 } => 2.0 * v1 * v1 * v1,
            FamilySpec::CubicComplex { m, n } => 2.0 * m * (m * m + n * n),
            FamilySpec::Quadric => QUADRIC_DELTA,
        }
    }

    /// Closed-form Wronskian of the set in its stated order.
    pub fn expected_wronskian(&self) -> f64 {
        match *self {
            FamilySpec::ExpTrig { delta } => 1.5 * 3f64.sqrt() * delta,
            FamilySpec::CubicDistinct { v1, v2 } => (v2 - v1) * (2.0 * v1 + v2) * (v1 + 2.0 * v2),
            FamilySpec::CubicRepeated { v1 } => 9.0 * v1 * v1,
            FamilySpec::CubicComplex { m, n } => n * (9.0 * m * m + n * n),
            FamilySpec::Airy { delta } => -real_cbrt(delta) / PI,
            FamilySpec::Quadric => 27.0 / 4.0,
        }
    }

    pub fn default_interval(&self) -> (f64, f64) {
        match self {
            FamilySpec::ExpTrig { .. } => (-2.0, 2.0),
            FamilySpec::Airy { .. } => (-3.0, 3.0),
            FamilySpec::Quadric => (1.1, 5.0),
            _ => (-1.0, 1.0),
        }
    }
}

/// A fundamental set together with the side condition it solves.
#[derive(Debug, Clone)]
pub struct Family {
    pub spec: FamilySpec,
    pub set: FundamentalSet,
    pub side: SideCondition,
    pub expected_w: f64,
}

fn exp_jet(a: f64, t: f64) -> Jet {
    jet_exp([a * t, a, 0.0, 0.0])
}

fn cos_jet(b: f64, t: f64) -> Jet {
    let (s, c) = (b * t).sin_cos();
    [c, -b * s, -b * b * c, b * b * b * s]
}

fn sin_jet(b: f64, t: f64) -> Jet {
    let (s, c) = (b * t).sin_cos();
    [s, b * c, -b * b * s, -b * b * b * c]
}

fn exp_family(a: f64) -> Func {
    jet_fn(Interval::REAL, move |t| exp_jet(a, t))
}

fn damped(m: f64, n: f64, trig: fn(f64, f64) -> Jet) -> Func {
    jet_fn(Interval::REAL, move |t| jet_mul(exp_jet(m, t), trig(n, t)))
}

/// `Ai(-ct)` or `Bi(-ct)` as a function of `t`.
fn airy_member(c: f64, second_kind: bool) -> Func {
    jet_fn(Interval::new(-12.0 / c.abs(), 12.0 / c.abs()), move |t| {
        let s = -c * t;
        let Ok(v) = airy(s) else {
            return [f64::NAN; 4];
        };
        let (f, fp) = if second_kind {
            (v.bi, v.bi_prime)
        } else {
            (v.ai, v.ai_prime)
        };
        // f'' = s f, f''' = f + s f'
        [f, -c * fp, c * c * s * f, -c * c * c * (f + s * fp)]
    })
}

/// `K (x ∫y − y ∫x)` with both integrals starting at the grid start.
struct AiryThird {
    k: f64,
    x: Func,
    y: Func,
    ix: Antiderivative,
    iy: Antiderivative,
    domain: Interval,
}

impl ScalarFunction for AiryThird {
    fn deriv(&self, order: usize, t: f64) -> f64 {
        if order > 3 || !self.domain.contains(t) {
            return f64::NAN;
        }
        let x = self.x.jet(t);
        let y = self.y.jet(t);
        let (ix, iy) = (self.ix.eval(t), self.iy.eval(t));
        let v = match order {
            0 => x[0] * iy - y[0] * ix,
            1 => x[1] * iy - y[1] * ix,
            2 => x[2] * iy - y[2] * ix + x[1] * y[0] - y[1] * x[0],
            _ => x[3] * iy - y[3] * ix + 2.0 * (x[2] * y[0] - y[2] * x[0]),
        };
        self.k * v
    }

    fn domain(&self) -> Interval {
        self.domain
    }
}

pub fn build_family(spec: &FamilySpec, grid: &Grid) -> Result<Family> {
    spec.validate()?;
    let delta = spec.delta();
    let sqrt3 = 3f64.sqrt();

    let (members, gamma): ([Func; 3], Func) = match *spec {
        FamilySpec::ExpTrig { delta } => {
            let c = real_cbrt(delta);
            let b = 0.5 * sqrt3 * c;
            (
                [
                    exp_family(-c),
                    damped(0.5 * c, b, cos_jet),
                    damped(0.5 * c, b, sin_jet),
                ],
                constant(0.0),
            )
        }
        FamilySpec::CubicDistinct { v1, v2 } => (
            [exp_family(v1), exp_family(v2), exp_family(-(v1 + v2))],
            constant(-(v1 * v1 + v1 * v2 + v2 * v2)),
        ),
        FamilySpec::CubicRepeated { v1 } => (
            [
                exp_family(v1),
                jet_fn(Interval::REAL, move |t| {
                    jet_mul([t, 1.0, 0.0, 0.0], exp_jet(v1, t))
                }),
                exp_family(-2.0 * v1),
            ],
            constant(-3.0 * v1 * v1),
        ),
        FamilySpec::CubicComplex { m, n } => (
            [
                damped(m, n, cos_jet),
                damped(m, n, sin_jet),
                exp_family(-2.0 * m),
            ],
            constant(n * n - 3.0 * m * m),
        ),
        FamilySpec::Airy { delta } => {
            let c = real_cbrt(delta);
            for t in [grid.t0(), grid.t1()] {
                if (c * t).abs() > crate::numkit::airy::MAX_ARG {
                    return Err(Error::Range(-c * t));
                }
            }
            let x = airy_member(c, false);
            let y = airy_member(c, true);
            let ix = Antiderivative::gauss(x.clone(), grid)?;
            let iy = Antiderivative::gauss(y.clone(), grid)?;
            let z: Func = Arc::new(AiryThird {
                k: PI / c,
                x: x.clone(),
                y: y.clone(),
                ix,
                iy,
                domain: grid.interval(),
            });
            (
                [x, y, z],
                Arc::new(Affine {
                    slope: delta,
                    intercept: 0.0,
                }),
            )
        }
        FamilySpec::Quadric => {
            if grid.t0() <= 0.0 {
                return Err(Error::Domain(format!(
                    "family needs t > 0, grid starts at {}",
                    grid.t0()
                )));
            }
            let x = jet_fn(Interval::POSITIVE, |t| jet_pow(t, -1.5));
            let y = jet_fn(Interval::POSITIVE, |t| {
                let p = jet_pow(t, -1.5);
                let a = jet_add([1.0, 0.0, 0.0, 0.0], jet_scale(p, -2.0));
                jet_mul(a, jet_exp(jet_pow(t, 1.5)))
            });
            let z = jet_fn(Interval::POSITIVE, |t| {
                let p = jet_pow(t, -1.5);
                let a = jet_add([1.0, 0.0, 0.0, 0.0], jet_scale(p, 2.0));
                jet_mul(a, jet_exp(jet_scale(jet_pow(t, 1.5), -1.0)))
            });
            let gamma = jet_fn(Interval::POSITIVE, |t| {
                [
                    -(9.0 * t * t * t + 35.0) / (4.0 * t * t),
                    -2.25 + 17.5 / (t * t * t),
                    -52.5 / t.powi(4),
                    210.0 / t.powi(5),
                ]
            });
            ([x, y, z], gamma)
        }
    };

    let [x, y, z] = members;
    let set = FundamentalSet::new(x, y, z);
    if !set.domain().contains_interval(&grid.interval()) {
        return Err(Error::Domain(format!(
            "grid [{}, {}] outside the family domain",
            grid.t0(),
            grid.t1()
        )));
    }
    Ok(Family {
        spec: *spec,
        set,
        side: SideCondition::without_beta(gamma, delta)?,
        expected_w: spec.expected_wronskian(),
    })
}
