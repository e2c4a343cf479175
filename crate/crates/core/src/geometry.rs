//! Curve geometry of `r(t) = (x(t), y(t), z(t))`.
//!
//! With `W = det(r, r', r'')` and `W' = det(r', r'', r''')`, torsion is
//! `W' / |r' × r''|²` and the signed distance from the origin to the
//! osculating plane is `W / |r' × r''|`, so `τ/d² = W'/W²`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkit::{grid_derivatives, Grid};
use crate::wronskian::{det3, mean_std, FundamentalSet};

/// Points this close to either end are left out of verdicts when
/// derivatives come from finite differences.
pub const FD_EDGE_MARGIN: usize = 3;

/// Smallest fraction of candidate points that must pass the screens.
pub const SCREEN_FRACTION: f64 = 0.9;

const NORM_FLOOR: f64 = 1e-12;

/// Positions and derivatives through order 3 on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    grid: Grid,
    /// `cols[k][j]`: k-th derivative of coordinate j.
    cols: [[Vec<f64>; 3]; 4],
    analytic: bool,
    provenance: String,
}

impl SampledCurve {
    /// Without derivative columns they are estimated by finite differences.
    pub fn new(
        grid: Grid,
        position: [Vec<f64>; 3],
        derivs: Option<[[Vec<f64>; 3]; 3]>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let n = grid.len();
        if position.iter().any(|c| c.len() != n) {
            return Err(Error::Argument(format!(
                "position columns must have {n} entries"
            )));
        }
        let analytic = derivs.is_some();
        let [d1, d2, d3] = match derivs {
            Some(d) => {
                if d.iter().flatten().any(|c| c.len() != n) {
                    return Err(Error::Argument(format!(
                        "derivative columns must have {n} entries"
                    )));
                }
                d
            }
            None => {
                let h = grid.step();
                let mut out: [[Vec<f64>; 3]; 3] = Default::default();
                for (j, col) in position.iter().enumerate() {
                    let [a, b, c] = grid_derivatives(col, h)?;
                    out[0][j] = a;
                    out[1][j] = b;
                    out[2][j] = c;
                }
                out
            }
        };
        Ok(SampledCurve {
            grid,
            cols: [position, d1, d2, d3],
            analytic,
            provenance: provenance.into(),
        })
    }

    /// Samples a fundamental set together with its exact derivatives.
    pub fn from_set(
        set: &FundamentalSet,
        grid: &Grid,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let mut cols: [[Vec<f64>; 3]; 4] = Default::default();
        for (j, f) in set.members().iter().enumerate() {
            for &t in grid.points() {
                let jet = f.jet(t);
                if jet.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Domain(format!(
                        "member {j} is not finite at t = {t}"
                    )));
                }
                for k in 0..4 {
                    cols[k][j].push(jet[k]);
                }
            }
        }
        Ok(SampledCurve {
            grid: grid.clone(),
            cols,
            analytic: true,
            provenance: provenance.into(),
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn set_provenance(&mut self, provenance: impl Into<String>) {
        self.provenance = provenance.into();
    }

    /// Whether derivative columns were supplied rather than estimated.
    pub fn has_analytic_derivatives(&self) -> bool {
        self.analytic
    }

    /// Column of the k-th derivative (0 = position) of coordinate `j`.
    pub fn column(&self, k: usize, j: usize) -> &[f64] {
        &self.cols[k][j]
    }

    /// `r^(k)(t_i)`.
    pub fn vector(&self, k: usize, i: usize) -> Vector3<f64> {
        Vector3::new(self.cols[k][0][i], self.cols[k][1][i], self.cols[k][2][i])
    }

    fn row(&self, k: usize, i: usize) -> [f64; 3] {
        [self.cols[k][0][i], self.cols[k][1][i], self.cols[k][2][i]]
    }

    pub fn edge_margin(&self) -> usize {
        if self.analytic {
            0
        } else {
            FD_EDGE_MARGIN
        }
    }

    /// `det(r, r', r'')` at point `i`.
    pub fn wronskian(&self, i: usize) -> f64 {
        det3([self.row(0, i), self.row(1, i), self.row(2, i)])
    }

    /// `det(r', r'', r''')` at point `i`.
    pub fn wronskian_deriv(&self, i: usize) -> f64 {
        det3([self.row(1, i), self.row(2, i), self.row(3, i)])
    }
}

/// Applies `r ↦ M r` to every column.
pub fn affine_map(c: &SampledCurve, m: &Matrix3<f64>) -> Result<SampledCurve> {
    let det = m.determinant();
    if !(det.abs() > 1e-12) {
        return Err(Error::Argument(format!("map is singular (det = {det:e})")));
    }
    let mut out = c.clone();
    for k in 0..4 {
        for i in 0..c.len() {
            let v = m * c.vector(k, i);
            for j in 0..3 {
                out.cols[k][j][i] = v[j];
            }
        }
    }
    Ok(out)
}

/// `(x, y, z) ↦ (y, z, x)`, which carries `x(y² + z²) = 1` onto
/// `z(x² + y²) = 1`.
pub fn cyclic_map() -> Matrix3<f64> {
    Matrix3::new(0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0)
}

/// `|r' × r''|`, rejecting degenerate points.
fn cross_norm(c: &SampledCurve, i: usize) -> Result<f64> {
    let n = c.vector(1, i).cross(&c.vector(2, i)).norm();
    if !(n >= NORM_FLOOR) {
        return Err(Error::Degenerate(format!(
            "r′ × r″ vanishes at t = {}",
            c.grid.points()[i]
        )));
    }
    Ok(n)
}

pub fn curvature(c: &SampledCurve, i: usize) -> Result<f64> {
    let v = c.vector(1, i);
    let speed = v.norm();
    if !(speed >= NORM_FLOOR) {
        return Err(Error::Regularity(format!(
            "r′ vanishes at t = {}",
            c.grid.points()[i]
        )));
    }
    Ok(v.cross(&c.vector(2, i)).norm() / speed.powi(3))
}

pub fn torsion(c: &SampledCurve, i: usize) -> Result<f64> {
    let n = cross_norm(c, i)?;
    Ok(c.wronskian_deriv(i) / (n * n))
}

/// Signed; its absolute value is the distance.
pub fn osculating_distance(c: &SampledCurve, i: usize) -> Result<f64> {
    Ok(c.wronskian(i) / cross_norm(c, i)?)
}

/// Per-point curvature, torsion and signed osculating distance; NaN where
/// undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct FrenetData {
    pub k: Vec<f64>,
    pub tau: Vec<f64>,
    pub d: Vec<f64>,
}

pub fn frenet(c: &SampledCurve) -> FrenetData {
    let n = c.len();
    FrenetData {
        k: (0..n)
            .map(|i| curvature(c, i).unwrap_or(f64::NAN))
            .collect(),
        tau: (0..n).map(|i| torsion(c, i).unwrap_or(f64::NAN)).collect(),
        d: (0..n)
            .map(|i| osculating_distance(c, i).unwrap_or(f64::NAN))
            .collect(),
    }
}

/// The closed catalog of implicit surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Surface {
    /// `x(y² + z²) = 1`
    XRevolution,
    /// `z(x² + y²) = 1`
    ZRevolution,
    /// `yz = 1 - 4x²`
    YzQuadric,
}

impl Surface {
    pub const ALL: [Surface; 3] = [
        Surface::XRevolution,
        Surface::ZRevolution,
        Surface::YzQuadric,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Surface::XRevolution => "x-revolution",
            Surface::ZRevolution => "z-revolution",
            Surface::YzQuadric => "yz-quadric",
        }
    }

    pub fn implicit(&self, p: [f64; 3]) -> f64 {
        let [x, y, z] = p;
        match self {
            Surface::XRevolution => x * (y * y + z * z) - 1.0,
            Surface::ZRevolution => z * (x * x + y * y) - 1.0,
            Surface::YzQuadric => y * z - 1.0 + 4.0 * x * x,
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Surface {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Surface::ALL
            .into_iter()
            .find(|sf| sf.name() == s)
            .ok_or_else(|| {
                Error::Argument(format!(
                    "unknown surface '{s}', expected one of x-revolution, z-revolution, yz-quadric"
                ))
            })
    }
}

/// Largest `|F(r(t_i))|` over the grid.
pub fn surface_residual(c: &SampledCurve, surface: Surface) -> f64 {
    (0..c.len())
        .map(|i| surface.implicit(c.row(0, i)).abs())
        .fold(0.0, f64::max)
}

/// Outcome of [`certify_tzitzeica`].
///
/// Verdict keys: `screen`, `alpha_constant`, `relation`, and when `δ` is
/// given `wronskian_constant` and `alpha_formula`; one `surface:<name>` per
/// requested surface; `pass` is their conjunction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TzitzeicaReport {
    pub provenance: String,
    pub delta: Option<f64>,
    #[serde(rename = "W0")]
    pub w0: f64,
    #[serde(rename = "W_std")]
    pub w_std: f64,
    /// `None` when no point survives the screens.
    pub alpha_est: Option<f64>,
    pub alpha_std: Option<f64>,
    pub alpha_formula: Option<f64>,
    /// `max |W' - α W²| / (1 + |α W²|)` with `α = alpha_est`.
    pub relation_residual: Option<f64>,
    pub surface_residuals: BTreeMap<String, f64>,
    pub verdict: BTreeMap<String, bool>,
    pub tolerances: BTreeMap<String, f64>,
    pub certified_points: usize,
    pub candidate_points: usize,
    /// The violated assumption when the screens fail.
    pub screen_failure: Option<String>,
}

impl TzitzeicaReport {
    pub fn passed(&self) -> bool {
        self.verdict.get("pass").copied().unwrap_or(false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Violation {
    Regularity,
    Curvature,
    Distance,
    Torsion,
}

impl Violation {
    fn describe(&self) -> &'static str {
        match self {
            Violation::Regularity => "regularity: r′ vanishes",
            Violation::Curvature => "nonvanishing curvature: r′ × r″ vanishes",
            Violation::Distance => "osculating plane passes through the origin: W(x,y,z) vanishes",
            Violation::Torsion => "nonvanishing torsion: W(x′,y′,z′) vanishes",
        }
    }
}

fn screen_point(c: &SampledCurve, i: usize) -> std::result::Result<(), Violation> {
    let (r, r1, r2, r3) = (
        c.vector(0, i),
        c.vector(1, i),
        c.vector(2, i),
        c.vector(3, i),
    );
    let speed = r1.norm();
    if !(speed >= NORM_FLOOR) {
        return Err(Violation::Regularity);
    }
    let cross = r1.cross(&r2).norm();
    if !(cross >= NORM_FLOOR * (1.0 + speed * r2.norm())) {
        return Err(Violation::Curvature);
    }
    if !(c.wronskian(i).abs() > 1e-10 * r.norm() * cross) {
        return Err(Violation::Distance);
    }
    if !(c.wronskian_deriv(i).abs() > 1e-10 * cross * r3.norm()) {
        return Err(Violation::Torsion);
    }
    Ok(())
}

pub fn certify_tzitzeica(c: &SampledCurve, delta: Option<f64>, tol: f64) -> TzitzeicaReport {
    certify_with_surfaces(c, delta, tol, &[])
}

pub fn certify_with_surfaces(
    c: &SampledCurve,
    delta: Option<f64>,
    tol: f64,
    surfaces: &[Surface],
) -> TzitzeicaReport {
    let margin = c.edge_margin();
    let candidates: Vec<usize> = (margin..c.len().saturating_sub(margin)).collect();
    let mut certified = Vec::with_capacity(candidates.len());
    let mut violations: BTreeMap<Violation, usize> = BTreeMap::new();
    for &i in &candidates {
        match screen_point(c, i) {
            Ok(()) => certified.push(i),
            Err(v) => *violations.entry(v).or_default() += 1,
        }
    }
    let screen_ok = !candidates.is_empty()
        && certified.len() as f64 >= SCREEN_FRACTION * candidates.len() as f64;
    let screen_failure = if screen_ok {
        None
    } else {
        let worst = violations
            .iter()
            .max_by_key(|(_, &count)| count)
            .map(|(v, _)| *v);
        Some(match worst {
            Some(v) => v.describe().to_string(),
            None => "too few interior points".to_string(),
        })
    };

    let w_vals: Vec<f64> = certified.iter().map(|&i| c.wronskian(i)).collect();
    let (w0, w_std) = if w_vals.is_empty() {
        let all: Vec<f64> = candidates.iter().map(|&i| c.wronskian(i)).collect();
        mean_std(&all)
    } else {
        mean_std(&w_vals)
    };
    let ratios: Vec<f64> = certified
        .iter()
        .map(|&i| c.wronskian_deriv(i) / (c.wronskian(i) * c.wronskian(i)))
        .collect();
    let (alpha_est, alpha_std) = if ratios.is_empty() {
        (None, None)
    } else {
        let (m, s) = mean_std(&ratios);
        (Some(m), Some(s))
    };
    let relation_residual = alpha_est.map(|a| {
        certified
            .iter()
            .map(|&i| {
                let w = c.wronskian(i);
                let aw2 = a * w * w;
                (c.wronskian_deriv(i) - aw2).abs() / (1.0 + aw2.abs())
            })
            .fold(0.0, f64::max)
    });
    let alpha_formula = delta.map(|d| -d / w0);

    let mut verdict = BTreeMap::new();
    verdict.insert("screen".to_string(), screen_ok);
    let alpha_constant = match (alpha_est, alpha_std) {
        (Some(a), Some(s)) => screen_ok && s < tol * a.abs(),
        _ => false,
    };
    verdict.insert("alpha_constant".to_string(), alpha_constant);
    verdict.insert(
        "relation".to_string(),
        screen_ok && relation_residual.is_some_and(|r| r < tol),
    );
    if let Some(af) = alpha_formula {
        verdict.insert(
            "wronskian_constant".to_string(),
            screen_ok && w_std < tol * w0.abs(),
        );
        verdict.insert(
            "alpha_formula".to_string(),
            screen_ok && alpha_est.is_some_and(|a| (a - af).abs() < tol * af.abs()),
        );
    }
    let mut surface_residuals = BTreeMap::new();
    for s in surfaces {
        let r = surface_residual(c, *s);
        surface_residuals.insert(s.name().to_string(), r);
        verdict.insert(format!("surface:{}", s.name()), r < tol);
    }
    let pass = verdict.values().all(|&v| v);
    verdict.insert("pass".to_string(), pass);

    let mut tolerances = BTreeMap::new();
    tolerances.insert("tol".to_string(), tol);
    tolerances.insert("screen_fraction".to_string(), SCREEN_FRACTION);
    tolerances.insert("edge_margin".to_string(), margin as f64);

    TzitzeicaReport {
        provenance: c.provenance.clone(),
        delta,
        w0,
        w_std,
        alpha_est,
        alpha_std,
        alpha_formula,
        relation_residual,
        surface_residuals,
        verdict,
        tolerances,
        certified_points: certified.len(),
        candidate_points: candidates.len(),
        screen_failure,
    }
}
