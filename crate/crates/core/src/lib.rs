//! Third-order linear side conditions for Wronskian-involving ODEs.
//!
//! Functions `x, y, z` solving `u''' + γ(t) u' + δ u = 0` have a constant
//! Wronskian `W` and satisfy `W(x', y', z') = -δ W(x, y, z)`, so any relation
//! `F(W, W') = 0` collapses to an algebraic condition on the constant. Read as
//! a space curve, such a triple is a Tzitzeica curve with `τ/d² = -δ/W`.
//!
//! Modules:
//! * [`numkit`]: grids, quadrature, RK4, Airy functions
//! * [`wronskian`]: Wronskians and their structural identities
//! * [`families`]: closed-form fundamental sets
//! * [`reduction`]: constructing a fundamental set from one known solution
//! * [`geometry`]: curvature, torsion, osculating distance, certification

// `!(x > tol)` is deliberate throughout: NaN must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod families;
pub mod geometry;
pub mod numkit;
pub mod reduction;
pub mod wronskian;

pub use error::{Error, Result};
pub use families::{
    build_family, classify_cubic, real_cbrt, CubicClassification, Family, FamilySpec,
};
pub use geometry::{certify_tzitzeica, SampledCurve, Surface, TzitzeicaReport};
pub use numkit::{Func, Grid, Interval, ScalarFunction};
pub use reduction::{ReductionOutcome, SeedSolution};
pub use wronskian::{
    compatibility_alpha, wronskian3, wronskian3_deriv, FundamentalSet, SideCondition,
};
