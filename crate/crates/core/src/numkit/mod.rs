//! Grids, scalar functions, finite differences, quadrature, fixed-step RK4
//! for linear ODEs and Airy functions.

pub mod airy;
pub mod diff;
pub mod function;
pub mod grid;
pub mod ode;
pub mod quad;

pub use airy::{airy, AiryValue};
pub use diff::{central_derivative, grid_derivatives};
pub use function::{
    constant, jet_fn, Affine, Constant, Func, Jet, LinearCombination, Sampled, ScalarFunction,
};
pub use grid::{Grid, Interval};
pub use ode::{rk4_linear2, rk4_linear3, LinearOde, OdeSolution};
pub use quad::{cumulative_simpson, gauss_legendre, integrate_cumulative, Antiderivative};
