//! Small self-contained numerical kernels: adaptive quadrature, root
//! finding, an adaptive Runge-Kutta integrator, and cubic splines.
//!
//! Contracts are stated in terms of tolerances, not schemes; callers pin
//! the tolerances they need and treat these as black boxes.

pub mod ode;
pub mod quad;
pub mod roots;
pub mod spline;

pub use ode::{integrate_to_crossing, Crossing, OdeOptions};
pub use quad::{integrate, integrate_with_singular_upper_endpoint};
pub use roots::{bisect, brent, invert_monotone};
pub use spline::CubicSpline;
