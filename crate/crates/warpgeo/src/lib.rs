//! warpgeo: a numerical laboratory for rotationally symmetric Riemannian
//! n-spheres.
//!
//! The library represents metrics g = ds^2 + f(s)^2 g_rd through their
//! warping profiles, computes curvature and sweepout invariants, solves
//! geodesic boundary-value problems by Clairaut shooting, and assembles
//! Gromov-Hausdorff / intrinsic-flat upper bounds for comparisons against
//! the round sphere from chart correspondences on a common band.

pub mod error;
pub mod geom;
pub mod num;

pub mod families;
pub mod geodesic;
pub mod sweepout;
pub mod profile;

pub use error::{Error, Result};
