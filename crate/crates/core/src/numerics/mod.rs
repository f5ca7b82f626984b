//! Special functions and the least-squares solver shared by the physics modules.

mod bessel;
mod lsq;
mod roots;

pub use bessel::{bessel_j, bessel_j1_prime, bessel_j_prime, MAX_ARGUMENT, MAX_ORDER};
pub use lsq::{fit_least_squares, FitProblem, FitReport, LevenbergMarquardt};
pub use roots::{mode_root, BesselRoot, ModeFamily};
