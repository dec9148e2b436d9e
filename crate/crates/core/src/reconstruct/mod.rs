//! Independent verification paths: ODE reconstruction of the classified
//! families, prescribed-curvature residual fields, polynomial case checks
//! and a bounded search for constant-`K` second-kind surfaces.

pub mod cases;
pub mod ode;
pub mod probe;
pub mod residual;
pub mod theorems;

pub use ode::{integrate, integrate_guarded, OdeProblem, Solution};
