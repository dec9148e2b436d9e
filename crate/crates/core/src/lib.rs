//! Curvature of surfaces in pseudo-Galilean 3-space, with tooling to verify
//! the constant-curvature classification of factorable surfaces.
//!
//! - [`space`]: points, isotropic vectors, distance and the motion group.
//! - [`surface`]: fundamental forms, `W`, `ε`, the normal, `K` and `H` from a 2-jet.
//! - [`factorable`]: `z = f(x) g(y)` and `x = f(y) g(z)` with closed-form curvatures.
//! - [`families`]: the classified constant-curvature families and zero-curvature fixtures.
//! - [`reconstruct`]: ODE reconstruction, residual fields, case checks and the search probe.
//! - [`sampling`]: parameter grids and curvature sweeps.
//! - [`verify`]: constancy, cross-check and motion-invariance suites for a family.

pub mod error;
pub mod factorable;
pub mod families;
pub mod reconstruct;
pub mod sampling;
pub mod space;
pub mod surface;
pub mod verify;

pub use error::{Error, Result};
