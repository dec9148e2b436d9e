//! Prescribed-curvature residual fields on factorable surfaces.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorable::{h_specialized, k_specialized, FactorableSurface};
use crate::sampling::GridSpec;

/// Prescribed curvature, in the closed-form convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "curvature", content = "value")]
pub enum Target {
    K(f64),
    H(f64),
}

impl Target {
    pub fn value(self) -> f64 {
        match self {
            Target::K(v) | Target::H(v) => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub dims: [usize; 2],
    pub target: Target,
    pub max: f64,
    pub mean: f64,
    /// Parameter point of the largest `|residual|`.
    pub argmax: [f64; 2],
}

/// `measured − target` at every grid point, using the specialized formulas.
/// Any point on a lightlike locus rejects the grid.
pub fn residual_field(s: &FactorableSurface, target: Target, grid: &GridSpec) -> Result<ResidualReport> {
    grid.validate()?;
    let values: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let (u1, u2) = grid.point(i);
            let measured = match target {
                Target::K(_) => k_specialized(s, u1, u2),
                Target::H(_) => h_specialized(s, u1, u2),
            };
            measured
                .map_err(|e| Error::GridRejected(format!("at ({u1}, {u2}): {e}")))
                .and_then(|m| {
                    let r = (m - target.value()).abs();
                    if r.is_finite() {
                        Ok(r)
                    } else {
                        Err(Error::GridRejected(format!("non-finite curvature at ({u1}, {u2})")))
                    }
                })
        })
        .collect::<Result<_>>()?;
    // first maximum in grid order, independent of scheduling
    let (imax, max) = values
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
    let (a, b) = grid.point(imax);
    Ok(ResidualReport {
        dims: [grid.n1, grid.n2],
        target,
        max,
        mean: values.iter().sum::<f64>() / values.len() as f64,
        argmax: [a, b],
    })
}
