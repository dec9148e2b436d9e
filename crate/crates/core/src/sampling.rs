//! Parameter grids, curvature sweeps and their summary statistics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::{evaluate_jet, fundamental_data, DerivativeMode, Immersion};

/// Rectangular grid, row-major with `u1` as the slow index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub u1: [f64; 2],
    pub u2: [f64; 2],
    pub n1: usize,
    pub n2: usize,
}

impl GridSpec {
    pub fn new(u1: [f64; 2], u2: [f64; 2], n1: usize, n2: usize) -> Self {
        Self { u1, u2, n1, n2 }
    }

    pub fn square(lo: f64, hi: f64, n: usize) -> Self {
        Self::new([lo, hi], [lo, hi], n, n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n1 < 2 || self.n2 < 2 {
            return Err(Error::GridRejected(format!(
                "resolution must be at least 2 per axis, got {}x{}",
                self.n1, self.n2
            )));
        }
        if !self.u1.iter().chain(&self.u2).all(|v| v.is_finite()) {
            return Err(Error::GridRejected("non-finite range".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn coord(range: [f64; 2], n: usize, i: usize) -> f64 {
        if n == 1 {
            return range[0];
        }
        range[0] + (range[1] - range[0]) * i as f64 / (n - 1) as f64
    }

    pub fn index(&self, i1: usize, i2: usize) -> usize {
        i1 * self.n2 + i2
    }

    pub fn point(&self, idx: usize) -> (f64, f64) {
        let (i1, i2) = (idx / self.n2, idx % self.n2);
        (
            Self::coord(self.u1, self.n1, i1),
            Self::coord(self.u2, self.n2, i2),
        )
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }
}

/// Mean, spread and extremes of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    /// `max |v − mean|`.
    pub max_dev: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    pub fn from_values<I: IntoIterator<Item = f64>>(values: I) -> Option<Stats> {
        let v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return None;
        }
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let max_dev = v.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max);
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(Stats {
            count: v.len(),
            mean,
            std: var.sqrt(),
            max_dev,
            min,
            max,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub u1: f64,
    pub u2: f64,
    pub position: [f64; 3],
    pub k: f64,
    pub h: f64,
    pub epsilon: f64,
    pub w: f64,
    pub excluded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub grid: GridSpec,
    pub samples: Vec<CurvatureSample>,
    pub excluded: usize,
    pub k: Option<Stats>,
    pub h: Option<Stats>,
    pub abs_h: Option<Stats>,
}

impl CurvatureReport {
    pub fn included(&self) -> impl Iterator<Item = &CurvatureSample> {
        self.samples.iter().filter(|s| !s.excluded)
    }

    pub fn all_excluded(&self) -> bool {
        self.excluded == self.samples.len()
    }
}

pub fn sample_point<S: Immersion + ?Sized>(
    s: &S,
    u1: f64,
    u2: f64,
    mode: DerivativeMode,
) -> CurvatureSample {
    let jet = evaluate_jet(s, u1, u2, mode);
    let position = s.position(u1, u2);
    match fundamental_data(&jet) {
        Ok(d) if jet.is_finite() => {
            let (k, h) = (d.gaussian(), d.mean());
            CurvatureSample {
                u1,
                u2,
                position,
                k,
                h,
                epsilon: d.epsilon,
                w: d.w,
                excluded: !(k.is_finite() && h.is_finite()),
            }
        }
        _ => CurvatureSample {
            u1,
            u2,
            position,
            k: f64::NAN,
            h: f64::NAN,
            epsilon: f64::NAN,
            w: crate::surface::side_norm_raw(&jet),
            excluded: true,
        },
    }
}

/// Sweeps the grid in parallel; samples keep the grid's row-major order.
pub fn evaluate_grid<S: Immersion + ?Sized>(
    s: &S,
    grid: &GridSpec,
    mode: DerivativeMode,
) -> Result<CurvatureReport> {
    grid.validate()?;
    let samples: Vec<CurvatureSample> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let (u1, u2) = grid.point(i);
            sample_point(s, u1, u2, mode)
        })
        .collect();
    let excluded = samples.iter().filter(|s| s.excluded).count();
    let inc = || samples.iter().filter(|s| !s.excluded);
    let k = Stats::from_values(inc().map(|s| s.k));
    let h = Stats::from_values(inc().map(|s| s.h));
    let abs_h = Stats::from_values(inc().map(|s| s.h.abs()));
    Ok(CurvatureReport {
        grid: *grid,
        samples,
        excluded,
        k,
        h,
        abs_h,
    })
}
