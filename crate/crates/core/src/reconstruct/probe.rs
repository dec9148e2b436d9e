//! Bounded search for second-kind factorable surfaces with constant
//! non-zero Gaussian curvature.
//!
//! The classification says none exist. This module does not prove that; it
//! minimizes `max |K − K0|` over a grid by derivative-free coordinate
//! search within a finite-dimensional family of factors and reports the
//! best residual reached. Every report carries its scope (family space,
//! grid, budget, restarts, seed) in [`ProbeReport::scope`].
//!
//! Restarts run in parallel and are combined by a minimum with ties broken
//! by restart index, so results do not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::factorable::{k_second, FactorableSurface, ScalarC2};
use crate::sampling::GridSpec;

/// Residual floors for the default scope (degree 2, [`ProbeConfig::new`]
/// defaults), frozen from calibration runs with `K0 ∈ {±1, ±0.5}`: the
/// smallest best residuals were 0.207 (polynomial) and 0.269
/// (exponential-polynomial), halved and rounded down for margin. They are
/// properties of that scope only; a larger budget lowers the best residual.
pub const POLYNOMIAL_FLOOR: f64 = 0.1;
pub const EXP_POLYNOMIAL_FLOOR: f64 = 0.1;

/// Frozen floor for `space` at degree 2 under the default scope.
pub fn calibrated_floor(space: FamilySpace) -> Option<f64> {
    match space {
        FamilySpace::Polynomial { degree: 2 } => Some(POLYNOMIAL_FLOOR),
        FamilySpace::ExpPolynomial { degree: 2 } => Some(EXP_POLYNOMIAL_FLOOR),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilySpace {
    /// `f, g` polynomials of the given degree.
    Polynomial { degree: usize },
    /// `f, g` exponentials of polynomials of the given degree.
    ExpPolynomial { degree: usize },
}

impl FamilySpace {
    pub fn degree(self) -> usize {
        match self {
            FamilySpace::Polynomial { degree } | FamilySpace::ExpPolynomial { degree } => degree,
        }
    }

    /// Coefficients per factor.
    pub fn width(self) -> usize {
        self.degree() + 1
    }

    pub fn dimension(self) -> usize {
        2 * self.width()
    }

    pub fn surface(self, params: &[f64]) -> FactorableSurface {
        let (a, b) = params.split_at(self.width());
        let (a, b) = (a.to_vec(), b.to_vec());
        match self {
            FamilySpace::Polynomial { .. } => {
                FactorableSurface::second(ScalarC2::polynomial(a), ScalarC2::polynomial(b))
            }
            FamilySpace::ExpPolynomial { .. } => {
                FactorableSurface::second(ScalarC2::exp_polynomial(a), ScalarC2::exp_polynomial(b))
            }
        }
    }

    /// Deterministic starting point: `1 + t/2 + t²/4 + …` for both factors
    /// (exponent coefficients for the exponential space, with the second
    /// factor's rates tripled so the start is not lightlike).
    pub fn initial_guess(self) -> Vec<f64> {
        let w = self.width();
        let base: Vec<f64> = (0..w).map(|k| 0.5f64.powi(k as i32)).collect();
        let mut p = base.clone();
        match self {
            FamilySpace::Polynomial { .. } => p.extend(base.iter().enumerate().map(|(k, c)| c * (1.0 + k as f64))),
            FamilySpace::ExpPolynomial { .. } => p.extend(base.iter().map(|c| 3.0 * c)),
        }
        p
    }

    fn describe(self) -> String {
        match self {
            FamilySpace::Polynomial { degree } => format!("f, g polynomials of degree {degree}"),
            FamilySpace::ExpPolynomial { degree } => {
                format!("f, g exponentials of degree-{degree} polynomials")
            }
        }
    }
}

fn default_budget() -> usize {
    10_000
}

fn default_restarts() -> usize {
    8
}

fn default_grid() -> GridSpec {
    GridSpec::square(0.0, 1.0, 11)
}

fn default_step() -> f64 {
    0.5
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub k0: f64,
    pub space: FamilySpace,
    /// Objective evaluations across all restarts, not counting the
    /// starting points.
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_grid")]
    pub grid: GridSpec,
    /// Initial coordinate step.
    #[serde(default = "default_step")]
    pub step: f64,
}

impl ProbeConfig {
    pub fn new(k0: f64, space: FamilySpace) -> Self {
        Self {
            k0,
            space,
            budget: default_budget(),
            restarts: default_restarts(),
            seed: 0,
            grid: default_grid(),
            step: default_step(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartResult {
    pub index: usize,
    pub residual: f64,
    pub params: Vec<f64>,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub scope: String,
    pub k0: f64,
    pub best_residual: f64,
    pub best_params: Vec<f64>,
    pub best_restart: usize,
    pub evaluations: usize,
    pub restarts: Vec<RestartResult>,
}

/// `max |k_second − K0|` over the grid; infinite if any point is lightlike
/// or non-finite.
pub fn objective(space: FamilySpace, params: &[f64], k0: f64, grid: &GridSpec) -> f64 {
    let s = space.surface(params);
    let mut worst = 0.0f64;
    for (y, z) in grid.points() {
        match k_second(&s, y, z) {
            Ok(k) if k.is_finite() => worst = worst.max((k - k0).abs()),
            _ => return f64::INFINITY,
        }
    }
    worst
}

/// Coordinate search with step halving from `x0`, spending at most `budget`
/// evaluations.
fn coordinate_search<F: Fn(&[f64]) -> f64>(obj: F, x0: Vec<f64>, step: f64, budget: usize) -> (Vec<f64>, f64, usize) {
    let mut x = x0;
    let mut best = obj(&x);
    let mut used = 0;
    let mut h = step;
    while used < budget && h > 1e-14 {
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                if used >= budget {
                    return (x, best, used);
                }
                let old = x[i];
                x[i] = old + dir * h;
                let v = obj(&x);
                used += 1;
                if v < best {
                    best = v;
                    improved = true;
                    break;
                }
                x[i] = old;
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    (x, best, used)
}

/// Restart 0 starts from [`FamilySpace::initial_guess`]; the others from
/// seeded uniform draws in `[−1, 1]`.
pub fn nonexistence_probe(cfg: &ProbeConfig) -> crate::Result<ProbeReport> {
    cfg.grid.validate()?;
    if cfg.space.degree() > 4 {
        return Err(crate::Error::InvalidParams(format!(
            "degree {} exceeds 4",
            cfg.space.degree()
        )));
    }
    if !cfg.k0.is_finite() || cfg.step.is_nan() || cfg.step <= 0.0 {
        return Err(crate::Error::InvalidParams("k0 must be finite and step positive".into()));
    }
    let restarts = cfg.restarts.max(1);
    let dim = cfg.space.dimension();
    let share = cfg.budget / restarts;
    let extra = cfg.budget % restarts;
    let results: Vec<RestartResult> = (0..restarts)
        .into_par_iter()
        .map(|index| {
            let x0 = if index == 0 {
                cfg.space.initial_guess()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(index as u64);
                (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect()
            };
            let budget = share + usize::from(index < extra);
            let obj = |p: &[f64]| objective(cfg.space, p, cfg.k0, &cfg.grid);
            let (params, residual, evaluations) = coordinate_search(obj, x0, cfg.step, budget);
            RestartResult {
                index,
                residual,
                params,
                evaluations,
            }
        })
        .collect();
    let best = results
        .iter()
        .min_by(|a, b| a.residual.total_cmp(&b.residual).then(a.index.cmp(&b.index)))
        .expect("at least one restart");
    let scope = format!(
        "bounded search, not a proof: {}; max |K - K0| over a {}x{} grid on [{}, {}] x [{}, {}]; \
         budget {} evaluations, {} restarts, seed {}",
        cfg.space.describe(),
        cfg.grid.n1,
        cfg.grid.n2,
        cfg.grid.u1[0],
        cfg.grid.u1[1],
        cfg.grid.u2[0],
        cfg.grid.u2[1],
        cfg.budget,
        restarts,
        cfg.seed
    );
    Ok(ProbeReport {
        scope,
        k0: cfg.k0,
        best_residual: best.residual,
        best_params: best.params.clone(),
        best_restart: best.index,
        evaluations: results.iter().map(|r| r.evaluations).sum(),
        restarts: results,
    })
}
