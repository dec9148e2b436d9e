//! Invariant suites run against a family: constancy of the prescribed
//! curvature, agreement of the closed forms with the general pipeline, and
//! invariance under motions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::factorable::{cross_check, documented_sign, Formula, Kind};
use crate::families::Family;
use crate::sampling::{evaluate_grid, CurvatureReport, GridSpec, Stats};
use crate::space::Motion;
use crate::surface::{DerivativeMode, Moved};

fn default_constancy() -> f64 {
    1e-7
}

fn default_cross() -> f64 {
    1e-8
}

fn default_motions() -> usize {
    10
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Defaults to the family's own domain.
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub mode: DerivativeMode,
    /// Bound on deviation from the mean and on `|mean − expected|`.
    #[serde(default = "default_constancy")]
    pub constancy_tol: f64,
    #[serde(default = "default_cross")]
    pub cross_tol: f64,
    /// Relative to `max(1, |value|)`.
    #[serde(default = "default_cross")]
    pub motion_tol: f64,
    #[serde(default = "default_motions")]
    pub motions: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            grid: None,
            mode: DerivativeMode::Analytic,
            constancy_tol: default_constancy(),
            cross_tol: default_cross(),
            motion_tol: default_cross(),
            motions: default_motions(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn below(name: &str, value: f64, tolerance: f64, detail: String) -> Check {
        Check {
            name: name.into(),
            passed: value <= tolerance,
            value,
            tolerance,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub family: String,
    pub grid: GridSpec,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Gaussian curvature in the closed-form convention, per included sample.
pub fn closed_form_k(report: &CurvatureReport, kind: Kind) -> Vec<f64> {
    let formula = match kind {
        Kind::First => Formula::KFirst,
        Kind::Second => Formula::KSecond,
    };
    report
        .included()
        .map(|s| documented_sign(formula, s.epsilon) * s.k)
        .collect()
}

/// Deterministic motions with `a_i ∈ [−2, 2]` and `θ ∈ [−1, 1]`.
pub fn random_motions(n: usize, seed: u64) -> Vec<Motion> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut a = || rng.gen_range(-2.0..=2.0);
            let (a1, a2, a3, a4, a5) = (a(), a(), a(), a(), a());
            Motion::new(a1, a2, a3, a4, a5, rng.gen_range(-1.0..=1.0))
        })
        .collect()
}

/// Largest `|K_m − K| / max(1, |K|)` (and likewise for `H`) over the grid
/// for every motion; exclusions must coincide.
pub fn motion_deviation(fam: &Family, grid: &GridSpec, motions: &[Motion], mode: DerivativeMode) -> Result<f64> {
    let base = evaluate_grid(&fam.surface, grid, mode)?;
    let mut worst = 0.0f64;
    for m in motions {
        let moved = Moved {
            surface: &fam.surface,
            motion: *m,
        };
        let r = evaluate_grid(&moved, grid, mode)?;
        for (a, b) in base.samples.iter().zip(&r.samples) {
            if a.excluded != b.excluded {
                return Ok(f64::INFINITY);
            }
            if a.excluded {
                continue;
            }
            worst = worst
                .max((a.k - b.k).abs() / a.k.abs().max(1.0))
                .max((a.h - b.h).abs() / a.h.abs().max(1.0));
        }
    }
    Ok(worst)
}

fn constancy_checks(name: &str, stats: Option<Stats>, expected: Option<f64>, tol: f64, out: &mut Vec<Check>) {
    let Some(s) = stats else {
        out.push(Check {
            name: format!("constancy.{name}"),
            passed: false,
            value: f64::NAN,
            tolerance: tol,
            detail: "no admissible samples".into(),
        });
        return;
    };
    out.push(Check::below(
        &format!("constancy.{name}"),
        s.max_dev,
        tol,
        format!("mean {:e}, std {:e} over {} samples", s.mean, s.std, s.count),
    ));
    if let Some(e) = expected {
        out.push(Check::below(
            &format!("mean.{name}"),
            (s.mean - e).abs(),
            tol,
            format!("mean {:e}, expected {e:e}", s.mean),
        ));
    }
}

/// Runs every suite that applies to `fam`.
pub fn verify_family(fam: &Family, opts: &VerifyOptions) -> Result<VerifyReport> {
    let grid = opts.grid.unwrap_or(fam.domain);
    fam.check_grid(&grid)?;
    let report = evaluate_grid(&fam.surface, &grid, opts.mode)?;
    let mut checks = vec![Check::below(
        "admissible",
        report.excluded as f64,
        0.0,
        format!("{} of {} samples lightlike or inadmissible", report.excluded, grid.len()),
    )];
    if fam.prescribed.gaussian() {
        let k = Stats::from_values(closed_form_k(&report, fam.kind()));
        constancy_checks("K", k, fam.expected_k, opts.constancy_tol, &mut checks);
    }
    if fam.prescribed.mean() {
        constancy_checks("H", report.h, fam.expected_h, opts.constancy_tol, &mut checks);
    }
    match cross_check(&fam.surface, &grid) {
        Ok(c) => {
            checks.push(Check::below(
                "cross_check",
                c.max_discrepancy(),
                opts.cross_tol,
                format!("{} samples", c.samples),
            ));
            checks.push(Check {
                name: "sign_ledger".into(),
                passed: c.signs_match_documented(),
                value: c.signs.iter().map(|s| s.determining_samples).sum::<usize>() as f64,
                tolerance: 0.0,
                detail: format!("{:?}", c.signs),
            });
        }
        Err(e) => checks.push(Check {
            name: "cross_check".into(),
            passed: false,
            value: f64::NAN,
            tolerance: opts.cross_tol,
            detail: e.to_string(),
        }),
    }
    let motions = random_motions(opts.motions, opts.seed);
    let dev = motion_deviation(fam, &grid, &motions, opts.mode)?;
    checks.push(Check::below(
        "motion_invariance",
        dev,
        opts.motion_tol,
        format!("{} motions, seed {}", motions.len(), opts.seed),
    ));
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        family: fam.name.clone(),
        grid,
        checks,
        passed,
    })
}
