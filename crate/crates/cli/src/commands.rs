use pgsurf::families::Family;
use pgsurf::reconstruct::probe::{calibrated_floor, nonexistence_probe, ProbeReport};
use pgsurf::reconstruct::theorems::{reconstruct_thm31, reconstruct_thm32, reconstruct_thm42, Reconstruction};
use pgsurf::sampling::{evaluate_grid, CurvatureReport, GridSpec, Stats};
use pgsurf::surface::DerivativeMode;
use pgsurf::verify::{closed_form_k, verify_family, VerifyOptions, VerifyReport};
use pgsurf::Error;
use serde::Serialize;

use crate::config::{ReconstructSpec, RunConfig};
use crate::output::{self, emit_json};
use crate::CliError;

fn config_err(e: Error) -> CliError {
    CliError::Config(e.to_string())
}

fn sweep(cfg: &RunConfig) -> Result<(Family, CurvatureReport), CliError> {
    let fam = cfg.family()?;
    let grid = cfg.grid_for(&fam)?;
    let report = evaluate_grid(&fam.surface, &grid, cfg.mode).map_err(config_err)?;
    Ok((fam, report))
}

#[derive(Serialize)]
struct CurvatureSummary<'a> {
    command: &'static str,
    family: &'a str,
    grid: GridSpec,
    mode: DerivativeMode,
    samples: usize,
    excluded: usize,
    /// General-pipeline values.
    k: Option<Stats>,
    h: Option<Stats>,
    abs_h: Option<Stats>,
    /// Gaussian curvature in the closed-form convention.
    k_closed_form: Option<Stats>,
}

pub fn curvature(cfg: &RunConfig) -> Result<(), CliError> {
    let (fam, report) = sweep(cfg)?;
    if let Some(p) = &cfg.output.csv {
        output::write(p, &output::curvature_csv(&report))?;
    }
    let summary = CurvatureSummary {
        command: "curvature",
        family: &fam.name,
        grid: report.grid,
        mode: cfg.mode,
        samples: report.samples.len(),
        excluded: report.excluded,
        k: report.k,
        h: report.h,
        abs_h: report.abs_h,
        k_closed_form: Stats::from_values(closed_form_k(&report, fam.kind())),
    };
    emit_json(cfg.output.json.as_deref(), &summary)?;
    if report.all_excluded() {
        return Err(CliError::Empty(format!("all {} samples are lightlike or inadmissible", report.samples.len())));
    }
    Ok(())
}

pub fn verify(cfg: &RunConfig) -> Result<(), CliError> {
    let fam = cfg.family()?;
    let grid = cfg.grid_for(&fam)?;
    let opts = VerifyOptions {
        grid: Some(grid),
        mode: cfg.mode,
        constancy_tol: cfg.tolerances.constancy,
        cross_tol: cfg.tolerances.cross,
        motion_tol: cfg.tolerances.motion,
        motions: cfg.verify.motions,
        seed: cfg.verify.seed,
    };
    let report: VerifyReport = verify_family(&fam, &opts).map_err(config_err)?;
    emit_json(cfg.output.json.as_deref(), &report)?;
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        Err(CliError::Failure(format!("{}: failed {}", report.family, failed.join(", "))))
    }
}

#[derive(Serialize)]
struct ReconstructSummary<'a> {
    command: &'static str,
    theorem: &'a str,
    step: f64,
    corridor: [f64; 2],
    samples: usize,
    max_error: f64,
    relative: bool,
    tolerance: f64,
    passed: bool,
}

pub fn reconstruct(cfg: &RunConfig) -> Result<(), CliError> {
    let spec = cfg
        .reconstruct
        .ok_or_else(|| CliError::Config("missing 'reconstruct' section".into()))?;
    let result = match spec {
        ReconstructSpec::Thm31(p) => reconstruct_thm31(&p),
        ReconstructSpec::Thm32(p) => reconstruct_thm32(&p),
        ReconstructSpec::Thm42(p) => reconstruct_thm42(&p),
    };
    let r: Reconstruction = result.map_err(|e| match e {
        Error::BranchViolation { .. } => CliError::Branch(e.to_string()),
        Error::BlowUp { .. } | Error::NonFinite { .. } => CliError::Failure(e.to_string()),
        e => CliError::Config(e.to_string()),
    })?;
    if let Some(p) = &cfg.output.csv {
        let mut text = String::from("t,numeric,closed\n");
        for ((t, a), b) in r.t.iter().zip(&r.numeric).zip(&r.closed) {
            text.push_str(&format!("{},{},{}\n", output::num(*t), output::num(*a), output::num(*b)));
        }
        output::write(p, &text)?;
    }
    let tolerance = cfg.tolerances.reconstruct;
    let passed = r.max_error < tolerance;
    emit_json(
        cfg.output.json.as_deref(),
        &ReconstructSummary {
            command: "reconstruct",
            theorem: &r.theorem,
            step: r.step,
            corridor: r.corridor,
            samples: r.t.len(),
            max_error: r.max_error,
            relative: r.relative,
            tolerance,
            passed,
        },
    )?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Failure(format!(
            "max error {:e} exceeds tolerance {tolerance:e}",
            r.max_error
        )))
    }
}

#[derive(Serialize)]
struct ProbeSummary<'a> {
    command: &'static str,
    #[serde(flatten)]
    report: &'a ProbeReport,
    /// Floor asserted for `K0 ≠ 0`, or the control bound for `K0 = 0`.
    bound: Option<f64>,
    passed: bool,
}

pub fn probe(cfg: &RunConfig) -> Result<(), CliError> {
    let p = cfg.probe.ok_or_else(|| CliError::Config("missing 'probe' section".into()))?;
    let report = nonexistence_probe(&p).map_err(config_err)?;
    let (bound, passed) = if p.k0 == 0.0 {
        let b = cfg.tolerances.probe_control;
        (Some(b), report.best_residual < b)
    } else {
        match cfg.tolerances.probe_floor.or_else(|| calibrated_floor(p.space)) {
            Some(b) => (Some(b), report.best_residual > b),
            None => (None, true),
        }
    };
    emit_json(
        cfg.output.json.as_deref(),
        &ProbeSummary {
            command: "probe",
            report: &report,
            bound,
            passed,
        },
    )?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Failure(format!(
            "best residual {:e} violates bound {:e}",
            report.best_residual,
            bound.unwrap_or(f64::NAN)
        )))
    }
}

#[derive(Serialize)]
struct MeshSummary<'a> {
    command: &'static str,
    family: &'a str,
    vertices: usize,
    faces: usize,
    excluded: usize,
}

pub fn mesh(cfg: &RunConfig) -> Result<(), CliError> {
    let obj = cfg
        .output
        .obj
        .clone()
        .ok_or_else(|| CliError::Config("mesh needs 'output.obj'".into()))?;
    let (fam, report) = sweep(cfg)?;
    if report.samples.iter().any(|s| s.position.iter().any(|v| !v.is_finite())) {
        return Err(CliError::Failure("non-finite vertex position".into()));
    }
    let (text, faces) = output::mesh_obj(&report);
    if faces == 0 {
        return Err(CliError::Empty(format!(
            "no grid cell has four admissible corners ({} of {} samples excluded)",
            report.excluded,
            report.samples.len()
        )));
    }
    output::write(&obj, &text)?;
    let sidecar = cfg.output.sidecar.clone().unwrap_or_else(|| obj.with_extension("csv"));
    output::write(&sidecar, &output::mesh_sidecar(&report))?;
    emit_json(
        cfg.output.json.as_deref(),
        &MeshSummary {
            command: "mesh",
            family: &fam.name,
            vertices: report.samples.len(),
            faces,
            excluded: report.excluded,
        },
    )
}
