//! Run configuration: a JSON file with `--set` overrides applied on top.
//!
//! ```json
//! {
//!   "family":     { "name": "thm31", "k0": 1.0 },
//!   "surface":    { "kind": "first", "f": { "type": "tanh", "scale": 1, "rate": 1, "shift": 0 },
//!                   "g": { "type": "polynomial", "coeffs": [0, 1] } },
//!   "grid":       { "u1": [-1, 1], "u2": [-1, 1], "n1": 20, "n2": 20 },
//!   "resolution": [20, 20],
//!   "mode":       { "mode": "analytic" },
//!   "output":     { "csv": "out.csv", "json": "summary.json", "obj": "mesh.obj", "sidecar": "mesh.csv" },
//!   "tolerances": { "constancy": 1e-7, "cross": 1e-8, "motion": 1e-8, "reconstruct": 1e-6 },
//!   "verify":     { "motions": 10, "seed": 0 },
//!   "reconstruct": { "theorem": "3.1", "k0": 1.0 },
//!   "probe":      { "k0": 1.0, "space": { "kind": "polynomial", "degree": 2 } }
//! }
//! ```
//!
//! Exactly one of `family` and `surface` selects the surface. `grid`
//! replaces the family's own domain; `resolution` keeps the domain and
//! changes the sample counts.

use std::path::PathBuf;

use pgsurf::factorable::{FactorableSurface, Kind, ScalarC2};
use pgsurf::families::{Family, FamilyParams, Prescribed};
use pgsurf::reconstruct::probe::ProbeConfig;
use pgsurf::reconstruct::theorems::{Thm31Problem, Thm32Problem, Thm42Problem};
use pgsurf::sampling::GridSpec;
use pgsurf::surface::DerivativeMode;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// One factor of a user-specified surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FactorSpec {
    Constant { value: f64 },
    Polynomial { coeffs: Vec<f64> },
    Exp { amplitude: f64, rate: f64 },
    ExpPolynomial { coeffs: Vec<f64> },
    Tanh { scale: f64, rate: f64, shift: f64 },
}

impl FactorSpec {
    fn build(&self) -> ScalarC2 {
        match self {
            FactorSpec::Constant { value } => ScalarC2::constant(*value),
            FactorSpec::Polynomial { coeffs } => ScalarC2::polynomial(coeffs.clone()),
            FactorSpec::Exp { amplitude, rate } => ScalarC2::exp(*amplitude, *rate),
            FactorSpec::ExpPolynomial { coeffs } => ScalarC2::exp_polynomial(coeffs.clone()),
            FactorSpec::Tanh { scale, rate, shift } => ScalarC2::tanh(*scale, *rate, *shift),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    pub kind: Kind,
    pub f: FactorSpec,
    pub g: FactorSpec,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub obj: Option<PathBuf>,
    pub sidecar: Option<PathBuf>,
}

fn d_constancy() -> f64 {
    1e-7
}

fn d_cross() -> f64 {
    1e-8
}

fn d_reconstruct() -> f64 {
    1e-6
}

fn d_control() -> f64 {
    1e-6
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "d_constancy")]
    pub constancy: f64,
    #[serde(default = "d_cross")]
    pub cross: f64,
    #[serde(default = "d_cross")]
    pub motion: f64,
    #[serde(default = "d_reconstruct")]
    pub reconstruct: f64,
    /// Residual the `K0 = 0` probe must reach.
    #[serde(default = "d_control")]
    pub probe_control: f64,
    /// Floor a `K0 ≠ 0` probe must stay above; defaults to the frozen
    /// calibrated floor of the family space.
    #[serde(default)]
    pub probe_floor: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            constancy: d_constancy(),
            cross: d_cross(),
            motion: d_cross(),
            reconstruct: d_reconstruct(),
            probe_control: d_control(),
            probe_floor: None,
        }
    }
}

fn d_motions() -> usize {
    10
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySettings {
    #[serde(default = "d_motions")]
    pub motions: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self {
            motions: d_motions(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "theorem")]
pub enum ReconstructSpec {
    #[serde(rename = "3.1")]
    Thm31(Thm31Problem),
    #[serde(rename = "3.2")]
    Thm32(Thm32Problem),
    #[serde(rename = "4.2")]
    Thm42(Thm42Problem),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Informational; the subcommand decides what runs.
    #[serde(default)]
    pub command: Option<String>,
    #[serde(default)]
    pub family: Option<FamilyParams>,
    #[serde(default)]
    pub surface: Option<SurfaceSpec>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub resolution: Option<[usize; 2]>,
    #[serde(default)]
    pub mode: DerivativeMode,
    #[serde(default)]
    pub output: Outputs,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub verify: VerifySettings,
    #[serde(default)]
    pub reconstruct: Option<ReconstructSpec>,
    #[serde(default)]
    pub probe: Option<ProbeConfig>,
}

/// Sets `root.a.b.c = value`, creating objects on the way.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<(), CliError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set expects key=value, got '{assignment}'")))?;
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(CliError::Config(format!("malformed key '{key}'")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if !node.is_object() {
            if node.is_null() {
                *node = Value::Object(Default::default());
            } else {
                return Err(CliError::Config(format!(
                    "cannot set '{key}': '{}' is not an object",
                    parts[..i].join(".")
                )));
            }
        }
        let map = node.as_object_mut().expect("checked above");
        if i + 1 == parts.len() {
            map.insert(part.to_string(), value);
            return Ok(());
        }
        node = map.entry(part.to_string()).or_insert(Value::Null);
    }
    unreachable!("key has at least one part")
}

pub fn load(text: &str, overrides: &[String]) -> Result<RunConfig, CliError> {
    let mut root: Value = serde_json::from_str(text).map_err(|e| CliError::Config(format!("config is not valid JSON: {e}")))?;
    if !root.is_object() {
        return Err(CliError::Config("config must be a JSON object".into()));
    }
    for o in overrides {
        apply_override(&mut root, o)?;
    }
    // `--set reconstruct.theorem=3.2` parses as a number
    if let Some(t) = root.pointer_mut("/reconstruct/theorem") {
        if let Some(v) = t.as_f64() {
            *t = Value::String(format!("{v:.1}"));
        }
    }
    let cfg: RunConfig = serde_json::from_value(root).map_err(|e| CliError::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    fn validate(&self) -> Result<(), CliError> {
        let t = &self.tolerances;
        let positive = [
            ("constancy", t.constancy),
            ("cross", t.cross),
            ("motion", t.motion),
            ("reconstruct", t.reconstruct),
            ("probe_control", t.probe_control),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("tolerances.{name} must be positive, got {v}")));
            }
        }
        if let Some(f) = t.probe_floor {
            if !(f > 0.0 && f.is_finite()) {
                return Err(CliError::Config(format!("tolerances.probe_floor must be positive, got {f}")));
            }
        }
        if let DerivativeMode::FiniteDifference { step } = self.mode {
            if !(step > 0.0 && step.is_finite()) {
                return Err(CliError::Config(format!("finite-difference step must be positive, got {step}")));
            }
        }
        if let Some([n1, n2]) = self.resolution {
            if n1 < 2 || n2 < 2 {
                return Err(CliError::Config(format!("resolution must be at least 2 per axis, got {n1}x{n2}")));
            }
        }
        if let Some(g) = &self.grid {
            g.validate().map_err(|e| CliError::Config(e.to_string()))?;
        }
        Ok(())
    }

    /// The configured surface as a family; user surfaces get no expected
    /// values and require an explicit grid.
    pub fn family(&self) -> Result<Family, CliError> {
        match (&self.family, &self.surface) {
            (Some(_), Some(_)) => Err(CliError::Config("give either 'family' or 'surface', not both".into())),
            (None, None) => Err(CliError::Config("missing 'family' or 'surface'".into())),
            (Some(p), None) => p.build().map_err(|e| CliError::Config(e.to_string())),
            (None, Some(s)) => {
                let grid = self
                    .grid
                    .ok_or_else(|| CliError::Config("'surface' needs an explicit 'grid'".into()))?;
                Ok(Family::custom(
                    "surface",
                    FactorableSurface::new(s.kind, s.f.build(), s.g.build()),
                    grid,
                    Prescribed::Both,
                ))
            }
        }
    }

    pub fn grid_for(&self, fam: &Family) -> Result<GridSpec, CliError> {
        let grid = match (self.grid, self.resolution) {
            (Some(g), _) => g,
            (None, Some([n1, n2])) => fam.with_resolution(n1, n2),
            (None, None) => fam.domain,
        };
        fam.check_grid(&grid).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(grid)
    }
}
