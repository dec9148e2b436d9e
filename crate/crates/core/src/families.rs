//! Constructors for the classified constant-curvature factorable surfaces
//! and the zero-curvature fixtures.
//!
//! Each constructor returns a [`Family`]: the surface with closed-form
//! derivatives, a recommended parameter domain that keeps a 5% margin from
//! radicand zeros and lightlike loci, and the curvature constants it must
//! reproduce.
//!
//! Expected values follow the closed-form convention of
//! [`crate::factorable`]: `expected_k` is what `k_first`/`k_second` return,
//! `expected_h` is the signed mean curvature (identical in both conventions).
//!
//! | family            | kind   | constant                                        |
//! |-------------------|--------|-------------------------------------------------|
//! | `thm31`           | first  | `K = −|K0|`, `H = 0`                            |
//! | `thm32` spacelike | first  | `H = H0`, `K = 0`                               |
//! | `thm32` timelike  | first  | `H = −H0`, `K = 0`                              |
//! | `thm42` spacelike | second | `H = −sgn(λ1 λ2) H0`                            |
//! | `thm42` timelike  | second | `H = sgn(λ1 λ2) H0`                             |
//!
//! For the first-kind mean-curvature family the plus radicand
//! `√((2H0 y + λ1)² + 1)` is the spacelike one (`(z_y)² < 1`) and the minus
//! radicand is timelike. For the second kind it is the other way round.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorable::{FactorableSurface, Kind, ScalarC2};
use crate::sampling::GridSpec;

/// Fractional distance kept from radicand zeros. Derivatives of `√(u² − 1)`
/// grow like `(u − 1)^{-k+1/2}`, so closer grids break default-step finite
/// differences for steep families (`|H0|` near 10).
pub const DOMAIN_MARGIN: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Sign {
    #[default]
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Causal {
    #[default]
    Spacelike,
    Timelike,
}

impl Causal {
    pub fn epsilon(self) -> f64 {
        match self {
            Causal::Spacelike => 1.0,
            Causal::Timelike => -1.0,
        }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thm31Params {
    pub k0: f64,
    #[serde(default)]
    pub lambda1: f64,
    #[serde(default)]
    pub lambda2: f64,
    #[serde(default)]
    pub sign: Sign,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thm32Params {
    pub h0: f64,
    #[serde(default)]
    pub lambda1: f64,
    #[serde(default)]
    pub lambda2: f64,
    /// Constant first factor; `g = z / f0`.
    #[serde(default = "one")]
    pub f0: f64,
    #[serde(default)]
    pub causal: Causal,
    /// Scales the square-root coefficient; `1` is the exact family.
    #[serde(default = "one")]
    pub perturb: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thm42Params {
    pub h0: f64,
    /// Amplitude of `f`.
    #[serde(default = "one")]
    pub lambda1: f64,
    /// Rate of `f` and exponent coefficient of `g` (over `2 H0`).
    #[serde(default = "one")]
    pub lambda2: f64,
    #[serde(default)]
    pub lambda3: f64,
    #[serde(default)]
    pub causal: Causal,
    /// Scales the exponent of `g`; `1` is the exact family.
    #[serde(default = "one")]
    pub perturb: f64,
}

/// Named family with parameters, as accepted by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum FamilyParams {
    Thm31(Thm31Params),
    Thm32(Thm32Params),
    Thm42(Thm42Params),
    /// `z = x y`.
    Saddle,
    /// `z = 0`.
    Plane,
    /// `z = 2 (y + 3)`.
    Linear,
    /// `x = exp(y) exp(2 z)`.
    ExpExp,
}

impl FamilyParams {
    pub fn build(&self) -> Result<Family> {
        match self {
            FamilyParams::Thm31(p) => thm31_family(p),
            FamilyParams::Thm32(p) => thm32_family(p),
            FamilyParams::Thm42(p) => thm42_family(p),
            FamilyParams::Saddle => Ok(saddle()),
            FamilyParams::Plane => Ok(plane()),
            FamilyParams::Linear => Ok(linear()),
            FamilyParams::ExpExp => Ok(exp_exp()),
        }
    }
}

/// Radicand `(slope · t + offset)² − 1` must stay positive along a parameter axis.
#[derive(Debug, Clone, Copy, PartialEq)]
struct RadicandGuard {
    axis: usize,
    slope: f64,
    offset: f64,
}

/// Which curvature a family holds constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prescribed {
    Gaussian,
    Mean,
    Both,
}

impl Prescribed {
    pub fn gaussian(self) -> bool {
        matches!(self, Prescribed::Gaussian | Prescribed::Both)
    }

    pub fn mean(self) -> bool {
        matches!(self, Prescribed::Mean | Prescribed::Both)
    }
}

#[derive(Debug, Clone)]
pub struct Family {
    pub name: String,
    pub surface: FactorableSurface,
    /// Grid with margins from every singular locus.
    pub domain: GridSpec,
    pub causal: Causal,
    /// Constant Gaussian curvature in the closed-form convention, if any.
    pub expected_k: Option<f64>,
    /// Constant signed mean curvature, if any.
    pub expected_h: Option<f64>,
    pub prescribed: Prescribed,
    guard: Option<RadicandGuard>,
}

impl Family {
    /// A user-supplied surface with no expected constants. Its causal
    /// character is read off the centre of `domain`.
    pub fn custom(name: impl Into<String>, surface: FactorableSurface, domain: GridSpec, prescribed: Prescribed) -> Family {
        let c = surface.causal_discriminant(
            0.5 * (domain.u1[0] + domain.u1[1]),
            0.5 * (domain.u2[0] + domain.u2[1]),
        );
        Family {
            name: name.into(),
            surface,
            domain,
            causal: if c < 0.0 { Causal::Timelike } else { Causal::Spacelike },
            expected_k: None,
            expected_h: None,
            prescribed,
            guard: None,
        }
    }

    pub fn kind(&self) -> Kind {
        self.surface.kind
    }

    pub fn with_resolution(&self, n1: usize, n2: usize) -> GridSpec {
        GridSpec {
            n1,
            n2,
            ..self.domain
        }
    }

    /// Rejects grids that leave the region where the closed form is real.
    pub fn check_grid(&self, grid: &GridSpec) -> Result<()> {
        grid.validate()?;
        let Some(g) = self.guard else { return Ok(()) };
        let range = if g.axis == 1 { grid.u1 } else { grid.u2 };
        let ends = range.map(|t| g.slope * t + g.offset);
        let same_side = ends[0].signum() == ends[1].signum();
        if same_side && ends.iter().all(|u| u.abs() > 1.0) {
            Ok(())
        } else {
            Err(Error::DomainError(format!(
                "{}: radicand argument spans [{}, {}], needs |u| > 1 throughout",
                self.name, ends[0], ends[1]
            )))
        }
    }
}

pub(crate) fn check_nonzero(name: &str, v: f64) -> Result<()> {
    if v == 0.0 || !v.is_finite() {
        Err(Error::InvalidParams(format!("{name} must be finite and non-zero, got {v}")))
    } else {
        Ok(())
    }
}

pub(crate) fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be finite, got {v}")))
    }
}

/// Parameter interval mapped from an interval of `u = slope · t + offset`.
fn pullback(u: [f64; 2], slope: f64, offset: f64) -> [f64; 2] {
    let a = (u[0] - offset) / slope;
    let b = (u[1] - offset) / slope;
    [a.min(b), a.max(b)]
}

/// Natural-variable interval on one side of a radicand zero at `|u| = 1`.
fn outside_unit() -> [f64; 2] {
    [1.0 + DOMAIN_MARGIN, 2.0 + DOMAIN_MARGIN]
}

/// `z = ±tanh(√|K0| x + λ1) (y + λ2)`; constant `K = −|K0|`.
pub fn thm31_family(p: &Thm31Params) -> Result<Family> {
    check_nonzero("K0", p.k0)?;
    check_finite("lambda1", p.lambda1)?;
    check_finite("lambda2", p.lambda2)?;
    let rate = p.k0.abs().sqrt();
    let f = ScalarC2::tanh(p.sign.value(), rate, p.lambda1);
    let g = ScalarC2::linear(p.lambda2, 1.0);
    let x = pullback([-1.5, 1.5], rate, p.lambda1);
    Ok(Family {
        name: "thm31".into(),
        surface: FactorableSurface::first(f, g),
        domain: GridSpec::new(x, [-1.0 - p.lambda2, 1.0 - p.lambda2], 50, 50),
        causal: Causal::Spacelike,
        expected_k: Some(-p.k0.abs()),
        expected_h: Some(0.0),
        prescribed: Prescribed::Gaussian,
        guard: None,
    })
}

/// `z = f0 g(y) = (1/2H0) √((2H0 y + λ1)² ± 1) + λ2`, plus radicand for
/// spacelike, minus for timelike.
pub fn thm32_family(p: &Thm32Params) -> Result<Family> {
    check_nonzero("H0", p.h0)?;
    check_nonzero("f0", p.f0)?;
    check_finite("lambda1", p.lambda1)?;
    check_finite("lambda2", p.lambda2)?;
    check_nonzero("perturb", p.perturb)?;
    let (h0, l1, l2, f0) = (p.h0, p.lambda1, p.lambda2, p.f0);
    let pm = match p.causal {
        Causal::Spacelike => 1.0,
        Causal::Timelike => -1.0,
    };
    let c = p.perturb / (2.0 * h0);
    // g = z / f0
    let g = ScalarC2::from_fn(format!("thm32 g (pm {pm})"), move |y| {
        let u = 2.0 * h0 * y + l1;
        let q = u * u + pm;
        let s = q.sqrt();
        let du = 2.0 * h0;
        let z = c * s + l2;
        let z1 = c * u * du / s;
        let z2 = c * du * du * pm / (q * s);
        [z / f0, z1 / f0, z2 / f0]
    });
    let f = ScalarC2::constant(f0);
    let (u_range, guard) = match p.causal {
        Causal::Spacelike => ([-1.5, 1.5], None),
        Causal::Timelike => (
            outside_unit(),
            Some(RadicandGuard {
                axis: 2,
                slope: 2.0 * h0,
                offset: l1,
            }),
        ),
    };
    let y = pullback(u_range, 2.0 * h0, l1);
    Ok(Family {
        name: "thm32".into(),
        surface: FactorableSurface::first(f, g),
        domain: GridSpec::new([-1.0, 1.0], y, 50, 50),
        causal: p.causal,
        expected_k: Some(0.0),
        expected_h: (p.perturb == 1.0).then_some(p.causal.epsilon() * h0),
        prescribed: Prescribed::Mean,
        guard,
    })
}

/// `x = λ1 exp(λ2 y + (λ2/2H0) √((2H0 z + λ3)² ± 1))`, plus radicand for
/// timelike, minus for spacelike.
pub fn thm42_family(p: &Thm42Params) -> Result<Family> {
    check_nonzero("H0", p.h0)?;
    check_nonzero("lambda1", p.lambda1)?;
    check_nonzero("lambda2", p.lambda2)?;
    check_finite("lambda3", p.lambda3)?;
    check_nonzero("perturb", p.perturb)?;
    let (h0, l2, l3) = (p.h0, p.lambda2, p.lambda3);
    let pm = match p.causal {
        Causal::Spacelike => -1.0,
        Causal::Timelike => 1.0,
    };
    let a = p.perturb * l2 / (2.0 * h0);
    let g = ScalarC2::from_fn(format!("thm42 g (pm {pm})"), move |z| {
        let w = 2.0 * h0 * z + l3;
        let q = w * w + pm;
        let s = q.sqrt();
        let dw = 2.0 * h0;
        // φ = a √q, g = exp(φ)
        let phi1 = a * w * dw / s;
        let phi2 = a * dw * dw * pm / (q * s);
        let e = (a * s).exp();
        [e, phi1 * e, (phi2 + phi1 * phi1) * e]
    });
    let f = ScalarC2::exp(p.lambda1, l2);
    let (w_range, guard) = match p.causal {
        Causal::Spacelike => (
            outside_unit(),
            Some(RadicandGuard {
                axis: 2,
                slope: 2.0 * h0,
                offset: l3,
            }),
        ),
        Causal::Timelike => ([-1.5, 1.5], None),
    };
    let z = pullback(w_range, 2.0 * h0, l3);
    let orient = (p.lambda1 * p.lambda2).signum();
    Ok(Family {
        name: "thm42".into(),
        surface: FactorableSurface::second(f, g),
        domain: GridSpec::new([-1.0, 1.0], z, 50, 50),
        causal: p.causal,
        expected_k: None,
        expected_h: (p.perturb == 1.0).then_some(-p.causal.epsilon() * orient * h0),
        prescribed: Prescribed::Mean,
        guard,
    })
}

/// `z = x y`: minimal, `K(0, 0) = −1` in the closed-form convention.
pub fn saddle() -> Family {
    Family {
        name: "saddle".into(),
        surface: FactorableSurface::first(ScalarC2::linear(0.0, 1.0), ScalarC2::linear(0.0, 1.0)),
        domain: GridSpec::square(-0.5, 0.5, 21),
        causal: Causal::Spacelike,
        expected_k: None,
        expected_h: Some(0.0),
        prescribed: Prescribed::Mean,
        guard: None,
    }
}

pub fn plane() -> Family {
    Family {
        name: "plane".into(),
        surface: FactorableSurface::first(ScalarC2::constant(0.0), ScalarC2::linear(0.0, 1.0)),
        domain: GridSpec::square(-1.0, 1.0, 21),
        causal: Causal::Spacelike,
        expected_k: Some(0.0),
        expected_h: Some(0.0),
        prescribed: Prescribed::Both,
        guard: None,
    }
}

/// `z = 2 (y + 3)`; timelike since `z_y = 2`.
pub fn linear() -> Family {
    Family {
        name: "linear".into(),
        surface: FactorableSurface::first(ScalarC2::constant(2.0), ScalarC2::linear(3.0, 1.0)),
        domain: GridSpec::square(-1.0, 1.0, 21),
        causal: Causal::Timelike,
        expected_k: Some(0.0),
        expected_h: Some(0.0),
        prescribed: Prescribed::Both,
        guard: None,
    }
}

/// `x = exp(y) exp(2z)`. Equal rates would make `(f g')² = (f' g)²`
/// identically, a lightlike surface.
pub fn exp_exp() -> Family {
    Family {
        name: "expexp".into(),
        surface: FactorableSurface::second(ScalarC2::exp(1.0, 1.0), ScalarC2::exp(1.0, 2.0)),
        domain: GridSpec::square(-0.5, 0.5, 21),
        causal: Causal::Spacelike,
        expected_k: Some(0.0),
        expected_h: Some(0.0),
        prescribed: Prescribed::Both,
        guard: None,
    }
}

/// Zero-curvature fixtures with their expected annotations.
pub fn fixtures_flat_minimal() -> Vec<Family> {
    vec![linear(), saddle(), exp_exp(), plane()]
}
