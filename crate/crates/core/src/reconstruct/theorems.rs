//! Reconstruction of the classified families from their reduced ODEs.
//!
//! Each problem integrates the ODE with RK4 from initial conditions and
//! compares the trajectory with the closed-form solution that matches the
//! same initial conditions.
//!
//! Closed forms used (with `u` an affine function of the variable):
//!
//! ```text
//! K, first kind     f' = s √|K0| (1 − (g0 f)²) / g0
//!                   f  = (s/g0) tanh(√|K0| x + λ1)
//!
//! H, first kind     v = f0 g',  u = 2 H0 y + c
//!   spacelike       v' = 2H0 (1 − v²)^{3/2}    v = u/√(u²+1)    g = √(u²+1)/(2 f0 H0) + d
//!   timelike        v' = 2H0 (v² − 1)^{3/2}    v = −u/√(u²−1)   g = −√(u²−1)/(2 f0 H0) + d
//!
//! H, second kind    w = g'/g,  λ = f'/f
//!   spacelike       w' = 2H0 (w² − λ²)^{3/2}/λ²   u = 2H'z + c, H' = −sgn(λ) H0
//!                   w = λ u/√(u²−1)               g = c3 exp(λ √(u²−1) / 2H')
//!   timelike        w' = 2H0 (λ² − w²)^{3/2}/λ²   u = 2H'z + c, H' = sgn(λ) H0
//!                   w = λ u/√(u²+1)               g = c3 exp(λ √(u²+1) / 2H')
//! ```

use serde::{Deserialize, Serialize};

use super::ode::{integrate_guarded, OdeProblem};
use crate::error::{Error, Result};
use crate::families::{check_finite, check_nonzero, Causal, Family, FamilyParams, Sign};

fn one() -> f64 {
    1.0
}

fn default_step() -> f64 {
    1e-3
}

fn two() -> f64 {
    2.0
}

/// Trajectory of one reconstruction and its distance from the closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reconstruction {
    pub theorem: String,
    pub step: f64,
    pub corridor: [f64; 2],
    pub t: Vec<f64>,
    /// Integrated function (`f` or `g`).
    pub numeric: Vec<f64>,
    pub closed: Vec<f64>,
    pub max_error: f64,
    /// Whether `max_error` is relative to `|closed|`.
    pub relative: bool,
}

fn finish(theorem: &str, step: f64, t: Vec<f64>, numeric: Vec<f64>, closed: Vec<f64>, relative: bool) -> Reconstruction {
    let max_error = numeric
        .iter()
        .zip(&closed)
        .map(|(a, b)| {
            let e = (a - b).abs();
            if relative {
                e / b.abs()
            } else {
                e
            }
        })
        .fold(0.0, f64::max);
    let corridor = [t[0], *t.last().unwrap()];
    Reconstruction {
        theorem: theorem.into(),
        step,
        corridor,
        t,
        numeric,
        closed,
        max_error,
        relative,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thm31Problem {
    pub k0: f64,
    #[serde(default = "one")]
    pub g0: f64,
    #[serde(default)]
    pub lambda1: f64,
    #[serde(default)]
    pub sign: Sign,
    #[serde(default = "two")]
    pub length: f64,
    #[serde(default = "default_step")]
    pub step: f64,
}

impl Thm31Problem {
    pub fn new(k0: f64, g0: f64, lambda1: f64) -> Self {
        Self {
            k0,
            g0,
            lambda1,
            sign: Sign::Plus,
            length: 2.0,
            step: 1e-3,
        }
    }

    pub fn closed(&self, x: f64) -> f64 {
        self.sign.value() * (self.k0.abs().sqrt() * x + self.lambda1).tanh() / self.g0
    }
}

/// Integrates `f' = ±√|K0| (1 − (g0 f)²)/g0` over `[0, length]` from
/// `f(0) = ±tanh(λ1)/g0`.
pub fn reconstruct_thm31(p: &Thm31Problem) -> Result<Reconstruction> {
    check_nonzero("K0", p.k0)?;
    check_nonzero("g0", p.g0)?;
    check_finite("lambda1", p.lambda1)?;
    let (s, rate, g0) = (p.sign.value(), p.k0.abs().sqrt(), p.g0);
    let rhs = move |_: f64, y: &[f64]| vec![s * rate * (1.0 - (g0 * y[0]).powi(2)) / g0];
    let ode = OdeProblem::new(rhs, 0.0, vec![p.closed(0.0)], p.length, p.step);
    let sol = integrate_guarded(&ode, |_, _| Ok(()))?;
    let closed = sol.t.iter().map(|&x| p.closed(x)).collect();
    let numeric = sol.component(0).collect();
    Ok(finish("3.1", p.step, sol.t, numeric, closed, false))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thm32Problem {
    pub h0: f64,
    #[serde(default = "one")]
    pub f0: f64,
    /// Offset of `u = 2 H0 y + λ1` when the slope is matched.
    #[serde(default)]
    pub lambda1: f64,
    /// `g(y0)`.
    #[serde(default)]
    pub value: f64,
    #[serde(default)]
    pub causal: Causal,
    /// Start of the corridor. Defaults to `u(y0) = 0` (spacelike) or
    /// `u(y0) = 1.5 sgn(H0)` (timelike).
    #[serde(default)]
    pub y0: Option<f64>,
    /// Explicit `g'(y0)`; otherwise taken from the closed form.
    #[serde(default)]
    pub slope: Option<f64>,
    #[serde(default = "one")]
    pub length: f64,
    #[serde(default = "default_step")]
    pub step: f64,
}

impl Thm32Problem {
    pub fn new(h0: f64, causal: Causal) -> Self {
        Self {
            h0,
            f0: 1.0,
            lambda1: 0.0,
            value: 0.0,
            causal,
            y0: None,
            slope: None,
            length: 1.0,
            step: 1e-3,
        }
    }

    fn start(&self) -> f64 {
        self.y0.unwrap_or_else(|| {
            let u0 = match self.causal {
                Causal::Spacelike => 0.0,
                Causal::Timelike => 1.5 * self.h0.signum(),
            };
            (u0 - self.lambda1) / (2.0 * self.h0)
        })
    }
}

fn branch_check(causal: Causal, q: f64, t: f64, what: &str) -> Result<()> {
    // q > 0 on the spacelike side
    let ok = match causal {
        Causal::Spacelike => q > 0.0,
        Causal::Timelike => q < 0.0,
    };
    if ok && q.is_finite() {
        Ok(())
    } else {
        Err(Error::BranchViolation {
            t,
            reason: format!("{what} = {q:e} is not on the {causal:?} side"),
        })
    }
}

/// Integrates the second-order mean-curvature ODE of the first kind as the
/// system `(g, v = f0 g')` on the requested causal branch.
pub fn reconstruct_thm32(p: &Thm32Problem) -> Result<Reconstruction> {
    check_nonzero("H0", p.h0)?;
    check_nonzero("f0", p.f0)?;
    check_finite("lambda1", p.lambda1)?;
    check_finite("value", p.value)?;
    let (h0, f0, causal) = (p.h0, p.f0, p.causal);
    let y0 = p.start();
    check_finite("y0", y0)?;
    let pm = match causal {
        Causal::Spacelike => 1.0,
        Causal::Timelike => -1.0,
    };
    let v0 = match p.slope {
        Some(s) => f0 * s,
        None => {
            let u = 2.0 * h0 * y0 + p.lambda1;
            pm * u / (u * u + pm).sqrt()
        }
    };
    branch_check(causal, 1.0 - v0 * v0, y0, "1 − (f0 g')²")?;
    // invert the slope law for the matched closed form
    let u0 = match causal {
        Causal::Spacelike => v0 / (1.0 - v0 * v0).sqrt(),
        Causal::Timelike => -v0 / (v0 * v0 - 1.0).sqrt(),
    };
    let c = u0 - 2.0 * h0 * y0;
    let amp = pm / (2.0 * f0 * h0);
    let shape = move |y: f64| {
        let u = 2.0 * h0 * y + c;
        amp * (u * u + pm).sqrt()
    };
    let d = p.value - shape(y0);
    let closed_g = move |y: f64| shape(y) + d;

    let rhs = move |_: f64, s: &[f64]| {
        let q = pm * (1.0 - s[1] * s[1]);
        // NaN on the wrong side; the guard reports it before it is used
        vec![s[1] / f0, 2.0 * h0 * q.powf(1.5)]
    };
    let ode = OdeProblem::new(rhs, y0, vec![p.value, v0], y0 + p.length, p.step);
    let sol = integrate_guarded(&ode, |t, s| branch_check(causal, 1.0 - s[1] * s[1], t, "1 − (f0 g')²"))
        .map_err(|e| match e {
            Error::NonFinite { t } => Error::BranchViolation {
                t,
                reason: "trajectory left the causal branch".into(),
            },
            e => e,
        })?;
    let closed = sol.t.iter().map(|&y| closed_g(y)).collect();
    let numeric = sol.component(0).collect();
    Ok(finish("3.2", p.step, sol.t, numeric, closed, false))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thm42Problem {
    pub h0: f64,
    /// Logarithmic rate `f'/f` of the first factor.
    #[serde(default = "one")]
    pub lambda1: f64,
    /// Offset of `u = 2 H' z + λ2` when `w0` is matched.
    #[serde(default)]
    pub lambda2: f64,
    /// Multiplicative constant of `g`.
    #[serde(default = "one")]
    pub lambda3: f64,
    #[serde(default)]
    pub causal: Causal,
    /// Start of the corridor. Defaults to `|u(z0)| = 1.2` growing
    /// (spacelike) or `u(z0) = 0` (timelike).
    #[serde(default)]
    pub z0: Option<f64>,
    /// Explicit `g'/g` at `z0`; otherwise taken from the closed form.
    #[serde(default)]
    pub w0: Option<f64>,
    #[serde(default = "one")]
    pub length: f64,
    #[serde(default = "default_step")]
    pub step: f64,
}

impl Thm42Problem {
    pub fn new(h0: f64, lambda1: f64, causal: Causal) -> Self {
        Self {
            h0,
            lambda1,
            lambda2: 0.0,
            lambda3: 1.0,
            causal,
            z0: None,
            w0: None,
            length: 1.0,
            step: 1e-3,
        }
    }

    /// `H'` of the closed form.
    fn h_eff(&self) -> f64 {
        match self.causal {
            Causal::Spacelike => -self.lambda1.signum() * self.h0,
            Causal::Timelike => self.lambda1.signum() * self.h0,
        }
    }

    fn start(&self) -> f64 {
        let h = self.h_eff();
        self.z0.unwrap_or_else(|| {
            let u0 = match self.causal {
                Causal::Spacelike => 1.2 * h.signum(),
                Causal::Timelike => 0.0,
            };
            (u0 - self.lambda2) / (2.0 * h)
        })
    }
}

/// Integrates `(w, g)` with `w = g'/g` following the second-kind mean
/// curvature ODE, then `g' = w g`. Errors are relative to the closed form.
pub fn reconstruct_thm42(p: &Thm42Problem) -> Result<Reconstruction> {
    check_nonzero("H0", p.h0)?;
    check_nonzero("lambda1", p.lambda1)?;
    check_finite("lambda2", p.lambda2)?;
    check_nonzero("lambda3", p.lambda3)?;
    let (h0, l, causal) = (p.h0, p.lambda1, p.causal);
    let hp = p.h_eff();
    let z0 = p.start();
    check_finite("z0", z0)?;
    // pm: radicand sign in √(u² ± 1)
    let pm = match causal {
        Causal::Spacelike => -1.0,
        Causal::Timelike => 1.0,
    };
    let w0 = match p.w0 {
        Some(w) => w,
        None => {
            let u = 2.0 * hp * z0 + p.lambda2;
            if pm < 0.0 && u.abs() <= 1.0 {
                return Err(Error::BranchViolation {
                    t: z0,
                    reason: format!("|u(z0)| = {} must exceed 1", u.abs()),
                });
            }
            l * u / (u * u + pm).sqrt()
        }
    };
    let disc = |w: f64| w * w - l * l;
    branch_check(causal, disc(w0), z0, "(g'/g)² − λ1²")?;
    let v0 = w0 / l;
    let u0 = v0 / (-pm * (v0 * v0 - 1.0)).sqrt();
    let c = u0 - 2.0 * hp * z0;
    let a = l / (2.0 * hp);
    let closed_g = move |z: f64| {
        let u = 2.0 * hp * z + c;
        let u0 = 2.0 * hp * z0 + c;
        p.lambda3 * (a * ((u * u + pm).sqrt() - (u0 * u0 + pm).sqrt())).exp()
    };

    let sgn = -pm;
    let rhs = move |_: f64, s: &[f64]| {
        let q = sgn * (s[0] * s[0] - l * l);
        vec![2.0 * h0 * q.powf(1.5) / (l * l), s[0] * s[1]]
    };
    let ode = OdeProblem::new(rhs, z0, vec![w0, p.lambda3], z0 + p.length, p.step);
    let sol = integrate_guarded(&ode, |t, s| branch_check(causal, disc(s[0]), t, "(g'/g)² − λ1²"))
        .map_err(|e| match e {
            Error::NonFinite { t } => Error::BranchViolation {
                t,
                reason: "trajectory left the causal branch".into(),
            },
            e => e,
        })?;
    let closed = sol.t.iter().map(|&z| closed_g(z)).collect();
    let numeric = sol.component(1).collect();
    Ok(finish("4.2", p.step, sol.t, numeric, closed, true))
}

/// `err(h) / err(h/2)`; close to 16 for a fourth-order method.
pub fn convergence_ratio<F>(run: F, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<Reconstruction>,
{
    let coarse = run(h)?.max_error;
    let fine = run(h / 2.0)?.max_error;
    Ok(coarse / fine)
}

/// Pointwise residual of a family substituted into its source ODE.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OdeResidual {
    pub family: String,
    pub samples: usize,
    pub max: f64,
    pub argmax: f64,
}

/// Substitutes a theorem family into the ODE it was derived from, on `n`
/// samples across the family's domain:
///
/// - `thm31`: `g0 f'/(1 − (g0 f)²) = ±√|K0|`,
/// - `thm32`: `f0 g''/|1 − (f0 g')²|^{3/2} = 2H` with `H` the signed mean curvature,
/// - `thm42`: `λ² (g'/g)'/|(g'/g)² − λ²|^{3/2} = −2 ε sgn(λ) H0` with `λ = f'/f`.
pub fn family_ode_residual(params: &FamilyParams, n: usize) -> Result<OdeResidual> {
    if n < 2 {
        return Err(Error::InvalidParams("need at least two samples".into()));
    }
    let fam: Family = params.build()?;
    let s = &fam.surface;
    // the ODE variable runs along the second parameter, except for the
    // first-kind K family where it is x
    let range = match params {
        FamilyParams::Thm31(_) => fam.domain.u1,
        FamilyParams::Thm32(_) | FamilyParams::Thm42(_) => fam.domain.u2,
        _ => {
            return Err(Error::InvalidParams(format!(
                "{} is not derived from a reduced ODE",
                fam.name
            )))
        }
    };
    let residual = |t: f64| -> f64 {
        match params {
            FamilyParams::Thm31(p) => {
                let [f, f1, _] = s.f.eval(t);
                let g0 = s.g.eval(0.0)[1];
                g0 * f1 / (1.0 - (g0 * f).powi(2)) - p.sign.value() * p.k0.abs().sqrt()
            }
            FamilyParams::Thm32(p) => {
                let f0 = s.f.value(0.0);
                let [_, g1, g2] = s.g.eval(t);
                f0 * g2 / (1.0 - (f0 * g1).powi(2)).abs().powf(1.5) - 2.0 * p.causal.epsilon() * p.h0
            }
            FamilyParams::Thm42(p) => {
                let [f, f1, _] = s.f.eval(0.0);
                let lam = f1 / f;
                let [g, g1, g2] = s.g.eval(t);
                let w = g1 / g;
                let dw = g2 / g - w * w;
                let lhs = lam * lam * dw / (w * w - lam * lam).abs().powf(1.5);
                lhs + 2.0 * p.causal.epsilon() * lam.signum() * p.h0
            }
            _ => unreachable!(),
        }
    };
    let mut max = 0.0f64;
    let mut argmax = range[0];
    for i in 0..n {
        let t = range[0] + (range[1] - range[0]) * i as f64 / (n - 1) as f64;
        let r = residual(t).abs();
        if !r.is_finite() {
            return Err(Error::NonFinite { t });
        }
        if r > max {
            max = r;
            argmax = t;
        }
    }
    Ok(OdeResidual {
        family: fam.name,
        samples: n,
        max,
        argmax,
    })
}
