//! Polynomial identities that close off cases of the classification.
//!
//! A case is excluded when the curvature equation reduces to a polynomial
//! `Σ c_k(t) X^k = 0` in a quantity `X` that is not constant; all `c_k`
//! must then vanish identically. [`case_contradiction`] samples the
//! coefficients and reports whether that is possible.
//!
//! - First kind, constant `K`, `f'' g'' ≠ 0`: polynomial in `g'` with
//!   `c0 = −(1/(f f''))'` and `c4 = (f³/f'')'`. Both vanishing gives
//!   `f f''` and `f³/f''` constant, hence `f⁴` constant and `f' = 0`.
//! - Second kind, constant `K`, `f = f0 y + c`: polynomial in `f` with
//!   `c4 = K0 g'⁴`, `c2 = −2 K0 (f0 g g')²`, `c0 = K0 (f0 g)⁴ + (f0 g')²`.
//! - Second kind, `r = g'` with `r ṙ = λ1 g` and `r = g²/√(λ4 g² + λ5)`:
//!   `(λ4 − λ1 λ4²) g⁵ + 2(λ5 − λ1 λ4 λ5) g³ − λ1 λ5² g = 0`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorable::ScalarC2;

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct Coefficient {
    pub name: String,
    eval: Eval,
}

impl Coefficient {
    pub fn new<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            eval: Arc::new(f),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Coefficient").field("name", &self.name).finish()
    }
}

/// Coefficients of a polynomial identity, as functions of the free variable.
#[derive(Debug, Clone)]
pub struct CaseCoefficients {
    pub label: String,
    /// Quantity the polynomial is in.
    pub unknown: String,
    pub coefficients: Vec<Coefficient>,
}

impl CaseCoefficients {
    /// `Σ c_k(t) X^k` with coefficients listed by descending degree.
    pub fn polynomial(&self, degrees: &[i32], t: f64, x: f64) -> f64 {
        self.coefficients
            .iter()
            .zip(degrees)
            .map(|(c, &d)| c.eval(t) * x.powi(d))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientSummary {
    pub name: String,
    pub max_abs: f64,
    pub argmax: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub label: String,
    pub unknown: String,
    pub samples: usize,
    pub tolerance: f64,
    pub coefficients: Vec<CoefficientSummary>,
    /// Every coefficient vanished on every sample.
    pub all_vanish: bool,
    /// Some coefficient is non-zero, so the identity cannot hold for a
    /// non-constant unknown.
    pub inconsistent: bool,
}

pub fn case_contradiction(c: &CaseCoefficients, samples: &[f64], tolerance: f64) -> CaseReport {
    let coefficients: Vec<CoefficientSummary> = c
        .coefficients
        .iter()
        .map(|k| {
            let (argmax, max_abs) = samples
                .iter()
                .map(|&t| (t, k.eval(t).abs()))
                // NaN counts as non-vanishing
                .fold((f64::NAN, 0.0f64), |(bt, bv), (t, v)| {
                    if v > bv || (v.is_nan() && !bv.is_nan()) {
                        (t, if v.is_nan() { f64::INFINITY } else { v })
                    } else {
                        (bt, bv)
                    }
                });
            CoefficientSummary {
                name: k.name.clone(),
                max_abs,
                argmax,
            }
        })
        .collect();
    let all_vanish = coefficients.iter().all(|s| s.max_abs <= tolerance);
    CaseReport {
        label: c.label.clone(),
        unknown: c.unknown.clone(),
        samples: samples.len(),
        tolerance,
        coefficients,
        all_vanish,
        inconsistent: !all_vanish,
    }
}

fn central<F: Fn(f64) -> f64>(phi: F, t: f64) -> f64 {
    let h = 1e-5 * t.abs().max(1.0);
    (phi(t + h) - phi(t - h)) / (2.0 * h)
}

/// First kind, constant `K`, both factors non-linear: coefficients of
/// `(g')⁰` and `(g')⁴` as functions of `x`.
pub fn first_kind_k_case(f: ScalarC2) -> CaseCoefficients {
    let f4 = f.clone();
    CaseCoefficients {
        label: "first kind, constant K, f'' g'' != 0".into(),
        unknown: "g'".into(),
        coefficients: vec![
            Coefficient::new("(f^3/f'')'", move |x| {
                central(
                    |t| {
                        let [v, _, v2] = f4.eval(t);
                        v.powi(3) / v2
                    },
                    x,
                )
            }),
            Coefficient::new("-(1/(f f''))'", move |x| {
                -central(
                    |t| {
                        let [v, _, v2] = f.eval(t);
                        1.0 / (v * v2)
                    },
                    x,
                )
            }),
        ],
    }
}

/// Degrees matching [`first_kind_k_case`]'s coefficient order.
pub const FIRST_KIND_K_DEGREES: [i32; 2] = [4, 0];

/// Second kind, constant `K0`, `f = f0 y + c`: coefficients of `f⁴, f², f⁰`
/// as functions of `z`.
pub fn second_kind_k_case(k0: f64, f0: f64, g: ScalarC2) -> CaseCoefficients {
    let (g2, g3) = (g.clone(), g.clone());
    CaseCoefficients {
        label: "second kind, constant K, f linear".into(),
        unknown: "f".into(),
        coefficients: vec![
            Coefficient::new("K0 g'^4", move |z| k0 * g.eval(z)[1].powi(4)),
            Coefficient::new("-2 K0 (f0 g g')^2", move |z| {
                let [v, v1, _] = g2.eval(z);
                -2.0 * k0 * (f0 * v * v1).powi(2)
            }),
            Coefficient::new("K0 (f0 g)^4 + (f0 g')^2", move |z| {
                let [v, v1, _] = g3.eval(z);
                k0 * (f0 * v).powi(4) + (f0 * v1).powi(2)
            }),
        ],
    }
}

pub const SECOND_KIND_K_DEGREES: [i32; 3] = [4, 2, 0];

/// `λ4, λ5` forced by the `g⁵, g³, g¹` coefficients vanishing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForcedRelations {
    pub lambda1: f64,
    pub lambda4: f64,
    pub lambda5: f64,
    /// `λ1 λ4`.
    pub product: f64,
}

/// `[c5, c3, c1]` of the `g`-polynomial.
pub fn lambda_coefficients(lambda1: f64, lambda4: f64, lambda5: f64) -> [f64; 3] {
    [
        lambda4 - lambda1 * lambda4 * lambda4,
        2.0 * (lambda5 - lambda1 * lambda4 * lambda5),
        -lambda1 * lambda5 * lambda5,
    ]
}

pub fn lambda_polynomial(lambda1: f64, lambda4: f64, lambda5: f64, g: f64) -> f64 {
    let [c5, c3, c1] = lambda_coefficients(lambda1, lambda4, lambda5);
    c5 * g.powi(5) + c3 * g.powi(3) + c1 * g
}

/// Solves `c5 = c3 = c1 = 0` with `(λ4, λ5) ≠ (0, 0)`.
///
/// `c1 = −λ1 λ5²` forces `λ5 = 0`, which clears `c3`; then
/// `c5 = λ4 (1 − λ1 λ4)` with `λ4 ≠ 0` forces `λ1 λ4 = 1`.
pub fn solve_lambda_relations(lambda1: f64) -> Result<ForcedRelations> {
    if lambda1 == 0.0 || !lambda1.is_finite() {
        return Err(Error::InvalidParams(format!(
            "lambda1 = {lambda1}: only the excluded solution lambda4 = lambda5 = 0 remains"
        )));
    }
    let lambda4 = 1.0 / lambda1;
    Ok(ForcedRelations {
        lambda1,
        lambda4,
        lambda5: 0.0,
        product: lambda1 * lambda4,
    })
}
