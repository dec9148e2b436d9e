//! Factorable surfaces `z = f(x) g(y)` (first kind) and `x = f(y) g(z)`
//! (second kind), their closed-form curvatures, and a cross-check against
//! the general pipeline in [`crate::surface`].
//!
//! # Sign conventions
//!
//! The closed-form expressions here are the reduced forms obtained by
//! substituting the factorable ansatz. They relate to the general pipeline
//! by a fixed sign per formula and causal character:
//!
//! | formula           | spacelike (ε = +1) | timelike (ε = −1) |
//! |-------------------|--------------------|-------------------|
//! | `k_first`         | −1                 | +1                |
//! | `k_second`        | −1                 | +1                |
//! | `h_first`         | +1                 | +1                |
//! | `h_second`        | +1                 | +1                |
//!
//! i.e. `k_* = −ε · K` and `h_* = H`, where `K, H` come from
//! [`crate::surface::gaussian_curvature`] and
//! [`crate::surface::mean_curvature`]. The Gaussian formulas drop the
//! `−ε` prefactor of the general definition; the mean formulas keep it
//! implicitly through `|·|^{3/2}`. [`cross_check`] measures these signs
//! rather than assuming them, and the tests pin them.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::GridSpec;
use crate::surface::{fundamental_data, Immersion, Jet2, LIGHTLIKE_W_TOL};

/// Relative deadband for the denominators of the closed forms.
pub const LOCUS_REL_TOL: f64 = 1e-10;

type Eval = dyn Fn(f64) -> [f64; 3] + Send + Sync;

/// Scalar function of one variable with its first two derivatives.
#[derive(Clone)]
pub struct ScalarC2 {
    eval: Arc<Eval>,
    pub domain: [f64; 2],
    pub label: String,
}

impl fmt::Debug for ScalarC2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarC2")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .finish()
    }
}

impl ScalarC2 {
    pub fn from_fn<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> [f64; 3] + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(f),
            domain: [f64::NEG_INFINITY, f64::INFINITY],
            label: label.into(),
        }
    }

    pub fn with_domain(mut self, lo: f64, hi: f64) -> Self {
        self.domain = [lo, hi];
        self
    }

    /// `[f(t), f'(t), f''(t)]`.
    pub fn eval(&self, t: f64) -> [f64; 3] {
        (self.eval)(t)
    }

    pub fn value(&self, t: f64) -> f64 {
        self.eval(t)[0]
    }

    pub fn constant(c: f64) -> Self {
        Self::from_fn(format!("{c}"), move |_| [c, 0.0, 0.0])
    }

    /// `a + b t`.
    pub fn linear(a: f64, b: f64) -> Self {
        Self::from_fn(format!("{a} + {b} t"), move |t| [a + b * t, b, 0.0])
    }

    /// `Σ c_k t^k`, coefficients in increasing degree.
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        let label = format!("poly{coeffs:?}");
        Self::from_fn(label, move |t| horner3(&coeffs, t))
    }

    /// `amplitude · exp(rate · t)`.
    pub fn exp(amplitude: f64, rate: f64) -> Self {
        Self::from_fn(format!("{amplitude} exp({rate} t)"), move |t| {
            let e = amplitude * (rate * t).exp();
            [e, rate * e, rate * rate * e]
        })
    }

    /// `exp(p(t))` for a polynomial `p`.
    pub fn exp_polynomial(coeffs: Vec<f64>) -> Self {
        let label = format!("exp(poly{coeffs:?})");
        Self::from_fn(label, move |t| {
            let [p, p1, p2] = horner3(&coeffs, t);
            let e = p.exp();
            [e, p1 * e, (p2 + p1 * p1) * e]
        })
    }

    /// `scale · tanh(rate · t + shift)`.
    pub fn tanh(scale: f64, rate: f64, shift: f64) -> Self {
        Self::from_fn(format!("{scale} tanh({rate} t + {shift})"), move |t| {
            let th = (rate * t + shift).tanh();
            let sech2 = 1.0 - th * th;
            [
                scale * th,
                scale * rate * sech2,
                -2.0 * scale * rate * rate * th * sech2,
            ]
        })
    }

    /// Largest gap between the stated derivatives and central differences.
    pub fn derivative_consistency(&self, samples: &[f64], h: f64) -> f64 {
        samples
            .iter()
            .map(|&t| {
                let [_, d1, d2] = self.eval(t);
                let (p, m) = (self.eval(t + h), self.eval(t - h));
                let fd1 = (p[0] - m[0]) / (2.0 * h);
                let fd2 = (p[1] - m[1]) / (2.0 * h);
                (fd1 - d1).abs().max((fd2 - d2).abs())
            })
            .fold(0.0, f64::max)
    }
}

fn horner3(coeffs: &[f64], t: f64) -> [f64; 3] {
    let (mut p, mut p1, mut p2) = (0.0, 0.0, 0.0);
    for &c in coeffs.iter().rev() {
        p2 = p2 * t + 2.0 * p1;
        p1 = p1 * t + p;
        p = p * t + c;
    }
    [p, p1, p2]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// `z = f(x) g(y)`, parametrized by `(x, y)`.
    First,
    /// `x = f(y) g(z)`, parametrized by `(y, z)`.
    Second,
}

#[derive(Debug, Clone)]
pub struct FactorableSurface {
    pub kind: Kind,
    pub f: ScalarC2,
    pub g: ScalarC2,
}

/// `f, g` and derivatives at one parameter point.
#[derive(Debug, Clone, Copy)]
struct Factors {
    f: f64,
    f1: f64,
    f2: f64,
    g: f64,
    g1: f64,
    g2: f64,
}

impl FactorableSurface {
    pub fn new(kind: Kind, f: ScalarC2, g: ScalarC2) -> Self {
        Self { kind, f, g }
    }

    pub fn first(f: ScalarC2, g: ScalarC2) -> Self {
        Self::new(Kind::First, f, g)
    }

    pub fn second(f: ScalarC2, g: ScalarC2) -> Self {
        Self::new(Kind::Second, f, g)
    }

    fn factors(&self, u1: f64, u2: f64) -> Factors {
        let [f, f1, f2] = self.f.eval(u1);
        let [g, g1, g2] = self.g.eval(u2);
        Factors {
            f,
            f1,
            f2,
            g,
            g1,
            g2,
        }
    }

    fn expect(&self, kind: Kind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "formula needs a {kind:?}-kind surface, got {:?}",
                self.kind
            )))
        }
    }

    /// Signed denominator base whose zero set is the lightlike locus:
    /// `1 − (f g')²` for the first kind, `(f g')² − (f' g)²` for the second.
    /// Positive exactly on spacelike points.
    pub fn causal_discriminant(&self, u1: f64, u2: f64) -> f64 {
        let v = self.factors(u1, u2);
        match self.kind {
            Kind::First => 1.0 - (v.f * v.g1).powi(2),
            Kind::Second => (v.f * v.g1).powi(2) - (v.f1 * v.g).powi(2),
        }
    }

    fn discriminant_checked(&self, v: &Factors) -> Result<f64> {
        let (d, scale) = match self.kind {
            Kind::First => (1.0 - (v.f * v.g1).powi(2), 1.0 + (v.f * v.g1).powi(2)),
            Kind::Second => {
                let (a, b) = ((v.f * v.g1).powi(2), (v.f1 * v.g).powi(2));
                (a - b, a + b)
            }
        };
        // relative to the terms themselves, so small but well-separated factors
        // are not mistaken for the locus; the floor matches the W cut-off
        if d.abs() <= (LOCUS_REL_TOL * scale).max(LIGHTLIKE_W_TOL * LIGHTLIKE_W_TOL) || !d.is_finite() {
            Err(Error::LightlikeLocus { denominator: d })
        } else {
            Ok(d)
        }
    }
}

impl Immersion for FactorableSurface {
    fn position(&self, u1: f64, u2: f64) -> [f64; 3] {
        let p = self.f.value(u1) * self.g.value(u2);
        match self.kind {
            Kind::First => [u1, u2, p],
            Kind::Second => [p, u1, u2],
        }
    }

    fn jet(&self, u1: f64, u2: f64) -> Jet2 {
        let v = self.factors(u1, u2);
        let p = [
            v.f * v.g,
            v.f1 * v.g,
            v.f * v.g1,
            v.f2 * v.g,
            v.f1 * v.g1,
            v.f * v.g2,
        ];
        match self.kind {
            Kind::First => Jet2 {
                r: [u1, u2, p[0]],
                r1: [1.0, 0.0, p[1]],
                r2: [0.0, 1.0, p[2]],
                r11: [0.0, 0.0, p[3]],
                r12: [0.0, 0.0, p[4]],
                r22: [0.0, 0.0, p[5]],
            },
            Kind::Second => Jet2 {
                r: [p[0], u1, u2],
                r1: [p[1], 1.0, 0.0],
                r2: [p[2], 0.0, 1.0],
                r11: [p[3], 0.0, 0.0],
                r12: [p[4], 0.0, 0.0],
                r22: [p[5], 0.0, 0.0],
            },
        }
    }
}

/// `(f g f'' g'' − (f' g')²) / [1 − (f g')²]²`.
pub fn k_first(s: &FactorableSurface, x: f64, y: f64) -> Result<f64> {
    s.expect(Kind::First)?;
    let v = s.factors(x, y);
    let d = s.discriminant_checked(&v)?;
    Ok((v.f * v.g * v.f2 * v.g2 - (v.f1 * v.g1).powi(2)) / (d * d))
}

/// `f g'' / (2 |1 − (f g')²|^{3/2})`.
pub fn h_first(s: &FactorableSurface, x: f64, y: f64) -> Result<f64> {
    s.expect(Kind::First)?;
    let v = s.factors(x, y);
    let d = s.discriminant_checked(&v)?;
    Ok(v.f * v.g2 / (2.0 * d.abs().powf(1.5)))
}

/// `(f g f'' g'' − (f' g')²) / [(f g')² − (f' g)²]²`.
pub fn k_second(s: &FactorableSurface, y: f64, z: f64) -> Result<f64> {
    s.expect(Kind::Second)?;
    let v = s.factors(y, z);
    let d = s.discriminant_checked(&v)?;
    Ok((v.f * v.g * v.f2 * v.g2 - (v.f1 * v.g1).powi(2)) / (d * d))
}

/// Numerator of the second-kind mean curvature,
/// `(f g')² f'' g − 2 f g (f' g')² + (f' g)² f g''`.
pub fn h_second_numerator(s: &FactorableSurface, y: f64, z: f64) -> f64 {
    let v = s.factors(y, z);
    (v.f * v.g1).powi(2) * v.f2 * v.g - 2.0 * v.f * v.g * (v.f1 * v.g1).powi(2)
        + (v.f1 * v.g).powi(2) * v.f * v.g2
}

/// Second-kind mean curvature: numerator over `2 |(f g')² − (f' g)²|^{3/2}`.
pub fn h_second(s: &FactorableSurface, y: f64, z: f64) -> Result<f64> {
    s.expect(Kind::Second)?;
    let v = s.factors(y, z);
    let d = s.discriminant_checked(&v)?;
    Ok(h_second_numerator(s, y, z) / (2.0 * d.abs().powf(1.5)))
}

/// Closed-form Gaussian curvature for either kind.
pub fn k_specialized(s: &FactorableSurface, u1: f64, u2: f64) -> Result<f64> {
    match s.kind {
        Kind::First => k_first(s, u1, u2),
        Kind::Second => k_second(s, u1, u2),
    }
}

/// Closed-form mean curvature for either kind.
pub fn h_specialized(s: &FactorableSurface, u1: f64, u2: f64) -> Result<f64> {
    match s.kind {
        Kind::First => h_first(s, u1, u2),
        Kind::Second => h_second(s, u1, u2),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula {
    KFirst,
    HFirst,
    KSecond,
    HSecond,
}

impl Formula {
    pub fn for_kind(kind: Kind) -> [Formula; 2] {
        match kind {
            Kind::First => [Formula::KFirst, Formula::HFirst],
            Kind::Second => [Formula::KSecond, Formula::HSecond],
        }
    }

    pub fn is_gaussian(self) -> bool {
        matches!(self, Formula::KFirst | Formula::KSecond)
    }
}

/// Documented factor `σ` with `specialized = σ · general` at a point with sign `epsilon`.
pub fn documented_sign(formula: Formula, epsilon: f64) -> f64 {
    if formula.is_gaussian() {
        -epsilon.signum()
    } else {
        1.0
    }
}

/// Empirical sign of one (formula, causal character) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignEntry {
    pub formula: Formula,
    pub epsilon: f64,
    /// Common sign of `specialized / general`, if any sample determined it.
    pub sigma: Option<f64>,
    /// Number of points where both values were large enough to fix a sign.
    pub determining_samples: usize,
    /// False if two determining samples disagreed.
    pub constant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub samples: usize,
    pub signs: Vec<SignEntry>,
    /// `max |specialized − σ_doc · general| / max(1, |general|)` over K;
    /// absolute below unit magnitude, relative above it.
    pub max_discrepancy_k: f64,
    /// Same for H.
    pub max_discrepancy_h: f64,
}

impl CrossCheckReport {
    pub fn max_discrepancy(&self) -> f64 {
        self.max_discrepancy_k.max(self.max_discrepancy_h)
    }

    /// Every empirical sign is constant and equals the documented one.
    pub fn signs_match_documented(&self) -> bool {
        self.signs.iter().all(|e| {
            e.constant
                && e
                    .sigma
                    .is_none_or(|s| s == documented_sign(e.formula, e.epsilon))
        })
    }

    pub fn merge(mut self, other: CrossCheckReport) -> CrossCheckReport {
        self.samples += other.samples;
        self.max_discrepancy_k = self.max_discrepancy_k.max(other.max_discrepancy_k);
        self.max_discrepancy_h = self.max_discrepancy_h.max(other.max_discrepancy_h);
        for e in other.signs {
            match self
                .signs
                .iter_mut()
                .find(|x| x.formula == e.formula && x.epsilon == e.epsilon)
            {
                Some(x) => {
                    x.constant &= e.constant;
                    x.determining_samples += e.determining_samples;
                    match (x.sigma, e.sigma) {
                        (Some(a), Some(b)) if a != b => x.constant = false,
                        (None, b) => x.sigma = b,
                        _ => {}
                    }
                }
                None => self.signs.push(e),
            }
        }
        self
    }
}

/// Values below this do not determine a sign.
const SIGN_FLOOR: f64 = 1e-6;

/// Compares the closed forms with the general pipeline over `grid`.
///
/// Fails with [`Error::GridRejected`] if any point is lightlike, the
/// surface is inadmissible somewhere, or the causal character changes
/// across the grid.
pub fn cross_check(s: &FactorableSurface, grid: &GridSpec) -> Result<CrossCheckReport> {
    grid.validate()?;
    let mut report = CrossCheckReport {
        samples: 0,
        signs: Vec::new(),
        max_discrepancy_k: 0.0,
        max_discrepancy_h: 0.0,
    };
    let mut epsilon_seen: Option<f64> = None;
    for (u1, u2) in grid.points() {
        let reject = |e: Error| Error::GridRejected(format!("at ({u1}, {u2}): {e}"));
        let data = fundamental_data(&s.jet(u1, u2)).map_err(reject)?;
        match epsilon_seen {
            Some(e) if e != data.epsilon => {
                return Err(Error::GridRejected(format!(
                    "grid crosses the lightlike locus near ({u1}, {u2})"
                )))
            }
            _ => epsilon_seen = Some(data.epsilon),
        }
        let pairs = [
            (data.gaussian(), k_specialized(s, u1, u2).map_err(reject)?),
            (data.mean(), h_specialized(s, u1, u2).map_err(reject)?),
        ];
        for (formula, (general, special)) in Formula::for_kind(s.kind).into_iter().zip(pairs) {
            let sigma_doc = documented_sign(formula, data.epsilon);
            let gap = (special - sigma_doc * general).abs() / general.abs().max(1.0);
            if formula.is_gaussian() {
                report.max_discrepancy_k = report.max_discrepancy_k.max(gap);
            } else {
                report.max_discrepancy_h = report.max_discrepancy_h.max(gap);
            }
            let entry = match report
                .signs
                .iter_mut()
                .position(|e| e.formula == formula && e.epsilon == data.epsilon)
            {
                Some(i) => &mut report.signs[i],
                None => {
                    report.signs.push(SignEntry {
                        formula,
                        epsilon: data.epsilon,
                        sigma: None,
                        determining_samples: 0,
                        constant: true,
                    });
                    report.signs.last_mut().expect("just pushed")
                }
            };
            if general.abs() > SIGN_FLOOR && special.abs() > SIGN_FLOOR {
                let sigma = (special / general).signum();
                entry.determining_samples += 1;
                match entry.sigma {
                    Some(prev) if prev != sigma => entry.constant = false,
                    Some(_) => {}
                    None => entry.sigma = Some(sigma),
                }
            }
        }
        report.samples += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{gaussian_curvature, mean_curvature};
    use proptest::prelude::*;

    fn xy() -> FactorableSurface {
        FactorableSurface::first(ScalarC2::linear(0.0, 1.0), ScalarC2::linear(0.0, 1.0))
    }

    #[test]
    fn scalar_derivatives_are_consistent() {
        let ts: Vec<f64> = (0..21).map(|i| -1.0 + 0.1 * i as f64).collect();
        for f in [
            ScalarC2::tanh(-1.5, 2.0, 0.3),
            ScalarC2::exp(0.7, -1.2),
            ScalarC2::polynomial(vec![1.0, -2.0, 0.5, 0.25, -0.1]),
            ScalarC2::exp_polynomial(vec![0.1, 0.4, -0.3]),
            ScalarC2::linear(2.0, 3.0),
        ] {
            assert!(f.derivative_consistency(&ts, 1e-4) < 1e-6, "{}", f.label);
        }
    }

    #[test]
    fn k_first_examples() {
        assert!((k_first(&xy(), 0.0, 0.0).unwrap() + 1.0).abs() < 1e-15);
        let th = FactorableSurface::first(ScalarC2::tanh(1.0, 1.0, 0.0), ScalarC2::linear(0.0, 1.0));
        for &(x, y) in &[(0.0, 0.0), (0.3, -2.0), (-1.2, 5.0), (1.9, 0.1)] {
            assert!((k_first(&th, x, y).unwrap() + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lightlike_locus_is_an_error() {
        // fg' = x = 1
        assert!(matches!(k_first(&xy(), 1.0, 0.3), Err(Error::LightlikeLocus { .. })));
        assert!(matches!(h_first(&xy(), -1.0, 0.3), Err(Error::LightlikeLocus { .. })));
        let lin = FactorableSurface::second(ScalarC2::linear(0.0, 1.0), ScalarC2::linear(0.0, 1.0));
        assert!(matches!(h_second(&lin, 1.0, 1.0), Err(Error::LightlikeLocus { .. })));
        assert!(matches!(k_second(&lin, 2.0, -2.0), Err(Error::LightlikeLocus { .. })));
    }

    #[test]
    fn wrong_kind_is_rejected() {
        assert!(matches!(k_second(&xy(), 0.0, 0.0), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn h_first_examples() {
        // f = 2, g = y²/4 at y = 0: H = f g'' / 2 = 1/2
        let s = FactorableSurface::first(ScalarC2::constant(2.0), ScalarC2::polynomial(vec![0.0, 0.0, 0.25]));
        assert!((h_first(&s, 0.7, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(h_first(&xy(), 0.3, 0.9).unwrap(), 0.0);
    }

    #[test]
    fn k_second_examples() {
        let ee = FactorableSurface::second(ScalarC2::exp(1.0, 1.0), ScalarC2::exp(1.0, 2.0));
        assert!(k_second(&ee, 0.3, -0.4).unwrap().abs() < 1e-14);
        // equal rates: (fg')² = (f'g)² everywhere, so the surface is lightlike
        let ll = FactorableSurface::second(ScalarC2::exp(1.0, 1.0), ScalarC2::exp(1.0, 1.0));
        assert!(matches!(k_second(&ll, 0.3, -0.4), Err(Error::LightlikeLocus { .. })));
        // f = y, g = z² at (1, 1): −4 / 9
        let s = FactorableSurface::second(ScalarC2::linear(0.0, 1.0), ScalarC2::polynomial(vec![0.0, 0.0, 1.0]));
        assert!((k_second(&s, 1.0, 1.0).unwrap() + 4.0 / 9.0).abs() < 1e-15);
        let c = FactorableSurface::second(ScalarC2::constant(3.0), ScalarC2::exp(1.0, 0.5));
        assert_eq!(k_second(&c, 0.2, 0.4).unwrap(), 0.0);
    }

    #[test]
    fn h_second_timelike_example() {
        // f = y, g = z at (1, 2): D = 1 − 4 = −3, numerator −4
        let s = FactorableSurface::second(ScalarC2::linear(0.0, 1.0), ScalarC2::linear(0.0, 1.0));
        let expected = -2.0 / 3f64.powf(1.5);
        assert!((h_second(&s, 1.0, 2.0).unwrap() - expected).abs() < 1e-15);
        assert!(s.causal_discriminant(1.0, 2.0) < 0.0);
    }

    #[test]
    fn specialized_matches_general_with_documented_signs() {
        // spacelike and timelike patches of both kinds
        let cases: Vec<(FactorableSurface, GridSpec)> = vec![
            (xy(), GridSpec::square(-0.5, 0.5, 9)),
            (xy(), GridSpec::new([1.5, 2.5], [-1.0, 1.0], 9, 9)),
            (
                FactorableSurface::first(ScalarC2::exp(0.5, 0.7), ScalarC2::polynomial(vec![0.1, 0.3, 0.4])),
                GridSpec::square(-0.5, 0.5, 9),
            ),
            (
                FactorableSurface::second(ScalarC2::polynomial(vec![1.0, 0.2, 0.3]), ScalarC2::exp(1.0, 1.5)),
                GridSpec::square(0.1, 0.6, 9),
            ),
            (
                FactorableSurface::second(ScalarC2::exp(1.0, 1.5), ScalarC2::polynomial(vec![1.0, 0.2, 0.3])),
                GridSpec::square(0.1, 0.6, 9),
            ),
        ];
        for (s, g) in &cases {
            let r = cross_check(s, g).unwrap();
            assert!(r.max_discrepancy() < 1e-9, "{r:?}");
            assert!(r.signs_match_documented(), "{r:?}");
        }
    }

    #[test]
    fn crossing_grid_is_rejected() {
        // fg' = x crosses ±1 inside [0, 2] without hitting a node exactly
        let g = GridSpec::new([0.05, 1.95], [0.0, 1.0], 7, 3);
        assert!(matches!(cross_check(&xy(), &g), Err(Error::GridRejected(_))));
        // a node exactly on the locus
        let g = GridSpec::new([0.0, 2.0], [0.0, 1.0], 3, 3);
        assert!(matches!(cross_check(&xy(), &g), Err(Error::GridRejected(_))));
    }

    #[test]
    fn general_sign_on_saddle() {
        let s = xy();
        let j = s.jet(0.0, 0.0);
        assert_eq!(gaussian_curvature(&j).unwrap(), 1.0);
        assert_eq!(k_first(&s, 0.0, 0.0).unwrap(), -1.0);
        assert_eq!(mean_curvature(&j).unwrap(), h_first(&s, 0.0, 0.0).unwrap());
    }

    proptest! {
        #[test]
        fn k_first_vanishes_for_constant_factor(c in -3.0..3.0f64, a in -2.0..2.0f64, x in -1.0..1.0f64, y in -1.0..1.0f64) {
            let g = ScalarC2::polynomial(vec![0.2, a, 0.3 * a]);
            let s1 = FactorableSurface::first(ScalarC2::constant(c), g.clone());
            let s2 = FactorableSurface::first(g, ScalarC2::constant(c));
            for s in [&s1, &s2] {
                if let Ok(k) = k_first(s, x, y) {
                    prop_assert_eq!(k, 0.0);
                }
            }
        }

        #[test]
        fn h_first_vanishes_for_linear_g(a in -2.0..2.0f64, b in -2.0..2.0f64, x in -1.0..1.0f64, y in -1.0..1.0f64) {
            let s = FactorableSurface::first(ScalarC2::exp(0.3, a), ScalarC2::linear(b, 0.7));
            if let Ok(h) = h_first(&s, x, y) {
                prop_assert_eq!(h, 0.0);
            }
        }

        #[test]
        fn k_second_is_symmetric(p in prop::collection::vec(-1.0..1.0f64, 3), q in prop::collection::vec(-1.0..1.0f64, 3), y in 0.1..1.0f64, z in 0.1..1.0f64) {
            let (f, g) = (ScalarC2::exp_polynomial(p), ScalarC2::polynomial(vec![1.0 + q[0].abs(), q[1], q[2]]));
            let a = k_second(&FactorableSurface::second(f.clone(), g.clone()), y, z);
            let b = k_second(&FactorableSurface::second(g, f), z, y);
            if let (Ok(a), Ok(b)) = (a, b) {
                prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
            }
        }
    }
}
