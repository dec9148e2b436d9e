//! Fixed-step classic Runge–Kutta integration.
//!
//! ```text
//! k1 = f(t,       y)
//! k2 = f(t + h/2, y + h k1/2)
//! k3 = f(t + h/2, y + h k2/2)
//! k4 = f(t + h,   y + h k3)
//! y' = y + h (k1 + 2 k2 + 2 k3 + k4) / 6
//! ```
//!
//! The last step is shortened to land exactly on `t1`.

use crate::error::{Error, Result};

/// Magnitude past which a solution is declared blown up.
pub const BLOWUP: f64 = 1e12;

pub struct OdeProblem<F> {
    pub rhs: F,
    pub t0: f64,
    pub y0: Vec<f64>,
    pub t1: f64,
    pub h: f64,
}

impl<F> OdeProblem<F>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    pub fn new(rhs: F, t0: f64, y0: Vec<f64>, t1: f64, h: f64) -> Self {
        Self { rhs, t0, y0, t1, h }
    }

    fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::InvalidParams(format!("step must be positive, got {}", self.h)));
        }
        if !(self.t0.is_finite() && self.t1.is_finite() && self.t1 >= self.t0) {
            return Err(Error::InvalidParams(format!(
                "corridor [{}, {}] is not a finite forward interval",
                self.t0, self.t1
            )));
        }
        if self.y0.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t: self.t0 });
        }
        Ok(())
    }
}

/// Dense output at every step.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
}

impl Solution {
    pub fn component(&self, i: usize) -> impl Iterator<Item = f64> + '_ {
        self.y.iter().map(move |s| s[i])
    }

    pub fn last(&self) -> (f64, &[f64]) {
        let n = self.t.len() - 1;
        (self.t[n], &self.y[n])
    }
}

fn axpy(y: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    y.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

pub fn rk4_step<F>(rhs: &F, t: f64, y: &[f64], h: f64) -> Vec<f64>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    let k1 = rhs(t, y);
    let k2 = rhs(t + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = rhs(t + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = rhs(t + h, &axpy(y, h, &k3));
    y.iter()
        .enumerate()
        .map(|(i, v)| v + h * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0)
        .collect()
}

pub fn integrate<F>(p: &OdeProblem<F>) -> Result<Solution>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    integrate_guarded(p, |_, _| Ok(()))
}

/// Like [`integrate`], calling `guard` on every accepted state (including the
/// initial one) so callers can stop on a branch violation.
pub fn integrate_guarded<F, G>(p: &OdeProblem<F>, guard: G) -> Result<Solution>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
    G: Fn(f64, &[f64]) -> Result<()>,
{
    p.validate()?;
    guard(p.t0, &p.y0)?;
    let steps = ((p.t1 - p.t0) / p.h - 1e-9).ceil().max(0.0) as usize;
    let mut t = Vec::with_capacity(steps + 1);
    let mut y = Vec::with_capacity(steps + 1);
    t.push(p.t0);
    y.push(p.y0.clone());
    for i in 0..steps {
        let tc = p.t0 + i as f64 * p.h;
        let tn = if i + 1 == steps {
            p.t1
        } else {
            p.t0 + (i + 1) as f64 * p.h
        };
        let next = rk4_step(&p.rhs, tc, &y[i], tn - tc);
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t: tn });
        }
        let magnitude = next.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if magnitude > BLOWUP {
            return Err(Error::BlowUp { t: tn, magnitude });
        }
        guard(tn, &next)?;
        t.push(tn);
        y.push(next);
    }
    Ok(Solution { t, y })
}
