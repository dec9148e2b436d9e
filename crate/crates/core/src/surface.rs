//! Curvature pipeline for immersed surfaces.
//!
//! Everything here is computed from a [`Jet2`], the value and first and
//! second partials of an immersion `r(u1, u2) = (x, y, z)` at one parameter
//! point. The chain is
//!
//! ```text
//! Jet2 -> (g_i, h_ij) -> W, S, ε, N -> L_ij -> K, H
//! ```
//!
//! where `g_i = x_{,i}` are the isotropic-direction coefficients, `W` is the
//! norm of the side tangent `x_{,1} r_{,2} − x_{,2} r_{,1}`, `ε = S·S` and
//! `N` is the isotropic normal with `N·N = −ε`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{minkowski_dot, IsoVector, Motion, PGPoint};

/// A surface point is lightlike when `W` falls below this.
pub const LIGHTLIKE_W_TOL: f64 = 1e-10;
/// `g_i` below this counts as zero for admissibility.
pub const ADMISSIBLE_TOL: f64 = 1e-12;
/// Default relative step of central finite differences.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Second-order jet of an immersion at a parameter point.
///
/// Every slot is an `(x, y, z)` triple; `r12` serves both mixed partials.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Jet2 {
    pub r: [f64; 3],
    pub r1: [f64; 3],
    pub r2: [f64; 3],
    pub r11: [f64; 3],
    pub r12: [f64; 3],
    pub r22: [f64; 3],
}

impl Jet2 {
    pub fn is_finite(&self) -> bool {
        [self.r, self.r1, self.r2, self.r11, self.r12, self.r22]
            .iter()
            .flatten()
            .all(|v| v.is_finite())
    }

    pub fn position(&self) -> PGPoint {
        PGPoint::from(self.r)
    }

    /// Jet of `m ∘ r` at the same parameter point.
    pub fn moved(&self, m: &Motion) -> Jet2 {
        Jet2 {
            r: m.apply(self.position()).to_array(),
            r1: m.apply_linear(self.r1),
            r2: m.apply_linear(self.r2),
            r11: m.apply_linear(self.r11),
            r12: m.apply_linear(self.r12),
            r22: m.apply_linear(self.r22),
        }
    }

    fn second(&self, i: usize, j: usize) -> [f64; 3] {
        match (i, j) {
            (1, 1) => self.r11,
            (2, 2) => self.r22,
            _ => self.r12,
        }
    }

    /// Components `x_1 y_2 − x_2 y_1` and `x_1 z_2 − x_2 z_1` of the side tangent.
    fn side_tangent(&self) -> IsoVector {
        let (a, b) = (self.r1, self.r2);
        IsoVector::new(a[0] * b[1] - b[0] * a[1], a[0] * b[2] - b[0] * a[2])
    }
}

/// Whether a direction `du1 : du2` is isotropic; selects `ω` in the first form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Isotropic,
    NonIsotropic,
}

impl Direction {
    pub fn omega(self) -> f64 {
        match self {
            Direction::Isotropic => 1.0,
            Direction::NonIsotropic => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstForm {
    pub g1: f64,
    pub g2: f64,
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
    pub omega: f64,
}

impl FirstForm {
    /// `ds²` along `(du1, du2)`.
    pub fn ds2(&self, du1: f64, du2: f64) -> f64 {
        let lin = self.g1 * du1 + self.g2 * du2;
        lin * lin
            + self.omega
                * (self.h11 * du1 * du1 + 2.0 * self.h12 * du1 * du2 + self.h22 * du2 * du2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalData {
    pub g1: f64,
    pub g2: f64,
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
    pub w: f64,
    /// `+1` spacelike, `−1` timelike.
    pub epsilon: f64,
    pub s: IsoVector,
    pub normal: IsoVector,
    pub l11: f64,
    pub l12: f64,
    pub l22: f64,
}

impl FundamentalData {
    pub fn gaussian(&self) -> f64 {
        -self.epsilon * (self.l11 * self.l22 - self.l12 * self.l12) / (self.w * self.w)
    }

    pub fn mean(&self) -> f64 {
        let (g1, g2) = (self.g1, self.g2);
        -self.epsilon * (g2 * g2 * self.l11 - 2.0 * g1 * g2 * self.l12 + g1 * g1 * self.l22)
            / (2.0 * self.w * self.w)
    }
}

pub fn admissible(j: &Jet2) -> bool {
    j.r1[0].abs() > ADMISSIBLE_TOL || j.r2[0].abs() > ADMISSIBLE_TOL
}

pub fn first_form(j: &Jet2, direction: Direction) -> FirstForm {
    let (r1, r2) = (j.r1, j.r2);
    FirstForm {
        g1: r1[0],
        g2: r2[0],
        h11: r1[1] * r1[1] + r1[2] * r1[2],
        h12: r1[1] * r2[1] + r1[2] * r2[2],
        h22: r2[1] * r2[1] + r2[2] * r2[2],
        omega: direction.omega(),
    }
}

/// Unchecked `W`; zero on lightlike points.
pub fn side_norm_raw(j: &Jet2) -> f64 {
    let t = j.side_tangent();
    minkowski_dot(t, t).abs().sqrt()
}

pub fn side_norm_w(j: &Jet2) -> Result<f64> {
    let w = side_norm_raw(j);
    if w < LIGHTLIKE_W_TOL || !w.is_finite() {
        Err(Error::LightlikeSurface { w })
    } else {
        Ok(w)
    }
}

/// `ε = S·S` rounded to `±1` together with the isotropic normal `N`.
pub fn epsilon_and_normal(j: &Jet2) -> Result<(f64, IsoVector)> {
    let w = side_norm_w(j)?;
    let t = j.side_tangent();
    let s = t.scale(1.0 / w);
    let epsilon = if minkowski_dot(s, s) > 0.0 { 1.0 } else { -1.0 };
    Ok((epsilon, IsoVector::new(t.z / w, t.y / w)))
}

/// Which `g_i` divides in the second-form coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    G1,
    G2,
}

/// `L_ij` through an explicit branch.
pub fn second_form_branch(
    j: &Jet2,
    epsilon: f64,
    normal: IsoVector,
    branch: Branch,
) -> Result<[f64; 3]> {
    let k = match branch {
        Branch::G1 => 1,
        Branch::G2 => 2,
    };
    let gk = if k == 1 { j.r1[0] } else { j.r2[0] };
    if gk.abs() <= ADMISSIBLE_TOL {
        return Err(Error::InadmissiblePatch);
    }
    let rk = if k == 1 { j.r1 } else { j.r2 };
    let coeff = |a: usize, b: usize| {
        let rab = j.second(a, b);
        let v = IsoVector::new(gk * rab[1] - rab[0] * rk[1], gk * rab[2] - rab[0] * rk[2]);
        epsilon / gk * minkowski_dot(v, normal)
    };
    Ok([coeff(1, 1), coeff(1, 2), coeff(2, 2)])
}

/// `L_ij` using the branch with the larger `|g_i|`.
pub fn second_form(j: &Jet2, epsilon: f64, normal: IsoVector) -> Result<[f64; 3]> {
    if !admissible(j) {
        return Err(Error::InadmissiblePatch);
    }
    let branch = if j.r1[0].abs() >= j.r2[0].abs() {
        Branch::G1
    } else {
        Branch::G2
    };
    second_form_branch(j, epsilon, normal, branch)
}

pub fn fundamental_data(j: &Jet2) -> Result<FundamentalData> {
    if !admissible(j) {
        return Err(Error::InadmissiblePatch);
    }
    let w = side_norm_w(j)?;
    let (epsilon, normal) = epsilon_and_normal(j)?;
    let [l11, l12, l22] = second_form(j, epsilon, normal)?;
    let ff = first_form(j, Direction::NonIsotropic);
    Ok(FundamentalData {
        g1: ff.g1,
        g2: ff.g2,
        h11: ff.h11,
        h12: ff.h12,
        h22: ff.h22,
        w,
        epsilon,
        s: j.side_tangent().scale(1.0 / w),
        normal,
        l11,
        l12,
        l22,
    })
}

pub fn gaussian_curvature(j: &Jet2) -> Result<f64> {
    fundamental_data(j).map(|d| d.gaussian())
}

pub fn mean_curvature(j: &Jet2) -> Result<f64> {
    fundamental_data(j).map(|d| d.mean())
}

/// A parametrized surface that can be sampled at arbitrary parameters.
///
/// Implementations must be pure so grids can be swept in parallel.
pub trait Immersion: Send + Sync {
    fn position(&self, u1: f64, u2: f64) -> [f64; 3];

    /// Jet from closed-form derivatives. The default falls back to finite
    /// differences of [`Immersion::position`].
    fn jet(&self, u1: f64, u2: f64) -> Jet2 {
        finite_difference_jet(self, u1, u2, DEFAULT_FD_STEP)
    }
}

impl<T: Immersion + ?Sized> Immersion for &T {
    fn position(&self, u1: f64, u2: f64) -> [f64; 3] {
        (**self).position(u1, u2)
    }

    fn jet(&self, u1: f64, u2: f64) -> Jet2 {
        (**self).jet(u1, u2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum DerivativeMode {
    #[default]
    Analytic,
    FiniteDifference {
        /// Relative step; the absolute step is `step · max(1, |u|)`.
        step: f64,
    },
}

impl DerivativeMode {
    pub fn finite_difference() -> Self {
        DerivativeMode::FiniteDifference {
            step: DEFAULT_FD_STEP,
        }
    }
}

pub fn evaluate_jet<S: Immersion + ?Sized>(s: &S, u1: f64, u2: f64, mode: DerivativeMode) -> Jet2 {
    match mode {
        DerivativeMode::Analytic => s.jet(u1, u2),
        DerivativeMode::FiniteDifference { step } => finite_difference_jet(s, u1, u2, step),
    }
}

/// Central differences with nested central differences for second partials.
pub fn finite_difference_jet<S: Immersion + ?Sized>(s: &S, u1: f64, u2: f64, step: f64) -> Jet2 {
    let h1 = step * u1.abs().max(1.0);
    let h2 = step * u2.abs().max(1.0);
    let p = |a: f64, b: f64| s.position(a, b);
    let r = p(u1, u2);
    let (xp, xm) = (p(u1 + h1, u2), p(u1 - h1, u2));
    let (yp, ym) = (p(u1, u2 + h2), p(u1, u2 - h2));
    let (pp, pm) = (p(u1 + h1, u2 + h2), p(u1 + h1, u2 - h2));
    let (mp, mm) = (p(u1 - h1, u2 + h2), p(u1 - h1, u2 - h2));
    let mut jet = Jet2 {
        r,
        ..Jet2::default()
    };
    for k in 0..3 {
        jet.r1[k] = (xp[k] - xm[k]) / (2.0 * h1);
        jet.r2[k] = (yp[k] - ym[k]) / (2.0 * h2);
        jet.r11[k] = (xp[k] - 2.0 * r[k] + xm[k]) / (h1 * h1);
        jet.r22[k] = (yp[k] - 2.0 * r[k] + ym[k]) / (h2 * h2);
        jet.r12[k] = (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * h1 * h2);
    }
    jet
}

/// `m ∘ s`, sampled at the same parameters as `s`.
#[derive(Debug, Clone)]
pub struct Moved<S> {
    pub surface: S,
    pub motion: Motion,
}

impl<S: Immersion> Immersion for Moved<S> {
    fn position(&self, u1: f64, u2: f64) -> [f64; 3] {
        self.motion
            .apply(PGPoint::from(self.surface.position(u1, u2)))
            .to_array()
    }

    fn jet(&self, u1: f64, u2: f64) -> Jet2 {
        self.surface.jet(u1, u2).moved(&self.motion)
    }
}

/// Closure-backed immersion with positions only.
pub struct FnSurface<F>(pub F);

impl<F> Immersion for FnSurface<F>
where
    F: Fn(f64, f64) -> [f64; 3] + Send + Sync,
{
    fn position(&self, u1: f64, u2: f64) -> [f64; 3] {
        (self.0)(u1, u2)
    }
}

/// The plane `(u1, u2, 0)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Plane;

impl Immersion for Plane {
    fn position(&self, u1: f64, u2: f64) -> [f64; 3] {
        [u1, u2, 0.0]
    }

    fn jet(&self, u1: f64, u2: f64) -> Jet2 {
        Jet2 {
            r: [u1, u2, 0.0],
            r1: [1.0, 0.0, 0.0],
            r2: [0.0, 1.0, 0.0],
            ..Jet2::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Jet of `(x, y, f(x) g(y))` from hand-differentiated values.
    fn graph_jet(fv: [f64; 3], gv: [f64; 3], x: f64, y: f64) -> Jet2 {
        let ([f, f1, f2], [g, g1, g2]) = (fv, gv);
        Jet2 {
            r: [x, y, f * g],
            r1: [1.0, 0.0, f1 * g],
            r2: [0.0, 1.0, f * g1],
            r11: [0.0, 0.0, f2 * g],
            r12: [0.0, 0.0, f1 * g1],
            r22: [0.0, 0.0, f * g2],
        }
    }

    /// Jet of `(f(y) g(z), y, z)`.
    fn second_kind_jet(fv: [f64; 3], gv: [f64; 3], y: f64, z: f64) -> Jet2 {
        let ([f, f1, f2], [g, g1, g2]) = (fv, gv);
        Jet2 {
            r: [f * g, y, z],
            r1: [f1 * g, 1.0, 0.0],
            r2: [f * g1, 0.0, 1.0],
            r11: [f2 * g, 0.0, 0.0],
            r12: [f1 * g1, 0.0, 0.0],
            r22: [f * g2, 0.0, 0.0],
        }
    }

    #[test]
    fn admissibility() {
        assert!(admissible(&Plane.jet(0.2, 0.3)));
        let flat_x = Jet2 {
            r1: [0.0, 1.0, 0.0],
            r2: [0.0, 0.0, 1.0],
            ..Jet2::default()
        };
        assert!(!admissible(&flat_x));
        // x = y z at the origin: both f'g and fg' vanish
        assert!(!admissible(&second_kind_jet([0.0, 1.0, 0.0], [0.0, 1.0, 0.0], 0.0, 0.0)));
        assert!(admissible(&second_kind_jet([1.0, 1.0, 0.0], [0.0, 1.0, 0.0], 1.0, 0.0)));
    }

    #[test]
    fn first_form_of_graph() {
        // f = x², g = y³ at (0.5, 0.7)
        let (x, y) = (0.5f64, 0.7f64);
        let (f, f1) = (x * x, 2.0 * x);
        let (g, g1) = (y.powi(3), 3.0 * y * y);
        let j = graph_jet([f, f1, 2.0], [g, g1, 6.0 * y], x, y);
        let ff = first_form(&j, Direction::NonIsotropic);
        assert_eq!((ff.g1, ff.g2), (1.0, 0.0));
        assert!((ff.h11 - (f1 * g).powi(2)).abs() < 1e-15);
        assert!((ff.h12 - f1 * g * f * g1).abs() < 1e-15);
        assert!((ff.h22 - (1.0 + (f * g1).powi(2))).abs() < 1e-15);

        let p = first_form(&Plane.jet(1.0, 2.0), Direction::Isotropic);
        assert_eq!((p.g1, p.g2, p.h11, p.h12, p.h22), (1.0, 0.0, 0.0, 0.0, 1.0));
        // along du1 = 0 only the ω-term survives
        assert_eq!(p.ds2(0.0, 3.0), 9.0);
        let n = first_form(&Plane.jet(1.0, 2.0), Direction::NonIsotropic);
        assert_eq!(n.ds2(0.0, 3.0), 0.0);
        assert_eq!(n.ds2(2.0, 3.0), 4.0);
    }

    #[test]
    fn w_epsilon_normal_on_graphs() {
        // f g' = 0.6 → W = 0.8, spacelike
        let j = graph_jet([0.6, 0.1, 0.0], [1.0, 1.0, 0.0], 0.0, 1.0);
        assert!((side_norm_w(&j).unwrap() - 0.8).abs() < 1e-15);
        let (eps, n) = epsilon_and_normal(&j).unwrap();
        assert_eq!(eps, 1.0);
        assert!((n.dot(n) + eps).abs() < 1e-12);

        // f g' = 2 → timelike
        let j = graph_jet([2.0, 0.0, 0.0], [1.0, 1.0, 0.0], 0.0, 1.0);
        let (eps, n) = epsilon_and_normal(&j).unwrap();
        assert_eq!(eps, -1.0);
        assert!((n.dot(n) + eps).abs() < 1e-12);

        // z = xy at the origin
        let j = graph_jet([0.0, 1.0, 0.0], [0.0, 1.0, 0.0], 0.0, 0.0);
        assert_eq!(side_norm_w(&j).unwrap(), 1.0);

        // z = x + y·(f g' = 1): lightlike
        let j = graph_jet([1.0, 0.0, 0.0], [1.0, 1.0, 0.0], 0.0, 1.0);
        assert!(matches!(side_norm_w(&j), Err(Error::LightlikeSurface { .. })));
        assert!(matches!(gaussian_curvature(&j), Err(Error::LightlikeSurface { .. })));
        assert!(matches!(mean_curvature(&j), Err(Error::LightlikeSurface { .. })));

        let (eps, n) = epsilon_and_normal(&Plane.jet(0.0, 0.0)).unwrap();
        assert_eq!(eps, 1.0);
        assert_eq!(n, IsoVector::new(0.0, 1.0));
        assert_eq!(n.dot(n), -1.0);
    }

    #[test]
    fn second_form_of_graph_is_normal_pairing() {
        // f = sin, g = exp at (0.3, -0.2); g1 = 1 so L_ij = ε (0, 0, z_ij)·N
        let (x, y) = (0.3f64, -0.2f64);
        let fv = [x.sin(), x.cos(), -x.sin()];
        let gv = [y.exp(); 3];
        let j = graph_jet(fv, gv, x, y);
        let (eps, n) = epsilon_and_normal(&j).unwrap();
        let l = second_form(&j, eps, n).unwrap();
        let z = [j.r11[2], j.r12[2], j.r22[2]];
        for k in 0..3 {
            let expected = eps * minkowski_dot(IsoVector::new(0.0, z[k]), n);
            assert!((l[k] - expected).abs() < 1e-14);
        }
        assert_eq!(second_form(&Plane.jet(0.0, 0.0), 1.0, IsoVector::new(0.0, 1.0)).unwrap(), [0.0; 3]);
    }

    #[test]
    fn second_form_branches_agree_on_second_kind() {
        for &(y, z) in &[(0.3, 1.1), (-0.7, 0.4), (1.5, -0.9), (0.2, 2.0)] {
            let fv = [y * y + 1.0, 2.0 * y, 2.0];
            let gv = [(0.5f64 * z).exp(), 0.5 * (0.5f64 * z).exp(), 0.25 * (0.5f64 * z).exp()];
            let j = second_kind_jet(fv, gv, y, z);
            let (eps, n) = epsilon_and_normal(&j).unwrap();
            let a = second_form_branch(&j, eps, n, Branch::G1).unwrap();
            let b = second_form_branch(&j, eps, n, Branch::G2).unwrap();
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() < 1e-9, "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn saddle_and_plane_curvature() {
        // z = xy at the origin. The general formula carries −ε, so a spacelike
        // saddle measures +1 here where the factorable formula gives −1.
        let j = graph_jet([0.0, 1.0, 0.0], [0.0, 1.0, 0.0], 0.0, 0.0);
        assert!((gaussian_curvature(&j).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(mean_curvature(&j).unwrap(), 0.0);
        let p = Plane.jet(0.4, -2.0);
        assert_eq!(gaussian_curvature(&p).unwrap(), 0.0);
        assert_eq!(mean_curvature(&p).unwrap(), 0.0);
    }

    #[test]
    fn saddle_is_minimal_everywhere_admissible() {
        for &(x, y) in &[(0.3, 0.2), (-0.8, 1.4), (1.7, -0.3), (2.5, 2.5)] {
            let j = graph_jet([x, 1.0, 0.0], [y, 1.0, 0.0], x, y);
            assert_eq!(mean_curvature(&j).unwrap(), 0.0);
        }
    }

    #[test]
    fn normal_norm_and_side_tangent() {
        for &(y, z) in &[(0.3f64, 1.1f64), (1.2, 0.1), (-2.0, 0.5)] {
            let fv = [y.exp(), y.exp(), y.exp()];
            let gv = [z * z + 0.5, 2.0 * z, 2.0];
            let d = fundamental_data(&second_kind_jet(fv, gv, y, z)).unwrap();
            assert!((d.s.dot(d.s) - d.epsilon).abs() < 1e-9);
            assert!((d.normal.dot(d.normal) + d.epsilon).abs() < 1e-9);
        }
    }

    #[test]
    fn finite_difference_matches_analytic() {
        let s = FnSurface(|u: f64, v: f64| [u, v, u.sin() * v.cosh()]);
        let (u, v) = (0.4, 0.3);
        let j = finite_difference_jet(&s, u, v, DEFAULT_FD_STEP);
        let exact = graph_jet([u.sin(), u.cos(), -u.sin()], [v.cosh(), v.sinh(), v.cosh()], u, v);
        for (a, b) in [
            (j.r1, exact.r1),
            (j.r2, exact.r2),
            (j.r11, exact.r11),
            (j.r12, exact.r12),
            (j.r22, exact.r22),
        ] {
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() < 1e-6, "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn inadmissible_second_form() {
        let j = Jet2 {
            r1: [0.0, 1.0, 0.0],
            r2: [0.0, 0.0, 1.0],
            ..Jet2::default()
        };
        assert_eq!(
            second_form(&j, 1.0, IsoVector::new(0.0, 1.0)),
            Err(Error::InadmissiblePatch)
        );
        assert_eq!(fundamental_data(&j).unwrap_err(), Error::InadmissiblePatch);
    }
}
