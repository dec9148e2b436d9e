//! Affine model of the pseudo-Galilean space.
//!
//! Points carry an absolute coordinate `x` and a transverse pair `(y, z)`.
//! Vectors lying in the plane `x = 0` are called isotropic and inherit the
//! Minkowskian form `y² − z²` of that plane. Distance is measured along `x`
//! whenever two points differ there, and with the Minkowskian form otherwise.
//!
//! The motion group has six parameters: translations `a1, a2, a4`, the
//! shears `a3, a5` of `y, z` along `x`, and a hyperbolic rotation by `theta`
//! in the `(y, z)` plane.

use serde::{Deserialize, Serialize};

/// Scale-aware deadband used to call a vector lightlike.
pub const LIGHTLIKE_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PGPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl PGPoint {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl From<[f64; 3]> for PGPoint {
    fn from(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

/// Vector in the pseudo-Euclidean plane `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct IsoVector {
    pub y: f64,
    pub z: f64,
}

impl IsoVector {
    pub const fn new(y: f64, z: f64) -> Self {
        Self { y, z }
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.y * s, self.z * s)
    }

    pub fn dot(self, other: Self) -> f64 {
        minkowski_dot(self, other)
    }

    pub fn causal_character(self) -> CausalCharacter {
        causal_character(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
    Lightlike,
}

/// Minkowskian product on `x = 0` with signature `(+, −)` on `(y, z)`.
pub fn minkowski_dot(u: IsoVector, v: IsoVector) -> f64 {
    u.y * v.y - u.z * v.z
}

pub fn causal_character(u: IsoVector) -> CausalCharacter {
    let q = minkowski_dot(u, u);
    let scale = (u.y * u.y + u.z * u.z).max(1.0);
    if q.abs() <= LIGHTLIKE_REL_TOL * scale {
        CausalCharacter::Lightlike
    } else if q > 0.0 {
        CausalCharacter::Spacelike
    } else {
        CausalCharacter::Timelike
    }
}

pub fn pg_distance(a: PGPoint, b: PGPoint) -> f64 {
    if a.x != b.x {
        (b.x - a.x).abs()
    } else {
        let dy = b.y - a.y;
        let dz = b.z - a.z;
        (dy * dy - dz * dz).abs().sqrt()
    }
}

/// Element of the six-parameter motion group.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Motion {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
    /// Hyperbolic angle of the rotation in the `(y, z)` plane.
    pub theta: f64,
}

impl Motion {
    pub const IDENTITY: Motion = Motion {
        a1: 0.0,
        a2: 0.0,
        a3: 0.0,
        a4: 0.0,
        a5: 0.0,
        theta: 0.0,
    };

    pub fn new(a1: f64, a2: f64, a3: f64, a4: f64, a5: f64, theta: f64) -> Self {
        Self {
            a1,
            a2,
            a3,
            a4,
            a5,
            theta,
        }
    }

    pub fn apply(&self, p: PGPoint) -> PGPoint {
        apply_motion(self, p)
    }

    /// Linear part acting on a tangent vector `(dx, dy, dz)`.
    pub fn apply_linear(&self, v: [f64; 3]) -> [f64; 3] {
        let (s, c) = (self.theta.sinh(), self.theta.cosh());
        [
            v[0],
            self.a3 * v[0] + c * v[1] + s * v[2],
            self.a5 * v[0] + s * v[1] + c * v[2],
        ]
    }

    /// Restriction of the linear part to isotropic vectors: a hyperbolic rotation.
    pub fn rotate_isotropic(&self, v: IsoVector) -> IsoVector {
        let w = self.apply_linear([0.0, v.y, v.z]);
        IsoVector::new(w[1], w[2])
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Motion) -> Motion {
        let (s2, c2) = (self.theta.sinh(), self.theta.cosh());
        Motion {
            a1: self.a1 + first.a1,
            a2: self.a2 + self.a3 * first.a1 + c2 * first.a2 + s2 * first.a4,
            a3: self.a3 + c2 * first.a3 + s2 * first.a5,
            a4: self.a4 + self.a5 * first.a1 + s2 * first.a2 + c2 * first.a4,
            a5: self.a5 + s2 * first.a3 + c2 * first.a5,
            theta: self.theta + first.theta,
        }
    }
}

pub fn apply_motion(m: &Motion, p: PGPoint) -> PGPoint {
    let (s, c) = (m.theta.sinh(), m.theta.cosh());
    PGPoint {
        x: m.a1 + p.x,
        y: m.a2 + m.a3 * p.x + c * p.y + s * p.z,
        z: m.a4 + m.a5 * p.x + s * p.y + c * p.z,
    }
}
