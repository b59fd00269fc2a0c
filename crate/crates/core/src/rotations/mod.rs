//! Rotations of 3-space and the incidence geometry of the Radon fiber.
//!
//! Convention: a rotation `g` maps specimen coordinates to crystal
//! coordinates, `h = g r`. The active rotation carrying the specimen frame onto
//! the crystal frame is `g.inverse()`.
//!
//! Unit quaternions are canonical. Euler angles (ZYZ) and 3x3 matrices are
//! conversion views only.

mod quadrature;

use std::f64::consts::{PI, TAU};
use std::ops::{Mul, Neg};

use rand::Rng;

use crate::error::{Error, Result};

pub use quadrature::{
    gauss_legendre, s2_quadrature, so3_quadrature, Domain, ProductStructure, QuadratureRule,
};

/// Ratio between the Riemannian volume element `sin β dα dβ dγ` and the Haar
/// probability measure `dg`: `dω = 8π² dg`.
pub const RIEMANNIAN_TO_HAAR: f64 = 8.0 * PI * PI;

/// A direction in 3-space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitVector {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVector {
    pub const E1: UnitVector = UnitVector {
        x: 1.0,
        y: 0.0,
        z: 0.0,
    };
    pub const E2: UnitVector = UnitVector {
        x: 0.0,
        y: 1.0,
        z: 0.0,
    };
    pub const E3: UnitVector = UnitVector {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    /// Normalizes `(x, y, z)`. Fails on zero-length or non-finite input.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !n.is_finite() || n < 1e-300 {
            return Err(Error::InvalidArgument(format!(
                "cannot normalize vector ({x}, {y}, {z})"
            )));
        }
        Ok(UnitVector {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    pub(crate) fn normalized_unchecked(x: f64, y: f64, z: f64) -> Self {
        let n = (x * x + y * y + z * z).sqrt();
        UnitVector {
            x: x / n,
            y: y / n,
            z: z / n,
        }
    }

    /// Direction with polar angle `theta` from e₃ and azimuth `phi`.
    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        UnitVector::normalized_unchecked(st * cp, st * sp, ct)
    }

    /// `(theta, phi)` with `theta ∈ [0, π]`, `phi ∈ [0, 2π)`.
    pub fn to_spherical(&self) -> (f64, f64) {
        let rho = self.x.hypot(self.y);
        let theta = rho.atan2(self.z);
        let phi = if rho == 0.0 {
            0.0
        } else {
            wrap_angle(self.y.atan2(self.x))
        };
        (theta, phi)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let z: f64 = rng.random_range(-1.0..=1.0);
        let phi: f64 = rng.random_range(0.0..TAU);
        let rho = (1.0 - z * z).max(0.0).sqrt();
        UnitVector::normalized_unchecked(rho * phi.cos(), rho * phi.sin(), z)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &UnitVector) -> [f64; 3] {
        [
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        ]
    }

    /// Euclidean distance between the two points on the sphere.
    pub fn distance(&self, other: &UnitVector) -> f64 {
        let d = [self.x - other.x, self.y - other.y, self.z - other.z];
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }
}

impl Neg for UnitVector {
    type Output = UnitVector;

    fn neg(self) -> UnitVector {
        UnitVector {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

/// ZYZ Euler angles: `R_z(alpha) · R_y(beta) · R_z(gamma)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerZYZ {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerZYZ {
    /// Canonicalizes: `alpha, gamma ∈ [0, 2π)`, `beta ∈ [0, π]`. A `beta`
    /// outside `[0, π]` is folded back using `R_y(-β) = R_z(π) R_y(β) R_z(-π)`.
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        let (mut alpha, mut gamma) = (alpha, gamma);
        let mut beta = beta;
        if !(-1e-12..=PI + 1e-12).contains(&beta) {
            beta = beta.rem_euclid(TAU);
            if beta > PI + 1e-12 {
                beta = TAU - beta;
                alpha += PI;
                gamma += PI;
            }
        }
        EulerZYZ {
            alpha: wrap_angle(alpha),
            beta: beta.clamp(0.0, PI),
            gamma: wrap_angle(gamma),
        }
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Element of SO(3) stored as a unit quaternion `(w, x, y, z)`.
///
/// `q` and `-q` are the same rotation; use [`Rotation::approx_eq`] to compare.
#[derive(Clone, Copy, Debug)]
pub struct Rotation {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn from_quaternion(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if !n.is_finite() || n < 1e-300 {
            return Err(Error::InvalidArgument(format!(
                "cannot normalize quaternion ({w}, {x}, {y}, {z})"
            )));
        }
        Ok(Rotation {
            w: w / n,
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    fn normalized(w: f64, x: f64, y: f64, z: f64) -> Self {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        Rotation {
            w: w / n,
            x: x / n,
            y: y / n,
            z: z / n,
        }
    }

    /// Right-handed rotation by `angle` about `axis`.
    pub fn from_axis_angle(axis: &UnitVector, angle: f64) -> Self {
        let (s, c) = (0.5 * angle).sin_cos();
        Rotation::normalized(c, s * axis.x, s * axis.y, s * axis.z)
    }

    pub fn from_euler(e: &EulerZYZ) -> Self {
        let (sb, cb) = (0.5 * e.beta).sin_cos();
        let (ss, cs) = (0.5 * (e.alpha + e.gamma)).sin_cos();
        let (sd, cd) = (0.5 * (e.alpha - e.gamma)).sin_cos();
        Rotation::normalized(cb * cs, -sb * sd, sb * cd, cb * ss)
    }

    /// Canonical ZYZ angles. At gimbal lock (`beta` ∈ {0, π}) only `alpha + gamma`
    /// (resp. `gamma - alpha`) is determined; the returned triple still
    /// reproduces the rotation.
    pub fn to_euler(&self) -> EulerZYZ {
        // w + iz = cos(β/2) e^{i(α+γ)/2},  y + ix = sin(β/2) e^{i(γ-α)/2}
        let a_mod = self.w.hypot(self.z);
        let b_mod = self.y.hypot(self.x);
        let beta = 2.0 * b_mod.atan2(a_mod);
        let arg_a = if a_mod > 1e-15 {
            self.z.atan2(self.w)
        } else {
            0.0
        };
        let arg_b = if b_mod > 1e-15 {
            self.x.atan2(self.y)
        } else {
            0.0
        };
        EulerZYZ::new(arg_a - arg_b, beta, arg_a + arg_b)
    }

    pub fn quaternion(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn inverse(&self) -> Self {
        Rotation {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// `self · other`, renormalized.
    pub fn compose(&self, other: &Rotation) -> Self {
        let (a, b) = (self, other);
        Rotation::normalized(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }

    /// `q v q*`.
    pub fn rotate(&self, v: &UnitVector) -> UnitVector {
        let u = [self.x, self.y, self.z];
        let p = [v.x, v.y, v.z];
        let t = [
            2.0 * (u[1] * p[2] - u[2] * p[1]),
            2.0 * (u[2] * p[0] - u[0] * p[2]),
            2.0 * (u[0] * p[1] - u[1] * p[0]),
        ];
        UnitVector::normalized_unchecked(
            p[0] + self.w * t[0] + (u[1] * t[2] - u[2] * t[1]),
            p[1] + self.w * t[1] + (u[2] * t[0] - u[0] * t[2]),
            p[2] + self.w * t[2] + (u[0] * t[1] - u[1] * t[0]),
        )
    }

    /// Row-major rotation matrix.
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let (w, x, y, z) = (self.w, self.x, self.y, self.z);
        [
            [
                1.0 - 2.0 * (y * y + z * z),
                2.0 * (x * y - w * z),
                2.0 * (x * z + w * y),
            ],
            [
                2.0 * (x * y + w * z),
                1.0 - 2.0 * (x * x + z * z),
                2.0 * (y * z - w * x),
            ],
            [
                2.0 * (x * z - w * y),
                2.0 * (y * z + w * x),
                1.0 - 2.0 * (x * x + y * y),
            ],
        ]
    }

    /// Rotation angle in `[0, π]`.
    pub fn angle(&self) -> f64 {
        let v = (self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        2.0 * v.atan2(self.w.abs())
    }

    /// Geodesic distance `angle(self⁻¹ · other)`.
    pub fn distance(&self, other: &Rotation) -> f64 {
        self.inverse().compose(other).angle()
    }

    pub fn approx_eq(&self, other: &Rotation, tol: f64) -> bool {
        let d = self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z;
        let a = [self.w, self.x, self.y, self.z];
        let b = [other.w, other.x, other.y, other.z];
        let s = if d < 0.0 { -1.0 } else { 1.0 };
        a.iter()
            .zip(b.iter())
            .all(|(p, q)| (p - s * q).abs() <= tol)
    }

    /// Haar-uniform random rotation (Shoemake's subgroup algorithm).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let u1: f64 = rng.random();
        let u2: f64 = rng.random_range(0.0..TAU);
        let u3: f64 = rng.random_range(0.0..TAU);
        let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
        Rotation::normalized(b * u3.cos(), a * u2.sin(), a * u2.cos(), b * u3.sin())
    }

    #[cfg(test)]
    pub(crate) fn norm(&self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

impl Mul for Rotation {
    type Output = Rotation;

    fn mul(self, rhs: Rotation) -> Rotation {
        self.compose(&rhs)
    }
}

pub fn euler_to_rotation(e: &EulerZYZ) -> Rotation {
    Rotation::from_euler(&EulerZYZ::new(e.alpha, e.beta, e.gamma))
}

pub fn rotate(g: &Rotation, v: &UnitVector) -> UnitVector {
    g.rotate(v)
}

/// Base point of the fiber `{g : g r = h}`: the rotation about `r × h` by the
/// angle between `r` and `h`.
///
/// For `h = -r` (within 1e-9) the axis is the projection of e₁ orthogonal to
/// `r`, or of e₂ when `|r · e₁| > 1 - 1e-6`.
pub fn fiber_base(h: &UnitVector, r: &UnitVector) -> Rotation {
    let sum = [r.x + h.x, r.y + h.y, r.z + h.z];
    // 1 + r·h without cancellation
    let one_plus_c = 0.5 * (sum[0] * sum[0] + sum[1] * sum[1] + sum[2] * sum[2]);
    let axis = r.cross(h);
    let s = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if one_plus_c < 0.5 && s < 1e-9 {
        let e = if r.x.abs() > 1.0 - 1e-6 {
            UnitVector::E2
        } else {
            UnitVector::E1
        };
        let d = r.dot(&e);
        let perp = UnitVector::normalized_unchecked(e.x - d * r.x, e.y - d * r.y, e.z - d * r.z);
        return Rotation::from_axis_angle(&perp, PI);
    }
    let k = 1.0 / (2.0 * one_plus_c).sqrt();
    Rotation::normalized(
        (0.5 * one_plus_c).sqrt(),
        axis[0] * k,
        axis[1] * k,
        axis[2] * k,
    )
}

/// Point `t` of the fiber `{g : g r = h}`: `g(t) = g₀ · Rot(r, t)`.
///
/// The fiber is traced exactly once as `t` sweeps `[0, 2π)`.
pub fn fiber_rotation(h: &UnitVector, r: &UnitVector, t: f64) -> Rotation {
    fiber_base(h, r).compose(&Rotation::from_axis_angle(r, t))
}
