//! The Radon transform on SO(3): geometric (fiber quadrature), harmonic,
//! dual, and the great-circle form on the unit quaternions.
//!
//! Normalization: `Rf(h, r)` is the mean of `f` over the fiber
//! `{g : g r = h}` with respect to arc length, so `R1 = 1`. In terms of the
//! Riemannian volume this is `(1/2π) ∫_fiber f dω` where the fiber, as a curve in
//! the group with its bi-invariant metric of total volume `8π²`, has length
//! `2π`. With the S²×S² pairing of [`crate::harmonics`] the transform is
//! blockwise `Ĉ_l = f̂_l / 4π`.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul};

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::harmonics::{HarmonicCoeffsSO3, PairHarmonicCoeffs};
use crate::rotations::{fiber_base, s2_quadrature, Rotation, UnitVector};

pub const DEFAULT_FIBER_NODES: usize = 256;

/// Value type of functions being integrated (real or complex).
pub trait Sample: Copy + Send + Sync + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn is_finite_value(&self) -> bool;
}

impl Sample for f64 {
    fn zero() -> Self {
        0.0
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Sample for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

/// One value of `Rf`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadonSample {
    pub h: UnitVector,
    pub r: UnitVector,
    pub value: f64,
}

fn check_nodes(nodes: usize) -> Result<()> {
    if nodes < 4 {
        return Err(Error::InvalidArgument(format!(
            "fiber quadrature needs at least 4 nodes, got {nodes}"
        )));
    }
    Ok(())
}

fn average<T: Sample>(
    nodes: usize,
    context: &'static str,
    mut value_at: impl FnMut(usize) -> T,
) -> Result<T> {
    let mut acc = T::zero();
    for j in 0..nodes {
        let v = value_at(j);
        if !v.is_finite_value() {
            return Err(Error::NonFinite { node: j, context });
        }
        acc = acc + v;
    }
    Ok(acc * (1.0 / nodes as f64))
}

/// Trapezoid rule on the closed fiber `{g : g r = h}` with `nodes` equispaced
/// points. Exact for band-limited `f` once `nodes > L`.
pub fn radon_geometric<T: Sample>(
    f: impl Fn(&Rotation) -> T,
    h: &UnitVector,
    r: &UnitVector,
    nodes: usize,
) -> Result<T> {
    check_nodes(nodes)?;
    let base = fiber_base(h, r);
    average(nodes, "radon_geometric", |j| {
        let t = TAU * j as f64 / nodes as f64;
        f(&base.compose(&Rotation::from_axis_angle(r, t)))
    })
}

/// `Rf` evaluated for a whole batch of incidence pairs.
pub fn radon_samples(
    f: impl Fn(&Rotation) -> f64,
    pairs: &[(UnitVector, UnitVector)],
    nodes: usize,
) -> Result<Vec<RadonSample>> {
    pairs
        .iter()
        .map(|(h, r)| {
            radon_geometric(&f, h, r, nodes).map(|value| RadonSample {
                h: *h,
                r: *r,
                value,
            })
        })
        .collect()
}

/// Harmonic form of the Radon transform: `Ĉ_l = f̂_l / 4π` for every degree.
pub fn radon_harmonic(c: &HarmonicCoeffsSO3) -> PairHarmonicCoeffs {
    let mut out = PairHarmonicCoeffs::zeros_unchecked(c.bandlimit());
    let s = 1.0 / (4.0 * PI);
    for (dst, src) in out.as_mut_slice().iter_mut().zip(c.as_slice()) {
        *dst = *src * s;
    }
    out
}

/// Dual transform: mean of `F(h, g⁻¹h)` over `h ∈ S²` (total mass 1), using
/// the S² product rule exact to degree `degree`.
pub fn dual_radon<T: Sample>(
    f: impl Fn(&UnitVector, &UnitVector) -> T,
    g: &Rotation,
    degree: usize,
) -> Result<T> {
    let rule = s2_quadrature(degree)?;
    let ginv = g.inverse();
    let mut acc = T::zero();
    for (j, (h, w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        let v = f(h, &ginv.rotate(h));
        if !v.is_finite_value() {
            return Err(Error::NonFinite {
                node: j,
                context: "dual_radon",
            });
        }
        acc = acc + v * *w;
    }
    Ok(acc * (1.0 / (4.0 * PI)))
}

fn left_mul(p: &UnitVector) -> Matrix4<f64> {
    let (x, y, z) = (p.x(), p.y(), p.z());
    Matrix4::new(
        0.0, -x, -y, -z, //
        x, 0.0, -z, y, //
        y, z, 0.0, -x, //
        z, -y, x, 0.0,
    )
}

fn right_mul(p: &UnitVector) -> Matrix4<f64> {
    let (x, y, z) = (p.x(), p.y(), p.z());
    Matrix4::new(
        0.0, -x, -y, -z, //
        x, 0.0, z, -y, //
        y, -z, 0.0, x, //
        z, y, -x, 0.0,
    )
}

/// Orthonormal basis `(u, v)` of the 2-plane `{q ∈ ℝ⁴ : h q = q r}`. Its
/// intersection with S³ is the great circle of unit quaternions covering the
/// fiber `{g : g r = h}` twice.
pub fn great_circle_basis(h: &UnitVector, r: &UnitVector) -> ([f64; 4], [f64; 4]) {
    let m = left_mul(h) - right_mul(r);
    let eig = SymmetricEigen::new(m.transpose() * m);
    let mut idx = [0usize, 1, 2, 3];
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let u: Vector4<f64> = eig.eigenvectors.column(idx[0]).normalize();
    let mut v: Vector4<f64> = eig.eigenvectors.column(idx[1]).into_owned();
    v -= u * u.dot(&v);
    let v = v.normalize();
    ([u[0], u[1], u[2], u[3]], [v[0], v[1], v[2], v[3]])
}

/// Mean of `f` over the great circle of S³ lying over the fiber, with
/// `nodes` equispaced points in arc length. Independent of
/// [`radon_geometric`]; the two must agree.
pub fn s3_circle_integral<T: Sample>(
    f: impl Fn(&Rotation) -> T,
    h: &UnitVector,
    r: &UnitVector,
    nodes: usize,
) -> Result<T> {
    check_nodes(nodes)?;
    let (u, v) = great_circle_basis(h, r);
    average(nodes, "s3_circle_integral", |j| {
        let (s, c) = (TAU * j as f64 / nodes as f64).sin_cos();
        let q = Rotation::from_quaternion(
            c * u[0] + s * v[0],
            c * u[1] + s * v[1],
            c * u[2] + s * v[2],
            c * u[3] + s * v[3],
        )
        .expect("great-circle point has unit norm");
        f(&q)
    })
}
