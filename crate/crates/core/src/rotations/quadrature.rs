//! Product quadrature on S² and SO(3).
//!
//! Both rules are Gauss–Legendre in the cosine of the polar angle times
//! uniform rules in the azimuthal angle(s). A rule of band limit `B` has
//! `B/2 + 1` polar nodes and `B + 1` azimuthal nodes per azimuthal angle, which
//! integrates every harmonic of degree `<= B` exactly.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::{Arc, Mutex, OnceLock};

use super::{EulerZYZ, UnitVector};
use crate::error::Result;
use crate::limits::check_quadrature_bandlimit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    S2,
    SO3,
}

/// Tensor structure of a product rule. Nodes are ordered polar-major, then
/// the first azimuthal angle, then the second (`n_inner == 1` on S²).
#[derive(Clone, Debug)]
pub struct ProductStructure {
    pub polar: Vec<f64>,
    pub polar_weights: Vec<f64>,
    pub n_outer: usize,
    pub n_inner: usize,
}

#[derive(Clone, Debug)]
pub struct QuadratureRule<P> {
    pub domain: Domain,
    pub nodes: Vec<P>,
    pub weights: Vec<f64>,
    pub bandlimit: usize,
    pub structure: ProductStructure,
}

impl<P> QuadratureRule<P> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn polar_rule(bandlimit: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(bandlimit / 2 + 1);
    // descending cosine ⇒ ascending polar angle
    let angles = x.iter().rev().map(|c| c.clamp(-1.0, 1.0).acos()).collect();
    let weights = w.into_iter().rev().collect();
    (angles, weights)
}

fn build_so3(bandlimit: usize) -> QuadratureRule<EulerZYZ> {
    let (betas, bw) = polar_rule(bandlimit);
    let n = bandlimit + 1;
    let scale = 0.5 / (n * n) as f64;
    let mut nodes = Vec::with_capacity(betas.len() * n * n);
    let mut weights = Vec::with_capacity(nodes.capacity());
    for (&beta, &wb) in betas.iter().zip(&bw) {
        for a in 0..n {
            for c in 0..n {
                nodes.push(EulerZYZ {
                    alpha: TAU * a as f64 / n as f64,
                    beta,
                    gamma: TAU * c as f64 / n as f64,
                });
                weights.push(wb * scale);
            }
        }
    }
    QuadratureRule {
        domain: Domain::SO3,
        nodes,
        weights,
        bandlimit,
        structure: ProductStructure {
            polar: betas,
            polar_weights: bw,
            n_outer: n,
            n_inner: n,
        },
    }
}

fn build_s2(bandlimit: usize) -> QuadratureRule<UnitVector> {
    let (thetas, tw) = polar_rule(bandlimit);
    let n = bandlimit + 1;
    let scale = TAU / n as f64;
    let mut nodes = Vec::with_capacity(thetas.len() * n);
    let mut weights = Vec::with_capacity(nodes.capacity());
    for (&theta, &wt) in thetas.iter().zip(&tw) {
        for a in 0..n {
            nodes.push(UnitVector::from_spherical(theta, TAU * a as f64 / n as f64));
            weights.push(wt * scale);
        }
    }
    QuadratureRule {
        domain: Domain::S2,
        nodes,
        weights,
        bandlimit,
        structure: ProductStructure {
            polar: thetas,
            polar_weights: tw,
            n_outer: n,
            n_inner: 1,
        },
    }
}

/// Haar-normalized rule on SO(3) (weights sum to 1), exact to degree `bandlimit`.
pub fn so3_quadrature(bandlimit: usize) -> Result<Arc<QuadratureRule<EulerZYZ>>> {
    check_quadrature_bandlimit(bandlimit)?;
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureRule<EulerZYZ>>>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(Default::default).lock().unwrap();
    Ok(cache
        .entry(bandlimit)
        .or_insert_with(|| Arc::new(build_so3(bandlimit)))
        .clone())
}

/// Rule on S² with the surface measure (weights sum to 4π), exact to degree `bandlimit`.
pub fn s2_quadrature(bandlimit: usize) -> Result<Arc<QuadratureRule<UnitVector>>> {
    check_quadrature_bandlimit(bandlimit)?;
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureRule<UnitVector>>>>> =
        OnceLock::new();
    let mut cache = CACHE.get_or_init(Default::default).lock().unwrap();
    Ok(cache
        .entry(bandlimit)
        .or_insert_with(|| Arc::new(build_s2(bandlimit)))
        .clone())
}
