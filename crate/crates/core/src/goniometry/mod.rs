//! Pole figures: the Friedel-symmetrized projection
//! `P f(h, r) = ½ (R f(h, r) + R f(−h, r))`, its odd-degree null space, ODF
//! models and even-part reconstruction.
//!
//! `R f(−h, r) = (−1)^l R f(h, r)` on degree-`l` content, so `P` annihilates
//! every odd degree and only [`even_projector`] of an ODF is observable.

mod odf;
pub(crate) mod reconstruct;

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::harmonics::{s2s2_synthesize_with, HarmonicCoeffsSO3, SphericalHarmonics};
use crate::limits::check_bandlimit;
use crate::radon::{radon_geometric, radon_harmonic};
use crate::rotations::{gauss_legendre, Rotation, UnitVector};

pub use odf::{make_odf, OdfKind, OdfModel, TRUNCATION_TOLERANCE};
pub use reconstruct::{reconstruct_even, Reconstruction, RANK_TOLERANCE};

/// Sampled pole figure for one crystal direction `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleFigureGrid {
    pub h: UnitVector,
    pub points: Vec<UnitVector>,
    pub values: Vec<f64>,
    /// Quadrature weights on S² (summing to 4π) when the grid is a known
    /// product rule; `None` for arbitrary point sets.
    pub weights: Option<Vec<f64>>,
    /// Band limit of the coefficients the values were computed from.
    pub bandlimit: Option<usize>,
}

impl PoleFigureGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Quadrature mean of the values over S²; requires weights.
    pub fn weighted_mean(&self) -> Option<f64> {
        let w = self.weights.as_ref()?;
        let total: f64 = w.iter().sum();
        Some(self.values.iter().zip(w).map(|(v, w)| v * w).sum::<f64>() / total)
    }

    /// Grid point with the largest value.
    pub fn argmax(&self) -> Option<(UnitVector, f64)> {
        self.points
            .iter()
            .zip(&self.values)
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(p, v)| (*p, *v))
    }
}

/// Default specimen grid for band limit `bandlimit`: Gauss–Legendre in
/// `cos θ` (`L + 1` nodes) times `2L + 2` uniform azimuths. Returns points and
/// weights (summing to 4π); exact for products of two degree-`L` functions.
pub fn default_grid(bandlimit: usize) -> (Vec<UnitVector>, Vec<f64>) {
    let (x, w) = gauss_legendre(bandlimit + 1);
    let n_phi = 2 * bandlimit + 2;
    let mut points = Vec::with_capacity(x.len() * n_phi);
    let mut weights = Vec::with_capacity(points.capacity());
    for (c, wc) in x.iter().rev().zip(w.iter().rev()) {
        let theta = c.clamp(-1.0, 1.0).acos();
        for a in 0..n_phi {
            points.push(UnitVector::from_spherical(
                theta,
                TAU * a as f64 / n_phi as f64,
            ));
            weights.push(wc * TAU / n_phi as f64);
        }
    }
    (points, weights)
}

/// Equal-angle lattice `θ_i = (i + ½) π / n_theta`, `φ_j = 2π j / n_phi`, as
/// produced by typical goniometer scans.
pub fn equal_angle_grid(n_theta: usize, n_phi: usize) -> Vec<UnitVector> {
    let mut out = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let theta = (i as f64 + 0.5) * std::f64::consts::PI / n_theta as f64;
        for j in 0..n_phi {
            out.push(UnitVector::from_spherical(
                theta,
                TAU * j as f64 / n_phi as f64,
            ));
        }
    }
    out
}

fn check_grid(grid: &[UnitVector]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("pole figure grid is empty".into()));
    }
    Ok(())
}

/// `P f(h, r) = ½ (R f(h, r) + R f(−h, r))` on `grid`, through the harmonic
/// path.
pub fn pole_figure(
    c: &HarmonicCoeffsSO3,
    h: &UnitVector,
    grid: &[UnitVector],
) -> Result<PoleFigureGrid> {
    check_bandlimit(c.bandlimit())?;
    check_grid(grid)?;
    let lmax = c.bandlimit();
    let p = radon_harmonic(c);
    let yh = SphericalHarmonics::new(lmax, h);
    let yh_neg = SphericalHarmonics::new(lmax, &-*h);
    let values = grid
        .par_iter()
        .map(|r| {
            let yr = SphericalHarmonics::new(lmax, r);
            let plus = s2s2_synthesize_with(&p, &yh, &yr).re;
            let minus = s2s2_synthesize_with(&p, &yh_neg, &yr).re;
            0.5 * (plus + minus)
        })
        .collect();
    Ok(PoleFigureGrid {
        h: *h,
        points: grid.to_vec(),
        values,
        weights: None,
        bandlimit: Some(lmax),
    })
}

/// Unsymmetrized `R f(h, ·)` on `grid` (diagnostics; not measurable).
pub fn radon_figure(
    c: &HarmonicCoeffsSO3,
    h: &UnitVector,
    grid: &[UnitVector],
) -> Result<PoleFigureGrid> {
    check_bandlimit(c.bandlimit())?;
    check_grid(grid)?;
    let lmax = c.bandlimit();
    let p = radon_harmonic(c);
    let yh = SphericalHarmonics::new(lmax, h);
    let values = grid
        .par_iter()
        .map(|r| s2s2_synthesize_with(&p, &yh, &SphericalHarmonics::new(lmax, r)).re)
        .collect();
    Ok(PoleFigureGrid {
        h: *h,
        points: grid.to_vec(),
        values,
        weights: None,
        bandlimit: Some(lmax),
    })
}

/// `P f(h, ·)` from fiber quadrature on an arbitrary density.
pub fn pole_figure_geometric(
    f: impl Fn(&Rotation) -> f64 + Sync,
    h: &UnitVector,
    grid: &[UnitVector],
    nodes: usize,
) -> Result<PoleFigureGrid> {
    check_grid(grid)?;
    let values = grid
        .par_iter()
        .map(|r| {
            let plus = radon_geometric(&f, h, r, nodes)?;
            let minus = radon_geometric(&f, &-*h, r, nodes)?;
            Ok(0.5 * (plus + minus))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(PoleFigureGrid {
        h: *h,
        points: grid.to_vec(),
        values,
        weights: None,
        bandlimit: None,
    })
}

/// Zeroes every odd-degree block.
pub fn even_projector(c: &HarmonicCoeffsSO3) -> HarmonicCoeffsSO3 {
    c.scale_degrees(|l| if l % 2 == 0 { 1.0 } else { 0.0 })
}

#[cfg(test)]
mod tests;
