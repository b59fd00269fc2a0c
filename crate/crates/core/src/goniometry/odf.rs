//! Synthetic orientation density functions.
//!
//! The unimodal model is the square of a half-band central function
//! `ψ = Σ_{j<=L/2} c_j χ_j`, `c_j = (2j+1) exp(−j(j+1)/κ)`, where `χ_j` is the
//! character of degree `j`. Products of characters decompose as
//! `χ_j χ_k = Σ_{l=|j−k|}^{j+k} χ_l`, so `ψ²` is band-limited at `L`, is
//! nonnegative everywhere and is normalized by its `χ_0` coefficient.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::harmonics::{wigner_D_matrix, HarmonicCoeffsSO3};
use crate::limits::check_bandlimit;
use crate::rotations::Rotation;

/// Largest admissible relative weight of the first omitted half-kernel term.
pub const TRUNCATION_TOLERANCE: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OdfKind {
    Uniform,
    Unimodal,
}

#[derive(Clone, Copy, Debug)]
pub struct OdfModel {
    pub kind: OdfKind,
    pub center: Rotation,
    pub concentration: f64,
    pub bandlimit: usize,
}

impl OdfModel {
    pub fn uniform(bandlimit: usize) -> Self {
        OdfModel {
            kind: OdfKind::Uniform,
            center: Rotation::IDENTITY,
            concentration: 0.0,
            bandlimit,
        }
    }

    pub fn unimodal(center: Rotation, concentration: f64, bandlimit: usize) -> Self {
        OdfModel {
            kind: OdfKind::Unimodal,
            center,
            concentration,
            bandlimit,
        }
    }
}

fn half_weight(j: usize, kappa: f64) -> f64 {
    if j == 0 {
        1.0
    } else if kappa == 0.0 {
        0.0
    } else {
        (-((j * (j + 1)) as f64) / kappa).exp()
    }
}

/// Smallest even band limit whose half kernel meets [`TRUNCATION_TOLERANCE`].
fn minimum_bandlimit(kappa: f64) -> usize {
    let mut j = 0;
    while half_weight(j + 1, kappa) > TRUNCATION_TOLERANCE {
        j += 1;
    }
    2 * j
}

pub fn make_odf(model: &OdfModel) -> Result<HarmonicCoeffsSO3> {
    check_bandlimit(model.bandlimit)?;
    let lmax = model.bandlimit;
    match model.kind {
        OdfKind::Uniform => HarmonicCoeffsSO3::unit(lmax, 0, 0, 0),
        OdfKind::Unimodal => {
            let kappa = model.concentration;
            if !kappa.is_finite() || kappa < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "concentration must be finite and nonnegative, got {kappa}"
                )));
            }
            let half = lmax / 2;
            let tail = half_weight(half + 1, kappa);
            if tail > TRUNCATION_TOLERANCE {
                return Err(Error::Model {
                    message: format!(
                        "kernel with concentration {kappa} is truncated at band limit {lmax} \
                         (first omitted weight {tail:.3e} > {TRUNCATION_TOLERANCE})"
                    ),
                    suggested_bandlimit: minimum_bandlimit(kappa),
                });
            }
            let c: Vec<f64> = (0..=half)
                .map(|j| (2 * j + 1) as f64 * half_weight(j, kappa))
                .collect();
            let mut e = vec![0.0; 2 * half + 1];
            for (j, cj) in c.iter().enumerate() {
                for (k, ck) in c.iter().enumerate() {
                    for el in e.iter_mut().take(j + k + 1).skip(j.abs_diff(k)) {
                        *el += cj * ck;
                    }
                }
            }
            let e0 = e[0];
            let mut out = HarmonicCoeffsSO3::zeros(lmax)?;
            for (l, el) in e.iter().enumerate() {
                let d = wigner_D_matrix(l, &model.center)?;
                let s = el / e0 / (2 * l + 1) as f64;
                for (dst, src) in out.block_mut(l).iter_mut().zip(&d) {
                    *dst = *src * s;
                }
            }
            debug_assert!(out.get(0, 0, 0) == Complex64::new(1.0, 0.0));
            Ok(out)
        }
    }
}
