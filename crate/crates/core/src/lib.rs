//! One-dimensional Radon transform on SO(3), its harmonic inversion, and the
//! Friedel-symmetrized pole-figure transform of texture goniometry.
//!
//! Orientation convention throughout: `h = g r`, where `h` is a crystal
//! direction, `r` a specimen direction and `g ∈ SO(3)`.

pub mod error;
pub mod formats;
pub mod goniometry;
pub mod harmonics;
pub mod inversion;
pub mod limits;
pub mod radon;
pub mod rotations;

pub use error::{Error, Result};
pub use goniometry::{
    even_projector, make_odf, pole_figure, reconstruct_even, OdfKind, OdfModel, PoleFigureGrid,
    Reconstruction,
};
pub use harmonics::{
    s2s2_analyze, s2s2_synthesize, so3_analyze, so3_synthesize, sph_harm, wigner_D, wigner_d,
    HarmonicCoeffsSO3, PairHarmonicCoeffs,
};
pub use inversion::{
    calibrate_dual_symbol, invert_backprojection, invert_slice, sqrt_multiplier_s2s2,
    MultiplierSpec,
};
pub use radon::{dual_radon, radon_geometric, radon_harmonic, s3_circle_integral, RadonSample};
pub use rotations::{
    euler_to_rotation, fiber_rotation, rotate, s2_quadrature, so3_quadrature, EulerZYZ,
    QuadratureRule, Rotation, UnitVector,
};
