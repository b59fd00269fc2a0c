//! Wigner functions, spherical harmonics and harmonic analysis on SO(3) and
//! S²×S².

mod coeffs;
mod sph;
mod transform;
mod wigner;

pub use coeffs::{block_offset, BlockCoeffs, HarmonicCoeffsSO3, PairHarmonicCoeffs, So3, S2S2};
pub use sph::{sph_harm, SphericalHarmonics};
pub use transform::{
    s2s2_analyze, s2s2_synthesize, s2s2_synthesize_with, so3_analyze, so3_synthesize,
};
pub use wigner::{wigner_D, wigner_D_matrix, wigner_d, WignerTable};
