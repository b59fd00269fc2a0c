//! Harmonic multipliers and the two inversion formulae.
//!
//! * Slice form: `f̂_l = 4π Ĉ_l`, undoing [`radon_harmonic`] blockwise.
//! * Backprojection form: `f = (−4Δ_SO(3) + 1)^{1/2} Ř R f` where `Ř` is the
//!   mean over incidence pairs ([`dual_radon`]). With the dual scaled by
//!   `1/4π` (integration against `dσ(h)/4π`) this reads
//!   `f = 4π (−4Δ + 1)^{1/2} Ř R f`.
//!
//! Laplacians are taken in the metrics where `Y_l^m` on S² and `D^l_{mn}` on
//! SO(3) have eigenvalue `−l(l+1)`. Both square-root operators then act on
//! degree `l` by `2l + 1`. Fractional powers are applied only as multipliers.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::harmonics::{
    so3_analyze, wigner_D, HarmonicCoeffsSO3, PairHarmonicCoeffs, SphericalHarmonics,
};
use crate::limits::check_bandlimit;
use crate::radon::{dual_radon, radon_harmonic, Sample};
use crate::rotations::{Rotation, UnitVector};

/// Scale turning the mean-over-incidences dual into the `L²` dual that makes
/// the backprojection formula carry the leading `4π`.
pub const DUAL_L2_SCALE: f64 = 1.0 / (4.0 * PI);

/// Tolerance on the measured dual symbol against the frozen table.
pub const CALIBRATION_TOLERANCE: f64 = 1e-6;

/// Tolerance on the non-scalar part of the measured dual action.
pub const SCALAR_ACTION_TOLERANCE: f64 = 1e-9;

/// Per-degree multiplier `μ_l`, strictly positive.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierSpec {
    values: Vec<f64>,
}

impl MultiplierSpec {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(l) = values.iter().position(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "multiplier at degree {l} is not strictly positive: {}",
                values[l]
            )));
        }
        Ok(MultiplierSpec { values })
    }

    /// `(−2Δ_{S²×S²} + 1)^{1/2}` on diagonal degree-`l` pairs, where
    /// `Δ_{S²×S²}` has eigenvalue `−2l(l+1)`.
    pub fn sqrt_laplacian_s2s2(bandlimit: usize) -> Self {
        Self::from_eigenvalues(bandlimit, |l| 2.0 * l * (l + 1.0), 2.0)
    }

    /// `(−4Δ_SO(3) + 1)^{1/2}` with `Δ_SO(3) D^l = −l(l+1) D^l`.
    pub fn sqrt_laplacian_so3(bandlimit: usize) -> Self {
        Self::from_eigenvalues(bandlimit, |l| l * (l + 1.0), 4.0)
    }

    fn from_eigenvalues(bandlimit: usize, neg_eig: impl Fn(f64) -> f64, factor: f64) -> Self {
        MultiplierSpec {
            values: (0..=bandlimit)
                .map(|l| (factor * neg_eig(l as f64) + 1.0).sqrt())
                .collect(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, l: usize) -> f64 {
        self.values[l]
    }

    pub fn apply_so3(&self, c: &HarmonicCoeffsSO3) -> HarmonicCoeffsSO3 {
        c.scale_degrees(|l| self.values.get(l).copied().unwrap_or(0.0))
    }

    pub fn apply_pair(&self, p: &PairHarmonicCoeffs) -> PairHarmonicCoeffs {
        p.scale_degrees(|l| self.values.get(l).copied().unwrap_or(0.0))
    }
}

/// Multiplies each degree-`l` block by `2l + 1`.
pub fn sqrt_multiplier_s2s2(p: &PairHarmonicCoeffs) -> PairHarmonicCoeffs {
    MultiplierSpec::sqrt_laplacian_s2s2(p.bandlimit()).apply_pair(p)
}

/// `f̂_l = 4π Ĉ_l`.
pub fn invert_slice(p: &PairHarmonicCoeffs) -> HarmonicCoeffsSO3 {
    let mut out = HarmonicCoeffsSO3::zeros_unchecked(p.bandlimit());
    let s = 4.0 * PI;
    for (dst, src) in out.as_mut_slice().iter_mut().zip(p.as_slice()) {
        *dst = *src * s;
    }
    out
}

/// Per-degree scalar `κ_l` by which `Ř ∘ R` acts on SO(3) coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct DualSymbol {
    kappa: Vec<f64>,
}

impl DualSymbol {
    pub fn new(kappa: Vec<f64>) -> Self {
        DualSymbol { kappa }
    }

    /// Frozen reference table `κ_l = 1/(2l+1)`.
    pub fn frozen(bandlimit: usize) -> Self {
        DualSymbol {
            kappa: (0..=bandlimit).map(|l| 1.0 / (2 * l + 1) as f64).collect(),
        }
    }

    pub fn bandlimit(&self) -> usize {
        self.kappa.len().saturating_sub(1)
    }

    pub fn values(&self) -> &[f64] {
        &self.kappa
    }

    pub fn get(&self, l: usize) -> f64 {
        self.kappa[l]
    }

    /// Compares against [`DualSymbol::frozen`].
    pub fn check_against_frozen(&self) -> Result<()> {
        let frozen = Self::frozen(self.bandlimit());
        for (l, (m, f)) in self.kappa.iter().zip(&frozen.kappa).enumerate() {
            if (m - f).abs() > CALIBRATION_TOLERANCE || !m.is_finite() {
                return Err(Error::Calibration {
                    degree: l,
                    measured: *m,
                    frozen: *f,
                });
            }
        }
        Ok(())
    }
}

const PROBES: usize = 6;

/// Measures `κ_l` for `l <= bandlimit` by pushing single-coefficient degree-`l`
/// functions through `R` then `Ř` and reading the response at fixed probe
/// rotations. Fails if the response is not a scalar multiple of the input.
pub fn calibrate_dual_symbol(bandlimit: usize) -> Result<DualSymbol> {
    check_bandlimit(bandlimit)?;
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let mut probes = vec![Rotation::IDENTITY];
    probes.extend((1..PROBES).map(|_| Rotation::random(&mut rng)));

    let mut kappa = Vec::with_capacity(bandlimit + 1);
    for l in 0..=bandlimit {
        let li = l as i64;
        let lw = (2 * l + 1) as f64;
        let mut measured = None;
        let mut off: f64 = 0.0;
        for (m, n) in [(0, 0), (li, -li)] {
            let c = HarmonicCoeffsSO3::unit(l, l, m, n)?;
            let coef = radon_harmonic(&c).get(l, m, n) * (16.0 * PI * PI);
            // single-coefficient synthesis of R f
            let back = |g: &Rotation| -> Result<Complex64> {
                dual_radon(
                    |h: &UnitVector, r: &UnitVector| {
                        coef * SphericalHarmonics::new(l, h).get(l, m)
                            * SphericalHarmonics::new(l, r).get(l, n).conj()
                    },
                    g,
                    2 * l,
                )
            };
            // f = (2l+1) conj(D_mn); Ř R f = κ (2l+1) conj(D_mn)
            let k = match measured {
                Some(k) => k,
                None => {
                    let at_identity = back(&Rotation::IDENTITY)?;
                    let k = at_identity.re / lw;
                    off = off.max(at_identity.im.abs());
                    measured = Some(k);
                    k
                }
            };
            for g in &probes {
                let expect = wigner_D(l, m, n, g)?.conj() * (k * lw);
                off = off.max((back(g)? - expect).norm());
            }
        }
        if off > SCALAR_ACTION_TOLERANCE {
            return Err(Error::NonScalarSymbol {
                degree: l,
                response: off,
            });
        }
        kappa.push(measured.expect("measured at least once"));
    }
    Ok(DualSymbol { kappa })
}

fn cached_symbol(bandlimit: usize) -> Result<Arc<DualSymbol>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<DualSymbol>>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(Default::default).lock().unwrap();
    if let Some(s) = cache.get(&bandlimit) {
        return Ok(s.clone());
    }
    let s = Arc::new(calibrate_dual_symbol(bandlimit)?);
    s.check_against_frozen()?;
    cache.insert(bandlimit, s.clone());
    Ok(s)
}

/// Backprojection inversion of data `F` on S²×S² at band limit `bandlimit`:
/// analyze `g ↦ Ř F(g)`, then apply `μ_l = 2l+1` and the measured symbol so
/// that the result coincides with `invert_slice(s2s2_analyze(F))`. Energy above
/// the band limit is discarded.
pub fn invert_backprojection<T, F>(f: F, bandlimit: usize) -> Result<HarmonicCoeffsSO3>
where
    T: Sample + Into<Complex64>,
    F: Fn(&UnitVector, &UnitVector) -> T + Sync,
{
    check_bandlimit(bandlimit)?;
    let symbol = cached_symbol(bandlimit)?;
    let mu = MultiplierSpec::sqrt_laplacian_so3(bandlimit);

    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let back = so3_analyze(
        |g| match dual_radon(&f, g, 2 * bandlimit) {
            Ok(v) => v.into(),
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        bandlimit,
    )?;
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    // f̂_l = 4π · μ_l · (Ř_L² R f)^_l · 1/(μ_l κ_l)
    Ok(back.scale_degrees(|l| {
        let m = mu.get(l);
        4.0 * PI * m * DUAL_L2_SCALE / (m * symbol.get(l))
    }))
}

#[cfg(test)]
mod tests;
