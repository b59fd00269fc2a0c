//! Fourier analysis and synthesis on SO(3) and on S²×S².
//!
//! SO(3):
//!
//! ```text
//! f̂_l^{mn} = ∫ f(g) D^l_{mn}(g) dg,      f(g) = Σ (2l+1) f̂_l^{mn} conj(D^l_{mn}(g))
//! ```
//!
//! S²×S² (diagonal degrees only, `dσ = dv / 4π` the probability measure):
//!
//! ```text
//! Ĉ_l^{mn} = ∫∫ F(h, r) conj(Y_l^m(h)) Y_l^n(r) dσ(h) dσ(r),
//! F(h, r)  = (4π)² Σ Ĉ_l^{mn} Y_l^m(h) conj(Y_l^n(r))
//! ```
//!
//! With this pairing the Radon transform acts blockwise as `Ĉ_l = f̂_l / 4π`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::coeffs::{HarmonicCoeffsSO3, PairHarmonicCoeffs};
use super::sph::SphericalHarmonics;
use super::wigner::WignerTable;
use crate::error::{Error, Result};
use crate::limits::check_bandlimit;
use crate::rotations::{s2_quadrature, so3_quadrature, Rotation, UnitVector};

const FOUR_PI: f64 = 4.0 * PI;

fn phase_table(bandlimit: usize, n: usize) -> Vec<Complex64> {
    // row k ↔ order m = k - L; column a ↔ angle 2πa/n; value e^{-imθ_a}
    let w = 2 * bandlimit + 1;
    let mut out = Vec::with_capacity(w * n);
    for k in 0..w {
        let m = k as f64 - bandlimit as f64;
        for a in 0..n {
            let theta = std::f64::consts::TAU * a as f64 / n as f64;
            out.push(Complex64::from_polar(1.0, -m * theta));
        }
    }
    out
}

fn ensure_finite(values: &[Complex64], context: &'static str) -> Result<()> {
    if let Some(node) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { node, context });
    }
    Ok(())
}

/// SO(3) Fourier coefficients up to degree `bandlimit`, using the product rule
/// of band limit `2·bandlimit`.
pub fn so3_analyze<F>(f: F, bandlimit: usize) -> Result<HarmonicCoeffsSO3>
where
    F: Fn(&Rotation) -> Complex64 + Sync,
{
    check_bandlimit(bandlimit)?;
    let rule = so3_quadrature(2 * bandlimit)?;
    let values: Vec<Complex64> = rule
        .nodes
        .par_iter()
        .map(|e| f(&Rotation::from_euler(e)))
        .collect();
    ensure_finite(&values, "so3_analyze")?;

    let st = &rule.structure;
    let n = st.n_outer;
    let w = 2 * bandlimit + 1;
    let li = bandlimit as i64;
    let phases = phase_table(bandlimit, n);
    let azimuth_weight = 0.5 / (n * n) as f64;

    let partials: Vec<HarmonicCoeffsSO3> = (0..st.polar.len())
        .into_par_iter()
        .map(|j| {
            let slab = &values[j * n * n..(j + 1) * n * n];
            // t[a][n'] = Σ_c f(a, c) e^{-i n' γ_c}
            let mut t = vec![Complex64::new(0.0, 0.0); n * w];
            for a in 0..n {
                for k in 0..w {
                    let row = &phases[k * n..(k + 1) * n];
                    t[a * w + k] = (0..n).map(|c| slab[a * n + c] * row[c]).sum();
                }
            }
            // s[m][n'] = Σ_a e^{-imα_a} t[a][n']
            let mut s = vec![Complex64::new(0.0, 0.0); w * w];
            for km in 0..w {
                let row = &phases[km * n..(km + 1) * n];
                for kn in 0..w {
                    s[km * w + kn] = (0..n).map(|a| row[a] * t[a * w + kn]).sum();
                }
            }
            let scale = st.polar_weights[j] * azimuth_weight;
            let d = WignerTable::new(bandlimit, st.polar[j]);
            let mut out = HarmonicCoeffsSO3::zeros_unchecked(bandlimit);
            for l in 0..=bandlimit {
                let lw = 2 * l + 1;
                let dl = d.block(l);
                let block = out.block_mut(l);
                for (bm, m) in (-(l as i64)..=l as i64).enumerate() {
                    for (bn, nn) in (-(l as i64)..=l as i64).enumerate() {
                        let sv = s[(m + li) as usize * w + (nn + li) as usize];
                        block[bm * lw + bn] = sv * (dl[bm * lw + bn] * scale);
                    }
                }
            }
            out
        })
        .collect();

    let mut out = HarmonicCoeffsSO3::zeros_unchecked(bandlimit);
    for p in &partials {
        for (acc, v) in out.as_mut_slice().iter_mut().zip(p.as_slice()) {
            *acc += v;
        }
    }
    Ok(out)
}

/// `f(g) = Σ_l (2l+1) Σ_{mn} f̂_l^{mn} conj(D^l_{mn}(g))`.
pub fn so3_synthesize(c: &HarmonicCoeffsSO3, g: &Rotation) -> Complex64 {
    let e = g.to_euler();
    let lmax = c.bandlimit();
    let d = WignerTable::new(lmax, e.beta);
    let li = lmax as i64;
    let ea: Vec<Complex64> = (-li..=li)
        .map(|m| Complex64::from_polar(1.0, m as f64 * e.alpha))
        .collect();
    let eg: Vec<Complex64> = (-li..=li)
        .map(|n| Complex64::from_polar(1.0, n as f64 * e.gamma))
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for l in 0..=lmax {
        let lw = 2 * l + 1;
        let base = lmax - l;
        let block = c.block(l);
        let dl = d.block(l);
        let mut acc = Complex64::new(0.0, 0.0);
        for bm in 0..lw {
            let mut row = Complex64::new(0.0, 0.0);
            for bn in 0..lw {
                row += block[bm * lw + bn] * (eg[base + bn] * dl[bm * lw + bn]);
            }
            acc += ea[base + bm] * row;
        }
        total += acc * (2 * l + 1) as f64;
    }
    total
}

/// Diagonal-degree S²×S² coefficients using the tensor product of
/// `s2_quadrature(2·bandlimit)` with itself.
pub fn s2s2_analyze<F>(f: F, bandlimit: usize) -> Result<PairHarmonicCoeffs>
where
    F: Fn(&UnitVector, &UnitVector) -> Complex64 + Sync,
{
    check_bandlimit(bandlimit)?;
    let rule = s2_quadrature(2 * bandlimit)?;
    let n = rule.len();
    let tables: Vec<SphericalHarmonics> = rule
        .nodes
        .par_iter()
        .map(|v| SphericalHarmonics::new(bandlimit, v))
        .collect();
    let ny = (bandlimit + 1) * (bandlimit + 1);

    // g[i][(l,n)] = Σ_j w_j F(h_i, r_j) Y_l^n(r_j)
    let rows: Vec<Result<Vec<Complex64>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let h = &rule.nodes[i];
            let mut acc = vec![Complex64::new(0.0, 0.0); ny];
            for (j, r) in rule.nodes.iter().enumerate() {
                let v = f(h, r);
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        node: i * n + j,
                        context: "s2s2_analyze",
                    });
                }
                let wv = v * rule.weights[j];
                for l in 0..=bandlimit {
                    let ys = tables[j].degree(l);
                    for (k, y) in ys.iter().enumerate() {
                        acc[l * l + k] += wv * y;
                    }
                }
            }
            Ok(acc)
        })
        .collect();
    let g: Vec<Vec<Complex64>> = rows.into_iter().collect::<Result<_>>()?;

    let norm = 1.0 / (FOUR_PI * FOUR_PI);
    let blocks: Vec<Vec<Complex64>> = (0..=bandlimit)
        .into_par_iter()
        .map(|l| {
            let lw = 2 * l + 1;
            let mut block = vec![Complex64::new(0.0, 0.0); lw * lw];
            for i in 0..n {
                let yh = tables[i].degree(l);
                let gi = &g[i][l * l..l * l + lw];
                let wi = rule.weights[i] * norm;
                for bm in 0..lw {
                    let a = yh[bm].conj() * wi;
                    for bn in 0..lw {
                        block[bm * lw + bn] += a * gi[bn];
                    }
                }
            }
            block
        })
        .collect();

    let mut out = PairHarmonicCoeffs::zeros_unchecked(bandlimit);
    for (l, b) in blocks.into_iter().enumerate() {
        out.block_mut(l).copy_from_slice(&b);
    }
    Ok(out)
}

/// `F(h, r) = (4π)² Σ_l Σ_{mn} Ĉ_l^{mn} Y_l^m(h) conj(Y_l^n(r))`.
pub fn s2s2_synthesize(p: &PairHarmonicCoeffs, h: &UnitVector, r: &UnitVector) -> Complex64 {
    let yh = SphericalHarmonics::new(p.bandlimit(), h);
    let yr = SphericalHarmonics::new(p.bandlimit(), r);
    s2s2_synthesize_with(p, &yh, &yr)
}

/// As [`s2s2_synthesize`] with precomputed harmonics at `h` and `r`.
pub fn s2s2_synthesize_with(
    p: &PairHarmonicCoeffs,
    yh: &SphericalHarmonics,
    yr: &SphericalHarmonics,
) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for l in 0..=p.bandlimit() {
        let lw = 2 * l + 1;
        let block = p.block(l);
        let a = yh.degree(l);
        let b = yr.degree(l);
        for bm in 0..lw {
            let mut row = Complex64::new(0.0, 0.0);
            for bn in 0..lw {
                row += block[bm * lw + bn] * b[bn].conj();
            }
            total += a[bm] * row;
        }
    }
    total * (FOUR_PI * FOUR_PI)
}
