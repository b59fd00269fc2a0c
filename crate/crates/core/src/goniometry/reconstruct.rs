//! Even-part ODF reconstruction from pole figures.
//!
//! A pole figure for crystal direction `h_k` expands as
//! `P_k(r) = Σ_{l even} Σ_n b_k(l, n) conj(Y_l^n(r))` with
//! `b_k(l, n) = (4π)² Σ_m Ĉ_l^{mn} Y_l^m(h_k)`. The fit runs in two linear
//! least-squares stages: `b_k` per pole figure over its specimen grid, then
//! `Ĉ_l^{·n}` per degree over the crystal directions. Both stages together are
//! the full least-squares problem whenever each grid resolves degree `L`; the
//! split keeps every system small and exposes which degrees are
//! underdetermined. Degree `l` needs at least `2l + 1` directions in general
//! position.

use std::f64::consts::PI;

use nalgebra::{Cholesky, DMatrix, Dyn};
use num_complex::Complex64;

use super::{pole_figure, PoleFigureGrid};
use crate::error::{Error, Result};
use crate::harmonics::{HarmonicCoeffsSO3, PairHarmonicCoeffs, SphericalHarmonics};
use crate::inversion::invert_slice;
use crate::limits::check_bandlimit;

/// Singular values below `RANK_TOLERANCE · σ_max` count as rank loss.
pub const RANK_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct Reconstruction {
    /// Even-degree ODF coefficients.
    pub coeffs: HarmonicCoeffsSO3,
    /// Fitted S²×S² coefficients (even degrees).
    pub pair: PairHarmonicCoeffs,
    /// RMS misfit of the reconstruction on each input pole figure.
    pub residuals: Vec<f64>,
    /// Condition number of each pole figure's specimen-grid design.
    pub grid_condition: Vec<f64>,
    /// `(l, condition)` of the crystal-direction design for each even degree.
    pub direction_condition: Vec<(usize, f64)>,
}

impl Reconstruction {
    pub fn condition(&self) -> f64 {
        self.grid_condition
            .iter()
            .copied()
            .chain(self.direction_condition.iter().map(|d| d.1))
            .fold(1.0, f64::max)
    }
}

pub(crate) struct Solver {
    a: DMatrix<Complex64>,
    chol: Cholesky<Complex64, Dyn>,
    pub condition: f64,
}

pub(crate) enum Factor {
    Ok(Solver),
    Deficient { rank: usize, condition: f64 },
}

/// Normal-equation factorization of `a`, refusing numerically rank-deficient
/// designs.
pub(crate) fn factor(a: DMatrix<Complex64>) -> Factor {
    let sv = a.clone().svd(false, false).singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = if a.nrows() < a.ncols() {
        0.0
    } else {
        sv.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let rank = sv.iter().filter(|&&s| s > RANK_TOLERANCE * smax).count();
    let condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    if rank < a.ncols() || smax == 0.0 {
        return Factor::Deficient { rank, condition };
    }
    match Cholesky::new(a.adjoint() * &a) {
        Some(chol) => Factor::Ok(Solver { a, chol, condition }),
        None => Factor::Deficient { rank, condition },
    }
}

impl Solver {
    pub(crate) fn solve(&self, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        self.chol.solve(&(self.a.adjoint() * b))
    }
}

fn even_degrees(bandlimit: usize) -> impl Iterator<Item = usize> {
    (0..=bandlimit).step_by(2)
}

/// Column of `(l, n)` in the stage-one unknown vector.
fn column(l: usize, n: i64) -> usize {
    // Σ_{l' even, l' < l} (2l'+1) = l(l-1)/2
    l * l.saturating_sub(1) / 2 + (n + l as i64) as usize
}

fn fit_grid(pf: &PoleFigureGrid, bandlimit: usize, index: usize) -> Result<(Vec<Complex64>, f64)> {
    if pf.points.len() != pf.values.len() {
        return Err(Error::InvalidArgument(format!(
            "pole figure {index}: {} points but {} values",
            pf.points.len(),
            pf.values.len()
        )));
    }
    if let Some(i) = pf.values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            node: i,
            context: "pole figure value",
        });
    }
    if let Some(w) = &pf.weights {
        if w.len() != pf.points.len() || w.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "pole figure {index}: weights must be positive, one per point"
            )));
        }
    }
    let ncols: usize = even_degrees(bandlimit).map(|l| 2 * l + 1).sum();
    let rows = pf.points.len();
    let mut a = DMatrix::<Complex64>::zeros(rows, ncols);
    let mut y = DMatrix::<Complex64>::zeros(rows, 1);
    for (j, r) in pf.points.iter().enumerate() {
        let s = pf.weights.as_ref().map_or(1.0, |w| w[j].sqrt());
        let yr = SphericalHarmonics::new(bandlimit, r);
        for l in even_degrees(bandlimit) {
            for (k, v) in yr.degree(l).iter().enumerate() {
                a[(j, column(l, k as i64 - l as i64))] = v.conj() * s;
            }
        }
        y[(j, 0)] = Complex64::new(pf.values[j] * s, 0.0);
    }
    match factor(a) {
        Factor::Ok(solver) => Ok((
            solver.solve(&y).column(0).iter().copied().collect(),
            solver.condition,
        )),
        Factor::Deficient { rank, .. } => Err(Error::RankDeficient {
            message: format!(
                "pole figure {index}: {rows} grid points resolve rank {rank} of {ncols} \
                 specimen harmonics up to degree {bandlimit}"
            ),
            degrees: Vec::new(),
        }),
    }
}

/// Least-squares even-part reconstruction at band limit `bandlimit`.
pub fn reconstruct_even(pfs: &[PoleFigureGrid], bandlimit: usize) -> Result<Reconstruction> {
    check_bandlimit(bandlimit)?;
    if pfs.is_empty() {
        return Err(Error::InvalidArgument("no pole figures given".into()));
    }
    let mut b = Vec::with_capacity(pfs.len());
    let mut grid_condition = Vec::with_capacity(pfs.len());
    for (k, pf) in pfs.iter().enumerate() {
        let (coef, cond) = fit_grid(pf, bandlimit, k)?;
        b.push(coef);
        grid_condition.push(cond);
    }

    let scale = 16.0 * PI * PI;
    let yh: Vec<SphericalHarmonics> = pfs
        .iter()
        .map(|pf| SphericalHarmonics::new(bandlimit, &pf.h))
        .collect();
    let mut pair = PairHarmonicCoeffs::zeros(bandlimit)?;
    let mut direction_condition = Vec::new();
    let mut deficient = Vec::new();
    let mut notes = Vec::new();
    for l in even_degrees(bandlimit) {
        let w = 2 * l + 1;
        let m = DMatrix::from_fn(pfs.len(), w, |k, i| yh[k].degree(l)[i] * scale);
        match factor(m) {
            Factor::Ok(solver) => {
                direction_condition.push((l, solver.condition));
                let rhs =
                    DMatrix::from_fn(pfs.len(), w, |k, n| b[k][column(l, n as i64 - l as i64)]);
                let x = solver.solve(&rhs);
                let block = pair.block_mut(l);
                for i in 0..w {
                    for n in 0..w {
                        block[i * w + n] = x[(i, n)];
                    }
                }
            }
            Factor::Deficient { rank, condition } => {
                direction_condition.push((l, condition));
                deficient.push(l);
                notes.push(format!("degree {l}: rank {rank} of {w}"));
            }
        }
    }
    if !deficient.is_empty() {
        return Err(Error::RankDeficient {
            message: format!(
                "{} crystal directions cannot determine the even part at band limit {bandlimit} \
                 (degree l needs at least 2l+1 directions in general position; {})",
                pfs.len(),
                notes.join(", ")
            ),
            degrees: deficient,
        });
    }

    let coeffs = invert_slice(&pair);
    let residuals = pfs
        .iter()
        .map(|pf| {
            let fit = pole_figure(&coeffs, &pf.h, &pf.points)?;
            let ss: f64 = fit
                .values
                .iter()
                .zip(&pf.values)
                .map(|(a, b)| (a - b).powi(2))
                .sum();
            Ok((ss / pf.len() as f64).sqrt())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(Reconstruction {
        coeffs,
        pair,
        residuals,
        grid_condition,
        direction_condition,
    })
}
