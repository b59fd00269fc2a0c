//! Wigner d- and D-functions.
//!
//! `D^l_{mn}(α, β, γ) = e^{-imα} d^l_{mn}(β) e^{-inγ}` with
//! `d^l_{mn}(β) = <lm| exp(-iβ J_y) |ln>`. With this choice `g ↦ D^l(g)` is a
//! unitary representation: `D^l(g₁ g₂) = D^l(g₁) D^l(g₂)`.
//!
//! `d^l_{mn}` is evaluated by the three-term recurrence in `l` at fixed
//! `(m, n)`, seeded at `l = max(|m|, |n|)` where Wigner's sum collapses to a
//! single term.

use std::sync::OnceLock;

use num_complex::Complex64;

use super::coeffs::block_offset;
use crate::error::{Error, Result};
use crate::limits::{check_bandlimit, HARD_MAX_BANDLIMIT};
use crate::rotations::{EulerZYZ, Rotation};

pub(crate) fn ln_factorial(k: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let mut t = vec![0.0; 4 * HARD_MAX_BANDLIMIT + 4];
        for i in 1..t.len() {
            t[i] = t[i - 1] + (i as f64).ln();
        }
        t
    });
    t[k]
}

fn check_index(l: usize, m: i64, n: i64) -> Result<()> {
    check_bandlimit(l)?;
    if m.unsigned_abs() as usize > l || n.unsigned_abs() as usize > l {
        return Err(Error::IndexOutOfRange { l, m, n });
    }
    Ok(())
}

/// `d^{l0}_{mn}(β)` at `l0 = max(|m|, |n|)`.
fn seed(m: i64, n: i64, cos_half: f64, sin_half: f64) -> f64 {
    let j = m.abs().max(n.abs());
    let k = (n - m).max(0);
    let f = |x: i64| ln_factorial(x as usize);
    let ln_coef = 0.5 * (f(j + m) + f(j - m) + f(j + n) + f(j - n))
        - f(j + n - k)
        - f(k)
        - f(j - k - m)
        - f(k - n + m);
    let sign = if (k - n + m) % 2 == 0 { 1.0 } else { -1.0 };
    let pc = (2 * j - 2 * k + n - m) as i32;
    let ps = (2 * k - n + m) as i32;
    sign * ln_coef.exp() * cos_half.powi(pc) * sin_half.powi(ps)
}

/// Runs the recurrence for fixed `(m, n)` from the seed up to `lmax`, calling
/// `emit(l, value)` for every `l` in `max(|m|,|n|)..=lmax`.
fn recur(m: i64, n: i64, lmax: usize, beta: f64, mut emit: impl FnMut(usize, f64)) {
    let l0 = m.abs().max(n.abs()) as usize;
    if l0 > lmax {
        return;
    }
    let (sin_half, cos_half) = (0.5 * beta).sin_cos();
    let cb = beta.cos();
    let (mf, nf) = (m as f64, n as f64);
    let mut prev = 0.0;
    let mut cur = seed(m, n, cos_half, sin_half);
    emit(l0, cur);
    for l in l0..lmax {
        let lf = l as f64;
        let l1 = lf + 1.0;
        let denom = ((l1 * l1 - mf * mf) * (l1 * l1 - nf * nf)).sqrt();
        // m = n = 0 whenever l = 0
        let mn = if l == 0 { 0.0 } else { mf * nf / (lf * l1) };
        let mut next = (2.0 * lf + 1.0) * l1 * (cb - mn) * cur;
        if l > l0 {
            let back = ((lf * lf - mf * mf) * (lf * lf - nf * nf)).sqrt();
            next -= l1 * back / lf * prev;
        }
        next /= denom;
        prev = cur;
        cur = next;
        emit(l + 1, cur);
    }
}

/// Little Wigner `d^l_{mn}(β)`.
pub fn wigner_d(l: usize, m: i64, n: i64, beta: f64) -> Result<f64> {
    check_index(l, m, n)?;
    let mut out = 0.0;
    recur(m, n, l, beta, |k, v| {
        if k == l {
            out = v;
        }
    });
    Ok(out)
}

/// `d^l_{mn}(β)` for every `l <= bandlimit`, stored in the block layout of
/// the coefficient tables.
#[derive(Clone, Debug)]
pub struct WignerTable {
    bandlimit: usize,
    values: Vec<f64>,
}

impl WignerTable {
    pub fn new(bandlimit: usize, beta: f64) -> Self {
        let mut values = vec![0.0; block_offset(bandlimit + 1)];
        let lm = bandlimit as i64;
        for m in -lm..=lm {
            for n in -lm..=lm {
                recur(m, n, bandlimit, beta, |l, v| {
                    let w = 2 * l + 1;
                    let idx =
                        block_offset(l) + (m + l as i64) as usize * w + (n + l as i64) as usize;
                    values[idx] = v;
                });
            }
        }
        WignerTable { bandlimit, values }
    }

    pub fn bandlimit(&self) -> usize {
        self.bandlimit
    }

    #[inline]
    pub fn get(&self, l: usize, m: i64, n: i64) -> f64 {
        let w = 2 * l + 1;
        self.values[block_offset(l) + (m + l as i64) as usize * w + (n + l as i64) as usize]
    }

    /// Degree-`l` block, row-major in `(m, n)`.
    pub fn block(&self, l: usize) -> &[f64] {
        &self.values[block_offset(l)..block_offset(l + 1)]
    }
}

/// `D^l_{mn}(g)`.
#[allow(non_snake_case)]
pub fn wigner_D(l: usize, m: i64, n: i64, g: &Rotation) -> Result<Complex64> {
    let e = g.to_euler();
    let d = wigner_d(l, m, n, e.beta)?;
    Ok(Complex64::from_polar(
        d,
        -(m as f64) * e.alpha - (n as f64) * e.gamma,
    ))
}

/// Full `(2l+1)×(2l+1)` matrix `D^l(g)`, row-major with rows indexed by `m`.
#[allow(non_snake_case)]
pub fn wigner_D_matrix(l: usize, g: &Rotation) -> Result<Vec<Complex64>> {
    check_bandlimit(l)?;
    Ok(wigner_D_matrix_euler(l, &g.to_euler()))
}

#[allow(non_snake_case)]
pub(crate) fn wigner_D_matrix_euler(l: usize, e: &EulerZYZ) -> Vec<Complex64> {
    let li = l as i64;
    let w = 2 * l + 1;
    let mut out = vec![Complex64::new(0.0, 0.0); w * w];
    for m in -li..=li {
        for n in -li..=li {
            recur(m, n, l, e.beta, |k, v| {
                if k == l {
                    out[(m + li) as usize * w + (n + li) as usize] =
                        Complex64::from_polar(v, -(m as f64) * e.alpha - (n as f64) * e.gamma);
                }
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    /// exp(-iβ J_y) for spin l via the real antisymmetric generator.
    fn d_matrix_oracle(l: usize, beta: f64) -> DMatrix<f64> {
        let w = 2 * l + 1;
        let lf = l as f64;
        // A = -i J_y = -(J+ - J-)/2, rows/cols indexed by m = -l..l
        let mut a = DMatrix::<f64>::zeros(w, w);
        for col in 0..w {
            let m = col as f64 - lf;
            if col + 1 < w {
                let c = (lf * (lf + 1.0) - m * (m + 1.0)).sqrt();
                a[(col + 1, col)] -= 0.5 * c;
            }
            if col > 0 {
                let c = (lf * (lf + 1.0) - m * (m - 1.0)).sqrt();
                a[(col - 1, col)] += 0.5 * c;
            }
        }
        (a * beta).exp()
    }

    fn d_direct(l: i64, m: i64, n: i64, beta: f64) -> f64 {
        let f = |x: i64| ln_factorial(x as usize);
        let (s, c) = (0.5 * beta).sin_cos();
        let mut sum = 0.0;
        for k in (n - m).max(0)..=(l + n).min(l - m) {
            let ln = 0.5 * (f(l + m) + f(l - m) + f(l + n) + f(l - n))
                - f(l + n - k)
                - f(k)
                - f(l - k - m)
                - f(k - n + m);
            let sign = if (k - n + m) % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign
                * ln.exp()
                * c.powi((2 * l - 2 * k + n - m) as i32)
                * s.powi((2 * k - n + m) as i32);
        }
        sum
    }

    #[test]
    fn trivial_values() {
        for beta in [0.0, 0.3, 2.0, PI] {
            assert_eq!(wigner_d(0, 0, 0, beta).unwrap(), 1.0);
        }
        assert!((wigner_d(1, 0, 0, PI / 3.0).unwrap() - 0.5).abs() < 1e-15);
        for l in 0..=8usize {
            let li = l as i64;
            for m in -li..=li {
                for n in -li..=li {
                    let v = wigner_d(l, m, n, 0.0).unwrap();
                    let e = if m == n { 1.0 } else { 0.0 };
                    assert!((v - e).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn matches_matrix_exponential() {
        let oracle = d_matrix_oracle(1, PI / 3.0);
        assert!((oracle[(1, 1)] - 0.5).abs() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let beta = rng.random_range(0.0..PI);
            for l in 0..=8usize {
                let o = d_matrix_oracle(l, beta);
                let t = WignerTable::new(l, beta);
                let li = l as i64;
                for m in -li..=li {
                    for n in -li..=li {
                        let want = o[((m + li) as usize, (n + li) as usize)];
                        assert!(
                            (t.get(l, m, n) - want).abs() < 1e-12,
                            "l={l} m={m} n={n}: {} vs {want}",
                            t.get(l, m, n)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn matches_direct_sum_to_degree_20() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..4 {
            let beta = rng.random_range(0.0..PI);
            let t = WignerTable::new(20, beta);
            for l in 0..=20i64 {
                for m in -l..=l {
                    for n in -l..=l {
                        let want = d_direct(l, m, n, beta);
                        assert!((t.get(l as usize, m, n) - want).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn symmetries() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let beta = rng.random_range(0.0..PI);
            let t = WignerTable::new(16, beta);
            for l in 0..=16i64 {
                for m in -l..=l {
                    for n in -l..=l {
                        let v = t.get(l as usize, m, n);
                        let sign = if (m - n).rem_euclid(2) == 0 {
                            1.0
                        } else {
                            -1.0
                        };
                        assert!((v - sign * t.get(l as usize, n, m)).abs() < 1e-12);
                        assert!((v - t.get(l as usize, -n, -m)).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn bounded_to_degree_64() {
        let mut worst: f64 = 0.0;
        for i in 0..1000 {
            let beta = PI * i as f64 / 999.0;
            let t = WignerTable::new(64, beta);
            worst = worst.max(t.values.iter().fold(0.0f64, |a, v| a.max(v.abs())));
        }
        assert!(worst <= 1.0 + 1e-9, "max |d| = {worst}");
    }

    #[test]
    fn index_errors() {
        assert!(matches!(
            wigner_d(2, 3, 0, 0.1),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            wigner_d(100_000, 0, 0, 0.1),
            Err(Error::BandLimit { .. })
        ));
    }

    fn matmul(a: &[Complex64], b: &[Complex64], w: usize) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(0.0, 0.0); w * w];
        for i in 0..w {
            for k in 0..w {
                for j in 0..w {
                    c[i * w + j] += a[i * w + k] * b[k * w + j];
                }
            }
        }
        c
    }

    #[test]
    fn representation_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..20 {
            let (g1, g2) = (Rotation::random(&mut rng), Rotation::random(&mut rng));
            assert!((wigner_D(0, 0, 0, &g1).unwrap() - 1.0).norm() < 1e-15);
            for l in [1usize, 3, 6] {
                let w = 2 * l + 1;
                let a = wigner_D_matrix(l, &g1).unwrap();
                let b = wigner_D_matrix(l, &g2).unwrap();
                let ab = wigner_D_matrix(l, &(g1 * g2)).unwrap();
                let prod = matmul(&a, &b, w);
                let err = ab
                    .iter()
                    .zip(&prod)
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0, f64::max);
                assert!(err < 1e-11, "l={l} err={err}");
            }
        }
    }

    #[test]
    fn unitarity_to_degree_16() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..10 {
            let g = Rotation::random(&mut rng);
            for l in 0..=16usize {
                let w = 2 * l + 1;
                let d = wigner_D_matrix(l, &g).unwrap();
                for m in 0..w {
                    for mp in 0..w {
                        let s: Complex64 =
                            (0..w).map(|n| d[m * w + n] * d[mp * w + n].conj()).sum();
                        let e = if m == mp { 1.0 } else { 0.0 };
                        assert!((s - e).norm() < 1e-11);
                    }
                }
            }
        }
    }
}
