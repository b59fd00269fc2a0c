//! Orthonormal complex spherical harmonics with the Condon–Shortley phase.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::limits::check_bandlimit;
use crate::rotations::UnitVector;

/// `Y_l^m(v)` for all `l <= bandlimit`, `|m| <= l`, indexed `l² + l + m`.
#[derive(Clone, Debug)]
pub struct SphericalHarmonics {
    bandlimit: usize,
    values: Vec<Complex64>,
}

impl SphericalHarmonics {
    pub fn new(bandlimit: usize, v: &UnitVector) -> Self {
        let lmax = bandlimit;
        let mut values = vec![Complex64::new(0.0, 0.0); (lmax + 1) * (lmax + 1)];
        let x = v.z();
        let s = v.x().hypot(v.y());
        let phi = if s == 0.0 { 0.0 } else { v.y().atan2(v.x()) };

        let mut pmm = 0.5 / PI.sqrt();
        for m in 0..=lmax {
            if m > 0 {
                let mf = m as f64;
                pmm *= -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s;
            }
            let phase = Complex64::from_polar(1.0, m as f64 * phi);
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let mut store = |l: usize, p: f64| {
                let y = phase * p;
                values[l * l + l + m] = y;
                if m > 0 {
                    values[l * l + l - m] = y.conj() * sign;
                }
            };
            store(m, pmm);
            if m == lmax {
                break;
            }
            let mut p_prev = pmm;
            let mut p_cur = (2.0 * m as f64 + 3.0).sqrt() * x * pmm;
            store(m + 1, p_cur);
            let mf2 = (m * m) as f64;
            for l in (m + 2)..=lmax {
                let lf = l as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf2)).sqrt();
                let lm1 = lf - 1.0;
                let b = ((lm1 * lm1 - mf2) / (4.0 * lm1 * lm1 - 1.0)).sqrt();
                let p_next = a * (x * p_cur - b * p_prev);
                p_prev = p_cur;
                p_cur = p_next;
                store(l, p_cur);
            }
        }
        SphericalHarmonics { bandlimit, values }
    }

    pub fn bandlimit(&self) -> usize {
        self.bandlimit
    }

    #[inline]
    pub fn get(&self, l: usize, m: i64) -> Complex64 {
        self.values[((l * l + l) as i64 + m) as usize]
    }

    /// Degree-`l` values, `m = -l..=l`.
    pub fn degree(&self, l: usize) -> &[Complex64] {
        &self.values[l * l..(l + 1) * (l + 1)]
    }
}

pub fn sph_harm(l: usize, m: i64, v: &UnitVector) -> Result<Complex64> {
    check_bandlimit(l)?;
    if m.unsigned_abs() as usize > l {
        return Err(Error::IndexOutOfRange { l, m, n: 0 });
    }
    Ok(SphericalHarmonics::new(l, v).get(l, m))
}
