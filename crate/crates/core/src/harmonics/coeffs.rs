//! Degree-blocked coefficient tables.
//!
//! Both tables store, for every degree `l <= L`, a dense `(2l+1)×(2l+1)` block
//! indexed by `(m, n)` with `-l <= m, n <= l`, row-major in `m`.
//!
//! * [`HarmonicCoeffsSO3`] holds `f̂_l^{mn} = ∫ f(g) D^l_{mn}(g) dg`.
//! * [`PairHarmonicCoeffs`] holds the diagonal-degree expansion of a function
//!   on S²×S²; `m` pairs with the first (crystal) sphere and `n` with the
//!   second (specimen) sphere. See [`crate::harmonics::s2s2_analyze`].

use std::fmt;
use std::marker::PhantomData;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::limits::check_bandlimit;

/// Start of the degree-`l` block: `Σ_{k<l} (2k+1)² = l(2l-1)(2l+1)/3`.
#[inline]
pub const fn block_offset(l: usize) -> usize {
    if l == 0 {
        0
    } else {
        l * (2 * l - 1) * (2 * l + 1) / 3
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct So3;
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct S2S2;

pub struct BlockCoeffs<K> {
    bandlimit: usize,
    data: Vec<Complex64>,
    _kind: PhantomData<K>,
}

impl<K> Clone for BlockCoeffs<K> {
    fn clone(&self) -> Self {
        BlockCoeffs {
            bandlimit: self.bandlimit,
            data: self.data.clone(),
            _kind: PhantomData,
        }
    }
}

impl<K> PartialEq for BlockCoeffs<K> {
    fn eq(&self, other: &Self) -> bool {
        self.bandlimit == other.bandlimit && self.data == other.data
    }
}

pub type HarmonicCoeffsSO3 = BlockCoeffs<So3>;
pub type PairHarmonicCoeffs = BlockCoeffs<S2S2>;

impl<K> fmt::Debug for BlockCoeffs<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlockCoeffs")
            .field("bandlimit", &self.bandlimit)
            .field(
                "nonzero",
                &self.data.iter().filter(|c| c.norm_sqr() > 0.0).count(),
            )
            .finish()
    }
}

impl<K> BlockCoeffs<K> {
    pub fn zeros(bandlimit: usize) -> Result<Self> {
        check_bandlimit(bandlimit)?;
        Ok(Self::zeros_unchecked(bandlimit))
    }

    pub(crate) fn zeros_unchecked(bandlimit: usize) -> Self {
        BlockCoeffs {
            bandlimit,
            data: vec![Complex64::new(0.0, 0.0); block_offset(bandlimit + 1)],
            _kind: PhantomData,
        }
    }

    /// Table with a single unit coefficient at `(l, m, n)`.
    pub fn unit(bandlimit: usize, l: usize, m: i64, n: i64) -> Result<Self> {
        let mut c = Self::zeros(bandlimit)?;
        c.set(l, m, n, Complex64::new(1.0, 0.0))?;
        Ok(c)
    }

    pub fn bandlimit(&self) -> usize {
        self.bandlimit
    }

    fn index(&self, l: usize, m: i64, n: i64) -> Result<usize> {
        let li = l as i64;
        if l > self.bandlimit || m.abs() > li || n.abs() > li {
            return Err(Error::IndexOutOfRange { l, m, n });
        }
        Ok(block_offset(l) + (m + li) as usize * (2 * l + 1) + (n + li) as usize)
    }

    /// Coefficient at `(l, m, n)`; zero for degrees above the band limit.
    pub fn get(&self, l: usize, m: i64, n: i64) -> Complex64 {
        if l > self.bandlimit {
            return Complex64::new(0.0, 0.0);
        }
        self.index(l, m, n)
            .map(|i| self.data[i])
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn set(&mut self, l: usize, m: i64, n: i64, value: Complex64) -> Result<()> {
        let i = self.index(l, m, n)?;
        self.data[i] = value;
        Ok(())
    }

    pub fn block(&self, l: usize) -> &[Complex64] {
        &self.data[block_offset(l)..block_offset(l + 1)]
    }

    pub fn block_mut(&mut self, l: usize) -> &mut [Complex64] {
        &mut self.data[block_offset(l)..block_offset(l + 1)]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// `(l, m, n, value)` for every stored coefficient in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, i64, Complex64)> + '_ {
        (0..=self.bandlimit).flat_map(move |l| {
            let li = l as i64;
            let w = 2 * l + 1;
            self.block(l)
                .iter()
                .enumerate()
                .map(move |(k, &c)| (l, (k / w) as i64 - li, (k % w) as i64 - li, c))
        })
    }

    /// Multiplies every degree-`l` block by `factor(l)`.
    pub fn scale_degrees(&self, factor: impl Fn(usize) -> f64) -> Self {
        let mut out = self.clone();
        for l in 0..=self.bandlimit {
            let f = factor(l);
            out.block_mut(l).iter_mut().for_each(|c| *c *= f);
        }
        out
    }

    /// Same coefficients reinterpreted at another band limit (truncated or
    /// zero-padded).
    pub fn with_bandlimit(&self, bandlimit: usize) -> Self {
        let mut out = Self::zeros_unchecked(bandlimit);
        let n = block_offset(bandlimit.min(self.bandlimit) + 1);
        out.data[..n].copy_from_slice(&self.data[..n]);
        out
    }

    /// Max-norm distance, treating missing degrees as zero.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.data.len().max(other.data.len());
        (0..n)
            .map(|i| {
                let a = self.data.get(i).copied().unwrap_or_default();
                let b = other.data.get(i).copied().unwrap_or_default();
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude in degree `l`.
    pub fn degree_max_abs(&self, l: usize) -> f64 {
        if l > self.bandlimit {
            return 0.0;
        }
        self.block(l).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn from_fn(
        bandlimit: usize,
        mut f: impl FnMut(usize, i64, i64) -> Complex64,
    ) -> Result<Self> {
        let mut out = Self::zeros(bandlimit)?;
        for l in 0..=bandlimit {
            let li = l as i64;
            let w = 2 * l + 1;
            let block = out.block_mut(l);
            for (k, c) in block.iter_mut().enumerate() {
                *c = f(l, (k / w) as i64 - li, (k % w) as i64 - li);
            }
        }
        Ok(out)
    }
}

impl HarmonicCoeffsSO3 {
    /// `∫|f|² dg = Σ_l (2l+1) Σ_{mn} |f̂_l^{mn}|²`.
    pub fn l2_norm_sq(&self) -> f64 {
        (0..=self.bandlimit)
            .map(|l| (2 * l + 1) as f64 * self.block(l).iter().map(|c| c.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// `max |conj(f̂^{mn}) - (-1)^{m-n} f̂^{-m,-n}|`; zero iff the synthesized
    /// function is real-valued.
    pub fn realness_residual(&self) -> f64 {
        self.iter()
            .map(|(l, m, n, c)| {
                let sign = if (m - n) % 2 == 0 { 1.0 } else { -1.0 };
                (c.conj() - self.get(l, -m, -n) * sign).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Coefficients of the real part of the synthesized function.
    pub fn real_part(&self) -> Self {
        let mut out = self.clone();
        for (l, m, n, c) in self.iter() {
            let sign = if (m - n) % 2 == 0 { 1.0 } else { -1.0 };
            let mirrored = self.get(l, -m, -n).conj() * sign;
            out.set(l, m, n, 0.5 * (c + mirrored)).unwrap();
        }
        out
    }

    /// Random complex table with entries uniform in the unit square scaled by
    /// `1/(2l+1)`.
    pub fn random<R: Rng + ?Sized>(bandlimit: usize, rng: &mut R) -> Result<Self> {
        Self::from_fn(bandlimit, |l, _, _| {
            let s = 1.0 / (2 * l + 1) as f64;
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * s
        })
    }

    /// Random real-valued function with unit mass (`f̂_0^{00} = 1`).
    pub fn random_real<R: Rng + ?Sized>(bandlimit: usize, rng: &mut R) -> Result<Self> {
        let mut c = Self::random(bandlimit, rng)?.real_part();
        c.set(0, 0, 0, Complex64::new(1.0, 0.0))?;
        Ok(c)
    }
}
