//! Band-limit ceilings.
//!
//! The harmonic band limit defaults to 64 and may be raised up to 128 through
//! the `TEXRADON_LMAX` environment variable. Quadrature rules are allowed twice
//! the harmonic ceiling since analysis integrates products of two band-limited
//! functions.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_BANDLIMIT: usize = 64;
pub const HARD_MAX_BANDLIMIT: usize = 128;
pub const LMAX_ENV: &str = "TEXRADON_LMAX";

pub fn max_bandlimit() -> usize {
    static LMAX: OnceLock<usize> = OnceLock::new();
    *LMAX.get_or_init(|| {
        std::env::var(LMAX_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .map(|v| v.min(HARD_MAX_BANDLIMIT))
            .unwrap_or(DEFAULT_MAX_BANDLIMIT)
    })
}

pub fn max_quadrature_bandlimit() -> usize {
    2 * max_bandlimit()
}

pub fn check_bandlimit(l: usize) -> Result<()> {
    let max = max_bandlimit();
    if l > max {
        return Err(Error::BandLimit {
            requested: l,
            max,
            hard: HARD_MAX_BANDLIMIT,
        });
    }
    Ok(())
}

pub(crate) fn check_quadrature_bandlimit(l: usize) -> Result<()> {
    let max = max_quadrature_bandlimit();
    if l > max {
        return Err(Error::BandLimit {
            requested: l,
            max,
            hard: 2 * HARD_MAX_BANDLIMIT,
        });
    }
    Ok(())
}
