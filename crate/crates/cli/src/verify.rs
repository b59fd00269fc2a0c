//! Self-check suites. Each check prints `name status metric tolerance`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use texradon::goniometry::{default_grid, radon_figure};
use texradon::limits::check_bandlimit;
use texradon::{
    invert_backprojection, invert_slice, pole_figure, radon_geometric, radon_harmonic,
    s2s2_synthesize, s3_circle_integral, so3_analyze, so3_quadrature, so3_synthesize,
    HarmonicCoeffsSO3, Rotation, UnitVector,
};

use crate::config::ConfigFile;
use crate::error::{CliError, CliResult};
use crate::{Suite, VerifyArgs};

struct Check {
    name: &'static str,
    metric: f64,
    tolerance: f64,
    /// Metric must stay at or below the tolerance (else at or above).
    upper: bool,
}

impl Check {
    fn below(name: &'static str, metric: f64, tolerance: f64) -> Self {
        Check {
            name,
            metric,
            tolerance,
            upper: true,
        }
    }

    fn above(name: &'static str, metric: f64, tolerance: f64) -> Self {
        Check {
            name,
            metric,
            tolerance,
            upper: false,
        }
    }

    fn pass(&self) -> bool {
        if self.upper {
            self.metric <= self.tolerance
        } else {
            self.metric >= self.tolerance
        }
    }
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Slice => "slice",
        Suite::Roundtrip => "roundtrip",
        Suite::Friedel => "friedel",
        Suite::S3 => "s3",
        Suite::Parseval => "parseval",
    }
}

fn random_pairs(rng: &mut ChaCha8Rng, n: usize) -> Vec<(UnitVector, UnitVector)> {
    (0..n)
        .map(|_| (UnitVector::random(rng), UnitVector::random(rng)))
        .collect()
}

fn slice(lmax: usize, rng: &mut ChaCha8Rng) -> CliResult<Vec<Check>> {
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let c = HarmonicCoeffsSO3::random_real(lmax, rng)?;
        let p = radon_harmonic(&c);
        for (h, r) in random_pairs(rng, 20) {
            let harmonic = s2s2_synthesize(&p, &h, &r).re;
            let geometric = radon_geometric(|g| so3_synthesize(&c, g).re, &h, &r, 256)?;
            worst = worst.max((geometric - harmonic).abs() / harmonic.abs().max(1.0));
        }
    }
    let mut unit: f64 = 0.0;
    for (h, r) in random_pairs(rng, 1000) {
        unit = unit.max((radon_geometric(|_| 1.0, &h, &r, 256)? - 1.0).abs());
    }
    Ok(vec![
        Check::below("slice_theorem", worst, 1e-8),
        Check::below("unit_constant", unit, 1e-13),
    ])
}

fn roundtrip(lmax: usize, rng: &mut ChaCha8Rng) -> CliResult<Vec<Check>> {
    let c = HarmonicCoeffsSO3::random_real(lmax, rng)?;
    let p = radon_harmonic(&c);
    let exact = invert_slice(&p).max_abs_diff(&c);
    let bp = invert_backprojection(
        |h: &UnitVector, r: &UnitVector| s2s2_synthesize(&p, h, r),
        lmax,
    )?;
    Ok(vec![
        Check::below("slice_inverse", exact, 1e-13),
        Check::below("backprojection_vs_slice", bp.max_abs_diff(&c), 1e-8),
    ])
}

fn friedel(lmax: usize, rng: &mut ChaCha8Rng) -> CliResult<Vec<Check>> {
    let c = HarmonicCoeffsSO3::random_real(lmax.max(1), rng)?;
    let odd = c.scale_degrees(|l| (l % 2) as f64);
    let (grid, _) = default_grid(c.bandlimit());
    let (mut sup, mut raw, mut asym): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..4 {
        let h = UnitVector::random(rng);
        let sup_of = |v: &[f64]| v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        sup = sup.max(sup_of(&pole_figure(&odd, &h, &grid)?.values));
        raw = raw.max(sup_of(&radon_figure(&odd, &h, &grid)?.values));
        let a = pole_figure(&c, &h, &grid)?.values;
        let b = pole_figure(&c, &-h, &grid)?.values;
        asym = asym.max(a.iter().zip(&b).fold(0.0, |m, (x, y)| m.max((x - y).abs())));
    }
    Ok(vec![
        Check::below("odd_annihilation", sup, 1e-10),
        Check::above("odd_raw_radon", raw, 1e-6),
        Check::below("friedel_symmetry", asym, 0.0),
    ])
}

fn s3(lmax: usize, rng: &mut ChaCha8Rng) -> CliResult<Vec<Check>> {
    let c = HarmonicCoeffsSO3::random_real(lmax, rng)?;
    let f = |g: &Rotation| so3_synthesize(&c, g).re;
    let mut worst: f64 = 0.0;
    for (h, r) in random_pairs(rng, 20) {
        let a = radon_geometric(f, &h, &r, 512)?;
        let b = s3_circle_integral(f, &h, &r, 512)?;
        worst = worst.max((a - b).abs());
    }
    Ok(vec![Check::below("s3_vs_fiber", worst, 1e-9)])
}

fn parseval(lmax: usize, rng: &mut ChaCha8Rng) -> CliResult<Vec<Check>> {
    let c = HarmonicCoeffsSO3::random_real(lmax, rng)?;
    let spectral = c.l2_norm_sq();
    let rule = so3_quadrature(2 * lmax)?;
    let spatial: f64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(e, w)| w * so3_synthesize(&c, &Rotation::from_euler(e)).norm_sqr())
        .sum();
    let back = so3_analyze(|g| Complex64::new(so3_synthesize(&c, g).re, 0.0), lmax)?;
    Ok(vec![
        Check::below("parseval", (spatial - spectral).abs() / spectral, 1e-10),
        Check::below("analysis_roundtrip", back.max_abs_diff(&c), 1e-11),
        Check::below("realness", back.realness_residual(), 1e-12),
        Check::below("mass", (back.get(0, 0, 0).re - 1.0).abs() * 4.0 * PI, 1e-11),
    ])
}

pub fn run(a: &VerifyArgs, cfg: &ConfigFile) -> CliResult<()> {
    let suite = cfg.pick_enum(a.suite, "suite", Suite::Slice)?;
    let lmax = cfg.pick(a.bandlimit, "L", 8)?;
    check_bandlimit(lmax)?;
    let seed = cfg.pick(a.seed, "seed", 7)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = match suite {
        Suite::Slice => slice(lmax, &mut rng)?,
        Suite::Roundtrip => roundtrip(lmax, &mut rng)?,
        Suite::Friedel => friedel(lmax, &mut rng)?,
        Suite::S3 => s3(lmax, &mut rng)?,
        Suite::Parseval => parseval(lmax, &mut rng)?,
    };
    let mut failed = 0;
    for c in &checks {
        let status = if c.pass() { "PASS" } else { "FAIL" };
        failed += usize::from(!c.pass());
        println!("{} {status} {:.6e} {:.1e}", c.name, c.metric, c.tolerance);
    }
    println!(
        "# suite {} (L={lmax}, seed={seed}): {}/{} passed",
        suite_name(suite),
        checks.len() - failed,
        checks.len()
    );
    if failed > 0 {
        return Err(CliError::Failed(failed));
    }
    Ok(())
}
