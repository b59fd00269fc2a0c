use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::harmonics::{s2s2_analyze, s2s2_synthesize, so3_synthesize, sph_harm};
use crate::rotations::s2_quadrature;

/// Laplace–Beltrami on S² via the 7-point Laplacian of the degree-0
/// homogeneous extension `x ↦ f(x/|x|)`.
fn fd_sphere_laplacian(
    f: impl Fn(&UnitVector) -> Complex64,
    v: &UnitVector,
    step: f64,
) -> Complex64 {
    let p = v.to_array();
    let at = |d: [f64; 3]| f(&UnitVector::new(p[0] + d[0], p[1] + d[1], p[2] + d[2]).unwrap());
    let centre = f(v);
    let mut acc = centre * -6.0;
    for axis in 0..3 {
        for s in [-1.0, 1.0] {
            let mut d = [0.0; 3];
            d[axis] = s * step;
            acc += at(d);
        }
    }
    acc / (step * step)
}

/// `-<F, ΔF> / <F, F>` for `F(h, r) = Y_l^m(h) conj(Y_l^n(r))` on S²×S².
fn rayleigh_quotient(l: usize, m: i64, n: i64, step: f64) -> f64 {
    let rule = s2_quadrature(2 * l + 2).unwrap();
    let yh = |h: &UnitVector| sph_harm(l, m, h).unwrap();
    let yr = |r: &UnitVector| sph_harm(l, n, r).unwrap().conj();
    let (mut num, mut den) = (0.0, 0.0);
    for (h, wh) in rule.nodes.iter().zip(&rule.weights) {
        let (a, lap_a) = (yh(h), fd_sphere_laplacian(yh, h, step));
        for (r, wr) in rule.nodes.iter().zip(&rule.weights) {
            let (b, lap_b) = (yr(r), fd_sphere_laplacian(yr, r, step));
            let value = a * b;
            let lap = lap_a * b + a * lap_b;
            num += (value.conj() * lap).re * wh * wr;
            den += value.norm_sqr() * wh * wr;
        }
    }
    -num / den
}

#[test]
fn multiplier_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let p = PairHarmonicCoeffs::from_fn(4, |_, _, _| {
        use rand::Rng;
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
    .unwrap();
    let once = sqrt_multiplier_s2s2(&p);
    assert_eq!(once.block(0), p.block(0));
    for (a, b) in once.block(2).iter().zip(p.block(2)) {
        assert_eq!(*a, *b * 5.0);
    }
    let twice = sqrt_multiplier_s2s2(&once);
    for l in 0..=4 {
        for (a, b) in twice.block(l).iter().zip(p.block(l)) {
            let s = ((2 * l + 1) * (2 * l + 1)) as f64;
            assert!((*a - *b * s).norm() < 1e-13);
        }
    }
}

#[test]
fn multiplier_symbols_are_odd_integers() {
    let s2 = MultiplierSpec::sqrt_laplacian_s2s2(64);
    let so3 = MultiplierSpec::sqrt_laplacian_so3(64);
    for l in 0..=64 {
        assert_eq!(s2.get(l), (2 * l + 1) as f64);
        assert_eq!(so3.get(l), (2 * l + 1) as f64);
    }
    assert!(MultiplierSpec::new(vec![1.0, 0.0]).is_err());
    assert!(MultiplierSpec::new(vec![1.0, f64::NAN]).is_err());
}

#[test]
fn finite_difference_eigenvalue() {
    let l = 2;
    let lambda = rayleigh_quotient(l, 1, -2, 1e-3);
    assert!((lambda - 12.0).abs() < 1e-3, "{lambda}");
    let mu = (2.0 * lambda + 1.0).sqrt();
    assert!((mu - 5.0).abs() < 1e-4);
}

#[test]
fn slice_inverse_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    let c = HarmonicCoeffsSO3::random(16, &mut rng).unwrap();
    assert!(invert_slice(&radon_harmonic(&c)).max_abs_diff(&c) < 1e-13);
    let p = s2s2_analyze(|_, _| Complex64::new(1.0, 0.0), 3).unwrap();
    let f = invert_slice(&p);
    assert!((so3_synthesize(&f, &Rotation::random(&mut rng)) - 1.0).norm() < 1e-13);
}

#[test]
fn calibration_table() {
    let a = calibrate_dual_symbol(10).unwrap();
    let b = calibrate_dual_symbol(10).unwrap();
    assert_eq!(a, b);
    let mu = MultiplierSpec::sqrt_laplacian_so3(10);
    assert!((a.get(0) * mu.get(0) - 1.0).abs() < 1e-14);
    for l in 0..=10 {
        assert!(a.get(l) > 0.0);
        if l > 0 {
            assert!(a.get(l) < a.get(l - 1));
        }
        // two derivations of μ_l coincide as integers
        assert_eq!((1.0 / a.get(l)).round() as usize, 2 * l + 1);
        assert_eq!(mu.get(l) as usize, 2 * l + 1);
    }
    a.check_against_frozen().unwrap();
    assert!(DualSymbol::frozen(64).values().iter().all(|&k| k > 0.0));
}

#[test]
fn drifted_table_is_rejected() {
    let mut k = DualSymbol::frozen(3).values().to_vec();
    k[2] *= 1.001;
    let err = DualSymbol::new(k).check_against_frozen().unwrap_err();
    assert!(matches!(err, Error::Calibration { degree: 2, .. }));
}

#[test]
fn backprojection_of_constant() {
    let f = invert_backprojection(|_: &UnitVector, _: &UnitVector| 1.0, 3).unwrap();
    assert!(f.max_abs_diff(&HarmonicCoeffsSO3::unit(3, 0, 0, 0).unwrap()) < 1e-13);
}

#[test]
fn backprojection_matches_slice() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let c = HarmonicCoeffsSO3::random_real(6, &mut rng).unwrap();
    let p = radon_harmonic(&c);
    let data = |h: &UnitVector, r: &UnitVector| s2s2_synthesize(&p, h, r).re;
    let bp = invert_backprojection(data, 6).unwrap();
    let sl = invert_slice(&s2s2_analyze(|h, r| Complex64::new(data(h, r), 0.0), 6).unwrap());
    assert!(bp.max_abs_diff(&sl) < 1e-8);
    assert!(bp.max_abs_diff(&c) < 1e-8);
}

#[test]
fn backprojection_keeps_degree() {
    let c = HarmonicCoeffsSO3::unit(5, 3, 2, -1).unwrap();
    let p = radon_harmonic(&c);
    let bp = invert_backprojection(
        |h: &UnitVector, r: &UnitVector| s2s2_synthesize(&p, h, r),
        5,
    )
    .unwrap();
    for l in [0usize, 1, 2, 4, 5] {
        assert!(bp.degree_max_abs(l) < 1e-9);
    }
    assert!(bp.max_abs_diff(&c) < 1e-10);
}
