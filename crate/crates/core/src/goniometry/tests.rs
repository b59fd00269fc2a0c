use super::reconstruct::{self, Factor};
use super::*;
use crate::harmonics::so3_synthesize;
use crate::rotations::EulerZYZ;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn directions(k: usize, seed: u64) -> Vec<UnitVector> {
    let mut r = rng(seed);
    (0..k).map(|_| UnitVector::random(&mut r)).collect()
}

fn weighted_figures(c: &HarmonicCoeffsSO3, hs: &[UnitVector]) -> Vec<PoleFigureGrid> {
    let (points, weights) = default_grid(c.bandlimit());
    hs.iter()
        .map(|h| {
            let mut pf = pole_figure(c, h, &points).unwrap();
            pf.weights = Some(weights.clone());
            pf
        })
        .collect()
}

#[test]
fn default_grid_weights_and_exactness() {
    let (points, weights) = default_grid(6);
    assert_eq!(points.len(), 7 * 14);
    assert!((weights.iter().sum::<f64>() - 4.0 * PI).abs() < 1e-12);
    // ∫ Y_6^3 conj(Y_6^3) = 1 and ∫ Y_6^3 conj(Y_5^3) = 0.
    let (mut same, mut cross) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for (p, w) in points.iter().zip(&weights) {
        let y = SphericalHarmonics::new(6, p);
        same += y.get(6, 3) * y.get(6, 3).conj() * *w;
        cross += y.get(6, 3) * y.get(5, 3).conj() * *w;
    }
    assert!((same.re - 1.0).abs() < 1e-12 && same.im.abs() < 1e-12);
    assert!(cross.norm() < 1e-12);
}

#[test]
fn uniform_pole_figure_is_one() {
    let c = make_odf(&OdfModel::uniform(4)).unwrap();
    let grid = equal_angle_grid(5, 8);
    let pf = pole_figure(&c, &UnitVector::E3, &grid).unwrap();
    for v in &pf.values {
        assert!((v - 1.0).abs() < 1e-13);
    }
}

#[test]
fn pole_figure_matches_fiber_quadrature() {
    let c = make_odf(&OdfModel::unimodal(
        Rotation::from_euler(&EulerZYZ::new(0.3, 0.9, 1.7)),
        6.0,
        6,
    ))
    .unwrap();
    let h = UnitVector::new(0.2, -0.5, 0.8).unwrap();
    let grid = equal_angle_grid(4, 6);
    let harmonic = pole_figure(&c, &h, &grid).unwrap();
    let geometric = pole_figure_geometric(|g| so3_synthesize(&c, g).re, &h, &grid, 64).unwrap();
    for (a, b) in harmonic.values.iter().zip(&geometric.values) {
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
}

#[test]
fn friedel_symmetry_is_exact() {
    let c = HarmonicCoeffsSO3::random_real(5, &mut rng(3)).unwrap();
    let grid = equal_angle_grid(3, 5);
    let h = UnitVector::new(1.0, 2.0, -0.5).unwrap();
    let a = pole_figure(&c, &h, &grid).unwrap();
    let b = pole_figure(&c, &-h, &grid).unwrap();
    assert_eq!(a.values, b.values);
}

#[test]
fn odd_degrees_are_invisible() {
    let c = HarmonicCoeffsSO3::random_real(7, &mut rng(5)).unwrap();
    let odd = c.scale_degrees(|l| (l % 2) as f64);
    let grid = equal_angle_grid(6, 9);
    for h in directions(4, 6) {
        let pf = pole_figure(&odd, &h, &grid).unwrap();
        let sup = pf.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        assert!(sup < 1e-12, "{sup}");
        let raw = radon_figure(&odd, &h, &grid).unwrap();
        assert!(raw.values.iter().any(|v| v.abs() > 1e-3));
    }
}

#[test]
fn even_projector_is_idempotent() {
    let c = HarmonicCoeffsSO3::random(6, &mut rng(8)).unwrap();
    let e = even_projector(&c);
    assert_eq!(even_projector(&e), e);
    assert_eq!(e.degree_max_abs(3), 0.0);
    assert_eq!(e.get(4, -2, 1), c.get(4, -2, 1));
}

#[test]
fn pole_figures_keep_unit_mean() {
    let c = make_odf(&OdfModel::unimodal(Rotation::random(&mut rng(9)), 10.0, 8)).unwrap();
    for pf in weighted_figures(&c, &directions(3, 10)) {
        assert!((pf.weighted_mean().unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn unimodal_peaks_where_the_center_maps_onto_h() {
    let kappa = 20.0;
    let c = make_odf(&OdfModel::unimodal(Rotation::IDENTITY, kappa, 16)).unwrap();
    let grid = equal_angle_grid(36, 72);
    let h = UnitVector::E3;
    let pf = pole_figure(&c, &h, &grid).unwrap();
    // Friedel symmetry puts equal peaks at ±h.
    let (peak, _) = pf.argmax().unwrap();
    assert!(
        peak.z().abs() > (2.5f64 * PI / 180.0).cos() - 1e-12,
        "{peak:?}"
    );

    let g0 = Rotation::from_euler(&EulerZYZ::new(1.1, 0.7, -0.4));
    let shifted = make_odf(&OdfModel::unimodal(g0, kappa, 16)).unwrap();
    let target = g0.inverse().rotate(&h);
    let mut probes = vec![target];
    for dx in [-0.05, 0.05] {
        for dy in [-0.05, 0.05] {
            let [x, y, z] = target.to_array();
            probes.push(UnitVector::new(x + dx, y + dy, z).unwrap());
        }
    }
    let pf = pole_figure(&shifted, &h, &probes).unwrap();
    for v in &pf.values[1..] {
        assert!(*v < pf.values[0]);
    }
}

#[test]
fn unimodal_is_nonnegative_and_normalized() {
    let c = make_odf(&OdfModel::unimodal(Rotation::random(&mut rng(11)), 10.0, 8)).unwrap();
    assert_eq!(c.get(0, 0, 0), Complex64::new(1.0, 0.0));
    assert!(c.realness_residual() < 1e-14);
    let mut r = rng(12);
    let worst = (0..10_000)
        .map(|_| so3_synthesize(&c, &Rotation::random(&mut r)).re)
        .fold(f64::INFINITY, f64::min);
    assert!(worst > -1e-10, "{worst}");
}

#[test]
fn unimodal_peak_value_matches_kernel() {
    // f(g0) = ψ(0)² / Σ c_j² with ψ(0) = Σ (2j+1) c_j.
    let kappa = 6.0;
    let lmax = 8;
    let g0 = Rotation::from_euler(&EulerZYZ::new(0.4, 2.0, 5.0));
    let c = make_odf(&OdfModel::unimodal(g0, kappa, lmax)).unwrap();
    let cj: Vec<f64> = (0..=lmax / 2)
        .map(|j| (2 * j + 1) as f64 * (-((j * (j + 1)) as f64) / kappa).exp())
        .collect();
    let psi0: f64 = cj
        .iter()
        .enumerate()
        .map(|(j, c)| (2 * j + 1) as f64 * c)
        .sum();
    let e0: f64 = cj.iter().map(|c| c * c).sum();
    let value = so3_synthesize(&c, &g0).re;
    assert!((value - psi0 * psi0 / e0).abs() < 1e-9 * value);
}

#[test]
fn truncated_kernel_is_rejected_with_suggestion() {
    let err = make_odf(&OdfModel::unimodal(Rotation::IDENTITY, 200.0, 4)).unwrap_err();
    match err {
        Error::Model {
            suggested_bandlimit,
            ..
        } => {
            assert!(suggested_bandlimit > 4);
            assert!(make_odf(&OdfModel::unimodal(
                Rotation::IDENTITY,
                200.0,
                suggested_bandlimit
            ))
            .is_ok());
        }
        other => panic!("{other:?}"),
    }
    assert!(make_odf(&OdfModel::unimodal(Rotation::IDENTITY, -1.0, 4)).is_err());
}

#[test]
fn uniform_model_is_a_single_coefficient() {
    let c = make_odf(&OdfModel::uniform(6)).unwrap();
    assert_eq!(
        c.iter().filter(|t| t.3 != Complex64::new(0.0, 0.0)).count(),
        1
    );
}

#[test]
fn reconstruction_recovers_even_part() {
    let lmax = 6;
    let truth = HarmonicCoeffsSO3::random_real(lmax, &mut rng(20)).unwrap();
    let pfs = weighted_figures(&truth, &directions(2 * lmax + 3, 21));
    let rec = reconstruct_even(&pfs, lmax).unwrap();
    assert!(rec.coeffs.max_abs_diff(&even_projector(&truth)) < 1e-10);
    assert!(rec.residuals.iter().all(|r| *r < 1e-10));
    for c in &rec.grid_condition {
        assert!((c - 1.0).abs() < 1e-9, "{c}");
    }
    assert!(rec.condition().is_finite());
}

#[test]
fn reconstruction_on_unweighted_lattice() {
    let lmax = 4;
    let truth = make_odf(&OdfModel::unimodal(
        Rotation::random(&mut rng(30)),
        4.0,
        lmax,
    ))
    .unwrap();
    let grid = equal_angle_grid(12, 24);
    let pfs: Vec<_> = directions(9, 31)
        .iter()
        .map(|h| pole_figure(&truth, h, &grid).unwrap())
        .collect();
    let rec = reconstruct_even(&pfs, lmax).unwrap();
    assert!(rec.coeffs.max_abs_diff(&even_projector(&truth)) < 1e-10);
}

#[test]
fn too_few_directions_are_reported_by_degree() {
    let truth = make_odf(&OdfModel::uniform(4)).unwrap();
    let err = reconstruct_even(&weighted_figures(&truth, &[UnitVector::E3]), 4).unwrap_err();
    match err {
        Error::RankDeficient { degrees, .. } => assert_eq!(degrees, vec![2, 4]),
        other => panic!("{other:?}"),
    }
    let three = directions(3, 40);
    let truth8 = make_odf(&OdfModel::uniform(8)).unwrap();
    let err = reconstruct_even(&weighted_figures(&truth8, &three), 8).unwrap_err();
    match err {
        Error::RankDeficient { degrees, .. } => assert_eq!(degrees, vec![2, 4, 6, 8]),
        other => panic!("{other:?}"),
    }
    // Band limit 0 needs only the mean.
    let rec = reconstruct_even(&weighted_figures(&truth, &[UnitVector::E3]), 0).unwrap();
    assert!((rec.coeffs.get(0, 0, 0).re - 1.0).abs() < 1e-12);
}

#[test]
fn sparse_grid_is_rejected() {
    let truth = make_odf(&OdfModel::uniform(4)).unwrap();
    let pf = pole_figure(&truth, &UnitVector::E3, &equal_angle_grid(2, 3)).unwrap();
    assert!(matches!(
        reconstruct_even(&[pf], 4),
        Err(Error::RankDeficient { .. })
    ));
}

#[test]
fn malformed_figures_are_rejected() {
    let truth = make_odf(&OdfModel::uniform(2)).unwrap();
    let mut pf = weighted_figures(&truth, &[UnitVector::E3]).remove(0);
    pf.values[3] = f64::NAN;
    assert!(matches!(
        reconstruct_even(&[pf.clone()], 0),
        Err(Error::NonFinite { node: 3, .. })
    ));
    pf.values.pop();
    assert!(matches!(
        reconstruct_even(&[pf], 0),
        Err(Error::InvalidArgument(_))
    ));
    assert!(reconstruct_even(&[], 2).is_err());
}

#[test]
fn normal_equations_agree_with_svd_solve() {
    let mut r = rng(50);
    let a = DMatrix::from_fn(15, 7, |_, _| {
        Complex64::new(
            rand::Rng::random_range(&mut r, -1.0..1.0),
            rand::Rng::random_range(&mut r, -1.0..1.0),
        )
    });
    let b = DMatrix::from_fn(15, 3, |_, _| {
        Complex64::new(rand::Rng::random_range(&mut r, -1.0..1.0), 0.0)
    });
    let Factor::Ok(solver) = reconstruct::factor(a.clone()) else {
        panic!("full-rank design reported deficient");
    };
    let x = solver.solve(&b);
    let y = a.svd(true, true).solve(&b, 1e-14).unwrap();
    assert!((x - y).iter().all(|d| d.norm() < 1e-12));
}

#[test]
fn empty_grid_is_rejected() {
    let c = make_odf(&OdfModel::uniform(2)).unwrap();
    assert!(pole_figure(&c, &UnitVector::E3, &[]).is_err());
}
