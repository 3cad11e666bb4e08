use std::f64::consts::SQRT_2;

use corrlab_core::corr::catalog;
use corrlab_core::exec::{set_execution_mode, ExecutionMode};
use corrlab_core::measures::{
    estimate_ds_measure, forward_set_membership, invariance_residual, io, pullback_dirac_exact,
    pullback_dirac_sampled, sample_annulus_measure, sample_circle_measure, weak_star_discrepancy, TestDictionary,
    WeightedPointCloud, WEIGHT_SUM_TOL,
};
use corrlab_core::numerics::SpherePoint;

fn weights_ok(cloud: &WeightedPointCloud) -> bool {
    // Kahan summation: a plain sum of 10⁵ weights drifts by ~10⁻¹¹
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for &w in cloud.weights() {
        let y = w - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    cloud.weights().iter().all(|&w| w >= 0.0) && (sum - 1.0).abs() <= WEIGHT_SUM_TOL
}

#[test]
fn exact_pullbacks() {
    let sq = catalog::squaring();
    let c = pullback_dirac_exact(&sq, SpherePoint::real(1.0), 2, 16).unwrap();
    assert_eq!(c.len(), 4);
    assert!(c.weights().iter().all(|&w| w == 0.25));
    assert!(c.points().iter().all(|p| (p.value().unwrap().powu(4) - 1.0).norm() < 1e-12));

    let semi = catalog::semigroup_square_half_square();
    let c = pullback_dirac_exact(&semi, SpherePoint::real(3.0), 3, 64).unwrap();
    assert_eq!(c.len(), 64);
    assert!(c.weights().iter().all(|&w| w == 1.0 / 64.0));
    assert!(c.points().iter().all(|p| (0.9..=2.3).contains(&p.modulus())));
    assert!(weights_ok(&c));
}

#[test]
fn sampled_pullback_tracks_exact_tree() {
    let sq = catalog::squaring();
    let z = SpherePoint::real(1.0);
    let exact = pullback_dirac_exact(&sq, z, 10, 1024).unwrap();
    let sampled = pullback_dirac_sampled(&sq, z, 10, 10_000, 3).unwrap();
    assert!(weights_ok(&sampled));
    assert!(weak_star_discrepancy(&exact, &sampled, &TestDictionary::default()) <= 0.05);
}

#[test]
fn semigroup_walks_land_on_the_annulus() {
    let semi = catalog::semigroup_square_half_square();
    let c = pullback_dirac_sampled(&semi, SpherePoint::real(3.0), 25, 100_000, 1).unwrap();
    assert!(c.points().iter().all(|p| (1.0 - 1e-3..=2.0 + 1e-3).contains(&p.modulus())));
}

#[test]
fn squaring_measure_sits_on_the_circle() {
    let est = estimate_ds_measure(&catalog::squaring(), SpherePoint::real(2.0), 20, 100_000, 0).unwrap();
    assert!(est.warnings.is_empty());
    let mean_gap = est.cloud.iter().map(|(p, w)| w * (p.modulus() - 1.0).abs()).sum::<f64>();
    assert!(mean_gap <= 1e-3, "{mean_gap}");
    assert!(est.invariance_residual <= 0.02);
}

#[test]
fn semigroup_measure_matches_annulus_sampler() {
    let semi = catalog::semigroup_square_half_square();
    let est = estimate_ds_measure(&semi, SpherePoint::real(3.0), 25, 100_000, 0).unwrap();
    let annulus = sample_annulus_measure(100_000, 1).unwrap();
    let dict = TestDictionary::default();
    assert!(weak_star_discrepancy(&est.cloud, &annulus, &dict) <= 0.03);

    // refinement from depth 20 to 25 barely moves the moments
    let shallow = estimate_ds_measure(&semi, SpherePoint::real(3.0), 20, 100_000, 5).unwrap();
    assert!(weak_star_discrepancy(&shallow.cloud, &est.cloud, &dict) <= 0.03);
}

#[test]
fn squaring_refinement_is_stable() {
    let sq = catalog::squaring();
    let a = estimate_ds_measure(&sq, SpherePoint::real(3.0), 20, 100_000, 1).unwrap();
    let b = estimate_ds_measure(&sq, SpherePoint::real(3.0), 25, 100_000, 2).unwrap();
    assert!(weak_star_discrepancy(&a.cloud, &b.cloud, &TestDictionary::default()) <= 0.03);
}

#[test]
fn exceptional_start_only_warns() {
    let est = estimate_ds_measure(&catalog::semigroup_square_half_square(), SpherePoint::ZERO, 5, 100, 0).unwrap();
    assert!(!est.warnings.is_empty());
    assert_eq!(est.cloud.len(), 100);
}

#[test]
fn annulus_sampler() {
    let c = sample_annulus_measure(100_000, 0).unwrap();
    assert!(weights_ok(&c));
    assert!((c.measure_of_set(|p| p.modulus() > SQRT_2) - 0.5).abs() <= 0.01);
    assert_eq!(c.measure_of_set(|p| (1.0..=2.0).contains(&p.modulus())), 1.0);
    let mean_cos = c
        .iter()
        .map(|(p, w)| {
            let z = p.value().unwrap();
            w * z.re / z.norm()
        })
        .sum::<f64>();
    assert!(mean_cos.abs() <= 0.02);
    assert_eq!(c.measure_of_set(|_| true), 1.0);
    assert_eq!(c.measure_of_set(|_| false), 0.0);
}

#[test]
fn invariance_residuals() {
    let dict = TestDictionary::default();
    let cloud = sample_annulus_measure(10_000, 2).unwrap();
    assert!(invariance_residual(&catalog::identity(), &cloud, &dict).unwrap() < 1e-15);
    let circle = sample_circle_measure(10_000, 3).unwrap();
    assert!(invariance_residual(&catalog::squaring(), &circle, &dict).unwrap() <= 0.02);
    let annulus = sample_annulus_measure(100_000, 4).unwrap();
    assert!(invariance_residual(&catalog::semigroup_square_half_square(), &annulus, &dict).unwrap() <= 0.02);
}

#[test]
fn discrepancies() {
    let dict = TestDictionary::default();
    let a = sample_annulus_measure(100_000, 10).unwrap();
    let b = sample_annulus_measure(100_000, 11).unwrap();
    assert_eq!(weak_star_discrepancy(&a, &a, &dict), 0.0);
    assert!(weak_star_discrepancy(&a, &b, &dict) <= 0.02);
    assert!((weak_star_discrepancy(&a, &b, &dict) - weak_star_discrepancy(&b, &a, &dict)).abs() < 1e-15);
    let circle = sample_circle_measure(100_000, 12).unwrap();
    assert!(weak_star_discrepancy(&circle, &a, &dict) >= 0.1);
}

#[test]
fn set_membership() {
    let semi = catalog::semigroup_square_half_square();
    let outside = |p: SpherePoint| p.modulus() > SQRT_2;
    let z = SpherePoint::polar(1.9, 0.7);
    assert!(forward_set_membership(&semi, z, 0, &outside, 1).unwrap());
    assert!(forward_set_membership(&semi, z, 1, &outside, 4).unwrap());
    let inside = |p: SpherePoint| p.modulus() < 1.0;
    assert!(!forward_set_membership(&catalog::squaring(), SpherePoint::real(4.0), 1, &inside, 2).unwrap());
    assert!(forward_set_membership(&semi, z, 3, &outside, 63).is_err());
}

#[test]
fn unbiased_against_exact_tree() {
    let semi = catalog::semigroup_square_half_square();
    let z = SpherePoint::new(1.5, 0.5);
    let dict = TestDictionary::default();
    let exact = pullback_dirac_exact(&semi, z, 6, 4096).unwrap().moments(&dict);
    let runs: Vec<Vec<f64>> = (0..50)
        .map(|seed| pullback_dirac_sampled(&semi, z, 6, 1000, seed).unwrap().moments(&dict))
        .collect();
    for (k, &target) in exact.iter().enumerate() {
        let vals: Vec<f64> = runs.iter().map(|r| r[k]).collect();
        let mean = vals.iter().sum::<f64>() / 50.0;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 49.0;
        let se = (var / 50.0).sqrt();
        assert!((mean - target).abs() <= 3.0 * se + 1e-12, "moment {k}: {mean} vs {target} (se {se})");
    }
}

#[test]
fn clouds_do_not_depend_on_execution_mode() {
    let semi = catalog::semigroup_square_half_square();
    let run = |mode| {
        set_execution_mode(mode);
        pullback_dirac_sampled(&semi, SpherePoint::real(3.0), 12, 5000, 9).unwrap()
    };
    let par = run(ExecutionMode::Parallel);
    let seq = run(ExecutionMode::Sequential);
    set_execution_mode(ExecutionMode::Parallel);
    assert_eq!(io::cloud_to_text(&par), io::cloud_to_text(&seq));
}

#[test]
fn cloud_file_round_trip() {
    let c = sample_annulus_measure(100, 0).unwrap();
    let text = io::cloud_to_text(&c);
    let back = io::cloud_from_text(&text).unwrap();
    assert_eq!(back.points(), c.points());
    assert_eq!(back.weights(), c.weights());
    assert_eq!(io::cloud_to_text(&back), text);
}
