use cosserat_core::acoustic::{acoustic_cauchy, acoustic_cosserat, wave_solve};
use cosserat_core::antiplane::{classify, companion_roots, match_roots, root_pattern_consistent, AntiplaneMaterial};
use cosserat_core::discontinuity::{assemble_full_system, maxwell_system};
use cosserat_core::ensemble;
use cosserat_core::sphere::SweepConfig;
use cosserat_core::stability::{full_report, StabilityConfig};
use cosserat_core::symbol::{evaluate, total_symbol};
use cosserat_core::{CauchyTensor, CosseratTensor, Vec3};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coarse() -> StabilityConfig {
    StabilityConfig {
        sweep: SweepConfig::coarse(),
        ..StabilityConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn acoustic_tensors_are_even_and_annihilate_n(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (c, b) = ensemble::mixed_pair(&mut r);
        let n = ensemble::direction(&mut r);
        let ac = acoustic_cauchy(&c, &n).unwrap();
        let ab = acoustic_cosserat(&b, &n).unwrap();
        prop_assert!((ac - ac.transpose()).norm() <= 1e-13 * ac.norm().max(1.0));
        prop_assert!((ab - ab.transpose()).norm() <= 1e-13 * ab.norm().max(1.0));
        prop_assert!((ab * n).norm() <= 1e-13 * ab.norm().max(1.0));
        let flip = acoustic_cosserat(&b, &(-n)).unwrap();
        prop_assert!((flip - ab).norm() <= 1e-13 * ab.norm().max(1.0));
    }

    #[test]
    fn verdicts_invariant_under_block_scaling(seed in any::<u64>(), sc in -3.0f64..3.0, sb in -3.0f64..3.0) {
        let mut r = rng(seed);
        let (c, b) = ensemble::mixed_pair(&mut r);
        let (fc, fb) = (10f64.powf(sc), 10f64.powf(sb));
        let base = full_report(&c, &b, &coarse()).unwrap();
        let scaled = full_report(&c.scaled(fc), &b.scaled(fb), &coarse()).unwrap();
        for ((name, x), (_, y)) in base.conditions().into_iter().zip(scaled.conditions()) {
            if !x.near_boundary {
                prop_assert_eq!(x.verdict, y.verdict, "{}", name);
            }
            prop_assert!((x.margin - y.margin).abs() <= 1e-8 * (1.0 + x.margin.abs()), "{} {} {}", name, x.margin, y.margin);
        }
    }

    #[test]
    fn total_symbol_polynomial(seed in any::<u64>(), k in 0.1f64..10.0) {
        let mut r = rng(seed);
        let (c, b) = ensemble::mixed_pair(&mut r);
        let n = ensemble::direction(&mut r);
        let (a, det) = total_symbol(&c, &b, &n, k).unwrap();
        let direct = a.determinant();
        prop_assert!((det - direct).abs() <= 1e-9 * a.norm().powi(3).max(f64::MIN_POSITIVE));
        let e = evaluate(&c, &b, &n, k, 1.0).unwrap();
        let leading = e.tau_nu * e.lambda2 * e.lambda3;
        prop_assert!((e.det_modified.abs() - k.powi(12) * leading.abs()).abs() <= 1e-8 * k.powi(12) * (c.scale() * b.scale() * b.scale()));
    }

    #[test]
    fn closed_form_roots_match_companion(beta in -10.0f64..10.0, gamma in -10.0f64..10.0) {
        let res = classify(beta, gamma);
        let err = match_roots(&res.roots, &companion_roots(beta, gamma));
        prop_assert!(err < 1e-10, "({beta}, {gamma}) err {err}");
        prop_assert!(root_pattern_consistent(res.regime, &res.roots, 1e-9));
    }

    #[test]
    fn discontinuity_normals_zero_the_quartic(b2 in 0.01f64..5.0, b4 in 0.01f64..5.0, s in 0.0f64..3.0) {
        // b0 below -sqrt(b2 b4) is hyperbolic: four real normals
        let b0 = -(b2 * b4).sqrt() - s;
        let m = AntiplaneMaterial::with_b0(1.0, 1.0, 1.0, b2, b0, b4);
        for n in m.classify().unwrap().normals {
            prop_assert!(m.quartic_form(n).abs() <= 1e-10 * (b2 + b4 + b0.abs()));
        }
    }

    #[test]
    fn surface_system_matches_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (c, b) = ensemble::mixed_pair(&mut r);
        let n = ensemble::direction(&mut r);
        let kappa = ensemble::tangent(&mut r, &n);
        let sys = assemble_full_system(&c, &b, &n, &kappa).unwrap();
        let oracle = maxwell_system(&c, &b, &n, &kappa).unwrap();
        prop_assert!((sys.matrix - oracle).norm() <= 1e-12 * oracle.norm());
        prop_assert!(sys.effective_rank <= 5);
    }

    #[test]
    fn wave_branches_are_sorted(seed in any::<u64>(), k in 0.0f64..5.0) {
        let mut r = rng(seed);
        let c = ensemble::cauchy_pd(&mut r);
        let b = ensemble::cosserat_pd(&mut r);
        let n = ensemble::direction(&mut r);
        let w = wave_solve(&c, &b, 1.0, &n, k).unwrap();
        for pair in w.branches.windows(2) {
            prop_assert!(pair[0].omega_sq >= pair[1].omega_sq - 1e-12 * (1.0 + pair[0].omega_sq.abs()));
        }
        prop_assert!(w.branches.iter().all(|b| b.phase_velocity.is_some()));
    }

    #[test]
    fn reduced_forms_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = ensemble::cauchy_general(&mut r);
        let b = ensemble::cosserat_general(&mut r);
        prop_assert_eq!(CauchyTensor::from_reduced(&c.to_reduced()).unwrap().mandel(), c.mandel());
        let (back, residual) = CosseratTensor::from_reduced(&b.to_reduced()).unwrap();
        prop_assert!(residual <= 1e-14 * b.scale());
        prop_assert!((back.deviatoric_matrix() - b.deviatoric_matrix()).norm() <= 1e-14 * b.scale());
    }
}

#[test]
fn isotropic_report_margins() {
    let c = CauchyTensor::isotropic(1.0, 1.0);
    let b = CosseratTensor::isotropic(1.0, 0.0);
    let r = full_report(&c, &b, &StabilityConfig::default()).unwrap();
    assert!(r.conditions().iter().all(|(_, x)| x.verdict));
    let n = Vec3::new(0.0, 0.0, 1.0);
    let w = wave_solve(&c, &b, 1.0, &n, 1.0).unwrap();
    assert!((w.branches[0].omega_sq - 3.0).abs() < 1e-12);
}
