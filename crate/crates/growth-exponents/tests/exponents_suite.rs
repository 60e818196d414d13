//! End-to-end pass over the free-group model: one growth profile feeding the
//! Poincare exponent, the dissipativity window, the Koopman series, the
//! entropy/drift program, and the explicit embedding certificate, plus the
//! skew-product verdict triple.

use growth_exponents::{
    edge_indicator_validation, guivarch_check, koopman_l2_report, locally_finite_cocycle,
    poincare_exponent, radial_entropy_drift, skew_delta, tdiss_window, doubling_tower_sizes,
    DeltaVerdict, FreeGroupModel, GrowthProfile, ProfileKind, SeriesVerdict,
};

#[test]
fn free_group_exponent_pipeline_is_coherent() {
    let f2 = FreeGroupModel::new(2).unwrap();

    // Poincare exponent of the tree profile at radius 12: log 3 to 1e-6.
    let profile = f2.tree_profile(12);
    let poincare = poincare_exponent(&profile).unwrap();
    assert!((poincare.estimate - 3.0_f64.ln()).abs() < 1e-6);

    // Dissipativity window computed from that estimate, not from the symbol.
    let window = tdiss_window(poincare.estimate, true).unwrap();
    assert!((window.lo - 1.4823).abs() <= 1e-4);
    assert!((window.hi - 2.9646).abs() <= 1e-4);
    assert_eq!(window.tree_exact, Some(window.hi));

    // The Koopman series flips verdict across the window interior.
    let below = koopman_l2_report(&f2, 2.0, 60).unwrap();
    let above = koopman_l2_report(&f2, 2.2, 60).unwrap();
    assert_eq!(below.verdict, SeriesVerdict::Diverges);
    assert_eq!(above.verdict, SeriesVerdict::Converges);
    // 2.2 sits inside the window, so convergence of the series alone happens
    // strictly before the dissipativity threshold 2 sqrt(2 log 3).
    assert!(2.2 < window.hi);
}

#[test]
fn entropy_and_drift_reach_their_limits_within_tolerance() {
    let f2 = FreeGroupModel::new(2).unwrap();
    let table = radial_entropy_drift(&f2, 400).unwrap();
    let last = table[table.len() - 1];
    assert!((last.entropy_rate - 0.54931).abs() <= 0.03);
    assert!((last.drift_rate - 0.5).abs() <= 0.01);
}

#[test]
fn entropy_drift_inequality_holds_on_all_shipped_models() {
    for n in [2u32, 3, 4] {
        let model = FreeGroupModel::new(n).unwrap();
        let report = guivarch_check(&model, 400).unwrap();
        assert!(
            report.slack_with_tol >= -1e-9,
            "n={n}: slack {}",
            report.slack_with_tol
        );
        assert!(report.holds, "n={n}");
    }
}

#[test]
fn edge_indicator_embedding_certifies_the_radial_representation() {
    let check = edge_indicator_validation(2, 4).unwrap();
    assert!(check.exact());
    assert_eq!(check.elements, 161);
}

#[test]
fn skew_product_verdicts_separate_the_three_growth_regimes() {
    let z_profile = |norm: &dyn Fn(u64) -> f64, a_max: u64| {
        let mut values = vec![0.0];
        for a in 1..=a_max {
            values.push(norm(a));
            values.push(norm(a));
        }
        GrowthProfile::from_values(ProfileKind::Norm, &values).unwrap()
    };

    let linear = skew_delta(&z_profile(&|a| a as f64, 4096)).unwrap();
    assert_eq!(linear.verdict, DeltaVerdict::Boundary);

    let sqrt = skew_delta(&z_profile(&|a| (a as f64).sqrt(), 4096)).unwrap();
    assert_eq!(sqrt.verdict, DeltaVerdict::Conservative);
    assert!((sqrt.estimate - 2.0).abs() <= 0.05);

    let tower = locally_finite_cocycle(&doubling_tower_sizes(8)).unwrap();
    let dissipative = skew_delta(&tower.profile).unwrap();
    assert_eq!(dissipative.verdict, DeltaVerdict::Dissipative);
    assert!(dissipative.estimate < 0.2);
}
