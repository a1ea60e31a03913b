use std::f64::consts::PI;

use polarint::measures::Variant;
use polarint::montecarlo::{
    estimate_pif_rhs, verify_gaussian_identity, verify_invariance, verify_pif, DetProposal, Execution,
    InvarianceKind, Probe, RunOptions, TestFnKind, TestFunction,
};

fn opts() -> RunOptions {
    RunOptions::default()
}

#[test]
fn pif_gaussian_four_two() {
    let r = verify_pif(
        &TestFunction::gaussian(),
        4,
        2,
        1_000_000,
        7,
        Variant::Corrected,
        &opts(),
    )
    .unwrap();
    assert!(r.pass, "{r:?}");
    assert!((r.reference_value - (2.0 * PI).powi(4)).abs() < 1e-6);
}

#[test]
fn rhs_gaussian_matches_analytic() {
    let s = estimate_pif_rhs(
        &TestFunction::gaussian(),
        4,
        2,
        200_000,
        2,
        Variant::Corrected,
        &opts(),
    )
    .unwrap();
    let z = (s.mean - (2.0 * PI).powi(4)) / s.std_error();
    assert!(z.abs() <= 4.0, "z = {z}");
}

#[test]
fn standard_error_shrinks_like_root_n() {
    let phi = TestFunction::gaussian();
    let a = estimate_pif_rhs(&phi, 4, 2, 200_000, 3, Variant::Corrected, &opts()).unwrap();
    let b = estimate_pif_rhs(&phi, 4, 2, 400_000, 3, Variant::Corrected, &opts()).unwrap();
    let ratio = a.std_error() / b.std_error();
    assert!((ratio / 2f64.sqrt() - 1.0).abs() <= 0.1, "ratio {ratio}");
}

#[test]
fn square_identity_is_exact() {
    for k in 1..=4 {
        let r = verify_gaussian_identity(k, k, 1000, 1, Variant::Corrected, DetProposal::Tilted, &opts())
            .unwrap();
        assert!(r.pass);
        assert_eq!(r.standard_error, 0.0);
    }
}

#[test]
fn pif_and_gaussian_identity_agree() {
    for (i, &(n, k)) in [(3, 1), (4, 2), (5, 3), (6, 2)].iter().enumerate() {
        let seed = 20 + i as u64;
        let a = verify_pif(
            &TestFunction::gaussian(),
            n,
            k,
            200_000,
            seed,
            Variant::Corrected,
            &opts(),
        )
        .unwrap();
        let b = verify_gaussian_identity(
            n,
            k,
            200_000,
            seed,
            Variant::Corrected,
            DetProposal::Tilted,
            &opts(),
        )
        .unwrap();
        assert!(a.pass && b.pass, "({n},{k}) {a:?} {b:?}");
    }
}

#[test]
fn odd_codimension_passes() {
    let phi = TestFunction::new(TestFnKind::ExpGram, 1.0).unwrap();
    for (n, k) in [(3, 2), (5, 2), (4, 1)] {
        let r = verify_pif(&phi, n, k, 200_000, 40, Variant::Corrected, &opts()).unwrap();
        assert!(r.pass, "({n},{k}) {r:?}");
    }
}

#[test]
fn two_sided_gaussian_four_two() {
    let r = verify_invariance(
        InvarianceKind::TwoSidedGaussian,
        4,
        2,
        100_000,
        11,
        Probe::Householder,
        &opts(),
    )
    .unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(r.components.len(), 6);
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let phi = TestFunction::new(TestFnKind::DetExpGram, 1.0).unwrap();
    let runs: Vec<String> = [
        Execution::Sequential,
        Execution::Parallel,
        Execution::ParallelWith { threads: 2 },
        Execution::ParallelWith { threads: 4 },
    ]
    .into_iter()
    .map(|exec| {
        let o = opts().with_exec(exec);
        let r = verify_pif(&phi, 4, 2, 50_000, 5, Variant::Corrected, &o).unwrap();
        serde_json::to_string(&r).unwrap()
    })
    .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn chunk_size_is_part_of_the_contract() {
    let phi = TestFunction::new(TestFnKind::ExpGram, 1.0).unwrap();
    let a = verify_pif(&phi, 3, 1, 30_000, 5, Variant::Corrected, &opts()).unwrap();
    let small = RunOptions {
        chunk_size: 1000,
        ..opts()
    };
    let b = verify_pif(&phi, 3, 1, 30_000, 5, Variant::Corrected, &small).unwrap();
    assert_ne!(a.estimate, b.estimate);
    assert!(b.pass);
}
