//! Acceptance gate: one test per criterion, each printing its pass/fail
//! line. Exact arithmetic throughout; the tolerance is identity.
//!
//! Criterion 8 (the plane census reproducing 400 / 520 / 280 / 120) is the
//! extended tier: run it with `cargo test --release -- --ignored`.
//! The excluded full-symbolic computations (the 166k-monomial
//! discriminant expansion, symbolic 19x19 minors, first-principles
//! degrees of the 3- and 4-nodal loci) are covered by the property
//! checks below instead, and have no test of their own.

use cubicdisc::verify::{
    criterion_cross_representation, criterion_degree_invariance, criterion_extended_census,
    criterion_plane_slice, criterion_psi_construction, criterion_rank_strata,
    criterion_singularity, criterion_twisted_cubic, suite_core, VerifyConfig,
};

fn cfg() -> VerifyConfig {
    VerifyConfig::default()
}

fn assert_criterion(r: cubicdisc::verify::CriterionResult) {
    println!(
        "ACCEPTANCE {}: {} ({})",
        r.name,
        if r.passed { "PASS" } else { "FAIL" },
        r.detail
    );
    assert!(r.passed, "{}: {}", r.name, r.detail);
}

#[test]
fn criterion_0_core_algebra_substrate() {
    let report = suite_core(&cfg());
    print!("{}", report.render());
    assert!(report.all_passed());
}

#[test]
fn criterion_1_twisted_cubic_golden() {
    assert_criterion(criterion_twisted_cubic());
}

#[test]
fn criterion_2_psi_construction() {
    assert_criterion(criterion_psi_construction(&cfg()));
}

#[test]
fn criterion_3_cross_representation_identity() {
    assert_criterion(criterion_cross_representation(&cfg()));
}

#[test]
fn criterion_4_degree_and_invariance() {
    assert_criterion(criterion_degree_invariance(&cfg()));
}

#[test]
fn criterion_5_singularity_behavior() {
    assert_criterion(criterion_singularity(&cfg()));
}

#[test]
fn criterion_6_rank_strata() {
    assert_criterion(criterion_rank_strata(&cfg()));
}

#[test]
fn criterion_7_plane_slice_interpolation() {
    assert_criterion(criterion_plane_slice(&cfg()));
}

#[test]
#[ignore = "extended tier: minutes of factorization work; does not gate the primary suite"]
fn criterion_8_extended_plane_census() {
    let mut c = cfg();
    c.extended = true;
    assert_criterion(criterion_extended_census(&c));
}
