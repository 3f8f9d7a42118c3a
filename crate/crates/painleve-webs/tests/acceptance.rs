//! Acceptance gate: one test per top-level criterion, each printing a single
//! pass/fail line (visible under `--nocapture`; the test verdict itself
//! mirrors the line).

use std::time::Instant;

use painleve_webs::dynamics::{
    non_periodicity_probe, periodicity_check, phi_affine_form, verify_surface_symmetries,
};
use painleve_webs::ideal::{flat_locus, spolys_reduce_to_zero, CurvatureKind};
use painleve_webs::parse::parse_expression;
use painleve_webs::poly::rat_int;
use painleve_webs::testing::{
    algebra_property_suite, commutation_property_suite, density_property_suite,
    web_property_suite,
};
use painleve_webs::verify::{
    expected_basis, pvi_hess_numerator_coefficients, verify_pi_web, verify_table, PVI_EXPECTED,
};
use painleve_webs::{RationalFunction, Status, SurfaceSpec};

fn line(n: u32, what: &str, ok: bool, secs: f64) {
    println!(
        "ACCEPTANCE {n} [{}] {what} ({secs:.1}s)",
        if ok { "pass" } else { "fail" }
    );
}

#[test]
fn criterion_1_pvi_web_flatness() {
    let started = Instant::now();
    let spec = SurfaceSpec::lookup("pvi").unwrap();
    let g = flat_locus(&spec, CurvatureKind::Web).unwrap();
    let expected = expected_basis(&spec, PVI_EXPECTED).unwrap();
    let secs = started.elapsed().as_secs_f64();
    let ok = g.basis() == expected.basis()
        && g.describe() == "(a1, a2, a3, a4-4)"
        && spolys_reduce_to_zero(&g)
        && secs < 300.0;
    line(1, "pvi web flat locus = (a1, a2, a3, a4-4)", ok, secs);
    assert!(ok, "basis: {}", g.describe());
}

#[test]
fn criterion_2_pvi_hess_flatness() {
    let started = Instant::now();
    let spec = SurfaceSpec::lookup("pvi").unwrap();
    let g = flat_locus(&spec, CurvatureKind::Hess(1, 2)).unwrap();
    let expected = expected_basis(&spec, PVI_EXPECTED).unwrap();
    let coeffs_ok = pvi_hess_numerator_coefficients().unwrap();
    let secs = started.elapsed().as_secs_f64();
    let ok = g.basis() == expected.basis()
        && spolys_reduce_to_zero(&g)
        && coeffs_ok
        && secs < 120.0;
    line(
        2,
        "pvi hess(1,2) flat locus and numerator coefficients",
        ok,
        secs,
    );
    assert!(ok, "basis: {}, coefficients ok: {coeffs_ok}", g.describe());
}

#[test]
fn criterion_3_table_reproduction() {
    let started = Instant::now();
    let report = verify_table(None).unwrap();
    let secs = started.elapsed().as_secs_f64();
    let graded = report
        .entries
        .iter()
        .filter(|e| e.status != Status::Info)
        .count();
    let text = report.render_text();
    let ok = report.all_pass()
        && graded == 45 // 36 grid cells + 8 pvi cells + pi hand cross-check
        && text.contains("transposes the entries")
        && text.contains("contradicts the zero defect")
        && secs < 600.0;
    line(3, "flat-locus table 36/36 cells plus pvi row", ok, secs);
    assert!(ok, "{text}");
}

#[test]
fn criterion_4_pi_web_sanity() {
    let started = Instant::now();
    let report = verify_pi_web().unwrap();
    let secs = started.elapsed().as_secs_f64();
    let ok = report.all_pass();
    line(4, "pi third web form and flat web curvature", ok, secs);
    assert!(ok, "{}", report.render_text());
}

#[test]
fn criterion_5_dynamics_suite() {
    let started = Instant::now();
    let spec = SurfaceSpec::lookup("pvi").unwrap();
    let symmetries = verify_surface_symmetries(&spec).unwrap();
    let phi = phi_affine_form(None);
    let trace_ok = phi.trace()
        == RationalFunction::from_poly(parse_expression("x3^2-2", spec.ctx()).unwrap());
    let det_ok = phi.det().is_one();
    let mut periodic_ok = true;
    for (t, p, q) in [(0i64, 1u32, 2u32), (1, 1, 3), (-1, 2, 3)] {
        periodic_ok &= periodicity_check(&rat_int(t), p, q).unwrap().all_pass();
    }
    let probe = non_periodicity_probe(&rat_int(3), 24);
    let secs = started.elapsed().as_secs_f64();
    let ok = symmetries.all_pass()
        && trace_ok
        && det_ok
        && periodic_ok
        && probe.all_pass()
        && secs < 30.0;
    line(
        5,
        "involutions, volume pullback signs, affine form, periodicity",
        ok,
        secs,
    );
    assert!(
        ok,
        "symmetries:\n{}\nprobe:\n{}",
        symmetries.render_text(),
        probe.render_text()
    );
}

#[test]
fn criterion_6_property_suites() {
    let started = Instant::now();
    let algebra = algebra_property_suite(1000, 0xA1);
    let commutation = commutation_property_suite(100, 0xC0);
    let webs = web_property_suite(50, 0x3B);
    let densities = density_property_suite(50, 0xDE);
    // Every basis emitted anywhere in this run self-certifies through
    // Buchberger's criterion under debug assertions; spot-confirm once more
    // on a fresh computation.
    let spec = SurfaceSpec::lookup("piv").unwrap();
    let g = flat_locus(&spec, CurvatureKind::Hess(2, 3)).unwrap();
    let certificates_ok = cfg!(debug_assertions) && spolys_reduce_to_zero(&g);
    let secs = started.elapsed().as_secs_f64();
    let ok = algebra.all_pass()
        && commutation.all_pass()
        && webs.all_pass()
        && densities.all_pass()
        && certificates_ok;
    line(
        6,
        "randomized suites 1000/100/50/50 and S-polynomial certificates",
        ok,
        secs,
    );
    assert!(
        ok,
        "{}\n{}\n{}\n{}",
        algebra.render_text(),
        commutation.render_text(),
        webs.render_text(),
        densities.render_text()
    );
}
