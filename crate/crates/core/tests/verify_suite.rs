mod common;

use common::{all_cases, constructed_cases, domain, perturbed, swapped_helicoid, OracleForms};
use cpd_surf::cpd::{build_case1, is_cpd, Case1Spec};
use cpd_surf::geometry::{FixedDirection, ParamSurface};
use cpd_surf::verify::{verify_surface, CheckId, GridSpec, Tolerances};

fn report_table(s: &ParamSurface) -> cpd_surf::verify::VerificationReport {
    verify_surface(
        s,
        &FixedDirection::default(),
        &GridSpec::default(),
        &Tolerances::default(),
    )
}

/// Prints the surface × check × tolerance table and requires every row to
/// pass.
#[test]
fn every_surface_passes_its_applicable_checks() {
    let mut failed = Vec::new();
    println!(
        "{:<36} {:<26} {:>10} {:>8} result",
        "surface", "check", "max", "tol"
    );
    for c in all_cases() {
        let r = report_table(&c.surface);
        assert_eq!(r.failed_points, 0, "{}: {:?}", c.label, r.warnings);
        for rec in &r.checks {
            println!(
                "{:<36} {:<26} {:>10.2e} {:>8.0e} {}",
                c.label,
                rec.id,
                rec.max_residual,
                rec.tolerance,
                if rec.passed { "pass" } else { "FAIL" }
            );
            if !rec.passed {
                failed.push(format!("{} / {}", c.label, rec.id));
            }
        }
    }
    assert!(failed.is_empty(), "failing checks: {failed:?}");
}

#[test]
fn reports_are_deterministic_across_thread_counts() {
    for c in all_cases().into_iter().take(8) {
        let a = serde_json::to_string(&report_table(&c.surface)).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| serde_json::to_string(&report_table(&c.surface)).unwrap());
        assert_eq!(a, b, "{}", c.label);
    }
}

fn base_case1() -> ParamSurface {
    build_case1(
        &Case1Spec::parse("atan(1/x)", "0", domain(0.5, 3.0, 0.0, 6.0))
            .unwrap()
            .with_phi0(1.0),
    )
    .unwrap()
}

#[test]
fn perturbation_breaks_the_canonical_checks() {
    let r = report_table(&perturbed(&base_case1()));
    for id in [CheckId::CanonicalCodazzi, CheckId::CanonicalShapeEntries] {
        let rec = r.check(id).unwrap();
        assert!(!rec.passed && rec.max_residual > 1e-3, "{rec:?}");
    }
    assert!(!r.passed);
    // Identities valid for every immersion still hold.
    for id in [
        CheckId::Codazzi,
        CheckId::ShapeGradient,
        CheckId::NormalDerivative,
        CheckId::TangentDerivative,
    ] {
        assert!(r.check(id).unwrap().passed, "{id:?}");
    }
}

#[test]
fn cpd_iff_theta_y_vanishes_on_adapted_charts() {
    let grid = GridSpec::new(21, 21, 0.02).unwrap();
    let tol = 1e-6;
    let mut surfaces: Vec<(String, ParamSurface, bool)> = constructed_cases()
        .into_iter()
        .map(|c| (c.label, c.surface, true))
        .collect();
    surfaces.push(("helicoid swapped".into(), swapped_helicoid(), false));
    surfaces.push(("case1 perturbed".into(), perturbed(&base_case1()), false));
    for (label, s, want) in surfaces {
        let rep = is_cpd(&s, &grid, tol);
        let a = rep.max_theta_y < tol;
        let b = rep.max_alignment_defect < tol;
        assert_eq!(a, b, "{label}: {rep:?}");
        assert_eq!(a, want, "{label}: {rep:?}");
        if label == "helicoid swapped" {
            assert!(rep.adapted && !rep.is_cpd, "{rep:?}");
        }
    }
}

/// `AU = sin θ · grad θ` on the first-family surface with
/// `θ = 2·atan(e^{−x})`, `ψ = 0.2`, with every quantity from the oracle
/// and the closed-form angle.
#[test]
fn shape_gradient_identity_against_oracle() {
    use rand::{Rng, SeedableRng};
    let case = &common::case1_cases()[1];
    let p = case.position();
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for _ in 0..10 {
        let x = rng.gen_range(-0.9..0.9);
        let y = rng.gen_range(0.1..2.9);
        let o = OracleForms::at(&*p, x, y);
        let det = o.e * o.g - o.f * o.f;
        let inv = [[o.g / det, -o.f / det], [-o.f / det, o.e / det]];
        let mul = |v: [f64; 2]| {
            [
                inv[0][0] * v[0] + inv[0][1] * v[1],
                inv[1][0] * v[0] + inv[1][1] * v[1],
            ]
        };
        let u = mul([o.rx[2], o.ry[2]]);
        let ii = [[o.l, o.m], [o.m, o.n]];
        let au = mul([
            ii[0][0] * u[0] + ii[0][1] * u[1],
            ii[1][0] * u[0] + ii[1][1] * u[1],
        ]);
        let theta = 2.0 * (-x).exp().atan();
        let theta_x = -1.0 / x.cosh();
        let grad = mul([theta_x, 0.0]);
        let d = [au[0] - theta.sin() * grad[0], au[1] - theta.sin() * grad[1]];
        let norm = (o.e * d[0] * d[0] + 2.0 * o.f * d[0] * d[1] + o.g * d[1] * d[1]).sqrt();
        assert!(norm < 1e-6, "({x}, {y}): {norm}");
    }
    let r = report_table(&case.surface);
    assert!(r.check(CheckId::CanonicalCodazzi).unwrap().max_residual < 1e-5);
    assert!(r.check(CheckId::ShapeGradient).unwrap().max_residual < 1e-6);
}

#[test]
fn plane_is_reported_degenerate() {
    let plane = ParamSurface::from_exprs(
        "plane",
        domain(0.0, 1.0, 0.0, 1.0),
        [
            cpd_surf::expr::parse("x").unwrap(),
            cpd_surf::expr::parse("y").unwrap(),
            cpd_surf::expr::parse("0").unwrap(),
        ],
    );
    let r = report_table(&plane);
    assert_eq!(r.masked_points, r.total_points);
    assert!(r.degenerate.as_deref().unwrap().contains("constant angle"));
}
