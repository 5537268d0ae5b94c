mod common;

use std::sync::OnceLock;

use proptest::prelude::*;

use common::{all_cases, constructed_cases, domain, rel, Case, OracleForms};
use cpd_surf::cpd::{alignment_defect, build_case1, build_case2, Case1Spec, Case2Spec};
use cpd_surf::expr::{parse, BinOp, Expr, Func};
use cpd_surf::gallery::{minimal_angle_pde_residual, theta_from_harmonic};
use cpd_surf::geometry::{FixedDirection, LocalGeometry, ThirdOrder, FD_STEP};
use cpd_surf::numerics::{eig_sym_generalized, quad_adaptive, Interval, Jet2, Sym2x2};

fn cases() -> &'static [Case] {
    static CASES: OnceLock<Vec<Case>> = OnceLock::new();
    CASES.get_or_init(all_cases)
}

/// Expressions that stay finite and smooth on `[-1.5, 1.5]²`.
fn smooth_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::x()),
        Just(Expr::y()),
        (0.1f64..2.0).prop_map(Expr::num),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let one = |f: Func, e: Expr| Expr::call(f, e);
        prop_oneof![
            inner.clone().prop_map(move |e| one(Func::Sin, e)),
            inner.clone().prop_map(move |e| one(Func::Cos, e)),
            inner.clone().prop_map(move |e| one(Func::Atan, e)),
            inner.clone().prop_map(move |e| one(Func::Tanh, e)),
            inner
                .clone()
                .prop_map(move |e| one(Func::Exp, one(Func::Sin, e))),
            inner.clone().prop_map(|e| Expr::call(
                Func::Sqrt,
                Expr::bin(
                    BinOp::Add,
                    Expr::num(1.0),
                    Expr::bin(BinOp::Pow, e, Expr::num(2.0))
                )
            )),
            inner.clone().prop_map(|e| Expr::call(
                Func::Ln,
                Expr::bin(BinOp::Add, Expr::num(2.0), Expr::call(Func::Sin, e))
            )),
            inner.clone().prop_map(Expr::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::bin(BinOp::Add, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::bin(BinOp::Sub, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::bin(BinOp::Mul, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::bin(
                BinOp::Div,
                a,
                Expr::bin(BinOp::Add, Expr::num(1.5), Expr::call(Func::Sin, b))
            )),
            (inner.clone(), 2u32..4).prop_map(|(a, n)| Expr::bin(
                BinOp::Pow,
                a,
                Expr::num(n as f64)
            )),
        ]
    })
}

/// Richardson-extrapolated central differences of `f`:
/// `[f_x, f_y, f_xx, f_xy, f_yy]`.
fn fd_partials(f: &dyn Fn(f64, f64) -> f64, x: f64, y: f64) -> [f64; 5] {
    let h = 1e-4;
    let r = |d: &dyn Fn(f64) -> f64| (4.0 * d(0.5 * h) - d(h)) / 3.0;
    let c = f(x, y);
    [
        r(&|h| (f(x + h, y) - f(x - h, y)) / (2.0 * h)),
        r(&|h| (f(x, y + h) - f(x, y - h)) / (2.0 * h)),
        r(&|h| (f(x + h, y) - 2.0 * c + f(x - h, y)) / (h * h)),
        r(&|h| {
            (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4.0 * h * h)
        }),
        r(&|h| (f(x, y + h) - 2.0 * c + f(x, y - h)) / (h * h)),
    ]
}

fn in_domain(c: &Case, s: f64, t: f64) -> (f64, f64) {
    let d = &c.surface.domain;
    let m = 0.02;
    let s = m + (1.0 - 2.0 * m) * s;
    let t = m + (1.0 - 2.0 * m) * t;
    (d.x.lo + s * d.x.len(), d.y.lo + t * d.y.len())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn jets_match_finite_differences(e in smooth_expr(), x in -1.5f64..1.5, y in -1.5f64..1.5) {
        let j = e.eval_jet(Jet2::var_x(x), Jet2::var_y(y)).unwrap();
        let fd = fd_partials(&|a, b| e.eval(a, b).unwrap(), x, y);
        let jet = [j.dx, j.dy, j.dxx, j.dxy, j.dyy];
        let scale = 1.0 + j.val.abs();
        for (a, b) in jet.iter().zip(&fd) {
            prop_assert!((a - b).abs() <= 1e-6 * scale.max(b.abs()), "{e}: jet {jet:?} fd {fd:?}");
        }
    }

    #[test]
    fn print_then_parse_is_identity(e in smooth_expr()) {
        let text = e.to_string();
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &e);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn quadrature_is_exact_on_polynomials(
        coeffs in prop::collection::vec(-3.0f64..3.0, 1..14),
        a in -2.0f64..0.0,
        len in 0.1f64..3.0,
    ) {
        let b = a + len;
        let p = |t: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c);
        let exact: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * (b.powi(k as i32 + 1) - a.powi(k as i32 + 1)) / (k as f64 + 1.0))
            .sum();
        let got = quad_adaptive(p, Interval::new(a, b).unwrap(), 1e-12).unwrap();
        prop_assert!((got - exact).abs() <= 1e-12 * (1.0 + exact.abs()), "{got} vs {exact}");
    }

    #[test]
    fn generalized_eigenpairs(
        a11 in -3.0f64..3.0, a12 in -3.0f64..3.0, a22 in -3.0f64..3.0,
        g11 in 0.5f64..3.0, g12 in -0.4f64..0.4, g22 in 0.5f64..3.0,
    ) {
        let g = Sym2x2::symmetric(g11, g12, g22);
        // Self-adjoint with respect to g: A = g⁻¹ S for symmetric S.
        let a = g.inverse().unwrap().mul(&Sym2x2::symmetric(a11, a12, a22));
        let eig = eig_sym_generalized(&a, &g).unwrap();
        let [p, q] = eig.pairs;
        prop_assert!(g.form(p.vector, q.vector).abs() < 1e-10);
        // A = Σ κ v vᵀ G
        let gv = |v: [f64; 2]| g.apply(v);
        let (gp, gq) = (gv(p.vector), gv(q.vector));
        let rec = [
            [p.value * p.vector[0] * gp[0] + q.value * q.vector[0] * gq[0],
             p.value * p.vector[0] * gp[1] + q.value * q.vector[0] * gq[1]],
            [p.value * p.vector[1] * gp[0] + q.value * q.vector[1] * gq[0],
             p.value * p.vector[1] * gp[1] + q.value * q.vector[1] * gq[1]],
        ];
        let want = [[a.a11, a.a12], [a.a21, a.a22]];
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((rec[i][j] - want[i][j]).abs() < 1e-9, "{rec:?} vs {want:?}");
            }
        }
    }

    #[test]
    fn local_geometry_identities(idx in 0usize..64, s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let c = &cases()[idx % cases().len()];
        let (x, y) = in_domain(c, s, t);
        let l = LocalGeometry::at(&c.surface, x, y).unwrap();
        let g = &l.metric;
        let a = &l.shape;
        let e1 = [1.0, 0.0];
        let e2 = [0.0, 1.0];
        let sa = (g.form(a.apply(e1), e2) - g.form(e1, a.apply(e2))).abs();
        prop_assert!(sa < 1e-8 * (1.0 + a.norm() * g.norm()), "{}: self-adjoint defect {sa}", c.label);

        let k = l.curvatures().unwrap();
        prop_assert!((k.gaussian - a.det()).abs() < 1e-9 * (1.0 + a.det().abs()));
        prop_assert!((k.gaussian - k.kappa1 * k.kappa2).abs() < 1e-9 * (1.0 + k.gaussian.abs()));
        prop_assert!((k.mean - 0.5 * a.trace()).abs() < 1e-9 * (1.0 + k.mean.abs()));

        let ang = l.angle(&FixedDirection::default());
        let u2 = g.form(ang.u, ang.u);
        prop_assert!((u2 + ang.cos_theta.powi(2) - 1.0).abs() < 1e-9, "{}: {u2}", c.label);
    }

    #[test]
    fn forms_match_oracle(idx in 0usize..64, s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let c = &cases()[idx % cases().len()];
        let (x, y) = in_domain(c, s, t);
        let l = LocalGeometry::at(&c.surface, x, y).unwrap();
        let o = OracleForms::at(&*c.position(), x, y);
        let k = l.curvatures().unwrap();
        let pairs = [
            ("E", l.metric.a11, o.e), ("F", l.metric.a12, o.f), ("G", l.metric.a22, o.g),
            ("e", l.second.a11, o.l), ("f", l.second.a12, o.m), ("g", l.second.a22, o.n),
            ("K", k.gaussian, o.gaussian), ("H", k.mean, o.mean),
        ];
        for (name, jet, fd) in pairs {
            prop_assert!(rel(jet, fd) < 1e-5, "{} {name} at ({x}, {y}): {jet} vs {fd}", c.label);
        }
        let gam = l.christoffel();
        let og = o.christoffel();
        for (kk, ogk) in og.iter().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    prop_assert!(rel(gam.get(kk, i, j), ogk[i][j]) < 1e-5,
                        "{} Γ^{kk}_{i}{j}: {} vs {}", c.label, gam.get(kk, i, j), ogk[i][j]);
                }
            }
        }
        prop_assert!(rel(l.cos_theta(&FixedDirection::default()), o.cos_theta()) < 1e-8);
    }

    #[test]
    fn codazzi_holds_on_analytic_surfaces(idx in 0usize..64, s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let c = &cases()[idx % cases().len()];
        let (x, y) = in_domain(c, s, t);
        let third = ThirdOrder::at(&c.surface, x, y, FD_STEP).unwrap();
        let r = third.codazzi_residual();
        prop_assert!(r < 1e-6, "{} at ({x}, {y}): {r}", c.label);
    }

    #[test]
    fn case1_canonical_form(
        t0 in 0.5f64..1.2, slope in -0.25f64..0.25, psi in 0.0f64..0.5, amp in 0.0f64..0.2,
        s in 0.0f64..1.0, t in 0.0f64..1.0,
    ) {
        let theta = format!("{t0} + {slope}*x");
        let psi_src = format!("{psi} + {amp}*sin(y)");
        let spec = Case1Spec::parse(&theta, &psi_src, domain(0.0, 1.5, 0.0, 3.0)).unwrap().with_phi0(1.0);
        let surf = build_case1(&spec).unwrap();
        let (x, y) = (1.5 * s, 3.0 * t);
        let l = LocalGeometry::at(&surf, x, y).unwrap();
        let th = t0 + slope * x;
        // φ = 1 + ∫₀ˣ cos(t0 + slope·τ) dτ.
        let phi = if slope == 0.0 { 1.0 + x * t0.cos() } else { 1.0 + (th.sin() - t0.sin()) / slope };
        let beta = phi + psi + amp * y.sin();
        prop_assert!((l.metric.a11 - 1.0).abs() < 1e-6);
        prop_assert!(l.metric.a12.abs() < 1e-6);
        prop_assert!((l.metric.a22 - beta * beta).abs() < 1e-6);
        let a = &l.shape;
        prop_assert!(a.a12.abs() < 1e-6 && a.a21.abs() < 1e-6);
        prop_assert!((a.a11 - slope).abs() < 1e-5);
        prop_assert!((a.a22 - th.tan() * th.cos() / beta).abs() < 1e-5);
        let ang = l.angle(&FixedDirection::default());
        prop_assert!(ang.theta_y.abs() < 1e-9);
        prop_assert!(alignment_defect(&l, ang.u) < 1e-9);
    }

    #[test]
    fn case2_is_a_flat_cylinder(
        t0 in 0.4f64..1.4, slope in -0.3f64..0.3, y0 in -3.0f64..3.0,
        s in 0.0f64..1.0, t in 0.0f64..1.0,
    ) {
        let theta = format!("{t0} + {slope}*x");
        let surf = build_case2(&Case2Spec::parse(&theta, y0, domain(0.0, 1.5, -1.0, 1.0)).unwrap()).unwrap();
        let l = LocalGeometry::at(&surf, 1.5 * s, 2.0 * t - 1.0).unwrap();
        prop_assert!(l.gaussian().abs() < 1e-9);
        let want = [-y0.sin(), y0.cos(), 0.0];
        for i in 0..3 {
            prop_assert!((l.ry[i] - want[i]).abs() < 1e-12);
        }
        prop_assert!((l.mean() - 0.5 * slope).abs() < 1e-9);
    }

    #[test]
    fn harmonic_exponents_solve_the_angle_pde(
        a in -1.0f64..1.0, b in -1.5f64..1.5, d in -1.0f64..1.0,
        s in 0.0f64..1.0, t in 0.0f64..1.0,
    ) {
        let fs = [
            format!("{b}*({a}*x + y) + {d}"),
            "ln(x^2+y^2)".to_string(),
            "x^2 - y^2".to_string(),
            "exp(x)*cos(y)".to_string(),
        ];
        let dom = domain(0.3, 1.3, 0.2, 1.2);
        let (x, y) = (0.3 + s, 0.2 + t);
        for f in &fs {
            let field = theta_from_harmonic(&parse(f).unwrap(), dom).unwrap();
            let r = minimal_angle_pde_residual(&field, x, y).unwrap();
            prop_assert!(r.abs() < 1e-8, "f = {f}: {r}");
        }
    }

    #[test]
    fn cpd_criterion_matches_alignment(idx in 0usize..64, s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let adapted: Vec<&Case> = cases().iter().filter(|c| c.adapted).collect();
        let c = adapted[idx % adapted.len()];
        let (x, y) = in_domain(c, s, t);
        let l = LocalGeometry::at(&c.surface, x, y).unwrap();
        let ang = l.angle(&FixedDirection::default());
        prop_assert!(ang.theta_y.abs() < 1e-9 && alignment_defect(&l, ang.u) < 1e-9, "{}", c.label);
    }
}

#[test]
fn constructed_surfaces_are_never_minimal_and_flat() {
    use cpd_surf::verify::{classify, GridSpec};
    for c in constructed_cases() {
        let cl = classify(&c.surface, &GridSpec::new(15, 15, 0.0).unwrap(), 1e-6).unwrap();
        assert!(!(cl.minimal && cl.flat), "{}", c.label);
        assert!(cl.cpd, "{}", c.label);
    }
}

#[test]
fn helicoid_charts_cover_the_same_points() {
    use cpd_surf::gallery::{gallery, GalleryName};
    let h = gallery(GalleryName::Helicoid, None).unwrap();
    let hi = gallery(GalleryName::HelicoidIsothermal, None).unwrap();
    for i in 0..=20 {
        for j in 0..=20 {
            let x = -1.4 + 0.14 * i as f64;
            let y = 0.3 * j as f64;
            assert_eq!(hi.point(x, y).unwrap(), h.point(x.sinh(), y).unwrap());
        }
    }
}
