//! Test support: an independent finite-difference oracle and a catalog of
//! every surface the library can produce.
#![allow(dead_code)]

use std::f64::consts::PI;

use cpd_surf::cpd::{
    build_case1, build_case2, catenoid_cpd, cmc_profile, sphere_cpd, Case1Spec, Case2Spec,
};
use cpd_surf::expr::parse;
use cpd_surf::gallery::{gallery, GalleryName};
use cpd_surf::geometry::{ChartDomain, ParamSurface};
use cpd_surf::numerics::Interval;

pub type Position = Box<dyn Fn(f64, f64) -> [f64; 3] + Send + Sync>;

/// Base step of the oracle.
pub const ORACLE_STEP: f64 = 1e-4;

fn richardson(d: impl Fn(f64) -> f64, h: f64) -> f64 {
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

fn vsub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Classical quantities at a point, from central differences of positions
/// with one Richardson step.
#[derive(Debug, Clone, Copy)]
pub struct OracleForms {
    pub rx: [f64; 3],
    pub ry: [f64; 3],
    pub rxx: [f64; 3],
    pub rxy: [f64; 3],
    pub ryy: [f64; 3],
    pub normal: [f64; 3],
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
    pub gaussian: f64,
    pub mean: f64,
}

impl OracleForms {
    pub fn at(p: &dyn Fn(f64, f64) -> [f64; 3], x: f64, y: f64) -> Self {
        let h = ORACLE_STEP;
        let comp = |i: usize| {
            let rx = richardson(|h| (p(x + h, y)[i] - p(x - h, y)[i]) / (2.0 * h), h);
            let ry = richardson(|h| (p(x, y + h)[i] - p(x, y - h)[i]) / (2.0 * h), h);
            let c = p(x, y)[i];
            let rxx = richardson(|h| (p(x + h, y)[i] - 2.0 * c + p(x - h, y)[i]) / (h * h), h);
            let ryy = richardson(|h| (p(x, y + h)[i] - 2.0 * c + p(x, y - h)[i]) / (h * h), h);
            let rxy = richardson(
                |h| {
                    (p(x + h, y + h)[i] - p(x + h, y - h)[i] - p(x - h, y + h)[i]
                        + p(x - h, y - h)[i])
                        / (4.0 * h * h)
                },
                h,
            );
            [rx, ry, rxx, rxy, ryy]
        };
        let c: Vec<[f64; 5]> = (0..3).map(comp).collect();
        let pick = |k: usize| [c[0][k], c[1][k], c[2][k]];
        let (rx, ry, rxx, rxy, ryy) = (pick(0), pick(1), pick(2), pick(3), pick(4));
        let nn = cross(rx, ry);
        let len = dot(nn, nn).sqrt();
        let normal = [nn[0] / len, nn[1] / len, nn[2] / len];
        let (e, f, g) = (dot(rx, rx), dot(rx, ry), dot(ry, ry));
        let (l, m, n) = (dot(rxx, normal), dot(rxy, normal), dot(ryy, normal));
        let det = e * g - f * f;
        OracleForms {
            rx,
            ry,
            rxx,
            rxy,
            ryy,
            normal,
            e,
            f,
            g,
            l,
            m,
            n,
            gaussian: (l * n - m * m) / det,
            mean: (l * g - 2.0 * m * f + n * e) / (2.0 * det),
        }
    }

    /// `Γ^k_ij = g^{kl} ⟨r_ij, r_l⟩`, indexed `[k][i][j]`.
    pub fn christoffel(&self) -> [[[f64; 2]; 2]; 2] {
        let det = self.e * self.g - self.f * self.f;
        let inv = [[self.g / det, -self.f / det], [-self.f / det, self.e / det]];
        let second = [[self.rxx, self.rxy], [self.rxy, self.ryy]];
        let tang = [self.rx, self.ry];
        let mut out = [[[0.0; 2]; 2]; 2];
        for (k, ok) in out.iter_mut().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    ok[i][j] = (0..2).map(|l| inv[k][l] * dot(second[i][j], tang[l])).sum();
                }
            }
        }
        out
    }

    /// `cos θ = ⟨e₃, N⟩`.
    pub fn cos_theta(&self) -> f64 {
        self.normal[2]
    }
}

/// Relative difference with the denominator floored at 1.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Composite Simpson rule, used as an independent quadrature.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// A surface together with an independent closed-form position when one
/// is known.
pub struct Case {
    pub label: String,
    pub surface: ParamSurface,
    pub exact: Option<Position>,
    /// Chart has `U` along `+∂x`.
    pub adapted: bool,
}

impl Case {
    pub fn position(&self) -> Box<dyn Fn(f64, f64) -> [f64; 3] + '_> {
        match &self.exact {
            Some(p) => Box::new(p),
            None => Box::new(move |x, y| self.surface.point(x, y).unwrap()),
        }
    }
}

pub fn domain(x0: f64, x1: f64, y0: f64, y1: f64) -> ChartDomain {
    ChartDomain::from_bounds(x0, x1, y0, y1).unwrap()
}

pub fn gallery_cases() -> Vec<Case> {
    let exact: [(GalleryName, Position); 6] = [
        (
            GalleryName::Helicoid,
            Box::new(|u: f64, v: f64| [u * v.cos(), u * v.sin(), v]),
        ),
        (
            GalleryName::Catenoid,
            Box::new(|u: f64, v: f64| [u.cosh() * v.cos(), u.cosh() * v.sin(), u]),
        ),
        (
            GalleryName::Enneper,
            Box::new(|u: f64, v: f64| {
                [
                    u - u.powi(3) / 3.0 + u * v * v,
                    -v + v.powi(3) / 3.0 - u * u * v,
                    u * u - v * v,
                ]
            }),
        ),
        (
            GalleryName::Scherk,
            Box::new(|u: f64, v: f64| [u, v, (u.cos() / v.cos()).ln()]),
        ),
        (
            GalleryName::ScherkIsothermal,
            Box::new(|x: f64, y: f64| {
                let d = 1.0 - x * x - y * y;
                let u = (2.0 * x / d).atan();
                let v = (2.0 * y / d).atan();
                [u, v, (u.cos() / v.cos()).ln()]
            }),
        ),
        (
            GalleryName::HelicoidIsothermal,
            Box::new(|x: f64, y: f64| [x.sinh() * y.cos(), x.sinh() * y.sin(), y]),
        ),
    ];
    exact
        .into_iter()
        .map(|(name, p)| Case {
            label: name.to_string(),
            surface: gallery(name, None).unwrap(),
            exact: Some(p),
            adapted: false,
        })
        .collect()
}

/// Five first-family specs, the last with a tabulated CMC angle.
pub fn case1_cases() -> Vec<Case> {
    let two_pi = 2.0 * PI;
    let mut out = vec![
        Case {
            label: "case1 atan(1/x)".into(),
            surface: build_case1(
                &Case1Spec::parse("atan(1/x)", "0", domain(0.5, 3.0, 0.0, two_pi))
                    .unwrap()
                    .with_phi0(1.0),
            )
            .unwrap(),
            exact: Some(Box::new(|x: f64, y: f64| {
                let r = (x * x + 1.0).sqrt();
                [r * y.cos(), r * y.sin(), x.asinh()]
            })),
            adapted: true,
        },
        Case {
            label: "case1 2*atan(exp(-x)), psi 0.2".into(),
            surface: build_case1(
                &Case1Spec::parse("2*atan(exp(-x))", "0.2", domain(-1.0, 1.0, 0.0, 3.0))
                    .unwrap()
                    .with_phi0(1.0),
            )
            .unwrap(),
            // cos θ = tanh x, sin θ = sech x.
            exact: Some(Box::new(|x: f64, y: f64| {
                let beta = 1.0 + x.cosh().ln() + 0.2;
                let z = 2.0 * (x.exp().atan() - std::f64::consts::FRAC_PI_4);
                [beta * y.cos() - 0.2, beta * y.sin(), z]
            })),
            adapted: true,
        },
        Case {
            label: "case1 1.2-0.3x, psi 0.3+0.1 sin y".into(),
            surface: build_case1(
                &Case1Spec::parse("1.2-0.3*x", "0.3+0.1*sin(y)", domain(0.0, 2.0, 0.0, 3.0))
                    .unwrap()
                    .with_phi0(1.0),
            )
            .unwrap(),
            exact: None,
            adapted: true,
        },
        Case {
            label: "case1 x, psi 0.5".into(),
            surface: build_case1(
                &Case1Spec::parse("x", "0.5", domain(0.5, 2.5, 0.0, 3.0))
                    .unwrap()
                    .with_phi0(1.0),
            )
            .unwrap(),
            exact: None,
            adapted: true,
        },
    ];
    let p = cmc_profile(0.3, 0.5, 1.0, 1.0, Interval::new(0.0, 1.0).unwrap(), 1e-11).unwrap();
    out.push(Case {
        label: "case1 cmc H=0.3".into(),
        surface: build_case1(&p.case1_spec(Interval::new(0.0, two_pi).unwrap())).unwrap(),
        exact: None,
        adapted: true,
    });
    out
}

pub fn case2_cases() -> Vec<Case> {
    [
        ("atan(1/x)", 0.0, domain(0.5, 3.0, -1.0, 1.0)),
        ("0.6*x+0.2", 0.7, domain(0.1, 2.0, -1.0, 1.0)),
        ("1.5-0.4*sin(x)", -0.4, domain(-1.0, 2.0, 0.0, 2.0)),
    ]
    .into_iter()
    .map(|(t, y0, d)| Case {
        label: format!("case2 {t}"),
        surface: build_case2(&Case2Spec::parse(t, y0, d).unwrap()).unwrap(),
        exact: None,
        adapted: true,
    })
    .collect()
}

pub fn special_cases() -> Vec<Case> {
    vec![
        Case {
            label: "catenoid_cpd c=1".into(),
            surface: catenoid_cpd(1.0, domain(0.5, 3.0, 0.0, 2.0 * PI)).unwrap(),
            exact: Some(Box::new(|x: f64, y: f64| {
                let r = (x * x + 1.0).sqrt();
                [r * y.cos(), r * y.sin(), (x + r).ln()]
            })),
            adapted: true,
        },
        Case {
            label: "sphere a=1 b=0".into(),
            surface: sphere_cpd(1.0, 0.0, domain(0.3, PI - 0.3, 0.0, 2.0 * PI)).unwrap(),
            exact: None,
            adapted: true,
        },
        Case {
            label: "sphere a=2 b=0.1".into(),
            surface: sphere_cpd(2.0, 0.1, domain(0.05, 1.4, 0.0, 2.0 * PI)).unwrap(),
            exact: None,
            adapted: true,
        },
    ]
}

pub fn constructed_cases() -> Vec<Case> {
    let mut v = case1_cases();
    v.extend(case2_cases());
    v.extend(special_cases());
    v
}

pub fn all_cases() -> Vec<Case> {
    let mut v = gallery_cases();
    v.extend(constructed_cases());
    v
}

/// Adds `0.01·sin x·sin y` to the height of `s`.
pub fn perturbed(s: &ParamSurface) -> ParamSurface {
    let base = s.clone();
    ParamSurface::new(
        format!("{} perturbed", s.name),
        s.domain,
        s.kind,
        move |x, y| {
            let [a, b, c] = base.eval_jets(x, y)?;
            Ok([a, b, c + (x.sin() * y.sin()).scale(0.01)])
        },
    )
}

/// Helicoid chart with `x` along the rulings' axis: adapted but not CPD.
pub fn swapped_helicoid() -> ParamSurface {
    ParamSurface::from_exprs(
        "helicoid swapped",
        domain(0.0, 2.0 * PI, 0.3, 2.0),
        [
            parse("y*cos(x)").unwrap(),
            parse("y*sin(x)").unwrap(),
            parse("x").unwrap(),
        ],
    )
}
