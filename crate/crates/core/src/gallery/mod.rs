//! Classical minimal surfaces in their usual charts, and angle fields of
//! the form `θ = 2·atan(e^f)`.
//!
//! | name                  | chart kind         | notes                                  |
//! |-----------------------|--------------------|----------------------------------------|
//! | `helicoid`            | generic            | `(x cos y, x sin y, y)`                |
//! | `helicoid_isothermal` | isothermal-minimal | helicoid at `(sinh x, y)`              |
//! | `catenoid`            | isothermal-minimal | `(cosh x cos y, cosh x sin y, x)`      |
//! | `enneper`             | isothermal-minimal | origin excluded                        |
//! | `scherk`              | generic            | graph over `|x|, |y| < π/2`            |
//! | `scherk_isothermal`   | isothermal-minimal | disc chart, `y` flipped (see below)    |
//!
//! All charts use the normal `r_x × r_y` and give angles in `(0, π)`. The
//! isothermal Scherk chart is usually written with `v = atan(−2y/(1−ρ²))`,
//! which reverses orientation; the sign of `y` is flipped here so the angle
//! is `2·atan(ρ)` rather than its supplement.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::geometry::{
    ChartDomain, CoordKind, FixedDirection, LocalGeometry, ParamSurface, ThirdOrder, FD_STEP,
};
use crate::numerics::Jet2;
use crate::verify::{is_masked, log_tan_laplacian, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GalleryName {
    Helicoid,
    HelicoidIsothermal,
    Catenoid,
    Enneper,
    Scherk,
    ScherkIsothermal,
}

impl GalleryName {
    pub const ALL: [GalleryName; 6] = [
        GalleryName::Helicoid,
        GalleryName::Catenoid,
        GalleryName::Enneper,
        GalleryName::Scherk,
        GalleryName::ScherkIsothermal,
        GalleryName::HelicoidIsothermal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GalleryName::Helicoid => "helicoid",
            GalleryName::HelicoidIsothermal => "helicoid_isothermal",
            GalleryName::Catenoid => "catenoid",
            GalleryName::Enneper => "enneper",
            GalleryName::Scherk => "scherk",
            GalleryName::ScherkIsothermal => "scherk_isothermal",
        }
    }

    /// Domain used when none is given.
    pub fn default_domain(self) -> ChartDomain {
        let two_pi = 2.0 * PI;
        let d = |a, b, c, e| ChartDomain::from_bounds(a, b, c, e).expect("valid default domain");
        match self {
            GalleryName::Helicoid => d(-2.0, 2.0, 0.0, two_pi),
            GalleryName::HelicoidIsothermal => d(-1.5, 1.5, 0.0, two_pi),
            GalleryName::Catenoid => d(-1.5, 1.5, 0.0, two_pi),
            GalleryName::Enneper => d(0.2, 2.0, 0.2, 2.0),
            GalleryName::Scherk => d(-1.2, 1.2, -1.2, 1.2),
            GalleryName::ScherkIsothermal => d(-0.63, 0.63, -0.63, 0.63),
        }
    }
}

impl fmt::Display for GalleryName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GalleryName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GalleryName::ALL
            .iter()
            .copied()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = GalleryName::ALL.iter().map(|n| n.as_str()).collect();
                Error::Invalid(format!(
                    "unknown gallery surface `{s}` (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

fn exprs(src: [&str; 3]) -> Result<[Expr; 3]> {
    Ok([parse(src[0])?, parse(src[1])?, parse(src[2])?])
}

fn check_domain(name: GalleryName, d: &ChartDomain) -> Result<()> {
    let corners = [
        (d.x.lo, d.y.lo),
        (d.x.lo, d.y.hi),
        (d.x.hi, d.y.lo),
        (d.x.hi, d.y.hi),
    ];
    let bad = |why: &str| Err(Error::Invalid(format!("domain of `{name}` {why}")));
    match name {
        GalleryName::Enneper => {
            if d.contains(0.0, 0.0) {
                return bad("must exclude the origin");
            }
        }
        GalleryName::Scherk => {
            if corners
                .iter()
                .any(|&(x, y)| x.abs() >= FRAC_PI_2 || y.abs() >= FRAC_PI_2)
            {
                return bad("must lie inside |x|, |y| < pi/2");
            }
        }
        GalleryName::ScherkIsothermal if corners.iter().any(|&(x, y)| x * x + y * y >= 1.0) => {
            return bad("must lie inside the unit disc");
        }
        _ => {}
    }
    Ok(())
}

const SCHERK_U: &str = "atan(2*x/(1-x^2-y^2))";
const SCHERK_V: &str = "atan(2*y/(1-x^2-y^2))";

fn scherk_immersion(u: Jet2, v: Jet2) -> Result<[Jet2; 3]> {
    let ratio = u.cos() / v.cos();
    if !(ratio.val > 0.0) {
        return Err(Error::Domain {
            func: "ln".into(),
            arg: ratio.val,
        });
    }
    Ok([u, v, ratio.ln()])
}

/// A named surface over `domain` (or its default domain).
pub fn gallery(name: GalleryName, domain: Option<ChartDomain>) -> Result<ParamSurface> {
    let d = domain.unwrap_or_else(|| name.default_domain());
    check_domain(name, &d)?;
    let s = match name {
        GalleryName::Helicoid => {
            ParamSurface::from_exprs(name.as_str(), d, exprs(["x*cos(y)", "x*sin(y)", "y"])?)
                .with_known_theta(parse("2*atan(sqrt(x^2+1)-x)")?)
        }
        GalleryName::HelicoidIsothermal => ParamSurface::from_exprs(
            name.as_str(),
            d,
            exprs(["sinh(x)*cos(y)", "sinh(x)*sin(y)", "y"])?,
        )
        .with_kind(CoordKind::IsothermalMinimal)
        .with_known_theta(parse("2*atan(sqrt(sinh(x)^2+1)-sinh(x))")?),
        GalleryName::Catenoid => ParamSurface::from_exprs(
            name.as_str(),
            d,
            exprs(["cosh(x)*cos(y)", "cosh(x)*sin(y)", "x"])?,
        )
        .with_kind(CoordKind::IsothermalMinimal)
        .with_known_theta(parse("2*atan(exp(-x))")?),
        GalleryName::Enneper => ParamSurface::from_exprs(
            name.as_str(),
            d,
            exprs(["x - x^3/3 + x*y^2", "-y + y^3/3 - x^2*y", "x^2 - y^2"])?,
        )
        .with_kind(CoordKind::IsothermalMinimal)
        .with_known_theta(parse("2*atan(1/sqrt(x^2+y^2))")?),
        GalleryName::Scherk => {
            ParamSurface::new(name.as_str(), d, CoordKind::Generic, scherk_immersion)
                .with_known_theta(parse("acos((1/cos(x)^2+1/cos(y)^2-1)^(-0.5))")?)
        }
        GalleryName::ScherkIsothermal => {
            let u = parse(SCHERK_U)?;
            let v = parse(SCHERK_V)?;
            let theta = format!("acos((1/cos({SCHERK_U})^2+1/cos({SCHERK_V})^2-1)^(-0.5))");
            ParamSurface::new(
                name.as_str(),
                d,
                CoordKind::IsothermalMinimal,
                move |x, y| scherk_immersion(u.eval_jet(x, y)?, v.eval_jet(x, y)?),
            )
            .with_chained(true)
            .with_known_theta(parse(&theta)?)
        }
    };
    Ok(s)
}

/// An angle function given in closed form over a chart domain.
#[derive(Debug, Clone)]
pub struct AngleField {
    pub theta: Expr,
    pub domain: ChartDomain,
    pub warnings: Vec<String>,
}

impl AngleField {
    /// Samples per axis for validation.
    const SAMPLES: usize = 21;

    /// Validates `θ ∈ (0, π)` on a sample grid of the domain; samples at an
    /// excluded angle produce a warning.
    pub fn new(theta: Expr, domain: ChartDomain) -> Result<Self> {
        let mut warnings = Vec::new();
        let xs = domain.x.linspace(Self::SAMPLES);
        let ys = domain.y.linspace(Self::SAMPLES);
        let mut excluded = 0;
        for &y in &ys {
            for &x in &xs {
                let t = theta.eval(x, y)?;
                if !(t > 0.0 && t < PI) {
                    return Err(Error::AngleOutOfRange { x, theta: t });
                }
                if is_masked(t) {
                    excluded += 1;
                }
            }
        }
        if excluded > 0 {
            warnings.push(format!(
                "{excluded} of {} samples lie at an excluded angle",
                xs.len() * ys.len()
            ));
        }
        Ok(AngleField {
            theta,
            domain,
            warnings,
        })
    }

    pub fn jet(&self, x: f64, y: f64) -> Result<Jet2> {
        self.theta.eval_jet(Jet2::var_x(x), Jet2::var_y(y))
    }
}

/// `θ = 2·atan(e^f)`.
pub fn theta_from_harmonic(f: &Expr, domain: ChartDomain) -> Result<AngleField> {
    let theta = Expr::bin(
        crate::expr::BinOp::Mul,
        Expr::num(2.0),
        Expr::call(
            crate::expr::Func::Atan,
            Expr::call(crate::expr::Func::Exp, f.clone()),
        ),
    );
    AngleField::new(theta, domain)
}

/// `cos θ (θ_x² + θ_y²) − sin θ (θ_xx + θ_yy)`; vanishes for the angle of a
/// minimal surface in isothermal coordinates.
pub fn minimal_angle_pde_residual(field: &AngleField, x: f64, y: f64) -> Result<f64> {
    let t = field.jet(x, y)?;
    let (s, c) = t.val.sin_cos();
    Ok(c * (t.dx * t.dx + t.dy * t.dy) - s * (t.dxx + t.dyy))
}

/// Surfaces with `max |H|` above this are rejected by
/// [`log_tan_half_harmonicity`].
pub const MINIMAL_TOL: f64 = 1e-6;

/// Largest `|Δ log tan(θ/2)|` over the unmasked grid points.
pub fn log_tan_half_harmonicity(s: &ParamSurface, grid: &GridSpec) -> Result<f64> {
    let k = FixedDirection::default();
    let per_point: Vec<Option<(f64, f64)>> = grid
        .points(&s.domain)
        .par_iter()
        .map(|&(x, y)| -> Result<Option<(f64, f64)>> {
            let l = LocalGeometry::at(s, x, y)?;
            let a = l.angle(&k);
            if a.degenerate || is_masked(a.theta) {
                return Ok(None);
            }
            let t = ThirdOrder::at(s, x, y, FD_STEP)?;
            Ok(Some((l.mean().abs(), log_tan_laplacian(&t, &k).abs())))
        })
        .collect::<Result<_>>()?;
    let mut max_h: f64 = 0.0;
    let mut max_r: f64 = 0.0;
    for (h, r) in per_point.into_iter().flatten() {
        max_h = max_h.max(h);
        max_r = max_r.max(if r.is_nan() { f64::INFINITY } else { r });
    }
    if !(max_h < MINIMAL_TOL) {
        return Err(Error::Invalid(format!(
            "surface `{}` is not minimal on the grid (max |H| = {max_h:e})",
            s.name
        )));
    }
    Ok(max_r)
}
