//! Constructors for surfaces whose fixed-direction tangent part is a
//! principal direction, in canonical coordinates.
//!
//! In canonical coordinates `(x, y)` the angle function depends on `x`
//! only, the metric is `dx² + β²dy²` with `β = φ(x) + ψ(y)`, and `φ` is a
//! primitive of `cos θ`. Two families arise: revolution-like surfaces
//! ([`build_case1`]) and cylinders ([`build_case2`]).

mod cmc;

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use cmc::{cmc_profile, CmcProfile, ProfileTable};

use crate::error::{Error, Result};
use crate::expr::{parse, Expr, Var};
use crate::geometry::{vec3, ChartDomain, CoordKind, FixedDirection, ParamSurface};
use crate::numerics::{try_integrate, Jet2};
use crate::verify::{is_masked, GridSpec};

pub const DEFAULT_QUAD_TOL: f64 = 1e-12;

/// Samples per axis for construction-time validation.
pub const VALIDATION_SAMPLES: usize = 101;

/// The angle function of a canonical chart, as a function of `x`.
#[derive(Debug, Clone)]
pub enum AngleProfile {
    Expr(Expr),
    /// Spline through an integrated profile, carrying its own primitives.
    Table(Arc<ProfileTable>),
}

impl From<Expr> for AngleProfile {
    fn from(e: Expr) -> Self {
        AngleProfile::Expr(e)
    }
}

impl AngleProfile {
    pub fn parse(src: &str) -> Result<Self> {
        let e = parse(src)?;
        e.validate_vars(&[Var::X])?;
        Ok(AngleProfile::Expr(e))
    }

    /// `(θ, θ', θ'')` at `x`.
    pub fn eval3(&self, x: f64) -> Result<(f64, f64, f64)> {
        match self {
            AngleProfile::Expr(e) => e.eval_1d(Var::X, x),
            AngleProfile::Table(t) => Ok(t.theta3(x)),
        }
    }

    /// `(∫ cos θ, ∫ sin θ)` from `from` to `x`.
    pub fn primitives(&self, from: f64, x: f64, tol: f64) -> Result<(f64, f64)> {
        match self {
            AngleProfile::Expr(e) => {
                let c = try_integrate(|t| Ok(e.eval(t, 0.0)?.cos()), from, x, tol)?;
                let s = try_integrate(|t| Ok(e.eval(t, 0.0)?.sin()), from, x, tol)?;
                Ok((c, s))
            }
            AngleProfile::Table(t) => {
                let (c1, s1) = t.primitives(x);
                let (c0, s0) = t.primitives(from);
                Ok((c1 - c0, s1 - s0))
            }
        }
    }

    pub fn as_expr(&self) -> Option<&Expr> {
        match self {
            AngleProfile::Expr(e) => Some(e),
            AngleProfile::Table(_) => None,
        }
    }
}

/// Input of the first family: `r = (φ(x)(cos y, sin y) + γ(y), ∫ sin θ)`.
#[derive(Debug, Clone)]
pub struct Case1Spec {
    pub theta: AngleProfile,
    /// Function of `y`; `β = φ + ψ`.
    pub psi: Expr,
    pub domain: ChartDomain,
    pub quad_tol: f64,
    /// Value of `φ` at `anchor`.
    pub phi0: f64,
    /// Base point of the `x`-primitives.
    pub anchor: f64,
}

impl Case1Spec {
    pub fn new(theta: impl Into<AngleProfile>, psi: Expr, domain: ChartDomain) -> Self {
        Case1Spec {
            theta: theta.into(),
            psi,
            domain,
            quad_tol: DEFAULT_QUAD_TOL,
            phi0: 0.0,
            anchor: 0.0,
        }
    }

    pub fn parse(theta: &str, psi: &str, domain: ChartDomain) -> Result<Self> {
        let psi = parse(psi)?;
        psi.validate_vars(&[Var::Y])?;
        Ok(Case1Spec::new(AngleProfile::parse(theta)?, psi, domain))
    }

    pub fn with_phi0(mut self, phi0: f64) -> Self {
        self.phi0 = phi0;
        self
    }

    pub fn with_anchor(mut self, anchor: f64) -> Self {
        self.anchor = anchor;
        self
    }

    pub fn with_quad_tol(mut self, tol: f64) -> Self {
        self.quad_tol = tol;
        self
    }
}

/// Input of the second family: cylinders
/// `r = (φ(x) cos y₀, φ(x) sin y₀, ∫ sin θ) + y·v₀`.
#[derive(Debug, Clone)]
pub struct Case2Spec {
    pub theta: AngleProfile,
    pub y0: f64,
    pub domain: ChartDomain,
    pub quad_tol: f64,
    pub phi0: f64,
    pub anchor: f64,
}

impl Case2Spec {
    pub fn new(theta: impl Into<AngleProfile>, y0: f64, domain: ChartDomain) -> Self {
        Case2Spec {
            theta: theta.into(),
            y0,
            domain,
            quad_tol: DEFAULT_QUAD_TOL,
            phi0: 0.0,
            anchor: 0.0,
        }
    }

    pub fn parse(theta: &str, y0: f64, domain: ChartDomain) -> Result<Self> {
        Ok(Case2Spec::new(AngleProfile::parse(theta)?, y0, domain))
    }

    pub fn with_phi0(mut self, phi0: f64) -> Self {
        self.phi0 = phi0;
        self
    }

    pub fn with_anchor(mut self, anchor: f64) -> Self {
        self.anchor = anchor;
        self
    }

    pub fn with_quad_tol(mut self, tol: f64) -> Self {
        self.quad_tol = tol;
        self
    }
}

/// Checks θ ∈ (0, π) on the sample grid and collects warnings for samples
/// at or across π/2.
fn validate_angle(theta: &AngleProfile, domain: &ChartDomain) -> Result<Vec<String>> {
    let mut warnings = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for x in domain.x.linspace(VALIDATION_SAMPLES) {
        let (t, _, _) = theta.eval3(x)?;
        if !(t > 0.0 && t < std::f64::consts::PI) {
            return Err(Error::AngleOutOfRange { x, theta: t });
        }
        if is_masked(t) {
            warnings.push(format!("angle {t} at x = {x} is an excluded value"));
        } else if let Some((px, pt)) = prev {
            if (pt - FRAC_PI_2).signum() != (t - FRAC_PI_2).signum() {
                warnings.push(format!("angle crosses pi/2 between x = {px} and x = {x}"));
            }
        }
        prev = Some((x, t));
    }
    Ok(warnings)
}

fn check_quad_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "quadrature tolerance must be positive, got {tol}"
        )))
    }
}

/// `φ` and the height as jets in `x`.
fn profile_jets(
    theta: &AngleProfile,
    anchor: f64,
    phi0: f64,
    tol: f64,
    x: Jet2,
) -> Result<(Jet2, Jet2)> {
    let (t, t1, _) = theta.eval3(x.val)?;
    let (pc, ps) = theta.primitives(anchor, x.val, tol)?;
    let (s, c) = t.sin_cos();
    let phi = x.chain(phi0 + pc, c, -s * t1);
    let height = x.chain(ps, s, c * t1);
    Ok((phi, height))
}

/// `γ(y) = ∫₀^y ψ(τ)(−sin τ, cos τ) dτ` as jets.
fn gamma_jets(psi: &Expr, tol: f64, y: Jet2) -> Result<(Jet2, Jet2)> {
    let yv = y.val;
    let (p, p1, _) = psi.eval_1d(Var::Y, yv)?;
    let (sy, cy) = yv.sin_cos();
    let (g1, g2) = if psi.uses(Var::Y) {
        let g1 = try_integrate(|t| Ok(-psi.eval(0.0, t)? * t.sin()), 0.0, yv, tol)?;
        let g2 = try_integrate(|t| Ok(psi.eval(0.0, t)? * t.cos()), 0.0, yv, tol)?;
        (g1, g2)
    } else {
        (p * (cy - 1.0), p * sy)
    };
    let j1 = y.chain(g1, -p * sy, -(p1 * sy + p * cy));
    let j2 = y.chain(g2, p * cy, p1 * cy - p * sy);
    Ok((j1, j2))
}

pub fn build_case1(spec: &Case1Spec) -> Result<ParamSurface> {
    check_quad_tol(spec.quad_tol)?;
    spec.psi.validate_vars(&[Var::Y])?;
    if let AngleProfile::Expr(e) = &spec.theta {
        e.validate_vars(&[Var::X])?;
    }
    let warnings = validate_angle(&spec.theta, &spec.domain)?;

    // β = φ(x) + ψ(y) > 0 on the sample grid.
    let xs = spec.domain.x.linspace(VALIDATION_SAMPLES);
    let ys = spec.domain.y.linspace(VALIDATION_SAMPLES);
    let mut phis = Vec::with_capacity(xs.len());
    for &x in &xs {
        phis.push(spec.phi0 + spec.theta.primitives(spec.anchor, x, spec.quad_tol)?.0);
    }
    for &y in &ys {
        let psi = spec.psi.eval(0.0, y)?;
        for (&x, &phi) in xs.iter().zip(&phis) {
            if !(phi + psi > 0.0) {
                return Err(Error::DegenerateImmersion {
                    x,
                    y,
                    reason: format!("beta = phi + psi = {} is not positive", phi + psi),
                });
            }
        }
    }

    let theta = spec.theta.clone();
    let psi = spec.psi.clone();
    let (anchor, phi0, tol) = (spec.anchor, spec.phi0, spec.quad_tol);
    let mut s = ParamSurface::new("case1", spec.domain, CoordKind::Canonical, move |x, y| {
        let (phi, height) = profile_jets(&theta, anchor, phi0, tol, x)?;
        let (g1, g2) = gamma_jets(&psi, tol, y)?;
        Ok([phi * y.cos() + g1, phi * y.sin() + g2, height])
    });
    s.known_theta = spec.theta.as_expr().cloned();
    s.warnings = warnings;
    Ok(s)
}

pub fn build_case2(spec: &Case2Spec) -> Result<ParamSurface> {
    check_quad_tol(spec.quad_tol)?;
    if let AngleProfile::Expr(e) = &spec.theta {
        e.validate_vars(&[Var::X])?;
    }
    if !spec.y0.is_finite() {
        return Err(Error::Invalid(format!(
            "y0 must be finite, got {}",
            spec.y0
        )));
    }
    let warnings = validate_angle(&spec.theta, &spec.domain)?;
    let theta = spec.theta.clone();
    let (anchor, phi0, tol) = (spec.anchor, spec.phi0, spec.quad_tol);
    let (s0, c0) = spec.y0.sin_cos();
    let mut s = ParamSurface::new("case2", spec.domain, CoordKind::Canonical, move |x, y| {
        let (phi, height) = profile_jets(&theta, anchor, phi0, tol, x)?;
        Ok([phi * c0 - y * s0, phi * s0 + y * c0, height])
    });
    s.known_theta = spec.theta.as_expr().cloned();
    s.warnings = warnings;
    Ok(s)
}

/// Catenoid `(√(x²+c²)(cos y, sin y), c·ln(x + √(x²+c²)))`.
///
/// Canonical when `c > 0`; for `c < 0` the tangent part points along `−∂x`.
pub fn catenoid_cpd(c: f64, domain: ChartDomain) -> Result<ParamSurface> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::Invalid(format!(
            "catenoid parameter must be nonzero, got {c}"
        )));
    }
    let kind = if c > 0.0 {
        CoordKind::Canonical
    } else {
        CoordKind::Generic
    };
    let theta_src = if c > 0.0 && domain.x.lo > 0.0 {
        format!("atan({c:?}/x)")
    } else {
        format!("acos(x/sqrt(x^2+{:?}))", c * c)
    };
    let c2 = c * c;
    let s = ParamSurface::new("catenoid_cpd", domain, kind, move |x, y| {
        let rho = (x * x + c2).sqrt();
        Ok([rho * y.cos(), rho * y.sin(), (x + rho).ln() * c])
    });
    Ok(s.with_known_theta(parse(&theta_src)?))
}

/// Umbilic piece of a sphere of radius `1/a` with angle `θ = ax + b`.
pub fn sphere_cpd(a: f64, b: f64, domain: ChartDomain) -> Result<ParamSurface> {
    if a == 0.0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::Invalid(format!(
            "sphere needs finite a != 0 and b, got a = {a}, b = {b}"
        )));
    }
    let theta = parse(&format!("{a:?}*x + {b:?}"))?;
    let spec = Case1Spec::new(theta, Expr::num(0.0), domain).with_phi0(b.sin() / a);
    let mut s = build_case1(&spec)?;
    s.name = "sphere".into();
    Ok(s)
}

/// Result of the canonical-principal-direction test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpdReport {
    /// `U ∥ ∂x` (positively) and `F = 0` at every evaluated point.
    pub adapted: bool,
    pub is_cpd: bool,
    pub max_theta_y: f64,
    /// Largest sine of the angle between `AU` and `U` in the metric.
    pub max_alignment_defect: f64,
    /// Largest of `|F|/√(EG)` and `|⟨k, r_y⟩|/√G`.
    pub max_adaptation_defect: f64,
    pub evaluated: usize,
    pub masked: usize,
    pub failed: usize,
}

/// Sine of the metric angle between `AU` and `U`; zero when `AU` vanishes.
pub fn alignment_defect(l: &crate::geometry::LocalGeometry, u: [f64; 2]) -> f64 {
    let au = l.shape.apply(u);
    let nu = l.metric.form(u, u).max(0.0).sqrt();
    let na = l.metric.form(au, au).max(0.0).sqrt();
    if !(nu > 0.0) || na <= 1e-12 * l.shape.norm().max(1.0) * nu {
        return 0.0;
    }
    let wedge = (au[0] * u[1] - au[1] * u[0]).abs() * l.metric.det().sqrt();
    (wedge / (na * nu)).min(1.0)
}

pub fn is_cpd(s: &ParamSurface, grid: &GridSpec, tol: f64) -> CpdReport {
    let k = FixedDirection::default();
    let kv = k.vector();
    let mut r = CpdReport {
        adapted: true,
        is_cpd: false,
        max_theta_y: 0.0,
        max_alignment_defect: 0.0,
        max_adaptation_defect: 0.0,
        evaluated: 0,
        masked: 0,
        failed: 0,
    };
    for (x, y) in grid.points(&s.domain) {
        let Ok(l) = s.local(x, y) else {
            r.failed += 1;
            continue;
        };
        let a = l.angle(&k);
        if a.degenerate || is_masked(a.theta) {
            r.masked += 1;
            continue;
        }
        r.evaluated += 1;
        let (e, f, g) = (l.metric.a11, l.metric.a12, l.metric.a22);
        let along_x = vec3::dot(kv, l.rx);
        let defect = (f.abs() / (e * g).sqrt()).max(vec3::dot(kv, l.ry).abs() / g.sqrt());
        r.max_adaptation_defect = r.max_adaptation_defect.max(defect);
        if !(along_x > 0.0) {
            r.adapted = false;
        }
        r.max_theta_y = r.max_theta_y.max(a.theta_y.abs());
        r.max_alignment_defect = r.max_alignment_defect.max(alignment_defect(&l, a.u));
    }
    r.adapted &= r.evaluated > 0 && r.failed == 0 && r.max_adaptation_defect < tol;
    r.is_cpd = r.adapted && r.max_theta_y < tol && r.max_alignment_defect < tol;
    r
}
