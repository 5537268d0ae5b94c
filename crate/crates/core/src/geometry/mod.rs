//! Differential geometry of parametrized surfaces evaluated in jets.
//!
//! Everything here is computed pointwise from the immersion's second-order
//! jet: fundamental forms, unit normal, shape operator, curvatures, the
//! angle function against a fixed direction, Christoffel symbols and the
//! Laplace–Beltrami operator.

mod local;
pub mod vec3;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use local::{Christoffel, LocalGeometry, ThirdOrder, FD_STEP};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::numerics::{Interval, Jet2, Sym2x2};
use vec3::Vec3;

/// Rectangular chart domain in `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartDomain {
    pub x: Interval,
    pub y: Interval,
}

impl ChartDomain {
    pub fn new(x: Interval, y: Interval) -> Self {
        ChartDomain { x, y }
    }

    pub fn from_bounds(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        Ok(ChartDomain {
            x: Interval::new(x0, x1)?,
            y: Interval::new(y0, y1)?,
        })
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.x.contains(x) && self.y.contains(y)
    }
}

/// What is known about the chart of a surface; selects which identities
/// the verifier checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoordKind {
    Generic,
    /// `∂x` along `U`, metric `dx²/sin²θ + β²dy²`.
    GradientAdapted,
    /// Isothermal chart on a minimal surface.
    IsothermalMinimal,
    /// `∂x` along `U`, metric `dx² + β²dy²`, `U` principal.
    Canonical,
}

impl fmt::Display for CoordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoordKind::Generic => "generic",
            CoordKind::GradientAdapted => "gradient-adapted",
            CoordKind::IsothermalMinimal => "isothermal-minimal",
            CoordKind::Canonical => "canonical",
        })
    }
}

pub type ImmersionFn = dyn Fn(Jet2, Jet2) -> Result<[Jet2; 3]> + Send + Sync;

/// A chart domain plus an immersion evaluated in jets.
///
/// Evaluation is not restricted to the domain: verification takes finite
/// difference steps across its edges. Domain validity is checked when a
/// surface is constructed.
#[derive(Clone)]
pub struct ParamSurface {
    pub name: String,
    pub domain: ChartDomain,
    pub kind: CoordKind,
    /// Closed-form angle function in chart variables, when one is known.
    pub known_theta: Option<Expr>,
    /// The immersion is a composition of charts (looser error budget).
    pub chained: bool,
    /// Construction-time diagnostics (e.g. sampled angles near excluded values).
    pub warnings: Vec<String>,
    map: Arc<ImmersionFn>,
}

impl fmt::Debug for ParamSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParamSurface")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("kind", &self.kind)
            .field(
                "known_theta",
                &self.known_theta.as_ref().map(|e| e.to_string()),
            )
            .field("chained", &self.chained)
            .finish_non_exhaustive()
    }
}

impl ParamSurface {
    pub fn new<F>(name: impl Into<String>, domain: ChartDomain, kind: CoordKind, map: F) -> Self
    where
        F: Fn(Jet2, Jet2) -> Result<[Jet2; 3]> + Send + Sync + 'static,
    {
        ParamSurface {
            name: name.into(),
            domain,
            kind,
            known_theta: None,
            chained: false,
            warnings: Vec::new(),
            map: Arc::new(map),
        }
    }

    /// Surface whose three coordinates are expressions in `x` and `y`.
    pub fn from_exprs(name: impl Into<String>, domain: ChartDomain, coords: [Expr; 3]) -> Self {
        ParamSurface::new(name, domain, CoordKind::Generic, move |x, y| {
            Ok([
                coords[0].eval_jet(x, y)?,
                coords[1].eval_jet(x, y)?,
                coords[2].eval_jet(x, y)?,
            ])
        })
    }

    pub fn with_known_theta(mut self, theta: Expr) -> Self {
        self.known_theta = Some(theta);
        self
    }

    pub fn with_chained(mut self, chained: bool) -> Self {
        self.chained = chained;
        self
    }

    pub fn with_kind(mut self, kind: CoordKind) -> Self {
        self.kind = kind;
        self
    }

    /// Evaluates the immersion on arbitrary jets (chain rule applies).
    pub fn eval_jets(&self, x: Jet2, y: Jet2) -> Result<[Jet2; 3]> {
        (self.map)(x, y)
    }

    /// Second-order jet of the immersion at a chart point.
    pub fn jets_at(&self, x: f64, y: f64) -> Result<[Jet2; 3]> {
        let r = self.eval_jets(Jet2::var_x(x), Jet2::var_y(y))?;
        if r.iter().all(Jet2::is_finite) {
            Ok(r)
        } else {
            Err(Error::DegenerateImmersion {
                x,
                y,
                reason: "immersion is not finite".into(),
            })
        }
    }

    pub fn point(&self, x: f64, y: f64) -> Result<Vec3> {
        let r = self.eval_jets(Jet2::constant(x), Jet2::constant(y))?;
        Ok([r[0].val, r[1].val, r[2].val])
    }

    pub fn local(&self, x: f64, y: f64) -> Result<LocalGeometry> {
        LocalGeometry::at(self, x, y)
    }

    /// Reparametrizes by `(s, t) -> (x(s,t), y(s,t))` given as expressions.
    pub fn compose(
        &self,
        name: impl Into<String>,
        domain: ChartDomain,
        kind: CoordKind,
        x_of: Expr,
        y_of: Expr,
    ) -> ParamSurface {
        let inner = self.clone();
        ParamSurface::new(name, domain, kind, move |s, t| {
            let x = x_of.eval_jet(s, t)?;
            let y = y_of.eval_jet(s, t)?;
            inner.eval_jets(x, y)
        })
        .with_chained(true)
    }
}

/// The fixed ambient direction the angle function is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedDirection {
    k: Vec3,
}

impl FixedDirection {
    pub fn new(k: Vec3) -> Result<Self> {
        let n = vec3::norm(k);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Invalid(
                "fixed direction must be a nonzero vector".into(),
            ));
        }
        Ok(FixedDirection {
            k: vec3::scale(k, 1.0 / n),
        })
    }

    pub fn vector(&self) -> Vec3 {
        self.k
    }
}

impl Default for FixedDirection {
    fn default() -> Self {
        FixedDirection { k: [0.0, 0.0, 1.0] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstForm {
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "G")]
    pub g: f64,
}

impl FirstForm {
    pub fn matrix(&self) -> Sym2x2 {
        Sym2x2::symmetric(self.e, self.f, self.g)
    }

    pub fn det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl SecondForm {
    pub fn matrix(&self) -> Sym2x2 {
        Sym2x2::symmetric(self.e, self.f, self.g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureData {
    #[serde(rename = "K")]
    pub gaussian: f64,
    #[serde(rename = "H")]
    pub mean: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub dir1: [f64; 2],
    pub dir2: [f64; 2],
    pub umbilic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleData {
    pub theta: f64,
    pub cos_theta: f64,
    /// Coordinates of the tangent part `U` of the fixed direction.
    pub u: [f64; 2],
    /// Coordinates of `grad θ` (indices raised with the metric).
    pub grad_theta: [f64; 2],
    /// Partial derivatives `θ_x`, `θ_y`.
    pub theta_x: f64,
    pub theta_y: f64,
    /// θ within 1e-9 of 0 or π: `U` vanishes and θ is not differentiable.
    pub degenerate: bool,
}

pub fn first_form(s: &ParamSurface, x: f64, y: f64) -> Result<FirstForm> {
    Ok(s.local(x, y)?.first_form())
}

pub fn unit_normal(s: &ParamSurface, x: f64, y: f64) -> Result<Vec3> {
    Ok(s.local(x, y)?.normal)
}

pub fn shape_operator(s: &ParamSurface, x: f64, y: f64) -> Result<Sym2x2> {
    Ok(s.local(x, y)?.shape)
}

pub fn curvatures(s: &ParamSurface, x: f64, y: f64) -> Result<CurvatureData> {
    s.local(x, y)?.curvatures()
}

pub fn angle_data(s: &ParamSurface, x: f64, y: f64, k: &FixedDirection) -> Result<AngleData> {
    Ok(s.local(x, y)?.angle(k))
}

pub fn christoffel(s: &ParamSurface, x: f64, y: f64) -> Result<Christoffel> {
    Ok(s.local(x, y)?.christoffel())
}

/// `Δf` of a scalar field given as an expression in chart variables.
pub fn laplace_beltrami(s: &ParamSurface, field: &Expr, x: f64, y: f64) -> Result<f64> {
    let local = s.local(x, y)?;
    let f = field.eval_jet(Jet2::var_x(x), Jet2::var_y(y))?;
    Ok(local.laplace_beltrami(f.gradient(), f.hessian()))
}
