//! Angle profiles of constant-mean-curvature surfaces in the first family.
//!
//! With `β = φ(x) + ψ₀` the mean curvature is `½(θ' + sin θ/β)`, so a
//! constant value `H` gives the system `θ' = 2H − sin θ/(φ + ψ₀)`,
//! `φ' = cos θ`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use super::{AngleProfile, Case1Spec};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::ChartDomain;
use crate::numerics::{ode_rk_adaptive, CubicSpline, Interval, OdeOptions};

/// Largest spacing of the tabulated profile.
pub const TABLE_STEP: f64 = 1e-2;

/// `|φ + ψ₀|` below this is treated as the singular set of the system.
const SINGULAR_BETA: f64 = 1e-12;

/// Spline interpolation of `θ` and of the primitives of `cos θ`, `sin θ`
/// measured from the start of the table.
#[derive(Debug, Clone)]
pub struct ProfileTable {
    theta: CubicSpline,
    cos_primitive: CubicSpline,
    sin_primitive: CubicSpline,
}

impl ProfileTable {
    /// Knots `xs` with `θ`, `∫ cos θ` and `∫ sin θ` from `xs[0]`.
    pub fn new(xs: &[f64], theta: &[f64], cos_int: &[f64], sin_int: &[f64]) -> Result<Self> {
        Ok(ProfileTable {
            theta: CubicSpline::not_a_knot(xs, theta)?,
            cos_primitive: CubicSpline::not_a_knot(xs, cos_int)?,
            sin_primitive: CubicSpline::not_a_knot(xs, sin_int)?,
        })
    }

    pub fn span(&self) -> (f64, f64) {
        self.theta.domain()
    }

    pub fn theta3(&self, x: f64) -> (f64, f64, f64) {
        self.theta.eval3(x)
    }

    pub fn primitives(&self, x: f64) -> (f64, f64) {
        (self.cos_primitive.eval(x), self.sin_primitive.eval(x))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CmcProfile {
    #[serde(rename = "H")]
    pub h: f64,
    pub psi0: f64,
    pub theta0: f64,
    pub phi0: f64,
    pub span: Interval,
    /// Rows `(x, θ(x), φ(x))`.
    pub table: Vec<[f64; 3]>,
    #[serde(skip)]
    pub profile: Arc<ProfileTable>,
}

impl CmcProfile {
    pub fn angle(&self) -> AngleProfile {
        AngleProfile::Table(self.profile.clone())
    }

    /// First-family input realizing this profile over `y`.
    pub fn case1_spec(&self, y: Interval) -> Case1Spec {
        Case1Spec::new(
            self.angle(),
            Expr::num(self.psi0),
            ChartDomain::new(self.span, y),
        )
        .with_phi0(self.phi0)
        .with_anchor(self.span.lo)
    }
}

pub fn cmc_profile(
    h: f64,
    psi0: f64,
    theta0: f64,
    phi0: f64,
    span: Interval,
    tol: f64,
) -> Result<CmcProfile> {
    if ![h, psi0, theta0, phi0].iter().all(|v| v.is_finite()) {
        return Err(Error::Invalid("profile parameters must be finite".into()));
    }
    if !(theta0 > 0.0 && theta0 < PI) {
        return Err(Error::AngleOutOfRange {
            x: span.lo,
            theta: theta0,
        });
    }
    if (phi0 + psi0).abs() < SINGULAR_BETA {
        return Err(Error::Invalid(format!(
            "phi0 + psi0 = {} must be nonzero",
            phi0 + psi0
        )));
    }
    let rhs = move |_t: f64, y: &[f64], dy: &mut [f64]| {
        let beta = y[1] + psi0;
        let (s, c) = y[0].sin_cos();
        dy[0] = if beta.abs() < SINGULAR_BETA {
            f64::NAN
        } else {
            2.0 * h - s / beta
        };
        dy[1] = c;
        dy[2] = s;
    };
    let intervals = ((span.len() / TABLE_STEP).ceil() as usize).max(4);
    let step = span.len() / intervals as f64;
    let opts = OdeOptions::with_tol(tol).max_step(step);
    let traj = ode_rk_adaptive(rhs, &[theta0, phi0, 0.0], span, opts)?;

    let xs = span.linspace(intervals + 1);
    let mut theta = Vec::with_capacity(xs.len());
    let mut cos_int = Vec::with_capacity(xs.len());
    let mut sin_int = Vec::with_capacity(xs.len());
    let mut table = Vec::with_capacity(xs.len());
    for &x in &xs {
        let y = traj.eval(x);
        if !(y[0] > 0.0 && y[0] < PI) {
            return Err(Error::AngleOutOfRange { x, theta: y[0] });
        }
        theta.push(y[0]);
        cos_int.push(y[1] - phi0);
        sin_int.push(y[2]);
        table.push([x, y[0], y[1]]);
    }
    let profile = Arc::new(ProfileTable::new(&xs, &theta, &cos_int, &sin_int)?);
    Ok(CmcProfile {
        h,
        psi0,
        theta0,
        phi0,
        span,
        table,
        profile,
    })
}
