use crate::error::Result;
use crate::geometry::{vec3, FixedDirection, LocalGeometry, ParamSurface, ThirdOrder};
use crate::numerics::Sym2x2;

/// `max |H|` below this marks a surface as minimal for check selection.
pub const MINIMAL_DETECT: f64 = 1e-8;

/// Error budget a check is held to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    First,
    Second,
    Codazzi,
}

/// Condition under which a check applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Always,
    KnownAngle,
    Canonical,
    Gradient,
    Conformal,
    Isothermal,
    Minimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckId {
    KDecomposition,
    SelfAdjoint,
    GaussDet,
    ShapeGradient,
    NormalDerivative,
    TangentDerivative,
    Codazzi,
    KnownAngle,
    CanonicalMetric,
    CanonicalShapeOperator,
    CanonicalShapeEntries,
    ThetaY,
    CanonicalCodazzi,
    GradientMetric,
    GradientShapeOperator,
    GradientCodazzi,
    ConformalMetric,
    ConformalShapeOperator,
    Isothermal,
    MinimalAnglePde,
    Minimal,
    LogTanHarmonic,
}

impl CheckId {
    pub const COUNT: usize = 22;

    pub const ALL: [CheckId; CheckId::COUNT] = [
        CheckId::KDecomposition,
        CheckId::SelfAdjoint,
        CheckId::GaussDet,
        CheckId::ShapeGradient,
        CheckId::NormalDerivative,
        CheckId::TangentDerivative,
        CheckId::Codazzi,
        CheckId::KnownAngle,
        CheckId::CanonicalMetric,
        CheckId::CanonicalShapeOperator,
        CheckId::CanonicalShapeEntries,
        CheckId::ThetaY,
        CheckId::CanonicalCodazzi,
        CheckId::GradientMetric,
        CheckId::GradientShapeOperator,
        CheckId::GradientCodazzi,
        CheckId::ConformalMetric,
        CheckId::ConformalShapeOperator,
        CheckId::Isothermal,
        CheckId::MinimalAnglePde,
        CheckId::Minimal,
        CheckId::LogTanHarmonic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::KDecomposition => "k_decomposition",
            CheckId::SelfAdjoint => "self_adjoint",
            CheckId::GaussDet => "gauss_det",
            CheckId::ShapeGradient => "shape_gradient",
            CheckId::NormalDerivative => "normal_derivative",
            CheckId::TangentDerivative => "tangent_derivative",
            CheckId::Codazzi => "codazzi",
            CheckId::KnownAngle => "known_angle",
            CheckId::CanonicalMetric => "canonical_metric",
            CheckId::CanonicalShapeOperator => "canonical_shape_operator",
            CheckId::CanonicalShapeEntries => "canonical_shape_entries",
            CheckId::ThetaY => "theta_y",
            CheckId::CanonicalCodazzi => "canonical_codazzi",
            CheckId::GradientMetric => "gradient_metric",
            CheckId::GradientShapeOperator => "gradient_shape_operator",
            CheckId::GradientCodazzi => "gradient_codazzi",
            CheckId::ConformalMetric => "conformal_metric",
            CheckId::ConformalShapeOperator => "conformal_shape_operator",
            CheckId::Isothermal => "isothermal",
            CheckId::MinimalAnglePde => "minimal_angle_pde",
            CheckId::Minimal => "minimal",
            CheckId::LogTanHarmonic => "log_tan_harmonic",
        }
    }

    pub fn from_name(name: &str) -> Option<CheckId> {
        CheckId::ALL.iter().copied().find(|c| c.name() == name)
    }

    pub fn tier(self) -> Tier {
        match self {
            CheckId::Codazzi => Tier::Codazzi,
            CheckId::CanonicalShapeEntries
            | CheckId::CanonicalCodazzi
            | CheckId::GradientCodazzi
            | CheckId::MinimalAnglePde
            | CheckId::LogTanHarmonic => Tier::Second,
            _ => Tier::First,
        }
    }

    pub fn family(self) -> Family {
        match self {
            CheckId::KDecomposition
            | CheckId::SelfAdjoint
            | CheckId::GaussDet
            | CheckId::ShapeGradient
            | CheckId::NormalDerivative
            | CheckId::TangentDerivative
            | CheckId::Codazzi => Family::Always,
            CheckId::KnownAngle => Family::KnownAngle,
            CheckId::CanonicalMetric
            | CheckId::CanonicalShapeOperator
            | CheckId::CanonicalShapeEntries
            | CheckId::ThetaY
            | CheckId::CanonicalCodazzi => Family::Canonical,
            CheckId::GradientMetric | CheckId::GradientShapeOperator | CheckId::GradientCodazzi => {
                Family::Gradient
            }
            CheckId::ConformalMetric | CheckId::ConformalShapeOperator => Family::Conformal,
            CheckId::Isothermal | CheckId::MinimalAnglePde => Family::Isothermal,
            CheckId::Minimal | CheckId::LogTanHarmonic => Family::Minimal,
        }
    }
}

/// Per-point quantities used to decide which chart identities apply.
#[derive(Debug, Clone, Copy)]
pub struct Detection {
    /// `⟨k, r_x⟩ > 0`.
    pub along_x: bool,
    pub gradient_defect: f64,
    pub conformal_defect: f64,
    pub isothermal_defect: f64,
    pub abs_mean: f64,
}

fn entry(m: &Sym2x2, i: usize, j: usize) -> f64 {
    match (i, j) {
        (0, 0) => m.a11,
        (0, 1) => m.a12,
        (1, 0) => m.a21,
        _ => m.a22,
    }
}

/// Largest entry of an endomorphism after rescaling to the orthonormal
/// frame `∂_i/|∂_i|` (exact for orthogonal charts).
fn frame_max(m: &Sym2x2, g: &Sym2x2) -> f64 {
    let len = [g.a11.sqrt(), g.a22.sqrt()];
    let mut out: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            out = out.max((entry(m, i, j) * len[i] / len[j]).abs());
        }
    }
    out
}

fn gnorm(g: &Sym2x2, v: [f64; 2]) -> f64 {
    g.form(v, v).max(0.0).sqrt()
}

/// `Δ log tan(θ/2)` from differences of `θ_j / sin θ`.
pub fn log_tan_laplacian(t: &ThirdOrder, k: &FixedDirection) -> f64 {
    let fx = |l: &LocalGeometry| {
        let a = l.angle(k);
        a.theta_x / a.theta.sin()
    };
    let fy = |l: &LocalGeometry| {
        let a = l.angle(k);
        a.theta_y / a.theta.sin()
    };
    let grad = [fx(&t.center), fy(&t.center)];
    let fxx = t.d_dx(fx);
    let fyy = t.d_dy(fy);
    let fxy = 0.5 * (t.d_dx(fy) + t.d_dy(fx));
    t.center.laplace_beltrami(grad, [[fxx, fxy], [fxy, fyy]])
}

/// Every candidate residual at one point; which ones are reported is
/// decided after the whole grid is seen.
pub fn residuals(
    s: &ParamSurface,
    k: &FixedDirection,
    t: &ThirdOrder,
) -> Result<([Option<f64>; CheckId::COUNT], Detection)> {
    let l = &t.center;
    let kv = k.vector();
    let a = l.angle(k);
    let g = &l.metric;
    let sh = &l.shape;
    let (e, f, gg) = (g.a11, g.a12, g.a22);
    let (sin, cos) = a.theta.sin_cos();
    let u = a.u;
    let au = sh.apply(u);
    let sqrt_eg = (e * gg).sqrt();
    let mut r = [None; CheckId::COUNT];
    let mut set = |id: CheckId, v: f64| r[id as usize] = Some(v);

    set(
        CheckId::KDecomposition,
        (g.form(u, u) + cos * cos - 1.0).abs(),
    );

    let ga = g.mul(sh);
    set(CheckId::SelfAdjoint, (ga.a12 - ga.a21).abs() / sqrt_eg);

    let c = l.curvatures()?;
    set(
        CheckId::GaussDet,
        (c.gaussian - c.kappa1 * c.kappa2)
            .abs()
            .max((c.mean - 0.5 * (c.kappa1 + c.kappa2)).abs()),
    );

    set(
        CheckId::ShapeGradient,
        gnorm(
            g,
            [au[0] - sin * a.grad_theta[0], au[1] - sin * a.grad_theta[1]],
        ),
    );

    // X[cos θ] = ⟨k, ∂_j N⟩ against −g(AU, ∂_j).
    let gau = g.apply(au);
    let normal_der = (0..2)
        .map(|j| {
            let len = if j == 0 { e } else { gg }.sqrt();
            (vec3::dot(kv, l.dnormal[j]) + gau[j]).abs() / len
        })
        .fold(0.0, f64::max);
    set(CheckId::NormalDerivative, normal_der);

    let nab = l.nabla_tangent_part(k);
    let tangent_der = (0..2)
        .map(|j| {
            let col = [entry(sh, 0, j), entry(sh, 1, j)];
            let w = [nab[j][0] - cos * col[0], nab[j][1] - cos * col[1]];
            let len = if j == 0 { e } else { gg }.sqrt();
            gnorm(g, w) / len
        })
        .fold(0.0, f64::max);
    set(CheckId::TangentDerivative, tangent_der);

    set(CheckId::Codazzi, t.codazzi_residual());

    if let Some(known) = &s.known_theta {
        set(CheckId::KnownAngle, (a.theta - known.eval(l.x, l.y)?).abs());
    }

    // Orthogonal-chart quantities with β = √G.
    let beta = gg.sqrt();
    let beta_x = l.dmetric[0].a22 / (2.0 * beta);
    let beta_y = l.dmetric[1].a22 / (2.0 * beta);
    let beta_x_of = |m: &LocalGeometry| m.dmetric[0].a22 / (2.0 * m.metric.a22.sqrt());
    let beta_xx = t.d_dx(beta_x_of);
    let [theta_xx, _, theta_yy] = t.theta_hessian(k);
    let tan = sin / cos;

    set(
        CheckId::CanonicalMetric,
        (e - 1.0).abs().max(f.abs() / sqrt_eg),
    );
    set(
        CheckId::CanonicalShapeOperator,
        l.second.a12.abs() / sqrt_eg,
    );
    set(
        CheckId::CanonicalShapeEntries,
        (sh.a11 - a.theta_x)
            .abs()
            .max((sh.a22 - tan * beta_x / beta).abs()),
    );
    set(CheckId::ThetaY, a.theta_y.abs());
    set(
        CheckId::CanonicalCodazzi,
        (beta_xx + tan * a.theta_x * beta_x).abs(),
    );

    let s2 = sin * sin;
    let gradient_metric = (e * s2 - 1.0).abs().max(f.abs() / sqrt_eg);
    set(CheckId::GradientMetric, gradient_metric);
    // The (2,2) entry is compared after multiplying by cos θ.
    let diff = Sym2x2::new(
        sh.a11 - a.theta_x * sin,
        sh.a12 - a.theta_y * sin,
        sh.a21 - a.theta_y / (sin * beta * beta),
        0.0,
    );
    let d22 = (cos * sh.a22 - s2 * beta_x / beta).abs();
    set(CheckId::GradientShapeOperator, frame_max(&diff, g).max(d22));
    // Codazzi PDE in the adapted chart, multiplied by cos²θ.
    let c2 = cos * cos;
    let pde = s2 * cos * beta_xx / beta
        + sin * a.theta_x * beta_x / beta
        + c2 * a.theta_y * beta_y / (sin * beta * beta * beta)
        + c2 * (2.0 * cos * a.theta_y * a.theta_y / s2 - theta_yy / sin) / (beta * beta);
    set(CheckId::GradientCodazzi, pde.abs());

    let conformal_metric = gradient_metric.max((gg * s2 - 1.0).abs());
    set(CheckId::ConformalMetric, conformal_metric);
    let p3 = Sym2x2::new(
        sin * a.theta_x,
        sin * a.theta_y,
        sin * a.theta_y,
        -sin * a.theta_x,
    );
    let diff3 = Sym2x2::new(
        sh.a11 - p3.a11,
        sh.a12 - p3.a12,
        sh.a21 - p3.a21,
        sh.a22 - p3.a22,
    );
    set(CheckId::ConformalShapeOperator, frame_max(&diff3, g));

    let iso = (e - gg).abs().max(f.abs());
    set(CheckId::Isothermal, iso);
    set(
        CheckId::MinimalAnglePde,
        (cos * (a.theta_x * a.theta_x + a.theta_y * a.theta_y) - sin * (theta_xx + theta_yy)).abs(),
    );
    set(CheckId::Minimal, l.mean().abs());
    set(CheckId::LogTanHarmonic, log_tan_laplacian(t, k).abs());

    let along_x = vec3::dot(kv, l.rx) > 0.0;
    let detect = Detection {
        along_x,
        gradient_defect: gradient_metric.max(vec3::dot(kv, l.ry).abs() / beta),
        conformal_defect: (gg * s2 - 1.0).abs(),
        isothermal_defect: iso,
        abs_mean: l.mean().abs(),
    };
    Ok((r, detect))
}
