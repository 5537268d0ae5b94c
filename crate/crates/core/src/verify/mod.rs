//! Residual suites over sampling grids, and a surface classifier.
//!
//! Every point of the grid is evaluated independently (in parallel) and the
//! per-check statistics are reduced in grid order, so reports are
//! bit-identical across runs and thread counts.

mod checks;

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use checks::{log_tan_laplacian, CheckId, Tier};

use crate::cpd::alignment_defect;
use crate::error::{Error, Result};
use crate::geometry::{
    vec3, ChartDomain, CoordKind, FixedDirection, LocalGeometry, ParamSurface, ThirdOrder, FD_STEP,
};

/// Points whose angle lies within this distance of 0, π/2 or π are masked.
pub const MASK_RADIUS: f64 = 1e-6;

pub fn is_masked(theta: f64) -> bool {
    [0.0, FRAC_PI_2, PI]
        .iter()
        .any(|c| (theta - c).abs() < MASK_RADIUS)
}

/// Rectangular sampling grid over a chart domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    /// Fraction of each side trimmed from both ends.
    pub margin: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            nx: 41,
            ny: 41,
            margin: 0.0,
        }
    }
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, margin: f64) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::Invalid(format!(
                "grid needs at least 2x2 points, got {nx}x{ny}"
            )));
        }
        if !(0.0..0.5).contains(&margin) {
            return Err(Error::Invalid(format!(
                "grid margin must lie in [0, 0.5), got {margin}"
            )));
        }
        Ok(GridSpec { nx, ny, margin })
    }

    pub fn axes(&self, d: &ChartDomain) -> (Vec<f64>, Vec<f64>) {
        let axis = |lo: f64, hi: f64, n: usize| {
            let m = self.margin * (hi - lo);
            let (a, b) = (lo + m, hi - m);
            (0..n)
                .map(|i| {
                    if i + 1 == n {
                        b
                    } else {
                        a + (b - a) * i as f64 / (n - 1) as f64
                    }
                })
                .collect::<Vec<_>>()
        };
        (axis(d.x.lo, d.x.hi, self.nx), axis(d.y.lo, d.y.hi, self.ny))
    }

    /// Points in row-major order: `y` outer, `x` inner.
    pub fn points(&self, d: &ChartDomain) -> Vec<(f64, f64)> {
        let (xs, ys) = self.axes(d);
        ys.iter()
            .flat_map(|&y| xs.iter().map(move |&x| (x, y)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Identities using first and second jets only.
    pub first_order: f64,
    /// Identities using finite differences of jets.
    pub second_order: f64,
    /// Replaces `second_order` on surfaces built by chart composition.
    pub chained: f64,
    /// Hard limit of the coordinate-free Codazzi check.
    pub codazzi: f64,
    /// Advisory limit of the coordinate-free Codazzi check.
    pub codazzi_advisory: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            first_order: 1e-6,
            second_order: 1e-5,
            chained: 1e-4,
            codazzi: 1e-4,
            codazzi_advisory: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn for_tier(&self, tier: Tier, chained: bool) -> f64 {
        match tier {
            Tier::First => self.first_order,
            Tier::Second if chained => self.chained,
            Tier::Second => self.second_order,
            Tier::Codazzi => self.codazzi,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub max_residual: f64,
    pub mean_residual: f64,
    /// Chart point of the largest residual.
    pub worst_point: Option<[f64; 2]>,
    pub samples: usize,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub advisory_tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub advisory_passed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub surface: String,
    pub kind: CoordKind,
    pub grid: GridSpec,
    pub mask_radius: f64,
    pub total_points: usize,
    pub masked_points: usize,
    pub failed_points: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degenerate: Option<String>,
    pub warnings: Vec<String>,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn check(&self, id: CheckId) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id.name())
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Residuals and chart-detection data of one grid point.
#[derive(Debug, Clone)]
enum PointEval {
    Failed(String),
    Masked,
    Ok {
        at: [f64; 2],
        residuals: [Option<f64>; CheckId::COUNT],
        detect: checks::Detection,
    },
}

fn evaluate_point(s: &ParamSurface, k: &FixedDirection, x: f64, y: f64) -> PointEval {
    let center = match LocalGeometry::at(s, x, y) {
        Ok(l) => l,
        Err(e) => return PointEval::Failed(e.to_string()),
    };
    let angle = center.angle(k);
    if angle.degenerate || is_masked(angle.theta) {
        return PointEval::Masked;
    }
    let third = match ThirdOrder::at(s, x, y, FD_STEP) {
        Ok(t) => t,
        Err(e) => return PointEval::Failed(e.to_string()),
    };
    match checks::residuals(s, k, &third) {
        Ok((residuals, detect)) => PointEval::Ok {
            at: [x, y],
            residuals,
            detect,
        },
        Err(e) => PointEval::Failed(e.to_string()),
    }
}

fn evaluate_grid(s: &ParamSurface, k: &FixedDirection, grid: &GridSpec) -> Vec<PointEval> {
    grid.points(&s.domain)
        .par_iter()
        .map(|&(x, y)| evaluate_point(s, k, x, y))
        .collect()
}

/// Which check families apply, from the chart tag and whole-grid detection.
fn applicable(s: &ParamSurface, evals: &[PointEval], tol: &Tolerances) -> Vec<CheckId> {
    let mut gradient = true;
    let mut conformal = true;
    let mut isothermal = true;
    let mut max_h: f64 = 0.0;
    let mut any = false;
    for e in evals {
        if let PointEval::Ok { detect, .. } = e {
            any = true;
            gradient &= detect.along_x && detect.gradient_defect < tol.first_order;
            conformal &= detect.conformal_defect < tol.first_order;
            isothermal &= detect.isothermal_defect < tol.first_order;
            max_h = max_h.max(detect.abs_mean);
        }
    }
    let minimal = s.kind == CoordKind::IsothermalMinimal || (any && max_h < checks::MINIMAL_DETECT);
    let gradient = s.kind == CoordKind::GradientAdapted || (any && gradient);
    let conformal = gradient && conformal && minimal;
    let isothermal = s.kind == CoordKind::IsothermalMinimal || (any && isothermal && minimal);

    CheckId::ALL
        .iter()
        .copied()
        .filter(|c| match c.family() {
            checks::Family::Always => true,
            checks::Family::KnownAngle => s.known_theta.is_some(),
            checks::Family::Canonical => s.kind == CoordKind::Canonical,
            checks::Family::Gradient => gradient,
            checks::Family::Conformal => conformal,
            checks::Family::Isothermal => isothermal,
            checks::Family::Minimal => minimal,
        })
        .collect()
}

pub fn verify_surface(
    s: &ParamSurface,
    k: &FixedDirection,
    grid: &GridSpec,
    tol: &Tolerances,
) -> VerificationReport {
    let evals = evaluate_grid(s, k, grid);
    let ids = applicable(s, &evals, tol);

    let mut masked = 0;
    let mut failed = 0;
    let mut first_error = None;
    for e in &evals {
        match e {
            PointEval::Masked => masked += 1,
            PointEval::Failed(msg) => {
                failed += 1;
                first_error.get_or_insert_with(|| msg.clone());
            }
            PointEval::Ok { .. } => {}
        }
    }

    let mut checks = Vec::new();
    if failed > 0 {
        checks.push(CheckRecord {
            id: "evaluation".into(),
            max_residual: failed as f64,
            mean_residual: failed as f64 / evals.len() as f64,
            worst_point: None,
            samples: evals.len(),
            tolerance: 1.0,
            passed: false,
            advisory_tolerance: None,
            advisory_passed: None,
        });
    }
    for id in ids {
        let mut max = 0.0_f64;
        let mut sum = 0.0;
        let mut n = 0;
        let mut worst = None;
        for e in &evals {
            if let PointEval::Ok { at, residuals, .. } = e {
                if let Some(r) = residuals[id as usize] {
                    let r = if r.is_nan() { f64::INFINITY } else { r };
                    n += 1;
                    sum += r;
                    if worst.is_none() || r > max {
                        max = r;
                        worst = Some(*at);
                    }
                }
            }
        }
        let tolerance = tol.for_tier(id.tier(), s.chained);
        let (advisory_tolerance, advisory_passed) = if id.tier() == Tier::Codazzi {
            (Some(tol.codazzi_advisory), Some(max < tol.codazzi_advisory))
        } else {
            (None, None)
        };
        checks.push(CheckRecord {
            id: id.name().into(),
            max_residual: max,
            mean_residual: if n > 0 { sum / n as f64 } else { 0.0 },
            worst_point: worst,
            samples: n,
            tolerance,
            passed: max < tolerance,
            advisory_tolerance,
            advisory_passed,
        });
    }

    let unmasked = evals.len() - masked - failed;
    let degenerate = if unmasked == 0 && failed == 0 {
        Some("constant angle: every sampled point is masked".to_string())
    } else {
        None
    };
    let mut warnings = s.warnings.clone();
    if let Some(msg) = first_error {
        warnings.push(format!(
            "{failed} point(s) failed to evaluate, first: {msg}"
        ));
    }
    if masked > 0 {
        warnings.push(format!(
            "{masked} point(s) masked within {MASK_RADIUS:e} of an excluded angle"
        ));
    }
    let passed = checks.iter().all(|c| c.passed);
    VerificationReport {
        surface: s.name.clone(),
        kind: s.kind,
        grid: *grid,
        mask_radius: MASK_RADIUS,
        total_points: evals.len(),
        masked_points: masked,
        failed_points: failed,
        degenerate,
        warnings,
        checks,
        passed,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub minimal: bool,
    pub flat: bool,
    pub cpd: bool,
    pub constant_angle: bool,
    pub umbilic: bool,
    /// Mean curvature when it is constant on the grid.
    pub cmc: Option<f64>,
    pub max_abs_mean: f64,
    pub max_abs_gaussian: f64,
    pub max_umbilic_gap: f64,
    pub theta_spread: f64,
}

/// Per-point data used by [`classify`].
#[derive(Debug, Clone, Copy)]
struct ClassPoint {
    h: f64,
    k: f64,
    gap: f64,
    theta: f64,
    masked: bool,
    theta_y: f64,
    alignment: f64,
    adaptation: f64,
    along_x: bool,
}

fn classify_point(s: &ParamSurface, k: &FixedDirection, x: f64, y: f64) -> Result<ClassPoint> {
    let l = LocalGeometry::at(s, x, y)?;
    let c = l.curvatures()?;
    let a = l.angle(k);
    let kv = k.vector();
    let (e, f, g) = (l.metric.a11, l.metric.a12, l.metric.a22);
    Ok(ClassPoint {
        h: c.mean,
        k: c.gaussian,
        gap: c.kappa1 - c.kappa2,
        theta: a.theta,
        masked: a.degenerate || is_masked(a.theta),
        theta_y: a.theta_y.abs(),
        alignment: alignment_defect(&l, a.u),
        adaptation: (f.abs() / (e * g).sqrt()).max(vec3::dot(kv, l.ry).abs() / g.sqrt()),
        along_x: vec3::dot(kv, l.rx) > 0.0,
    })
}

/// Classifies a surface by thresholding curvature data at `tol` over the
/// grid.
pub fn classify(s: &ParamSurface, grid: &GridSpec, tol: f64) -> Result<Classification> {
    let k = FixedDirection::default();
    let pts: Vec<ClassPoint> = grid
        .points(&s.domain)
        .par_iter()
        .map(|&(x, y)| classify_point(s, &k, x, y))
        .collect::<Result<_>>()?;

    let max_by = |f: fn(&ClassPoint) -> f64| pts.iter().map(f).fold(0.0_f64, f64::max);
    let max_abs_mean = max_by(|p| p.h.abs());
    let max_abs_gaussian = max_by(|p| p.k.abs());
    let max_umbilic_gap = max_by(|p| p.gap.abs());
    let tmin = pts.iter().map(|p| p.theta).fold(f64::INFINITY, f64::min);
    let tmax = pts
        .iter()
        .map(|p| p.theta)
        .fold(f64::NEG_INFINITY, f64::max);
    let theta_spread = tmax - tmin;
    let mean_h = pts.iter().map(|p| p.h).sum::<f64>() / pts.len() as f64;
    let cmc_dev = pts
        .iter()
        .map(|p| (p.h - mean_h).abs())
        .fold(0.0_f64, f64::max);

    let live: Vec<&ClassPoint> = pts.iter().filter(|p| !p.masked).collect();
    let adapted = !live.is_empty() && live.iter().all(|p| p.along_x && p.adaptation < tol);
    let cpd = !live.is_empty()
        && if adapted {
            live.iter().all(|p| p.theta_y < tol)
        } else {
            live.iter().all(|p| p.alignment < tol)
        };

    let out = Classification {
        minimal: max_abs_mean < tol,
        flat: max_abs_gaussian < tol,
        cpd,
        constant_angle: theta_spread < tol,
        umbilic: max_umbilic_gap < tol,
        cmc: (cmc_dev < tol).then_some(mean_h),
        max_abs_mean,
        max_abs_gaussian,
        max_umbilic_gap,
        theta_spread,
    };
    if out.minimal && out.flat && !out.constant_angle {
        return Err(Error::Inconsistent(format!(
            "surface `{}` is minimal and flat with a nonconstant angle",
            s.name
        )));
    }
    Ok(out)
}
