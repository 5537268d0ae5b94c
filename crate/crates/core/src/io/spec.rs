use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cpd::{
    build_case1, build_case2, catenoid_cpd, cmc_profile, sphere_cpd, AngleProfile, Case1Spec,
    Case2Spec, DEFAULT_QUAD_TOL,
};
use crate::error::{Error, Result};
use crate::expr::parse;
use crate::gallery::{gallery, GalleryName};
use crate::geometry::{ChartDomain, ParamSurface};
use crate::numerics::Interval;

fn zero() -> String {
    "0".into()
}

fn default_ode_tol() -> f64 {
    1e-10
}

/// Surface description read from JSON, tagged by `"kind"`.
///
/// ```json
/// {"kind": "case1", "theta": "atan(1/x)", "psi": "0",
///  "domain": {"x": [0.5, 3], "y": [0, 6.283185307179586]}}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SurfaceSpecFile {
    Case1 {
        theta: String,
        #[serde(default = "zero")]
        psi: String,
        domain: ChartDomain,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi0: Option<f64>,
        /// Lower limit of the profile integrals; defaults to 0.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        anchor: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        quad_tol: Option<f64>,
    },
    Case2 {
        theta: String,
        #[serde(default)]
        y0: f64,
        domain: ChartDomain,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi0: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        anchor: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        quad_tol: Option<f64>,
    },
    Catenoid {
        c: f64,
        domain: ChartDomain,
    },
    Sphere {
        a: f64,
        b: f64,
        domain: ChartDomain,
    },
    Gallery {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<ChartDomain>,
    },
    /// First-family surface over a numerically integrated CMC profile.
    Cmc {
        #[serde(rename = "H")]
        h: f64,
        psi0: f64,
        theta0: f64,
        phi0: f64,
        span: Interval,
        y: Interval,
        #[serde(default = "default_ode_tol")]
        tol: f64,
    },
}

impl SurfaceSpecFile {
    pub fn from_json(src: &str) -> Result<Self> {
        Ok(serde_json::from_str(src)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let src = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&src)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn build(&self) -> Result<ParamSurface> {
        match self {
            SurfaceSpecFile::Case1 {
                theta,
                psi,
                domain,
                phi0,
                anchor,
                quad_tol,
            } => {
                let mut spec = Case1Spec::new(AngleProfile::parse(theta)?, parse(psi)?, *domain)
                    .with_quad_tol(quad_tol.unwrap_or(DEFAULT_QUAD_TOL));
                if let Some(p) = phi0 {
                    spec = spec.with_phi0(*p);
                }
                if let Some(a) = anchor {
                    spec = spec.with_anchor(*a);
                }
                build_case1(&spec)
            }
            SurfaceSpecFile::Case2 {
                theta,
                y0,
                domain,
                phi0,
                anchor,
                quad_tol,
            } => {
                let mut spec = Case2Spec::new(AngleProfile::parse(theta)?, *y0, *domain)
                    .with_quad_tol(quad_tol.unwrap_or(DEFAULT_QUAD_TOL));
                if let Some(p) = phi0 {
                    spec = spec.with_phi0(*p);
                }
                if let Some(a) = anchor {
                    spec = spec.with_anchor(*a);
                }
                build_case2(&spec)
            }
            SurfaceSpecFile::Catenoid { c, domain } => catenoid_cpd(*c, *domain),
            SurfaceSpecFile::Sphere { a, b, domain } => sphere_cpd(*a, *b, *domain),
            SurfaceSpecFile::Gallery { name, domain } => {
                gallery(name.parse::<GalleryName>()?, *domain)
            }
            SurfaceSpecFile::Cmc {
                h,
                psi0,
                theta0,
                phi0,
                span,
                y,
                tol,
            } => {
                let p = cmc_profile(*h, *psi0, *theta0, *phi0, *span, *tol)?;
                build_case1(&p.case1_spec(*y))
            }
        }
    }
}
