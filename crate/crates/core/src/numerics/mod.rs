//! Foundation numerics: jets, quadrature, ODE integration, 2×2 eigensolver
//! and cubic splines.

mod eig;
mod jet;
mod ode;
mod quad;
mod spline;

pub use eig::{eig_sym_generalized, EigenPair, GeneralizedEigen, Sym2x2, SELF_ADJOINT_TOL};
pub use jet::Jet2;
pub use ode::{ode_rk_adaptive, OdeOptions, Trajectory};
pub use quad::{
    quad_adaptive, try_integrate, try_quad_adaptive, try_quad_adaptive_limit,
    DEFAULT_MAX_SUBDIVISIONS,
};
pub use spline::CubicSpline;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed interval with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo < hi && lo.is_finite() && hi.is_finite() {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::InvalidInterval { lo, hi })
        }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    /// `n >= 2` evenly spaced points including both ends.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        debug_assert!(n >= 2);
        let step = self.len() / (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.hi
                } else {
                    self.lo + step * i as f64
                }
            })
            .collect()
    }
}

impl TryFrom<[f64; 2]> for Interval {
    type Error = Error;
    fn try_from(v: [f64; 2]) -> Result<Self> {
        Interval::new(v[0], v[1])
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.lo, i.hi]
    }
}
