//! Embedded Dormand–Prince 5(4) integrator with cubic Hermite dense output.

use crate::error::{Error, Result};
use crate::numerics::Interval;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

// Fifth-order weights (FSAL: equal to the last row of A) and the
// difference to the embedded fourth-order weights.
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    /// Per-step local error bound, used as both absolute and relative tolerance.
    pub tol: f64,
    /// Upper bound on the step size; `None` means the span length.
    pub max_step: Option<f64>,
    pub max_steps: usize,
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        OdeOptions {
            tol,
            max_step: None,
            max_steps: 200_000,
        }
    }

    pub fn max_step(mut self, h: f64) -> Self {
        self.max_step = Some(h);
        self
    }
}

/// Accepted steps of an integration, with derivatives at each node so the
/// solution can be evaluated anywhere in the span.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub dydt: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn span(&self) -> (f64, f64) {
        (self.t[0], *self.t.last().expect("non-empty trajectory"))
    }

    pub fn last(&self) -> &[f64] {
        self.y.last().expect("non-empty trajectory")
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Cubic Hermite interpolation between the bracketing accepted steps.
    /// Arguments outside the span are clamped to its ends.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let (t0, t1) = self.span();
        let t = t.clamp(t0, t1);
        let k = match self.t.binary_search_by(|probe| probe.total_cmp(&t)) {
            Ok(i) => return self.y[i].clone(),
            Err(i) => i.clamp(1, self.t.len() - 1) - 1,
        };
        let (ta, tb) = (self.t[k], self.t[k + 1]);
        let h = tb - ta;
        let s = (t - ta) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        (0..self.y[k].len())
            .map(|i| {
                h00 * self.y[k][i]
                    + h10 * h * self.dydt[k][i]
                    + h01 * self.y[k + 1][i]
                    + h11 * h * self.dydt[k + 1][i]
            })
            .collect()
    }
}

fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Integrates `y' = rhs(t, y)` from `span.lo` to `span.hi`.
///
/// `rhs` writes the derivative into its third argument. Non-finite
/// derivatives cause the step to be rejected and shrunk; if the step falls
/// below the representable resolution at `t` the integration aborts with the
/// location, which is how singular right-hand sides surface.
pub fn ode_rk_adaptive<F>(
    rhs: F,
    y0: &[f64],
    span: Interval,
    opts: OdeOptions,
) -> Result<Trajectory>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    if !(opts.tol > 0.0) {
        return Err(Error::Invalid(format!(
            "ODE tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let n = y0.len();
    let length = span.hi - span.lo;
    let h_max = opts.max_step.unwrap_or(length).min(length);

    let mut t = span.lo;
    let mut y = y0.to_vec();
    let mut f0 = vec![0.0; n];
    rhs(t, &y, &mut f0);
    if !all_finite(&f0) {
        return Err(Error::OdeAbort {
            t,
            step: 0.0,
            reason: "right-hand side is not finite at the initial point".into(),
        });
    }

    let mut traj = Trajectory {
        t: vec![t],
        y: vec![y.clone()],
        dydt: vec![f0.clone()],
    };

    let mut h = (0.01 * length)
        .min(h_max)
        .min(opts.tol.powf(0.2) * 0.1 * length.max(1.0));
    let mut k = vec![vec![0.0; n]; 7];
    let mut stage = vec![0.0; n];
    let mut y5 = vec![0.0; n];

    for _ in 0..opts.max_steps {
        if t >= span.hi {
            return Ok(traj);
        }
        let last = t + h >= span.hi;
        if last {
            h = span.hi - t;
        }

        k[0].copy_from_slice(&f0);
        for s in 1..7 {
            for i in 0..n {
                let mut acc = y[i];
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += h * A[s][j] * kj[i];
                }
                stage[i] = acc;
            }
            rhs(t + C[s] * h, &stage, &mut k[s]);
        }
        for i in 0..n {
            y5[i] = y[i] + h * (0..6).map(|j| B5[j] * k[j][i]).sum::<f64>();
        }

        let finite = k.iter().all(|v| all_finite(v)) && all_finite(&y5);
        let err = if finite {
            (0..n)
                .map(|i| {
                    let e = h * (0..7).map(|j| (B5[j] - B4[j]) * k[j][i]).sum::<f64>();
                    let scale = opts.tol * (1.0 + y[i].abs().max(y5[i].abs()));
                    (e / scale).abs()
                })
                .fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };

        if err <= 1.0 {
            t = if last { span.hi } else { t + h };
            y.copy_from_slice(&y5);
            f0.copy_from_slice(&k[6]);
            traj.t.push(t);
            traj.y.push(y.clone());
            traj.dydt.push(f0.clone());
            let grow = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = (h * grow).min(h_max);
        } else {
            let shrink = if err.is_finite() {
                (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                0.25
            };
            h *= shrink;
            let resolution = 64.0 * f64::EPSILON * t.abs().max(1.0);
            if h < resolution {
                return Err(Error::OdeAbort {
                    t,
                    step: h,
                    reason: if err.is_finite() {
                        "step size underflow".into()
                    } else {
                        "step size underflow: right-hand side singular".into()
                    },
                });
            }
        }
    }
    Err(Error::OdeAbort {
        t,
        step: h,
        reason: format!("exceeded {} steps", opts.max_steps),
    })
}
