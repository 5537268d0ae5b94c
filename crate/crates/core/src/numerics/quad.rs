//! Adaptive Gauss–Kronrod (7, 15) quadrature with an absolute tolerance.

use crate::error::{Error, Result};
use crate::numerics::Interval;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub const DEFAULT_MAX_SUBDIVISIONS: usize = 500;

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    /// Rounding-error level below which `error` cannot drop.
    floor: f64,
}

fn kronrod15<F>(f: &mut F, lo: f64, hi: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let fc = f(centre)?;
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx)?;
        let f2 = f(centre + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let mut floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    } else {
        floor = 0.0;
    }
    if !value.is_finite() {
        return Err(Error::Domain {
            func: "integrand".into(),
            arg: centre,
        });
    }
    Ok(Panel {
        lo,
        hi,
        value,
        error: err,
        floor,
    })
}

/// Integrates a fallible integrand over `range` to absolute tolerance `tol`.
///
/// Panels are bisected in order of decreasing error estimate until the sum
/// of the estimates drops below `tol`, or below the rounding-error level of
/// the integrand when that is larger.
pub fn try_quad_adaptive<F>(mut f: F, range: Interval, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    try_quad_adaptive_limit(&mut f, range, tol, DEFAULT_MAX_SUBDIVISIONS)
}

pub fn try_quad_adaptive_limit<F>(
    f: &mut F,
    range: Interval,
    tol: f64,
    max_subdivisions: usize,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::Invalid(format!(
            "quadrature tolerance must be positive, got {tol}"
        )));
    }
    let mut panels = vec![kronrod15(f, range.lo, range.hi)?];
    let mut subdivisions = 0;
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        let floor: f64 = panels.iter().map(|p| p.floor).sum();
        // At the rounding floor further bisection cannot help.
        if err <= tol.max(floor) {
            return Ok(total);
        }
        if subdivisions >= max_subdivisions {
            return Err(Error::QuadratureNonConvergence {
                estimate: total,
                error_bound: err,
                subdivisions,
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, p)| {
                if p.error > acc.1 {
                    (i, p.error)
                } else {
                    acc
                }
            });
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.lo + p.hi);
        if mid <= p.lo || mid >= p.hi {
            return Err(Error::QuadratureNonConvergence {
                estimate: total,
                error_bound: err,
                subdivisions,
            });
        }
        panels.push(kronrod15(f, p.lo, mid)?);
        panels.push(kronrod15(f, mid, p.hi)?);
        subdivisions += 1;
    }
}

/// Integrates `f` over `range` to absolute tolerance `tol`.
pub fn quad_adaptive<F>(f: F, range: Interval, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    try_quad_adaptive(|t| Ok(f(t)), range, tol)
}

/// Oriented integral from `a` to `b`; zero when the limits coincide.
pub fn try_integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    if a < b {
        try_quad_adaptive(f, Interval::new(a, b)?, tol)
    } else {
        Ok(-try_quad_adaptive(f, Interval::new(b, a)?, tol)?)
    }
}
