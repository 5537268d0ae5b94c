use serde::{Deserialize, Serialize};

use super::vec3::{self, Vec3};
use super::{AngleData, CurvatureData, FirstForm, FixedDirection, ParamSurface, SecondForm};
use crate::error::{Error, Result};
use crate::numerics::{eig_sym_generalized, Sym2x2};

/// Step for central differences of jet-level quantities.
pub const FD_STEP: f64 = 1e-5;

/// `sin θ` below this makes the angle degenerate.
const DEGENERATE_SIN: f64 = 1e-9;

/// Christoffel symbols of the second kind, `gamma[i][j][k] = Γ^i_{jk}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Christoffel {
    pub gamma: [[[f64; 2]; 2]; 2],
}

impl Christoffel {
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.gamma[i][j][k]
    }
}

/// Everything at one chart point that follows from the immersion's 2-jet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalGeometry {
    pub x: f64,
    pub y: f64,
    pub r: Vec3,
    pub rx: Vec3,
    pub ry: Vec3,
    pub rxx: Vec3,
    pub rxy: Vec3,
    pub ryy: Vec3,
    pub metric: Sym2x2,
    pub metric_inv: Sym2x2,
    /// `[∂x g, ∂y g]`.
    pub dmetric: [Sym2x2; 2],
    pub normal: Vec3,
    /// `[∂x N, ∂y N]` from the derivative of `r_x × r_y`.
    pub dnormal: [Vec3; 2],
    pub second: Sym2x2,
    /// Shape operator `g⁻¹·II`; column `j` is `A∂_j`.
    pub shape: Sym2x2,
}

impl LocalGeometry {
    pub fn at(s: &ParamSurface, x: f64, y: f64) -> Result<Self> {
        let j = s.jets_at(x, y)?;
        let pick = |f: fn(&crate::numerics::Jet2) -> f64| [f(&j[0]), f(&j[1]), f(&j[2])];
        let r = pick(|c| c.val);
        let rx = pick(|c| c.dx);
        let ry = pick(|c| c.dy);
        let rxx = pick(|c| c.dxx);
        let rxy = pick(|c| c.dxy);
        let ryy = pick(|c| c.dyy);

        let degenerate = |reason: &str| Error::DegenerateImmersion {
            x,
            y,
            reason: reason.to_string(),
        };

        let e = vec3::dot(rx, rx);
        let f = vec3::dot(rx, ry);
        let g = vec3::dot(ry, ry);
        let metric = Sym2x2::symmetric(e, f, g);
        let n = vec3::cross(rx, ry);
        let n_len = vec3::norm(n);
        if !(n_len > 0.0) || !n_len.is_finite() || !(metric.det() > 0.0) {
            return Err(degenerate("r_x and r_y are linearly dependent"));
        }
        let metric_inv = metric
            .inverse()
            .ok_or_else(|| degenerate("first fundamental form is singular"))?;
        let normal = vec3::scale(n, 1.0 / n_len);

        let ex = 2.0 * vec3::dot(rxx, rx);
        let ey = 2.0 * vec3::dot(rxy, rx);
        let fx = vec3::dot(rxx, ry) + vec3::dot(rx, rxy);
        let fy = vec3::dot(rxy, ry) + vec3::dot(rx, ryy);
        let gx = 2.0 * vec3::dot(rxy, ry);
        let gy = 2.0 * vec3::dot(ryy, ry);
        let dmetric = [Sym2x2::symmetric(ex, fx, gx), Sym2x2::symmetric(ey, fy, gy)];

        let unit_derivative = |nd: Vec3| {
            let radial = vec3::scale(normal, vec3::dot(normal, nd));
            vec3::scale(vec3::sub(nd, radial), 1.0 / n_len)
        };
        let nx = vec3::add(vec3::cross(rxx, ry), vec3::cross(rx, rxy));
        let ny = vec3::add(vec3::cross(rxy, ry), vec3::cross(rx, ryy));
        let dnormal = [unit_derivative(nx), unit_derivative(ny)];

        let second = Sym2x2::symmetric(
            vec3::dot(rxx, normal),
            vec3::dot(rxy, normal),
            vec3::dot(ryy, normal),
        );
        let shape = metric_inv.mul(&second);

        Ok(LocalGeometry {
            x,
            y,
            r,
            rx,
            ry,
            rxx,
            rxy,
            ryy,
            metric,
            metric_inv,
            dmetric,
            normal,
            dnormal,
            second,
            shape,
        })
    }

    pub fn first_form(&self) -> FirstForm {
        FirstForm {
            e: self.metric.a11,
            f: self.metric.a12,
            g: self.metric.a22,
        }
    }

    pub fn second_form(&self) -> SecondForm {
        SecondForm {
            e: self.second.a11,
            f: self.second.a12,
            g: self.second.a22,
        }
    }

    pub fn gaussian(&self) -> f64 {
        self.shape.det()
    }

    pub fn mean(&self) -> f64 {
        0.5 * self.shape.trace()
    }

    /// Coordinates of a tangent vector given in space.
    pub fn tangent_coords(&self, v: Vec3) -> [f64; 2] {
        self.metric_inv
            .apply([vec3::dot(v, self.rx), vec3::dot(v, self.ry)])
    }

    /// Tangent vector in space from chart coordinates.
    pub fn push_forward(&self, c: [f64; 2]) -> Vec3 {
        vec3::add(vec3::scale(self.rx, c[0]), vec3::scale(self.ry, c[1]))
    }

    pub fn christoffel(&self) -> Christoffel {
        // dg[l][m][j] = ∂_j g_{lm}
        let d = &self.dmetric;
        let dg = |l: usize, m: usize, j: usize| -> f64 {
            let s = &d[j];
            match (l, m) {
                (0, 0) => s.a11,
                (1, 1) => s.a22,
                _ => s.a12,
            }
        };
        let gi = |i: usize, l: usize| -> f64 {
            match (i, l) {
                (0, 0) => self.metric_inv.a11,
                (0, 1) => self.metric_inv.a12,
                (1, 0) => self.metric_inv.a21,
                _ => self.metric_inv.a22,
            }
        };
        let mut gamma = [[[0.0; 2]; 2]; 2];
        for (i, gi_row) in gamma.iter_mut().enumerate() {
            for (j, row) in gi_row.iter_mut().enumerate() {
                for (k, out) in row.iter_mut().enumerate() {
                    *out = (0..2)
                        .map(|l| 0.5 * gi(i, l) * (dg(l, k, j) + dg(l, j, k) - dg(j, k, l)))
                        .sum();
                }
            }
        }
        Christoffel { gamma }
    }

    /// `Δf` from the chart gradient and Hessian of `f`.
    pub fn laplace_beltrami(&self, grad: [f64; 2], hess: [[f64; 2]; 2]) -> f64 {
        let gam = self.christoffel();
        let gi = [
            [self.metric_inv.a11, self.metric_inv.a12],
            [self.metric_inv.a21, self.metric_inv.a22],
        ];
        let mut sum = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let conn = gam.get(0, i, j) * grad[0] + gam.get(1, i, j) * grad[1];
                sum += gi[i][j] * (hess[i][j] - conn);
            }
        }
        sum
    }

    pub fn curvatures(&self) -> Result<CurvatureData> {
        let eig = eig_sym_generalized(&self.shape, &self.metric)?;
        Ok(CurvatureData {
            gaussian: self.gaussian(),
            mean: self.mean(),
            kappa1: eig.pairs[0].value,
            kappa2: eig.pairs[1].value,
            dir1: eig.pairs[0].vector,
            dir2: eig.pairs[1].vector,
            umbilic: eig.umbilic,
        })
    }

    pub fn cos_theta(&self, k: &FixedDirection) -> f64 {
        vec3::dot(k.vector(), self.normal).clamp(-1.0, 1.0)
    }

    /// Chart coordinates of the tangent part `U = k − cosθ N`.
    pub fn tangent_part(&self, k: &FixedDirection) -> [f64; 2] {
        self.tangent_coords(k.vector())
    }

    pub fn angle(&self, k: &FixedDirection) -> AngleData {
        let kv = k.vector();
        let c = self.cos_theta(k);
        let u_space = vec3::sub(kv, vec3::scale(self.normal, c));
        let sin = vec3::norm(u_space);
        let theta = sin.atan2(c);
        let u = self.tangent_coords(kv);
        let degenerate = sin < DEGENERATE_SIN;
        let (theta_x, theta_y) = if degenerate {
            (0.0, 0.0)
        } else {
            (
                -vec3::dot(kv, self.dnormal[0]) / sin,
                -vec3::dot(kv, self.dnormal[1]) / sin,
            )
        };
        AngleData {
            theta,
            cos_theta: c,
            u,
            grad_theta: self.metric_inv.apply([theta_x, theta_y]),
            theta_x,
            theta_y,
            degenerate,
        }
    }

    /// Levi-Civita derivatives of `U`: entry `j` is `∇_{∂j} U` in chart
    /// coordinates.
    pub fn nabla_tangent_part(&self, k: &FixedDirection) -> [[f64; 2]; 2] {
        let kv = k.vector();
        let u = self.tangent_coords(kv);
        let db = [
            [vec3::dot(kv, self.rxx), vec3::dot(kv, self.rxy)],
            [vec3::dot(kv, self.rxy), vec3::dot(kv, self.ryy)],
        ];
        let gam = self.christoffel();
        let mut out = [[0.0; 2]; 2];
        for j in 0..2 {
            // ∂_j u = g⁻¹(∂_j b − (∂_j g) u)
            let gu = self.dmetric[j].apply(u);
            let du = self.metric_inv.apply([db[j][0] - gu[0], db[j][1] - gu[1]]);
            for i in 0..2 {
                out[j][i] = du[i] + gam.get(i, j, 0) * u[0] + gam.get(i, j, 1) * u[1];
            }
        }
        out
    }
}

/// A point with its axis neighbours at distances `h` and `2h`, for
/// derivatives of jet-level quantities by five-point central differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThirdOrder {
    pub h: f64,
    pub center: LocalGeometry,
    /// `x` neighbours at `-2h, -h, h, 2h`.
    pub xs: [LocalGeometry; 4],
    /// `y` neighbours at `-2h, -h, h, 2h`.
    pub ys: [LocalGeometry; 4],
}

fn five_point(m2: f64, m1: f64, p1: f64, p2: f64, h: f64) -> f64 {
    (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h)
}

impl ThirdOrder {
    pub fn at(s: &ParamSurface, x: f64, y: f64, h: f64) -> Result<Self> {
        let off = [-2.0 * h, -h, h, 2.0 * h];
        let at = |dx: f64, dy: f64| LocalGeometry::at(s, x + dx, y + dy);
        Ok(ThirdOrder {
            h,
            center: LocalGeometry::at(s, x, y)?,
            xs: [
                at(off[0], 0.0)?,
                at(off[1], 0.0)?,
                at(off[2], 0.0)?,
                at(off[3], 0.0)?,
            ],
            ys: [
                at(0.0, off[0])?,
                at(0.0, off[1])?,
                at(0.0, off[2])?,
                at(0.0, off[3])?,
            ],
        })
    }

    fn diff<F: Fn(&LocalGeometry) -> f64>(&self, n: &[LocalGeometry; 4], f: F) -> f64 {
        five_point(f(&n[0]), f(&n[1]), f(&n[2]), f(&n[3]), self.h)
    }

    pub fn d_dx<F: Fn(&LocalGeometry) -> f64>(&self, f: F) -> f64 {
        self.diff(&self.xs, f)
    }

    pub fn d_dy<F: Fn(&LocalGeometry) -> f64>(&self, f: F) -> f64 {
        self.diff(&self.ys, f)
    }

    pub fn shape_dx(&self) -> Sym2x2 {
        self.shape_diff(&self.xs)
    }

    pub fn shape_dy(&self) -> Sym2x2 {
        self.shape_diff(&self.ys)
    }

    fn shape_diff(&self, n: &[LocalGeometry; 4]) -> Sym2x2 {
        Sym2x2::new(
            self.diff(n, |l| l.shape.a11),
            self.diff(n, |l| l.shape.a12),
            self.diff(n, |l| l.shape.a21),
            self.diff(n, |l| l.shape.a22),
        )
    }

    /// Second partials `[θ_xx, θ_xy, θ_yy]`; the mixed one is symmetrized.
    pub fn theta_hessian(&self, k: &FixedDirection) -> [f64; 3] {
        let txx = self.d_dx(|g| g.angle(k).theta_x);
        let tyy = self.d_dy(|g| g.angle(k).theta_y);
        let txy = 0.5 * (self.d_dx(|g| g.angle(k).theta_y) + self.d_dy(|g| g.angle(k).theta_x));
        [txx, txy, tyy]
    }

    /// Coordinate-free Codazzi defect `(∇_x A)∂_y − (∇_y A)∂_x`, in chart
    /// coordinates.
    pub fn codazzi_defect(&self) -> [f64; 2] {
        let a = &self.center.shape;
        let ax = self.shape_dx();
        let ay = self.shape_dy();
        let gam = self.center.christoffel();
        // A^i_j = a.col(j)[i]
        let at = |m: &Sym2x2, i: usize, j: usize| match (i, j) {
            (0, 0) => m.a11,
            (0, 1) => m.a12,
            (1, 0) => m.a21,
            _ => m.a22,
        };
        let mut out = [0.0; 2];
        for (i, o) in out.iter_mut().enumerate() {
            let mut v = at(&ax, i, 1) - at(&ay, i, 0);
            for k in 0..2 {
                v += gam.get(i, 0, k) * at(a, k, 1) - gam.get(i, 1, k) * at(a, k, 0);
            }
            *o = v;
        }
        out
    }

    /// Codazzi defect measured in the metric and divided by `√(EG)`.
    pub fn codazzi_residual(&self) -> f64 {
        let d = self.codazzi_defect();
        let m = &self.center.metric;
        m.form(d, d).max(0.0).sqrt() / (m.a11 * m.a22).sqrt()
    }
}
