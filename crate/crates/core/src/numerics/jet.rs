//! Second-order forward-mode jets in two chart variables.
//!
//! A [`Jet2`] carries a value together with its two first partials and three
//! second partials. Arithmetic and the elementary functions propagate all of
//! them exactly (up to rounding), so any expression built from jets yields
//! its own gradient and Hessian without finite differencing.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2 {
    pub val: f64,
    pub dx: f64,
    pub dy: f64,
    pub dxx: f64,
    pub dxy: f64,
    pub dyy: f64,
}

impl Jet2 {
    pub const fn new(val: f64, dx: f64, dy: f64, dxx: f64, dxy: f64, dyy: f64) -> Self {
        Jet2 {
            val,
            dx,
            dy,
            dxx,
            dxy,
            dyy,
        }
    }

    pub const fn constant(val: f64) -> Self {
        Jet2::new(val, 0.0, 0.0, 0.0, 0.0, 0.0)
    }

    /// The chart variable `x` seeded at `x0`.
    pub const fn var_x(x0: f64) -> Self {
        Jet2::new(x0, 1.0, 0.0, 0.0, 0.0, 0.0)
    }

    /// The chart variable `y` seeded at `y0`.
    pub const fn var_y(y0: f64) -> Self {
        Jet2::new(y0, 0.0, 1.0, 0.0, 0.0, 0.0)
    }

    pub fn is_constant(&self) -> bool {
        self.dx == 0.0 && self.dy == 0.0 && self.dxx == 0.0 && self.dxy == 0.0 && self.dyy == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.val.is_finite()
            && self.dx.is_finite()
            && self.dy.is_finite()
            && self.dxx.is_finite()
            && self.dxy.is_finite()
            && self.dyy.is_finite()
    }

    pub fn gradient(&self) -> [f64; 2] {
        [self.dx, self.dy]
    }

    pub fn hessian(&self) -> [[f64; 2]; 2] {
        [[self.dxx, self.dxy], [self.dxy, self.dyy]]
    }

    /// Composes a scalar function `g` with this jet, given `g(u)`, `g'(u)`
    /// and `g''(u)` at `u = self.val`.
    ///
    /// Terms whose inner derivative is exactly zero are dropped, so a
    /// function that is singular in its derivative (e.g. `sqrt` at 0) can
    /// still be applied to a constant jet.
    pub fn chain(self, g0: f64, g1: f64, g2: f64) -> Jet2 {
        let lin = |d: f64| if d == 0.0 { 0.0 } else { g1 * d };
        let quad = |a: f64, b: f64| {
            if a == 0.0 || b == 0.0 {
                0.0
            } else {
                g2 * a * b
            }
        };
        Jet2 {
            val: g0,
            dx: lin(self.dx),
            dy: lin(self.dy),
            dxx: quad(self.dx, self.dx) + lin(self.dxx),
            dxy: quad(self.dx, self.dy) + lin(self.dxy),
            dyy: quad(self.dy, self.dy) + lin(self.dyy),
        }
    }

    pub fn scale(self, s: f64) -> Jet2 {
        Jet2 {
            val: self.val * s,
            dx: self.dx * s,
            dy: self.dy * s,
            dxx: self.dxx * s,
            dxy: self.dxy * s,
            dyy: self.dyy * s,
        }
    }

    pub fn recip(self) -> Jet2 {
        let v = self.val;
        self.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }

    pub fn sqr(self) -> Jet2 {
        self * self
    }

    pub fn sqrt(self) -> Jet2 {
        let s = self.val.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * s * s))
    }

    pub fn exp(self) -> Jet2 {
        let e = self.val.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Jet2 {
        let v = self.val;
        self.chain(v.ln(), 1.0 / v, -1.0 / (v * v))
    }

    pub fn sin(self) -> Jet2 {
        let (s, c) = self.val.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Jet2 {
        let (s, c) = self.val.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn tan(self) -> Jet2 {
        let t = self.val.tan();
        let sec2 = 1.0 + t * t;
        self.chain(t, sec2, 2.0 * t * sec2)
    }

    pub fn atan(self) -> Jet2 {
        let v = self.val;
        let d = 1.0 / (1.0 + v * v);
        self.chain(v.atan(), d, -2.0 * v * d * d)
    }

    pub fn asin(self) -> Jet2 {
        let v = self.val;
        let w = 1.0 - v * v;
        let d = 1.0 / w.sqrt();
        self.chain(v.asin(), d, v * d / w)
    }

    pub fn acos(self) -> Jet2 {
        let v = self.val;
        let w = 1.0 - v * v;
        let d = 1.0 / w.sqrt();
        self.chain(v.acos(), -d, -v * d / w)
    }

    pub fn sinh(self) -> Jet2 {
        let v = self.val;
        self.chain(v.sinh(), v.cosh(), v.sinh())
    }

    pub fn cosh(self) -> Jet2 {
        let v = self.val;
        self.chain(v.cosh(), v.sinh(), v.cosh())
    }

    pub fn tanh(self) -> Jet2 {
        let t = self.val.tanh();
        let s = 1.0 - t * t;
        self.chain(t, s, -2.0 * t * s)
    }

    pub fn abs(self) -> Jet2 {
        let v = self.val;
        self.chain(v.abs(), v.signum(), 0.0)
    }

    /// `self^p` for a constant real exponent.
    pub fn powf(self, p: f64) -> Jet2 {
        let v = self.val;
        if p == 0.0 {
            return Jet2::constant(1.0);
        }
        if p == 1.0 {
            return self;
        }
        if p == 2.0 {
            return self * self;
        }
        self.chain(
            v.powf(p),
            p * v.powf(p - 1.0),
            p * (p - 1.0) * v.powf(p - 2.0),
        )
    }

    /// `self^e` for a jet exponent; the base must be positive.
    pub fn pow(self, e: Jet2) -> Jet2 {
        if e.is_constant() {
            return self.powf(e.val);
        }
        (e * self.ln()).exp()
    }
}

impl fmt::Display for Jet2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [d: {}, {}; dd: {}, {}, {}]",
            self.val, self.dx, self.dy, self.dxx, self.dxy, self.dyy
        )
    }
}

impl From<f64> for Jet2 {
    fn from(v: f64) -> Self {
        Jet2::constant(v)
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 {
            val: self.val + o.val,
            dx: self.dx + o.dx,
            dy: self.dy + o.dy,
            dxx: self.dxx + o.dxx,
            dxy: self.dxy + o.dxy,
            dyy: self.dyy + o.dyy,
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2 {
            val: self.val - o.val,
            dx: self.dx - o.dx,
            dy: self.dy - o.dy,
            dxx: self.dxx - o.dxx,
            dxy: self.dxy - o.dxy,
            dyy: self.dyy - o.dyy,
        }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2 {
            val: self.val * o.val,
            dx: self.dx * o.val + self.val * o.dx,
            dy: self.dy * o.val + self.val * o.dy,
            dxx: self.dxx * o.val + 2.0 * self.dx * o.dx + self.val * o.dxx,
            dxy: self.dxy * o.val + self.dx * o.dy + self.dy * o.dx + self.val * o.dxy,
            dyy: self.dyy * o.val + 2.0 * self.dy * o.dy + self.val * o.dyy,
        }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        let b = o.val;
        let q = self.val / b;
        let qx = (self.dx - q * o.dx) / b;
        let qy = (self.dy - q * o.dy) / b;
        Jet2 {
            val: q,
            dx: qx,
            dy: qy,
            dxx: (self.dxx - 2.0 * qx * o.dx - q * o.dxx) / b,
            dxy: (self.dxy - qx * o.dy - qy * o.dx - q * o.dxy) / b,
            dyy: (self.dyy - 2.0 * qy * o.dy - q * o.dyy) / b,
        }
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(mut self, o: f64) -> Jet2 {
        self.val += o;
        self
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(mut self, o: f64) -> Jet2 {
        self.val -= o;
        self
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, o: f64) -> Jet2 {
        self.scale(o)
    }
}

impl Div<f64> for Jet2 {
    type Output = Jet2;
    fn div(self, o: f64) -> Jet2 {
        Jet2 {
            val: self.val / o,
            dx: self.dx / o,
            dy: self.dy / o,
            dxx: self.dxx / o,
            dxy: self.dxy / o,
            dyy: self.dyy / o,
        }
    }
}

impl Add<Jet2> for f64 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        o + self
    }
}

impl Sub<Jet2> for f64 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        -o + self
    }
}

impl Mul<Jet2> for f64 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        o.scale(self)
    }
}

impl Div<Jet2> for f64 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        Jet2::constant(self) / o
    }
}

impl AddAssign for Jet2 {
    fn add_assign(&mut self, o: Jet2) {
        *self = *self + o;
    }
}

impl SubAssign for Jet2 {
    fn sub_assign(&mut self, o: Jet2) {
        *self = *self - o;
    }
}

impl MulAssign for Jet2 {
    fn mul_assign(&mut self, o: Jet2) {
        *self = *self * o;
    }
}
