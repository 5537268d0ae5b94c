//! Interpolating cubic spline with not-a-knot end conditions.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    // Second derivatives at the knots.
    moments: Vec<f64>,
}

impl CubicSpline {
    /// Builds the spline through `(xs[i], ys[i])`. Requires at least four
    /// strictly increasing knots.
    pub fn not_a_knot(xs: &[f64], ys: &[f64]) -> Result<Self> {
        let n = xs.len();
        if n != ys.len() {
            return Err(Error::Invalid(
                "spline abscissae and ordinates differ in length".into(),
            ));
        }
        if n < 4 {
            return Err(Error::Invalid(
                "not-a-knot spline needs at least 4 knots".into(),
            ));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Invalid(
                "spline knots must be strictly increasing".into(),
            ));
        }
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let slope: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

        // Interior equations for M_1..M_{n-2}; the not-a-knot conditions
        // give M_0 and M_{n-1} in terms of their neighbours and are
        // substituted into the first and last rows.
        let m = n - 2;
        let mut sub = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut sup = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        for r in 0..m {
            let i = r + 1;
            sub[r] = h[i - 1];
            diag[r] = 2.0 * (h[i - 1] + h[i]);
            sup[r] = h[i];
            rhs[r] = 6.0 * (slope[i] - slope[i - 1]);
        }
        // M_0 = ((h0+h1)·M_1 − h0·M_2) / h1
        let (h0, h1) = (h[0], h[1]);
        diag[0] += h0 * (h0 + h1) / h1;
        sup[0] -= h0 * h0 / h1;
        // M_{n-1} = ((ha+hb)·M_{n-2} − hb·M_{n-3}) / ha
        let (ha, hb) = (h[n - 3], h[n - 2]);
        diag[m - 1] += hb * (ha + hb) / ha;
        sub[m - 1] -= hb * hb / ha;

        // Thomas algorithm.
        let mut c = vec![0.0; m];
        let mut d = vec![0.0; m];
        c[0] = sup[0] / diag[0];
        d[0] = rhs[0] / diag[0];
        for r in 1..m {
            let piv = diag[r] - sub[r] * c[r - 1];
            c[r] = if r < m - 1 { sup[r] / piv } else { 0.0 };
            d[r] = (rhs[r] - sub[r] * d[r - 1]) / piv;
        }
        let mut moments = vec![0.0; n];
        moments[m] = d[m - 1];
        for r in (0..m - 1).rev() {
            moments[r + 1] = d[r] - c[r] * moments[r + 2];
        }
        moments[0] = ((h0 + h1) * moments[1] - h0 * moments[2]) / h1;
        moments[n - 1] = ((ha + hb) * moments[n - 2] - hb * moments[n - 3]) / ha;
        if moments.iter().any(|m| !m.is_finite()) {
            return Err(Error::Invalid("spline system is singular".into()));
        }
        Ok(CubicSpline {
            knots: xs.to_vec(),
            values: ys.to_vec(),
            moments,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], *self.knots.last().expect("non-empty"))
    }

    /// Value, first and second derivative at `x`. Outside the knot range
    /// the end polynomials are extended.
    pub fn eval3(&self, x: f64) -> (f64, f64, f64) {
        let n = self.knots.len();
        let k = match self.knots.binary_search_by(|p| p.total_cmp(&x)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.clamp(1, n - 1) - 1,
        };
        let (xa, xb) = (self.knots[k], self.knots[k + 1]);
        let h = xb - xa;
        let (ma, mb) = (self.moments[k], self.moments[k + 1]);
        let (ya, yb) = (self.values[k], self.values[k + 1]);
        let a = xb - x;
        let b = x - xa;
        let val = ma * a * a * a / (6.0 * h)
            + mb * b * b * b / (6.0 * h)
            + (ya / h - ma * h / 6.0) * a
            + (yb / h - mb * h / 6.0) * b;
        let d1 =
            -ma * a * a / (2.0 * h) + mb * b * b / (2.0 * h) + (yb - ya) / h - (mb - ma) * h / 6.0;
        let d2 = (ma * a + mb * b) / h;
        (val, d1, d2)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval3(x).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubics_exactly() {
        let f = |x: f64| 2.0 * x * x * x - x * x + 0.5 * x - 3.0;
        let xs: Vec<f64> = vec![0.0, 0.3, 0.5, 1.1, 1.6, 2.0];
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let s = CubicSpline::not_a_knot(&xs, &ys).unwrap();
        for i in 0..=40 {
            let x = 0.05 * i as f64;
            let (v, d1, d2) = s.eval3(x);
            assert!((v - f(x)).abs() < 1e-12, "x = {x}");
            assert!((d1 - (6.0 * x * x - 2.0 * x + 0.5)).abs() < 1e-11);
            assert!((d2 - (12.0 * x - 2.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn sine_interpolation_error_budget() {
        let n = 101;
        let xs: Vec<f64> = (0..n).map(|i| i as f64 * 0.01).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        let s = CubicSpline::not_a_knot(&xs, &ys).unwrap();
        for i in 0..1000 {
            let x = i as f64 * 0.001;
            let (v, d1, _) = s.eval3(x);
            assert!((v - x.sin()).abs() < 1e-9);
            assert!((d1 - x.cos()).abs() < 1e-6);
        }
    }

    #[test]
    fn rejects_short_or_unsorted_input() {
        assert!(CubicSpline::not_a_knot(&[0.0, 1.0, 2.0], &[0.0, 1.0, 2.0]).is_err());
        assert!(CubicSpline::not_a_knot(&[0.0, 1.0, 1.0, 2.0], &[0.0; 4]).is_err());
    }
}
