//! Cubic spline interpolation on a strictly increasing grid.
//!
//! Supports natural ends or clamped (pinned first derivative) ends; the
//! profile format pins f'(0) = 1 and f'(D) = -1 so the curvature formulas
//! stay meaningful at the poles.

use crate::error::{Error, Result};

/// End condition for one side of the spline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndCondition {
    /// Second derivative zero.
    Natural,
    /// First derivative pinned to the given value.
    Clamped(f64),
}

/// A C2 piecewise-cubic interpolant.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>, left: EndCondition, right: EndCondition) -> Result<Self> {
        let n = x.len();
        if n < 3 || y.len() != n {
            return Err(Error::DomainError {
                what: format!("spline needs >= 3 matching knots, got {} / {}", n, y.len()),
            });
        }
        for w in x.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::DomainError {
                    what: format!("spline grid not strictly increasing near x = {}", w[0]),
                });
            }
        }
        for (&xi, &yi) in x.iter().zip(&y) {
            if !xi.is_finite() || !yi.is_finite() {
                return Err(Error::NonFiniteEvaluation { what: "spline knot".into(), s: xi });
            }
        }
        // Tridiagonal system for the knot second derivatives.
        let mut a = vec![0.0; n]; // sub
        let mut b = vec![0.0; n]; // diag
        let mut c = vec![0.0; n]; // super
        let mut d = vec![0.0; n]; // rhs
        let h = |i: usize| x[i + 1] - x[i];
        match left {
            EndCondition::Natural => {
                b[0] = 1.0;
            }
            EndCondition::Clamped(dy) => {
                b[0] = 2.0 * h(0);
                c[0] = h(0);
                d[0] = 6.0 * ((y[1] - y[0]) / h(0) - dy);
            }
        }
        for i in 1..n - 1 {
            a[i] = h(i - 1);
            b[i] = 2.0 * (h(i - 1) + h(i));
            c[i] = h(i);
            d[i] = 6.0 * ((y[i + 1] - y[i]) / h(i) - (y[i] - y[i - 1]) / h(i - 1));
        }
        match right {
            EndCondition::Natural => {
                b[n - 1] = 1.0;
            }
            EndCondition::Clamped(dy) => {
                a[n - 1] = h(n - 2);
                b[n - 1] = 2.0 * h(n - 2);
                d[n - 1] = 6.0 * (dy - (y[n - 1] - y[n - 2]) / h(n - 2));
            }
        }
        // Thomas algorithm.
        let mut m = vec![0.0; n];
        for i in 1..n {
            let w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            d[i] -= w * d[i - 1];
        }
        m[n - 1] = d[n - 1] / b[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = (d[i] - c[i] * m[i + 1]) / b[i];
        }
        Ok(CubicSpline { x, y, m })
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().unwrap())
    }

    fn segment(&self, t: f64) -> usize {
        let n = self.x.len();
        match self.x.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) if i >= n => n - 2,
            Err(i) => i - 1,
        }
    }

    /// Value; evaluation clamps to the domain ends.
    pub fn eval(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    /// First derivative.
    pub fn eval_d1(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        (self.y[i + 1] - self.y[i]) / h
            + ((3.0 * b * b - 1.0) * self.m[i + 1] - (3.0 * a * a - 1.0) * self.m[i]) * h / 6.0
    }

    /// Second derivative (piecewise linear).
    pub fn eval_d2(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.m[i] + b * self.m[i + 1]
    }
}

/// Cubic interpolant on a uniform grid with O(1) segment lookup; used in
/// inner loops (geodesic shooting) where binary search would dominate.
#[derive(Debug, Clone)]
pub struct UniformCubic {
    x0: f64,
    h: f64,
    /// Per-segment coefficients of a + b u + c u^2 + d u^3, u = (t - x_i)/h.
    coef: Vec<[f64; 4]>,
}

impl UniformCubic {
    /// Sample `g` on `m + 1` uniform knots over `[a, b]` and interpolate with
    /// the given end slopes.
    pub fn from_fn<G: Fn(f64) -> f64>(
        g: G,
        a: f64,
        b: f64,
        m: usize,
        left: EndCondition,
        right: EndCondition,
    ) -> Result<Self> {
        let x: Vec<f64> = (0..=m).map(|i| a + (b - a) * i as f64 / m as f64).collect();
        let y: Vec<f64> = x.iter().map(|&t| g(t)).collect();
        let sp = CubicSpline::new(x, y, left, right)?;
        Ok(Self::from_spline(&sp))
    }

    /// Convert a (uniform-knot) spline into segment-coefficient form.
    pub fn from_spline(sp: &CubicSpline) -> Self {
        let x = sp.knots();
        let n = x.len();
        let h = (x[n - 1] - x[0]) / (n - 1) as f64;
        let mut coef = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let y0 = sp.values()[i];
            let y1 = sp.values()[i + 1];
            let m0 = sp.m[i] * h * h;
            let m1 = sp.m[i + 1] * h * h;
            // Cubic in u over [0,1]: standard spline segment rewritten.
            let a0 = y0;
            let b0 = y1 - y0 - (2.0 * m0 + m1) / 6.0;
            let c0 = m0 / 2.0;
            let d0 = (m1 - m0) / 6.0;
            coef.push([a0, b0, c0, d0]);
        }
        UniformCubic { x0: x[0], h, coef }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        let u = (t - self.x0) / self.h;
        let i = (u as usize).min(self.coef.len() - 1);
        let u = u - i as f64;
        let c = &self.coef[i];
        c[0] + u * (c[1] + u * (c[2] + u * c[3]))
    }

    #[inline]
    pub fn eval_d1(&self, t: f64) -> f64 {
        let u = (t - self.x0) / self.h;
        let i = (u as usize).min(self.coef.len() - 1);
        let u = u - i as f64;
        let c = &self.coef[i];
        (c[1] + u * (2.0 * c[2] + u * 3.0 * c[3])) / self.h
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x0, self.x0 + self.h * self.coef.len() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sin_spline(n: usize) -> CubicSpline {
        let x: Vec<f64> = (0..n).map(|i| std::f64::consts::PI * i as f64 / (n - 1) as f64).collect();
        let y: Vec<f64> = x.iter().map(|&s| s.sin()).collect();
        CubicSpline::new(x, y, EndCondition::Clamped(1.0), EndCondition::Clamped(-1.0)).unwrap()
    }

    #[test]
    fn interpolates_sin_tightly() {
        let sp = sin_spline(2049);
        let mut worst = 0.0_f64;
        let mut worst1 = 0.0_f64;
        let mut worst2 = 0.0_f64;
        for i in 0..5000 {
            let t = std::f64::consts::PI * (i as f64 + 0.5) / 5000.0;
            worst = worst.max((sp.eval(t) - t.sin()).abs());
            worst1 = worst1.max((sp.eval_d1(t) - t.cos()).abs());
            worst2 = worst2.max((sp.eval_d2(t) + t.sin()).abs());
        }
        assert!(worst < 1e-11, "value error {worst}");
        assert!(worst1 < 1e-8, "d1 error {worst1}");
        assert!(worst2 < 1e-5, "d2 error {worst2}");
    }

    #[test]
    fn clamped_end_derivatives_hold() {
        let sp = sin_spline(513);
        assert!((sp.eval_d1(0.0) - 1.0).abs() < 1e-12);
        assert!((sp.eval_d1(std::f64::consts::PI) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_cubic_matches_spline() {
        let sp = sin_spline(4097);
        let uc = UniformCubic::from_spline(&sp);
        for i in 0..1000 {
            let t = std::f64::consts::PI * (i as f64 + 0.37) / 1000.0;
            assert!((uc.eval(t) - sp.eval(t)).abs() < 1e-13);
            assert!((uc.eval_d1(t) - sp.eval_d1(t)).abs() < 1e-10);
        }
    }
}
