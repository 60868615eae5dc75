//! Rotationally symmetric metrics g = ds^2 + f(s)^2 g_rd and their pointwise
//! geometric quantities.
//!
//! A `MetricProfile` is immutable after construction and all operations are
//! pure, so profiles can be evaluated concurrently without synchronization.

use crate::error::{Error, Result};
use crate::geom::orbit_sphere_volume;
use crate::num::quad::integrate;
use crate::num::roots::invert_monotone;
use crate::num::spline::{CubicSpline, EndCondition};

/// Endpoint-invariant tolerance.
pub const TAU_END: f64 = 1e-6;
/// Relative quadrature tolerance for volumes.
pub const TAU_QUAD: f64 = 1e-10;
/// Monotone-inversion tolerance, scaled by D.
pub const TAU_ROOT: f64 = 1e-12;
/// Chart round-trip tolerance.
pub const TAU_CHART: f64 = 1e-8;
/// Pole exclusion zone, scaled by D.
pub const TAU_POLE: f64 = 1e-6;
/// Evaluation offset for the pole limit rule, scaled by D. Wider than the
/// exclusion zone so the 0/0 curvature forms keep ~1e-9 relative accuracy
/// in double precision.
pub const POLE_LIMIT_OFFSET: f64 = 1e-4;

/// Provenance of a generated profile, enough to reconstruct it bit-exactly.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FamilyTag {
    pub name: String,
    pub params: Vec<(String, f64)>,
}

impl FamilyTag {
    pub fn new(name: &str, params: &[(&str, f64)]) -> Self {
        FamilyTag {
            name: name.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }
}

/// One analytic segment of a piecewise profile.
#[derive(Debug, Clone)]
pub enum Seg {
    /// f(s) = rho * sin(dir * (s - s0) / rho)
    ScaledSine { rho: f64, s0: f64, dir: f64 },
    /// f(s) = w
    Constant { w: f64 },
    /// f(s) = r0 * cosh((s - sc) / a)
    Cosh { r0: f64, a: f64, sc: f64 },
    /// Quintic-smoothstep blend of two segments over [a, b].
    Blend { a: f64, b: f64, left: Box<Seg>, right: Box<Seg> },
    /// Concave join with prescribed f'' = -kappa (1-t)(1+ct), t = (s-z)/ell.
    /// Ends with f' = f'' = 0, so it meets a constant segment C2 while
    /// keeping f'' <= 0 throughout (kappa, c >= 0).
    Taper { z: f64, ell: f64, f0: f64, fp0: f64, kappa: f64, c: f64 },
    /// Point reflection s -> 2 pivot - s of another segment.
    Mirrored { pivot: f64, inner: Box<Seg> },
}

fn smoothstep5(t: f64) -> (f64, f64, f64) {
    // q, q', q'' of the C2 quintic 6t^5 - 15t^4 + 10t^3 on [0,1].
    let t = t.clamp(0.0, 1.0);
    let q = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    let q1 = 30.0 * t * t * (1.0 - t) * (1.0 - t);
    let q2 = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
    (q, q1, q2)
}

impl Seg {
    /// (f, f', f'') at s.
    pub fn eval(&self, s: f64) -> (f64, f64, f64) {
        match self {
            Seg::ScaledSine { rho, s0, dir } => {
                let u = dir * (s - s0) / rho;
                (rho * u.sin(), dir * u.cos(), -u.sin() / rho)
            }
            Seg::Constant { w } => (*w, 0.0, 0.0),
            Seg::Cosh { r0, a, sc } => {
                let u = (s - sc) / a;
                (r0 * u.cosh(), r0 * u.sinh() / a, r0 * u.cosh() / (a * a))
            }
            Seg::Blend { a, b, left, right } => {
                let len = b - a;
                let t = (s - a) / len;
                let (q, q1, q2) = smoothstep5(t);
                let q1 = q1 / len;
                let q2 = q2 / (len * len);
                let (fl, fl1, fl2) = left.eval(s);
                let (fr, fr1, fr2) = right.eval(s);
                let d = fr - fl;
                let d1 = fr1 - fl1;
                let d2 = fr2 - fl2;
                (fl + q * d, fl1 + q1 * d + q * d1, fl2 + q2 * d + 2.0 * q1 * d1 + q * d2)
            }
            Seg::Taper { z, ell, f0, fp0, kappa, c } => {
                let t = ((s - z) / ell).clamp(0.0, 1.0);
                // shape = 1 + (c-1) t - c t^2 and its first two antiderivatives.
                let shape = 1.0 + (c - 1.0) * t - c * t * t;
                let m0 = t + 0.5 * (c - 1.0) * t * t - c * t * t * t / 3.0;
                let m1 = 0.5 * t * t + (c - 1.0) * t * t * t / 6.0 - c * t * t * t * t / 12.0;
                (
                    f0 + fp0 * ell * t - kappa * ell * ell * m1,
                    fp0 - kappa * ell * m0,
                    -kappa * shape,
                )
            }
            Seg::Mirrored { pivot, inner } => {
                let (f, f1, f2) = inner.eval(2.0 * pivot - s);
                (f, -f1, f2)
            }
        }
    }
}

/// Spline-backed data for profiles designed from a prescribed radial V(r).
#[derive(Debug, Clone)]
pub struct DesignedData {
    /// V(r) on [0, r_close]; V(0) = 1, V(r_close) = 0 transversally.
    pub v: CubicSpline,
    /// f as a function of s on the southern hemisphere [0, d/2].
    pub f_south: CubicSpline,
    pub r_close: f64,
}

/// The concrete representation behind a profile's evaluators.
#[derive(Debug, Clone)]
pub enum Shape {
    /// f(s) = rho sin(s / rho) on [0, rho pi].
    Round { rho: f64 },
    /// Piecewise analytic segments covering [0, D].
    Piecewise { segs: Vec<(f64, Seg)> },
    /// Surface-of-revolution ellipsoid with meridian semi-axes (a, b).
    Ellipsoid { a: f64, b: f64, phi_of_s: CubicSpline },
    /// Mirror-symmetric profile integrated from a designed V(r).
    Designed(DesignedData),
    /// Interpolated samples.
    Sampled { spline: CubicSpline },
}

/// A rotationally symmetric metric on S^n as (n, D, f, f', f'').
#[derive(Debug, Clone)]
pub struct MetricProfile {
    n: u32,
    d: f64,
    shape: Shape,
    pub provenance: Option<FamilyTag>,
}

/// Result of one named validation check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
}

/// All validation checks with their residuals.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Diagnostics {
    pub checks: Vec<CheckResult>,
}

impl Diagnostics {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Orientation of f' on the source band of a radial chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Orientation {
    Increasing,
    Decreasing,
}

/// A monotone band of the metric in (r, V(r)) coordinates.
#[derive(Debug)]
pub struct RadialChart<'a> {
    profile: &'a MetricProfile,
    pub n: u32,
    pub r_lo: f64,
    pub r_hi: f64,
    s_lo: f64,
    s_hi: f64,
    pub orientation: Orientation,
}

impl MetricProfile {
    pub fn new(n: u32, d: f64, shape: Shape) -> Result<Self> {
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::EmptyDomain { d });
        }
        if n < 3 {
            return Err(Error::DomainError { what: format!("dimension n = {n} < 3") });
        }
        Ok(MetricProfile { n, d, shape, provenance: None })
    }

    pub fn with_provenance(mut self, tag: FamilyTag) -> Self {
        self.provenance = Some(tag);
        self
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Total meridian length; the domain is s in [0, D].
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Warping function f(s).
    pub fn f(&self, s: f64) -> f64 {
        self.eval(s).0
    }

    /// f'(s).
    pub fn fp(&self, s: f64) -> f64 {
        self.eval(s).1
    }

    /// f''(s).
    pub fn fpp(&self, s: f64) -> f64 {
        self.eval(s).2
    }

    fn eval(&self, s: f64) -> (f64, f64, f64) {
        match &self.shape {
            Shape::Round { rho } => {
                let u = s / rho;
                (rho * u.sin(), u.cos(), -u.sin() / rho)
            }
            Shape::Piecewise { segs } => {
                let idx = match segs.binary_search_by(|(start, _)| start.partial_cmp(&s).unwrap()) {
                    Ok(i) => i,
                    Err(0) => 0,
                    Err(i) => i - 1,
                };
                segs[idx].1.eval(s)
            }
            Shape::Ellipsoid { a, b, phi_of_s } => {
                let phi = phi_of_s.eval(s).clamp(0.0, std::f64::consts::PI);
                let (sp, cp) = phi.sin_cos();
                let g2 = a * a * cp * cp + b * b * sp * sp;
                let g = g2.sqrt();
                // dphi/ds = 1/g; g' here is dg/dphi.
                let gp = (b * b - a * a) * sp * cp / g;
                let f = a * sp;
                let f1 = a * cp / g;
                let f2 = (-a * sp - a * cp * gp / g) / g2;
                (f, f1, f2)
            }
            Shape::Designed(dd) => {
                let half = 0.5 * self.d;
                let (s_loc, sign) = if s <= half { (s, 1.0) } else { (self.d - s, -1.0) };
                let f = dd.f_south.eval(s_loc).clamp(0.0, dd.r_close);
                let v = dd.v.eval(f).max(0.0);
                let f1 = sign * v.sqrt();
                let f2 = 0.5 * dd.v.eval_d1(f);
                (f, f1, f2)
            }
            Shape::Sampled { spline } => (spline.eval(s), spline.eval_d1(s), spline.eval_d2(s)),
        }
    }

    /// Runs every profile invariant and reports residuals.
    pub fn validate(&self) -> Result<Diagnostics> {
        if self.d <= 0.0 {
            return Err(Error::EmptyDomain { d: self.d });
        }
        let mut checks = Vec::new();
        let mut push = |name: &str, residual: f64, tol: f64| {
            checks.push(CheckResult { name: name.to_string(), pass: residual <= tol, residual });
        };
        let (f0, fp0, fpp0) = self.eval(0.0);
        let (fd, fpd, fppd) = self.eval(self.d);
        push("f(0)=0", f0.abs(), TAU_END);
        push("f(D)=0", fd.abs(), TAU_END);
        push("f'(0)=1", (fp0 - 1.0).abs(), TAU_END);
        push("f'(D)=-1", (fpd + 1.0).abs(), TAU_END);
        push("f''(0)=0", fpp0.abs(), TAU_END);
        push("f''(D)=0", fppd.abs(), TAU_END);
        // Interior positivity and finiteness on a dense scan.
        let m = 4096;
        let mut min_f = f64::INFINITY;
        for i in 1..m {
            let s = self.d * i as f64 / m as f64;
            let (f, f1, f2) = self.eval(s);
            if !f.is_finite() || !f1.is_finite() || !f2.is_finite() {
                return Err(Error::NonFiniteEvaluation { what: "profile evaluator".into(), s });
            }
            min_f = min_f.min(f);
        }
        push("f>0 on (0,D)", (-min_f).max(0.0), TAU_END);
        Ok(Diagnostics { checks })
    }

    fn pole_zone(&self) -> f64 {
        TAU_POLE * self.d
    }

    fn check_interior(&self, s: f64) -> Result<f64> {
        let tau = self.pole_zone();
        if s < tau || s > self.d - tau {
            return Err(Error::PoleSingularity { s, tau });
        }
        Ok(s)
    }

    /// Clamp s into the interior band where the curvature formulas are
    /// regular; evaluating at the clamped point is the pole limit rule.
    pub fn clamp_to_interior(&self, s: f64) -> f64 {
        let off = POLE_LIMIT_OFFSET * self.d;
        s.clamp(off, self.d - off)
    }

    /// Scalar curvature (n-1)(n-2) [ (1 - f'^2)/f^2 - (2/(n-2)) f''/f ].
    pub fn scal(&self, s: f64) -> Result<f64> {
        self.check_interior(s).map(|s| self.scal_lim(s))
    }

    /// Scalar curvature with the pole limit rule enabled.
    pub fn scal_lim(&self, s: f64) -> f64 {
        let s = self.clamp_to_interior(s);
        let (f, f1, f2) = self.eval(s);
        let n = self.n as f64;
        (n - 1.0) * (n - 2.0) * ((1.0 - f1 * f1) / (f * f)) - 2.0 * (n - 1.0) * f2 / f
    }

    /// Radial Ricci curvature Ric(ds, ds) = -(n-1) f''/f.
    pub fn ricci_radial(&self, s: f64) -> Result<f64> {
        self.check_interior(s).map(|s| self.ricci_radial_lim(s))
    }

    pub fn ricci_radial_lim(&self, s: f64) -> f64 {
        let s = self.clamp_to_interior(s);
        let (f, _, f2) = self.eval(s);
        -(self.n as f64 - 1.0) * f2 / f
    }

    /// Mean curvature of the leaf at s: (n-1) f'/f, normal pointing in +ds.
    pub fn mean_curvature(&self, s: f64) -> Result<f64> {
        self.check_interior(s).map(|s| self.mean_curvature_lim(s))
    }

    pub fn mean_curvature_lim(&self, s: f64) -> f64 {
        let s = self.clamp_to_interior(s);
        let (f, f1, _) = self.eval(s);
        (self.n as f64 - 1.0) * f1 / f
    }

    /// Squared norm of the second fundamental form: (n-1)(f'/f)^2.
    pub fn second_form_norm_sq(&self, s: f64) -> Result<f64> {
        self.check_interior(s).map(|s| {
            let (f, f1, _) = self.eval(s);
            (self.n as f64 - 1.0) * (f1 / f) * (f1 / f)
        })
    }

    /// Total n-volume sigma_{n-1} * Integral of f^{n-1} ds.
    pub fn volume(&self) -> Result<f64> {
        let sigma = orbit_sphere_volume(self.n);
        let k = (self.n - 1) as i32;
        let v = integrate(|s| self.f(s).max(0.0).powi(k), 0.0, self.d, TAU_QUAD)?;
        Ok(sigma * v)
    }

    /// n-volume of the band s in [s_lo, s_hi].
    pub fn band_volume(&self, s_lo: f64, s_hi: f64) -> Result<f64> {
        let sigma = orbit_sphere_volume(self.n);
        let k = (self.n - 1) as i32;
        let v = integrate(|s| self.f(s).max(0.0).powi(k), s_lo, s_hi, TAU_QUAD)?;
        Ok(sigma * v)
    }

    /// Build the (r, V(r)) chart on an s-band where f' has constant sign.
    pub fn to_radial_chart(&self, s_lo: f64, s_hi: f64) -> Result<RadialChart<'_>> {
        if !(0.0 <= s_lo && s_lo < s_hi && s_hi <= self.d) {
            return Err(Error::DomainError {
                what: format!("radial chart band [{s_lo}, {s_hi}] outside [0, {}]", self.d),
            });
        }
        let m = 512;
        let mut sign = 0.0;
        for i in 0..=m {
            let s = s_lo + (s_hi - s_lo) * i as f64 / m as f64;
            let fp = self.fp(s);
            if fp.abs() <= 1e-14 && i != 0 && i != m {
                return Err(Error::NotMonotone { lo: s_lo, hi: s_hi });
            }
            if i == 0 {
                sign = fp.signum();
            } else if fp.signum() != sign && fp.abs() > 1e-14 {
                return Err(Error::NotMonotone { lo: s_lo, hi: s_hi });
            }
        }
        if sign == 0.0 {
            return Err(Error::NotMonotone { lo: s_lo, hi: s_hi });
        }
        let (fa, fb) = (self.f(s_lo), self.f(s_hi));
        let (r_lo, r_hi) = if fa < fb { (fa, fb) } else { (fb, fa) };
        Ok(RadialChart {
            profile: self,
            n: self.n,
            r_lo,
            r_hi,
            s_lo,
            s_hi,
            orientation: if sign > 0.0 { Orientation::Increasing } else { Orientation::Decreasing },
        })
    }

    /// Dense uniform samples of (s, f, f', f'') for scans and serialization.
    pub fn sample_grid(&self, m: usize) -> Vec<(f64, f64, f64, f64)> {
        (0..=m)
            .map(|i| {
                let s = self.d * i as f64 / m as f64;
                let (f, f1, f2) = self.eval(s);
                (s, f, f1, f2)
            })
            .collect()
    }
}

impl<'a> RadialChart<'a> {
    /// Invert f on the source band to tolerance TAU_ROOT * D.
    pub fn s_of_r(&self, r: f64) -> Result<f64> {
        let tol = TAU_ROOT * self.profile.d();
        invert_monotone(|s| self.profile.f(s), self.s_lo, self.s_hi, r, tol)
    }

    /// V(r) = (f'(f^{-1}(r)))^2.
    pub fn v(&self, r: f64) -> Result<f64> {
        let s = self.s_of_r(r)?;
        let fp = self.profile.fp(s);
        Ok(fp * fp)
    }

    /// V'(r) = 2 f''(f^{-1}(r)) (chain rule through r = f(s)).
    pub fn vp(&self, r: f64) -> Result<f64> {
        let s = self.s_of_r(r)?;
        Ok(2.0 * self.profile.fpp(s))
    }

    pub fn band_s(&self) -> (f64, f64) {
        (self.s_lo, self.s_hi)
    }
}

/// Build a sampled profile from explicit grid data; end slopes are pinned to
/// +1 / -1 per the smooth-pole conditions.
pub fn sampled_from_grid(n: u32, grid: Vec<f64>, f: Vec<f64>) -> Result<MetricProfile> {
    if grid.len() != f.len() || grid.len() < 3 {
        return Err(Error::Parse { why: "grid/f length mismatch or too short".into() });
    }
    let d = *grid.last().unwrap();
    let spline = CubicSpline::new(grid, f, EndCondition::Clamped(1.0), EndCondition::Clamped(-1.0))?;
    MetricProfile::new(n, d, Shape::Sampled { spline })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use std::f64::consts::PI;

    #[test]
    fn round_profile_validates_exactly() {
        let p = families::round(3).unwrap();
        let diag = p.validate().unwrap();
        assert!(diag.all_pass());
        for c in &diag.checks {
            assert!(c.residual < 1e-12, "{}: {}", c.name, c.residual);
        }
    }

    #[test]
    fn hemisphere_fails_closure() {
        // f = sin s truncated to D = pi/2 is not a closed profile.
        let m = 512;
        let grid: Vec<f64> = (0..=m).map(|i| PI / 2.0 * i as f64 / m as f64).collect();
        let f: Vec<f64> = grid.iter().map(|s| s.sin()).collect();
        let spline =
            CubicSpline::new(grid, f, EndCondition::Clamped(1.0), EndCondition::Clamped(0.0))
                .unwrap();
        let p = MetricProfile::new(3, PI / 2.0, Shape::Sampled { spline }).unwrap();
        let diag = p.validate().unwrap();
        let c = diag.check("f(D)=0").unwrap();
        assert!(!c.pass);
        assert!((c.residual - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sampled_round_validates_within_interpolation_error() {
        let m = 4096;
        let grid: Vec<f64> = (0..=m).map(|i| PI * i as f64 / m as f64).collect();
        let f: Vec<f64> = grid.iter().map(|s| s.sin()).collect();
        let p = sampled_from_grid(3, grid, f).unwrap();
        let diag = p.validate().unwrap();
        assert!(diag.all_pass());
        for c in &diag.checks {
            assert!(c.residual <= 1e-8, "{}: {}", c.name, c.residual);
        }
    }

    #[test]
    fn round_scalar_curvature() {
        let p = families::round(3).unwrap();
        assert!((p.scal(PI / 3.0).unwrap() - 6.0).abs() < 1e-12);
        let p4 = families::round(4).unwrap();
        for s in [0.3, 1.0, 2.0] {
            assert!((p4.scal(s).unwrap() - 12.0).abs() < 1e-11);
        }
    }

    #[test]
    fn cylinder_band_scalar_curvature() {
        // On an f == 1 band with n = 3 the formulas give Scal = 2.
        let seg = Seg::Constant { w: 1.0 };
        let (f, f1, f2) = seg.eval(0.5);
        let n = 3.0_f64;
        let scal = (n - 1.0) * (n - 2.0) * ((1.0 - f1 * f1) / (f * f)) - 2.0 * (n - 1.0) * f2 / f;
        assert!((scal - 2.0).abs() < 1e-15);
    }

    #[test]
    fn round_ricci_and_mean_and_a2() {
        let p = families::round(3).unwrap();
        assert!((p.ricci_radial(PI / 2.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((p.mean_curvature(PI / 4.0).unwrap() - 2.0).abs() < 1e-12);
        assert!(p.mean_curvature(PI / 2.0).unwrap().abs() < 1e-12);
        assert!((p.second_form_norm_sq(PI / 4.0).unwrap() - 2.0).abs() < 1e-12);
        assert!(p.second_form_norm_sq(PI / 2.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn pole_exclusion_errors_without_limit_rule() {
        let p = families::round(3).unwrap();
        assert!(matches!(p.scal(1e-9), Err(Error::PoleSingularity { .. })));
        assert!(p.scal_lim(0.0).is_finite());
        assert!((p.scal_lim(0.0) - 6.0).abs() < 1e-6);
    }

    #[test]
    fn round_volume() {
        let p = families::round(3).unwrap();
        assert!((p.volume().unwrap() - 2.0 * PI * PI).abs() < 1e-8);
        let p2 = families::scaled_round(3, 2.0).unwrap();
        assert!((p2.volume().unwrap() - 16.0 * PI * PI).abs() < 1e-7);
    }

    #[test]
    fn sampled_round_volume() {
        let m = 4096;
        let grid: Vec<f64> = (0..=m).map(|i| PI * i as f64 / m as f64).collect();
        let f: Vec<f64> = grid.iter().map(|s| s.sin()).collect();
        let p = sampled_from_grid(3, grid, f).unwrap();
        assert!((p.volume().unwrap() - 2.0 * PI * PI).abs() < 1e-8);
    }

    #[test]
    fn radial_chart_matches_round_v() {
        // V(r) = 1 - r^2 for the round metric.
        let p = families::round(3).unwrap();
        let chart = p.to_radial_chart(0.1, PI / 2.0 - 0.1).unwrap();
        assert_eq!(chart.orientation, Orientation::Increasing);
        for i in 0..50 {
            let r = chart.r_lo + (chart.r_hi - chart.r_lo) * i as f64 / 49.0;
            let v = chart.v(r).unwrap();
            assert!((v - (1.0 - r * r)).abs() < 1e-9, "V({r}) = {v}");
        }
    }

    #[test]
    fn radial_chart_rejects_critical_points() {
        let p = families::round(3).unwrap();
        assert!(matches!(
            p.to_radial_chart(0.3, PI / 2.0 + 0.3),
            Err(Error::NotMonotone { .. })
        ));
    }

    #[test]
    fn chart_round_trip_identity() {
        let p = families::round(3).unwrap();
        let chart = p.to_radial_chart(0.05, PI / 2.0 - 0.05).unwrap();
        for i in 0..40 {
            let s = 0.05 + (PI / 2.0 - 0.1) * i as f64 / 39.0;
            let v = chart.v(p.f(s)).unwrap();
            let fp2 = p.fp(s) * p.fp(s);
            assert!((v - fp2).abs() <= TAU_CHART, "round trip at s = {s}");
        }
    }

    #[test]
    fn finite_difference_consistency() {
        let p = families::round(3).unwrap();
        let h = 1e-5;
        let mut worst = 0.0_f64;
        for i in 1..200 {
            let s = PI * i as f64 / 200.0;
            if s < 0.05 || s > PI - 0.05 {
                continue;
            }
            let fd1 = (p.f(s + h) - p.f(s - h)) / (2.0 * h);
            let fd2 = (p.f(s + h) - 2.0 * p.f(s) + p.f(s - h)) / (h * h);
            worst = worst.max((fd1 - p.fp(s)).abs());
            worst = worst.max((fd2 - p.fpp(s)).abs());
        }
        assert!(worst < 1e-5, "finite-difference residual {worst}");
    }

    #[test]
    fn scaling_covariance() {
        // f -> c f(s/c) multiplies volume by c^n and divides Scal by c^2.
        let c = 1.7;
        let p1 = families::round(3).unwrap();
        let pc = families::scaled_round(3, c).unwrap();
        let v1 = p1.volume().unwrap();
        let vc = pc.volume().unwrap();
        assert!((vc - c.powi(3) * v1).abs() < 1e-7 * vc.abs());
        for s in [0.4, 1.1, 2.0] {
            let a = p1.scal(s).unwrap();
            let b = pc.scal(c * s).unwrap();
            assert!((b - a / (c * c)).abs() < 1e-10);
        }
    }

    #[test]
    fn gauss_consistency_leaf_curvature() {
        // Traced Gauss equation: Scal_M - 2 Ric(nu,nu) + H^2 - |A|^2 equals
        // the intrinsic scalar curvature (n-1)(n-2)/f^2 of the leaf, a round
        // sphere of radius f(s).
        for n in [3u32, 4, 5] {
            let p = families::round(n).unwrap();
            let c = (n as f64 - 1.0) * (n as f64 - 2.0);
            for s in [0.5, 1.0, 1.4, 2.2] {
                let f = p.f(s);
                let leaf_scal = c / (f * f);
                let gauss = p.scal(s).unwrap() - 2.0 * p.ricci_radial(s).unwrap()
                    + p.mean_curvature(s).unwrap().powi(2)
                    - p.second_form_norm_sq(s).unwrap();
                assert!((leaf_scal - gauss).abs() < 1e-10, "n={n}, s={s}");
            }
        }
    }
}
