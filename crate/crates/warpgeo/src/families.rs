//! Generators of test metrics: exact models, inverse-designed metrics from a
//! prescribed scalar-curvature profile, near-extremal stability families, and
//! MinA-violating dumbbell counterexamples.
//!
//! Every generator is deterministic: the same spec yields bit-identical
//! profile samples.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::num::quad::integrate;
use crate::num::roots::bisect;
use crate::num::spline::{CubicSpline, EndCondition};
use crate::profile::{FamilyTag, MetricProfile, Seg, Shape};

/// Constructor specification for a generated family member.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FamilySpec {
    pub name: String,
    pub n: u32,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
}

impl FamilySpec {
    pub fn new(name: &str, n: u32) -> Self {
        FamilySpec { name: name.into(), n, params: BTreeMap::new(), seed: 0 }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.into(), value);
        self
    }

    pub fn param(&self, key: &str) -> Result<f64> {
        self.params
            .get(key)
            .copied()
            .ok_or_else(|| Error::ConfigError { why: format!("family `{}` missing parameter `{key}`", self.name) })
    }

    /// Construct the profile this spec describes.
    pub fn build(&self) -> Result<MetricProfile> {
        match self.name.as_str() {
            "round" => round(self.n),
            "scaled_round" => scaled_round(self.n, self.param("rho")?),
            "ellipsoid" => ellipsoid(self.n, self.param("a")?, self.param("b")?),
            "capped_cylinder" => capped_cylinder(self.n, self.param("length")?, self.param("radius")?),
            "near_extremal" => near_extremal_family(self.n, self.param("k")? as u32),
            "ricci_capped" => ricci_capped_member(self.n, self.param("k")? as u32),
            "neck" => neck_counterexample(self.n, self.param("neck_radius")?, self.param("bump_radius")?),
            other => Err(Error::ConfigError { why: format!("unknown family `{other}`") }),
        }
    }
}

/// Rebuild a profile from its provenance tag (used by the file format).
pub fn from_tag(tag: &FamilyTag) -> Result<MetricProfile> {
    let mut spec = FamilySpec::new(
        &tag.name,
        tag.get("n").ok_or_else(|| Error::Parse { why: "family tag missing n".into() })? as u32,
    );
    for (k, v) in &tag.params {
        if k != "n" {
            spec.params.insert(k.clone(), *v);
        }
    }
    spec.build()
}

/// The unit round n-sphere: f(s) = sin(s), D = pi.
pub fn round(n: u32) -> Result<MetricProfile> {
    scaled_round(n, 1.0)
}

/// Round sphere of radius rho: f(s) = rho sin(s/rho), D = rho pi.
pub fn scaled_round(n: u32, rho: f64) -> Result<MetricProfile> {
    if rho <= 0.0 {
        return Err(Error::DomainError { what: format!("scaled_round: rho = {rho} <= 0") });
    }
    let p = MetricProfile::new(n, rho * std::f64::consts::PI, Shape::Round { rho })?;
    Ok(p.with_provenance(FamilyTag::new(
        if rho == 1.0 { "round" } else { "scaled_round" },
        &[("n", n as f64), ("rho", rho)],
    )))
}

const DESIGN_GRID: usize = 4096;

/// Integrate the radial ODE for a prescribed scalar curvature:
/// V(r) = 1 - r^(2-n) * Integral_0^r Scal(t) t^(n-1) / (n-1) dt,
/// close the hemisphere at the first transversal zero of V, and assemble the
/// sphere by mirroring. `r_max` is the search limit for the closure radius.
pub fn designed_from_scal<F: Fn(f64) -> f64>(n: u32, scal: F, r_max: f64) -> Result<MetricProfile> {
    if r_max <= 0.0 {
        return Err(Error::DomainError { what: format!("designed_from_scal: r_max = {r_max}") });
    }
    let nf = n as f64;
    let m = DESIGN_GRID;
    let h = r_max / m as f64;
    // Cumulative integral I(r) = ∫_0^r Scal t^{n-1}/(n-1) dt by composite
    // Simpson over pairs of sub-intervals.
    let integrand = |r: f64| -> f64 { scal(r) * r.powi(n as i32 - 1) / (nf - 1.0) };
    let mut cum = vec![0.0_f64; m + 1];
    for i in 0..m {
        let a = h * i as f64;
        let b = a + h;
        let fa = integrand(a);
        let fm = integrand(0.5 * (a + b));
        let fb = integrand(b);
        if scal(a) < -1e-12 {
            return Err(Error::DomainError { what: format!("prescribed Scal negative at r = {a}") });
        }
        cum[i + 1] = cum[i] + (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    }
    let v_at = |r: f64, cum_r: f64| -> f64 {
        if r == 0.0 {
            1.0
        } else {
            1.0 - r.powf(2.0 - nf) * cum_r
        }
    };
    // Scan for the first zero crossing of V.
    let mut bracket = None;
    for i in 0..m {
        let r0 = h * i as f64;
        let r1 = h * (i + 1) as f64;
        let v0 = v_at(r0, cum[i]);
        let v1 = v_at(r1, cum[i + 1]);
        if v0 < -1e-10 {
            return Err(Error::NegativeV { r: r0 });
        }
        if v0 > 0.0 && v1 <= 0.0 {
            bracket = Some((r0, r1, cum[i]));
            break;
        }
    }
    let (r0, r1, cum0) = match bracket {
        Some(b) => b,
        None => return Err(Error::NoClosure { r_max }),
    };
    // Refine the closure radius; V on [r0, r1] via incremental quadrature.
    let v_local = |r: f64| -> f64 {
        let inc = integrate(&integrand, r0, r, 1e-12).unwrap_or(0.0);
        v_at(r, cum0 + inc)
    };
    let r_close = bisect(v_local, r0, r1, 1e-14 * r_max)?;

    // Resample V on a uniform grid of [0, r_close].
    let mv = DESIGN_GRID;
    let hv = r_close / mv as f64;
    let mut rs = Vec::with_capacity(mv + 1);
    let mut vs = Vec::with_capacity(mv + 1);
    let mut acc = 0.0;
    for i in 0..=mv {
        let r = hv * i as f64;
        if i > 0 {
            let a = hv * (i - 1) as f64;
            let fa = integrand(a);
            let fm = integrand(a + 0.5 * hv);
            let fb = integrand(r);
            acc += hv / 6.0 * (fa + 4.0 * fm + fb);
        }
        rs.push(r);
        vs.push(v_at(r, acc).max(0.0));
    }
    *vs.last_mut().unwrap() = 0.0;
    // Exact endpoint slopes from the radial ODE: rV' = (n-2)(1-V) - Scal r^2/(n-1).
    let vp_close = (nf - 2.0) / r_close - scal(r_close) * r_close / (nf - 1.0);
    if vp_close >= -1e-8 {
        return Err(Error::HypothesisViolated {
            check: format!("transversal closure: V'(r_close) = {vp_close} not negative"),
        });
    }
    let v_spline = CubicSpline::new(rs, vs, EndCondition::Clamped(0.0), EndCondition::Clamped(vp_close))?;

    // Arc length from the equator with the substitution r = R - u^2:
    // tau(u) = ∫_0^u 2u' / sqrt(V(R - u'^2)) du', smooth down to u = 0.
    let g = |u: f64| -> f64 {
        if u == 0.0 {
            2.0 / (-vp_close).sqrt()
        } else {
            let r = (r_close - u * u).max(0.0);
            let v = v_spline.eval(r).max(1e-300);
            2.0 * u / v.sqrt()
        }
    };
    let mu = DESIGN_GRID;
    let umax = r_close.sqrt();
    let hu = umax / mu as f64;
    let mut tau = vec![0.0_f64; mu + 1];
    for i in 0..mu {
        let a = hu * i as f64;
        let b = a + hu;
        tau[i + 1] = tau[i] + hu / 6.0 * (g(a) + 4.0 * g(0.5 * (a + b)) + g(b));
    }
    let s_equator = tau[mu];
    // Southern hemisphere f(s): knots s = s_eq - tau(u), values r = R - u^2,
    // reversed so s increases from the pole.
    let mut s_knots: Vec<f64> = tau.iter().map(|t| s_equator - t).collect();
    let mut f_vals: Vec<f64> = (0..=mu).map(|i| r_close - (hu * i as f64).powi(2)).collect();
    s_knots.reverse();
    f_vals.reverse();
    s_knots[0] = 0.0;
    f_vals[0] = 0.0;
    let f_south =
        CubicSpline::new(s_knots, f_vals, EndCondition::Clamped(1.0), EndCondition::Clamped(0.0))?;

    let d = 2.0 * s_equator;
    MetricProfile::new(n, d, Shape::Designed(crate::profile::DesignedData { v: v_spline, f_south, r_close }))
}

/// Smooth bump supported on r in [0.2, 0.5], max value 1 at r = 0.35.
pub fn design_bump(r: f64) -> f64 {
    let x = (r - 0.35) / 0.15;
    if x.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - x * x)).exp()
    }
}

/// Near-extremal stability family member: prescribed
/// Scal(r) = n(n-1)(1-2^-k)^2 (1 + 2^-k chi(r)) with chi the fixed bump.
///
/// The member is re-checked post-hoc against the hypotheses at eps = 2^-k.
pub fn near_extremal_family(n: u32, k: u32) -> Result<MetricProfile> {
    if k < 1 {
        return Err(Error::DomainError { what: "near_extremal_family: k >= 1 required".into() });
    }
    let eps = 0.5_f64.powi(k as i32);
    let nf = n as f64;
    let base = nf * (nf - 1.0) * (1.0 - eps) * (1.0 - eps);
    let scal = move |r: f64| base * (1.0 + eps * design_bump(r));
    let p = designed_from_scal(n, scal, 1.2 / (1.0 - eps))?;
    let p = p.with_provenance(FamilyTag::new("near_extremal", &[("n", n as f64), ("k", k as f64)]));
    // Hypothesis re-checks: Scal >= n(n-1)(1-eps)^2 and the maximal leaf
    // radius within the a-priori window [1-eps, 1/(1-eps)].
    let mut min_scal = f64::INFINITY;
    for i in 1..2048 {
        let s = p.d() * i as f64 / 2048.0;
        min_scal = min_scal.min(p.scal_lim(s));
    }
    if min_scal < base - 1e-6 * base {
        return Err(Error::HypothesisViolated {
            check: format!("min Scal {min_scal} < n(n-1)(1-eps)^2 = {base}"),
        });
    }
    let r_close = match p.shape() {
        Shape::Designed(dd) => dd.r_close,
        _ => unreachable!(),
    };
    if !(1.0 - eps - 1e-9 <= r_close && r_close <= 1.0 / (1.0 - eps) + 1e-9) {
        return Err(Error::HypothesisViolated {
            check: format!("max-leaf radius {r_close} outside [1-eps, 1/(1-eps)] at eps = {eps}"),
        });
    }
    Ok(p)
}

/// Blend-zone length: 5% of the estimated total meridian, capped so the zone
/// stays well inside its host segments.
fn blend_len(d_est: f64, cap: f64) -> f64 {
    (0.05 * d_est).min(cap)
}

/// Cap join angle for the capped cylinder: the sine cap runs to colatitude
/// pi/2 - CAP_JOIN_ALPHA and a concave taper finishes the climb to the
/// barrel radius.
const CAP_JOIN_ALPHA: f64 = 0.12;

/// Solve the taper shape coefficient: m1 / m0^2 = s0 / (1 + s0) with
/// m0 = 1/2 + c/6, m1 = 1/3 + c/12. The left side is strictly decreasing
/// from 4/3, so the root is unique.
fn taper_coefficient(s0: f64) -> Result<f64> {
    let kappa = s0 / (1.0 + s0);
    bisect(
        |c| {
            let m0 = 0.5 + c / 6.0;
            let m1 = 1.0 / 3.0 + c / 12.0;
            m1 / (m0 * m0) - kappa
        },
        0.0,
        200.0,
        1e-13,
    )
}

/// Capped cylinder: sine caps joined to a flat barrel of the given length
/// through a concave C2 taper, so that f'' <= 0 everywhere and the radial
/// Ricci curvature stays nonnegative.
pub fn capped_cylinder(n: u32, length: f64, radius: f64) -> Result<MetricProfile> {
    if radius <= 0.0 || length < 0.0 {
        return Err(Error::DomainError {
            what: format!("capped_cylinder: length = {length}, radius = {radius}"),
        });
    }
    let w = radius;
    let theta0 = std::f64::consts::FRAC_PI_2 - CAP_JOIN_ALPHA;
    let s0 = theta0.sin();
    let c0 = theta0.cos();
    let c = taper_coefficient(s0)?;
    let m0 = 0.5 + c / 6.0;
    let ell = c0 * w / (s0 * m0);
    let z = w * theta0;
    let s_cap = z + ell;
    let d = 2.0 * s_cap + length;
    let pivot = 0.5 * d;
    let south_sine = Seg::ScaledSine { rho: w, s0: 0.0, dir: 1.0 };
    let south_taper =
        Seg::Taper { z, ell, f0: w * s0, fp0: c0, kappa: s0 / w, c };
    let segs: Vec<(f64, Seg)> = vec![
        (0.0, south_sine.clone()),
        (z, south_taper.clone()),
        (s_cap, Seg::Constant { w }),
        (s_cap + length, Seg::Mirrored { pivot, inner: Box::new(south_taper) }),
        (d - z, Seg::Mirrored { pivot, inner: Box::new(south_sine) }),
    ];
    let p = MetricProfile::new(n, d, Shape::Piecewise { segs })?;
    check_gluing(&p)?;
    Ok(p.with_provenance(FamilyTag::new(
        "capped_cylinder",
        &[("n", n as f64), ("length", length), ("radius", radius)],
    )))
}

/// Ric >= 0 family member for the Gromov-Hausdorff stability experiment:
/// capped cylinders shrinking toward the round sphere as k grows.
pub fn ricci_capped_member(n: u32, k: u32) -> Result<MetricProfile> {
    let length = 2.0_f64.powi(3 - k as i32);
    let p = capped_cylinder(n, length, 1.0)?;
    Ok(p.with_provenance(FamilyTag::new("ricci_capped", &[("n", n as f64), ("k", k as f64)])))
}

/// Smooth dumbbell: two sine caps of maximal radius `bump_radius` joined by a
/// cosh neck of radius exactly `neck_radius`, C2-blended. The neck leaf is a
/// stable minimal hypersurface.
pub fn neck_counterexample(n: u32, neck_radius: f64, bump_radius: f64) -> Result<MetricProfile> {
    if !(0.0 < neck_radius && neck_radius < bump_radius) {
        return Err(Error::DomainError {
            what: format!("neck_counterexample: need 0 < neck {neck_radius} < bump {bump_radius}"),
        });
    }
    let b = bump_radius;
    let r0 = neck_radius;
    // Junction value on the descending branch of the cap.
    let f_j = r0 + 0.6 * (b - r0);
    let theta_j = std::f64::consts::PI - (f_j / b).asin();
    let s_j = b * theta_j;
    let slope_j = (1.0 - (f_j / b) * (f_j / b)).sqrt(); // |f'| at the junction
    let a = (f_j * f_j - r0 * r0).sqrt() / slope_j;
    let x_j = a * (f_j / r0).acosh();
    let s_c = s_j + x_j; // symmetry center: the neck leaf
    let d = 2.0 * s_c;
    let ell = blend_len(d, 0.5 * b * (theta_j - std::f64::consts::FRAC_PI_2));
    let z0 = s_j - ell;
    let south = Seg::ScaledSine { rho: b, s0: 0.0, dir: 1.0 };
    let north = Seg::ScaledSine { rho: b, s0: d, dir: -1.0 };
    let neck = Seg::Cosh { r0, a, sc: s_c };
    let segs: Vec<(f64, Seg)> = vec![
        (0.0, south.clone()),
        (z0, Seg::Blend { a: z0, b: s_j, left: Box::new(south), right: Box::new(neck.clone()) }),
        (s_j, neck.clone()),
        (
            d - s_j,
            Seg::Blend { a: d - s_j, b: d - z0, left: Box::new(neck), right: Box::new(north.clone()) },
        ),
        (d - z0, north),
    ];
    let p = MetricProfile::new(n, d, Shape::Piecewise { segs })?;
    check_gluing(&p)?;
    Ok(p.with_provenance(FamilyTag::new(
        "neck",
        &[("n", n as f64), ("neck_radius", neck_radius), ("bump_radius", bump_radius)],
    )))
}

/// Surface-of-revolution ellipsoid with equatorial semi-axis `a` and polar
/// semi-axis `b`; the profile is the distance to the axis as a function of
/// meridian arc length.
pub fn ellipsoid(n: u32, a: f64, b: f64) -> Result<MetricProfile> {
    if a <= 0.0 || b <= 0.0 {
        return Err(Error::DomainError { what: format!("ellipsoid: axes ({a}, {b})") });
    }
    let g = |phi: f64| -> f64 {
        let (sp, cp) = phi.sin_cos();
        (a * a * cp * cp + b * b * sp * sp).sqrt()
    };
    let m = DESIGN_GRID;
    let hp = std::f64::consts::PI / m as f64;
    let mut s = vec![0.0_f64; m + 1];
    for i in 0..m {
        let p0 = hp * i as f64;
        let p1 = p0 + hp;
        s[i + 1] = s[i] + hp / 6.0 * (g(p0) + 4.0 * g(0.5 * (p0 + p1)) + g(p1));
    }
    let d = s[m];
    let phis: Vec<f64> = (0..=m).map(|i| hp * i as f64).collect();
    let phi_of_s = CubicSpline::new(s, phis, EndCondition::Clamped(1.0 / a), EndCondition::Clamped(1.0 / a))?;
    let p = MetricProfile::new(n, d, Shape::Ellipsoid { a, b, phi_of_s })?;
    Ok(p.with_provenance(FamilyTag::new("ellipsoid", &[("n", n as f64), ("a", a), ("b", b)])))
}

/// Reject piecewise constructions whose blend zones created sign problems.
fn check_gluing(p: &MetricProfile) -> Result<()> {
    let m = 8192;
    for i in 1..m {
        let s = p.d() * i as f64 / m as f64;
        let f = p.f(s);
        if !(f > 0.0) {
            return Err(Error::GluingFailure { why: format!("f({s}) = {f} not positive") });
        }
        if !f.is_finite() || !p.fp(s).is_finite() || !p.fpp(s).is_finite() {
            return Err(Error::GluingFailure { why: format!("non-finite evaluation at s = {s}") });
        }
    }
    Ok(())
}

/// Deterministic corpus of profiles with nonnegative scalar curvature, used
/// by the Lipschitz property suite. Uses designed metrics with randomized
/// nonnegative curvature profiles plus the exact model families.
pub fn nonneg_scal_corpus(count: usize, seed: u64) -> Vec<MetricProfile> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<MetricProfile> = Vec::new();
    // Exact models first.
    out.push(round(3).unwrap());
    out.push(round(4).unwrap());
    out.push(scaled_round(3, 0.7).unwrap());
    out.push(scaled_round(3, 1.8).unwrap());
    out.push(capped_cylinder(3, 2.0, 1.0).unwrap());
    out.push(capped_cylinder(4, 1.0, 0.8).unwrap());
    out.push(ellipsoid(3, 1.0, 1.5).unwrap());
    out.push(ellipsoid(3, 1.0, 0.8).unwrap());
    while out.len() < count {
        let n = if rng.gen_bool(0.5) { 3 } else { 4 };
        let nf = n as f64;
        let base = nf * (nf - 1.0) * rng.gen_range(0.5_f64..1.3).powi(2);
        let c1 = rng.gen_range(0.0..0.6);
        let center = rng.gen_range(0.15..0.7);
        let width = rng.gen_range(0.08..0.3);
        let scal = move |r: f64| {
            let x = (r - center) / width;
            let bump = if x.abs() >= 1.0 { 0.0 } else { (1.0 - 1.0 / (1.0 - x * x)).exp() };
            base * (1.0 + c1 * bump)
        };
        if let Ok(p) = designed_from_scal(n, scal, 3.0) {
            out.push(p);
        }
    }
    out.truncate(count);
    out
}
