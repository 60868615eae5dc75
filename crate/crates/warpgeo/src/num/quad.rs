//! Adaptive composite quadrature with Richardson-style error control.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 50;

/// Integrate `f` over `[a, b]` to relative tolerance `rel_tol`
/// (with an absolute floor of `rel_tol * 1e-300` guarding zero integrals).
///
/// Adaptive Simpson: each interval is accepted when the local Richardson
/// estimate `|S2 - S1| / 15` clears its share of the budget.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    for (x, v) in [(a, fa), (m, fm), (b, fb)] {
        if !v.is_finite() {
            return Err(Error::NonFiniteEvaluation { what: "quadrature integrand".into(), s: x });
        }
    }
    let whole = simpson(a, b, fa, fm, fb);
    // Scale the absolute budget off a coarse magnitude estimate; refined below
    // as the recursion tightens the value.
    let scale = whole.abs().max((b - a).abs() * (fa.abs() + fb.abs() + fm.abs()) / 3.0).max(1e-300);
    let tol = rel_tol * scale;
    let (value, ok) = adapt(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH);
    if !ok {
        return Err(Error::QuadratureFailure { a, b, tol: rel_tol, achieved: f64::NAN });
    }
    Ok(value)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> (f64, bool) {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    if !flm.is_finite() || !frm.is_finite() {
        return (f64::NAN, false);
    }
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let err = left + right - whole;
    if err.abs() <= 15.0 * tol || (b - a).abs() < 1e-15 * (a.abs() + b.abs() + 1.0) {
        // Richardson extrapolation of the two Simpson levels.
        return (left + right + err / 15.0, true);
    }
    if depth == 0 {
        return (left + right, false);
    }
    let (lv, lok) = adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
    let (rv, rok) = adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    (lv + rv, lok && rok)
}

/// Integrate `f` over `[a, b]` where `f(r) ~ C / sqrt(b - r)` as `r -> b`.
///
/// Substitutes `r = b - u^2`, turning the endpoint singularity into a smooth
/// integrand: `∫ f(r) dr = ∫ 2 u f(b - u^2) du` over `u in [0, sqrt(b-a)]`.
pub fn integrate_with_singular_upper_endpoint<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let umax = (b - a).sqrt();
    // Below u_floor the value b - u^2 rounds back to b; the transformed
    // integrand has a finite limit there, so evaluate at the floor instead.
    let u_floor = (f64::EPSILON * b.abs().max(1.0)).sqrt() * 4.0;
    integrate(
        move |u| {
            let ue = u.max(u_floor).min(umax);
            2.0 * ue * f(b - ue * ue)
        },
        0.0,
        umax,
        rel_tol,
    )
}
