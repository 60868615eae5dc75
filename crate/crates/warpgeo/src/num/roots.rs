//! Bracketed scalar root finding.

use crate::error::{Error, Result};

/// Plain bisection on a sign-changing bracket. Always converges; used where
/// robustness beats speed.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, x_tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::DomainError {
            what: format!("bisect: no sign change on [{a}, {b}] (f = {fa}, {fb})"),
        });
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 || (b - a).abs() <= x_tol {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Brent's method: inverse-quadratic / secant steps guarded by bisection.
pub fn brent<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, x_tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::DomainError {
            what: format!("brent: no sign change on [{a}, {b}]"),
        });
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut mflag = true;
    for _ in 0..200 {
        if fb == 0.0 || (b - a).abs() <= x_tol {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let cond = !((lo.min(b) < s && s < lo.max(b))
            && if mflag { (s - b).abs() < 0.5 * (b - c).abs() } else { (s - b).abs() < 0.5 * d.abs() });
        if cond {
            s = 0.5 * (a + b);
            mflag = true;
        } else {
            mflag = false;
        }
        let fs = f(s);
        d = c - b;
        c = b;
        fc = fb;
        if fa.signum() != fs.signum() {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Ok(b)
}

/// Invert a strictly monotone function on `[lo, hi]`: solve `f(x) = target`.
///
/// The caller guarantees monotonicity; direction is inferred from the ends.
pub fn invert_monotone<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, target: f64, x_tol: f64) -> Result<f64> {
    let flo = f(lo);
    let fhi = f(hi);
    let increasing = fhi >= flo;
    let (below, above) = if increasing { (flo, fhi) } else { (fhi, flo) };
    let pad = x_tol.max(1e-15 * (lo.abs() + hi.abs()));
    if target < below - pad.abs() * 0.0 - 1e-12 * (1.0 + below.abs()) && target < below {
        if (target - below).abs() <= 1e-9 * (1.0 + below.abs()) {
            return Ok(if increasing { lo } else { hi });
        }
        return Err(Error::DomainError {
            what: format!("invert_monotone: target {target} below range [{below}, {above}]"),
        });
    }
    if target > above {
        if (target - above).abs() <= 1e-9 * (1.0 + above.abs()) {
            return Ok(if increasing { hi } else { lo });
        }
        return Err(Error::DomainError {
            what: format!("invert_monotone: target {target} above range [{below}, {above}]"),
        });
    }
    brent(|x| f(x) - target, lo, hi, x_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-13).unwrap();
        assert!((r - 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn brent_cubic() {
        let r = brent(|x| x * x * x - x - 2.0, 1.0, 2.0, 1e-14).unwrap();
        assert!((r * r * r - r - 2.0).abs() < 1e-10);
    }

    #[test]
    fn invert_sin_branch() {
        let r = invert_monotone(|x| x.sin(), 0.0, 1.5, 0.5, 1e-14).unwrap();
        assert!((r - 0.5_f64.asin()).abs() < 1e-12);
    }

    #[test]
    fn invert_decreasing() {
        let r = invert_monotone(|x| 1.0 - x, 0.0, 1.0, 0.25, 1e-14).unwrap();
        assert!((r - 0.75).abs() < 1e-12);
    }
}
