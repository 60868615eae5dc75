//! The canonical sweepout by distance spheres: leaf areas, the width W,
//! the symmetric MinA proxy, and near-extremal structure checks.
//!
//! MinA here ranges only over rotationally invariant leaves of the canonical
//! sweepout. Under the near-extremal hypotheses this captures every minimal
//! hypersurface that matters; detecting non-symmetric minimal hypersurfaces
//! is out of scope.

use crate::error::{Error, Result};
use crate::geom::orbit_sphere_volume;
use crate::num::roots::bisect;
use crate::profile::MetricProfile;

/// |f'| threshold below which a leaf counts as critical.
pub const TAU_CRIT: f64 = 1e-10;
/// Scan grid resolution for critical-leaf detection.
pub const SCAN_GRID: usize = 4096;

/// Stability classification of a minimal leaf, by the sign of f''.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum LeafKind {
    Stable,
    Unstable,
    Degenerate,
    Plateau,
}

/// One critical leaf of the sweepout.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Leaf {
    pub s: f64,
    pub area: f64,
    pub kind: LeafKind,
    /// Extent of the critical band for plateau leaves.
    pub plateau_extent: Option<(f64, f64)>,
}

/// Critical leaves with the width and symmetric MinA.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LeafReport {
    pub leaves: Vec<Leaf>,
    pub width: f64,
    pub width_location: f64,
    /// Minimum area over minimal leaves; absent if none was found.
    pub min_a_symmetric: Option<f64>,
}

/// Volume of the sweepout leaf at s: sigma_{n-1} f(s)^{n-1}.
pub fn leaf_area(p: &MetricProfile, s: f64) -> f64 {
    let f = p.f(s).max(0.0);
    orbit_sphere_volume(p.n()) * f.powi(p.n() as i32 - 1)
}

/// Global maximum of the leaf area over [0, D]: grid scan plus parabolic
/// refinement of the maximal f.
pub fn width(p: &MetricProfile) -> f64 {
    let (s, f) = max_leaf(p);
    let _ = s;
    orbit_sphere_volume(p.n()) * f.powi(p.n() as i32 - 1)
}

/// Location and radius of the maximal leaf.
pub fn max_leaf(p: &MetricProfile) -> (f64, f64) {
    let m = SCAN_GRID;
    let d = p.d();
    let mut best_i = 0;
    let mut best_f = f64::NEG_INFINITY;
    for i in 0..=m {
        let s = d * i as f64 / m as f64;
        let f = p.f(s);
        if f > best_f {
            best_f = f;
            best_i = i;
        }
    }
    let s0 = d * best_i as f64 / m as f64;
    // Refine: f' changes sign across the max; fall back to the grid point
    // for plateau tops where f' vanishes identically.
    let h = d / m as f64;
    let lo = (s0 - h).max(0.0);
    let hi = (s0 + h).min(d);
    let s_star = if p.fp(lo) > TAU_CRIT && p.fp(hi) < -TAU_CRIT {
        bisect(|s| p.fp(s), lo, hi, 1e-14 * d).unwrap_or(s0)
    } else {
        s0
    };
    let f_star = p.f(s_star).max(best_f);
    (s_star, f_star)
}

/// Locate and classify every critical leaf of the sweepout.
///
/// Zeros of f' are bracketed on the scan grid and refined to `tol`;
/// classification is by the sign of f'' against tau_class = 1e-8 / D^2.
/// Maximal runs where |f'| <= TAU_CRIT throughout are reported as plateaus.
pub fn find_minimal_leaves(p: &MetricProfile, tol: f64) -> Result<LeafReport> {
    let d = p.d();
    let n = p.n();
    let sigma = orbit_sphere_volume(n);
    let m = SCAN_GRID;
    let h = d / m as f64;
    let tau_class = 1e-8 / (d * d);
    let area_of = |s: f64| sigma * p.f(s).max(0.0).powi(n as i32 - 1);

    // Interior scan values of f'.
    let fp: Vec<f64> = (0..=m).map(|i| p.fp(d * i as f64 / m as f64)).collect();
    let mut leaves: Vec<Leaf> = Vec::new();
    let mut i = 1usize;
    while i < m {
        let s_i = d * i as f64 / m as f64;
        if fp[i].abs() <= TAU_CRIT {
            // Plateau candidate: extend the run of near-zero f'.
            let start = i;
            let mut end = i;
            while end + 1 < m && fp[end + 1].abs() <= TAU_CRIT {
                end += 1;
            }
            let s_a = d * start as f64 / m as f64;
            let s_b = d * end as f64 / m as f64;
            if end > start {
                let s_mid = 0.5 * (s_a + s_b);
                leaves.push(Leaf {
                    s: s_mid,
                    area: area_of(s_mid),
                    kind: LeafKind::Plateau,
                    plateau_extent: Some((s_a, s_b)),
                });
            } else {
                let f2 = p.fpp(s_i);
                let kind = classify(f2, tau_class);
                leaves.push(Leaf { s: s_i, area: area_of(s_i), kind, plateau_extent: None });
            }
            i = end + 1;
            continue;
        }
        if fp[i].signum() != fp[i + 1].signum() && fp[i + 1].abs() > TAU_CRIT {
            // Bracketed sign change: refine.
            let s_lo = s_i;
            let s_hi = d * (i + 1) as f64 / m as f64;
            let s_star = bisect(|s| p.fp(s), s_lo, s_hi, tol.min(h))?;
            if let Some(last) = leaves.last() {
                if (s_star - last.s).abs() < h {
                    return Err(Error::ResolutionLimit { s: s_star });
                }
            }
            let f2 = p.fpp(s_star);
            let kind = classify(f2, tau_class);
            leaves.push(Leaf { s: s_star, area: area_of(s_star), kind, plateau_extent: None });
        }
        i += 1;
    }

    let (w_loc, w_f) = max_leaf(p);
    let width = sigma * w_f.powi(n as i32 - 1);
    let min_a_symmetric =
        leaves.iter().map(|l| l.area).min_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(LeafReport { leaves, width, width_location: w_loc, min_a_symmetric })
}

fn classify(f2: f64, tau_class: f64) -> LeafKind {
    if f2 < -tau_class {
        LeafKind::Unstable
    } else if f2 > tau_class {
        LeafKind::Stable
    } else {
        LeafKind::Degenerate
    }
}

/// Output of the near-extremal structure check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct StructureCheck {
    pub unique_minimal: bool,
    /// Stable leaves can have radius at most (1/(1-eps)) sqrt((n-2)/n).
    pub radius_threshold: f64,
    pub violating_leaves: Vec<Leaf>,
}

/// Check the single-unstable-leaf structure forced on near-extremal metrics:
/// any stable / degenerate / plateau leaf, or any leaf of radius at or below
/// the threshold, is a violation.
pub fn check_near_extremal_structure(p: &MetricProfile, eps: f64) -> Result<StructureCheck> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::BadEps { eps });
    }
    let n = p.n() as f64;
    let radius_threshold = ((n - 2.0) / n).sqrt() / (1.0 - eps);
    let report = find_minimal_leaves(p, TAU_CRIT)?;
    let sigma = orbit_sphere_volume(p.n());
    let violating: Vec<Leaf> = report
        .leaves
        .iter()
        .filter(|l| {
            let radius = (l.area / sigma).powf(1.0 / (n - 1.0));
            l.kind != LeafKind::Unstable || radius <= radius_threshold
        })
        .cloned()
        .collect();
    let unique_minimal = report.leaves.len() == 1 && report.leaves[0].kind == LeafKind::Unstable;
    Ok(StructureCheck { unique_minimal, radius_threshold, violating_leaves: violating })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use std::f64::consts::PI;

    #[test]
    fn round_leaf_areas() {
        let p = families::round(3).unwrap();
        assert!((leaf_area(&p, PI / 2.0) - 4.0 * PI).abs() < 1e-12);
        assert!(leaf_area(&p, 0.0).abs() < 1e-12);
        let p4 = families::round(4).unwrap();
        assert!((leaf_area(&p4, PI / 2.0) - 2.0 * PI * PI).abs() < 1e-10);
    }

    #[test]
    fn widths_of_models() {
        assert!((width(&families::round(3).unwrap()) - 4.0 * PI).abs() < 1e-9);
        assert!((width(&families::scaled_round(3, 2.0).unwrap()) - 16.0 * PI).abs() < 1e-9);
        let dumbbell = families::neck_counterexample(3, 0.4, 1.0).unwrap();
        assert!((width(&dumbbell) - 4.0 * PI).abs() < 1e-9);
        let smaller = families::neck_counterexample(3, 0.4, 0.8).unwrap();
        assert!((width(&smaller) - 4.0 * PI * 0.64).abs() < 1e-9);
    }

    #[test]
    fn round_has_single_unstable_equator() {
        let p = families::round(3).unwrap();
        let rep = find_minimal_leaves(&p, 1e-12).unwrap();
        assert_eq!(rep.leaves.len(), 1);
        let l = &rep.leaves[0];
        assert!((l.s - PI / 2.0).abs() < 1e-10);
        assert_eq!(l.kind, LeafKind::Unstable);
        assert!((l.area - 4.0 * PI).abs() < 1e-10);
        assert!((rep.min_a_symmetric.unwrap() - 4.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn dumbbell_has_three_leaves() {
        let p = families::neck_counterexample(3, 0.3, 0.95).unwrap();
        let rep = find_minimal_leaves(&p, 1e-12).unwrap();
        assert_eq!(rep.leaves.len(), 3, "leaves: {:?}", rep.leaves);
        assert_eq!(rep.leaves[0].kind, LeafKind::Unstable);
        assert_eq!(rep.leaves[1].kind, LeafKind::Stable);
        assert_eq!(rep.leaves[2].kind, LeafKind::Unstable);
        // Neck area is exactly sigma_2 * 0.3^2.
        assert!((rep.leaves[1].area - 4.0 * PI * 0.09).abs() < 1e-6);
        assert!((rep.min_a_symmetric.unwrap() - 4.0 * PI * 0.09).abs() < 1e-6);
        // Width >= MinA always.
        assert!(rep.width >= rep.min_a_symmetric.unwrap());
    }

    #[test]
    fn capped_cylinder_reports_plateau() {
        let p = families::capped_cylinder(3, 2.0, 1.0).unwrap();
        let rep = find_minimal_leaves(&p, 1e-12).unwrap();
        assert!(
            rep.leaves.iter().any(|l| l.kind == LeafKind::Plateau),
            "expected a plateau leaf: {:?}",
            rep.leaves
        );
        let plateau = rep.leaves.iter().find(|l| l.kind == LeafKind::Plateau).unwrap();
        let (a, b) = plateau.plateau_extent.unwrap();
        assert!(b - a > 1.5, "plateau extent ({a}, {b})");
    }

    #[test]
    fn near_extremal_check_on_round() {
        let p = families::round(3).unwrap();
        let chk = check_near_extremal_structure(&p, 0.0).unwrap();
        assert!(chk.unique_minimal);
        assert!((chk.radius_threshold - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!(chk.violating_leaves.is_empty());
        let chk2 = check_near_extremal_structure(&p, 0.5).unwrap();
        assert!((chk2.radius_threshold - 2.0 * (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((chk2.radius_threshold - 1.1547).abs() < 1e-4);
    }

    #[test]
    fn neck_violates_near_extremal_structure() {
        let p = families::neck_counterexample(3, 0.5, 1.0).unwrap();
        let chk = check_near_extremal_structure(&p, 0.0).unwrap();
        assert!(!chk.unique_minimal);
        // The stable neck of radius 0.5 < sqrt(1/3) is flagged.
        assert!(chk
            .violating_leaves
            .iter()
            .any(|l| l.kind == LeafKind::Stable && (l.area - PI).abs() < 1e-6));
    }

    #[test]
    fn bad_eps_rejected() {
        let p = families::round(3).unwrap();
        assert!(matches!(
            check_near_extremal_structure(&p, 1.0),
            Err(crate::error::Error::BadEps { .. })
        ));
    }

    #[test]
    fn leaf_count_parity_on_families() {
        // Odd number of critical leaves for profiles with isolated
        // nondegenerate critical points.
        for p in [
            families::round(3).unwrap(),
            families::scaled_round(3, 1.4).unwrap(),
            families::ellipsoid(3, 1.0, 1.6).unwrap(),
            families::neck_counterexample(3, 0.35, 0.9).unwrap(),
            families::near_extremal_family(3, 3).unwrap(),
        ] {
            let rep = find_minimal_leaves(&p, 1e-12).unwrap();
            assert_eq!(rep.leaves.len() % 2, 1, "leaf count {}", rep.leaves.len());
        }
    }

    #[test]
    fn dense_scan_agreement() {
        // A 10x finer brute-force scan finds the same leaf count/locations.
        let p = families::neck_counterexample(3, 0.3, 0.95).unwrap();
        let rep = find_minimal_leaves(&p, 1e-12).unwrap();
        let m = SCAN_GRID * 10;
        let d = p.d();
        let mut brute: Vec<f64> = Vec::new();
        let mut prev = p.fp(d / m as f64);
        for i in 2..m {
            let s = d * i as f64 / m as f64;
            let cur = p.fp(s);
            if prev.signum() != cur.signum() {
                brute.push(s);
            }
            prev = cur;
        }
        assert_eq!(brute.len(), rep.leaves.len());
        for (b, l) in brute.iter().zip(&rep.leaves) {
            assert!((b - l.s).abs() < 2.0 * d / m as f64 + 1e-9);
        }
    }
}
