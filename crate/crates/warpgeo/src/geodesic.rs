//! Distances on warped-product spheres.
//!
//! Geodesics of ds^2 + f(s)^2 g_rd project to the totally geodesic meridian
//! 2-surface over the fiber great circle through both endpoints, so the
//! distance between (s1, theta1) and (s2, theta2) depends only on s1, s2 and
//! the spherical angle dphi between theta1 and theta2. The solver works on
//! the reduced surface ds^2 + f(s)^2 dphi^2.
//!
//! A distance query takes the minimum over candidate classes:
//!   - cut-and-paste curves: meridian segments joined by a parallel arc at a
//!     scanned latitude (contains through-pole and same-meridian paths);
//!   - Clairaut-shooting geodesics, parameterized by the conserved
//!     c = f^2 dphi/dt, integrated as a fan from the source with crossing
//!     capture and Hermite reconstruction in the swept angle.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::num::ode::{integrate_to_crossing, Crossing, OdeOptions};
use crate::num::spline::{EndCondition, UniformCubic};
use crate::profile::MetricProfile;
use rand::{Rng, SeedableRng};

/// Distance tolerance, scaled by D.
pub const TAU_DIST: f64 = 1e-6;
/// Angular tolerance below which two points count as same-meridian.
pub const TAU_ANGLE: f64 = 1e-9;
/// Local error tolerance of the geodesic integrator.
pub const TAU_ODE: f64 = 1e-10;

/// A point on the reduced meridian surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    /// Meridian arc length from the south pole, in [0, D].
    pub s: f64,
    /// Angular separation coordinate, in [0, pi].
    pub phi: f64,
}

/// How a distance value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum DistanceMethod {
    ClosedForm,
    Shooting,
    CutAndPaste,
    GraphFallback,
}

/// A distance value with provenance.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DistanceOutcome {
    pub value: f64,
    pub method: DistanceMethod,
    pub warning: Option<String>,
}

/// Solver options.
#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Number of launch angles in the shooting fan (per s-direction sign).
    pub fan_size: usize,
    /// Latitude scan points for cut-and-paste candidates.
    pub scan_size: usize,
    pub ode: OdeOptions,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            fan_size: 48,
            scan_size: 256,
            ode: OdeOptions { rel_tol: TAU_ODE, abs_tol: 1e-12, max_steps: 100_000, h_max: 0.2 },
        }
    }
}

/// Distance solver bound to one profile. Construction precomputes a fast
/// uniform interpolant of (f, f') for the inner ODE loop.
pub struct Geodesics<'a> {
    p: &'a MetricProfile,
    f: UniformCubic,
    fp: UniformCubic,
    pub opts: SolverOptions,
}

/// Closed-form distance on the unit round sphere, s measured from a pole:
/// arccos(cos s1 cos s2 + sin s1 sin s2 cos dphi).
pub fn round_distance(s1: f64, s2: f64, dphi: f64) -> f64 {
    let c = s1.cos() * s2.cos() + s1.sin() * s2.sin() * dphi.cos();
    c.clamp(-1.0, 1.0).acos()
}

impl<'a> Geodesics<'a> {
    pub fn new(p: &'a MetricProfile) -> Result<Self> {
        Self::with_options(p, SolverOptions::default())
    }

    pub fn with_options(p: &'a MetricProfile, opts: SolverOptions) -> Result<Self> {
        let m = 8192;
        let f = UniformCubic::from_fn(
            |s| p.f(s),
            0.0,
            p.d(),
            m,
            EndCondition::Clamped(1.0),
            EndCondition::Clamped(-1.0),
        )?;
        let fp = UniformCubic::from_fn(
            |s| p.fp(s),
            0.0,
            p.d(),
            m,
            EndCondition::Natural,
            EndCondition::Natural,
        )?;
        Ok(Geodesics { p, f, fp, opts })
    }

    pub fn profile(&self) -> &MetricProfile {
        self.p
    }

    fn d(&self) -> f64 {
        self.p.d()
    }

    /// Distance accurate to ~TAU_DIST * D; minimum over all candidates.
    pub fn distance(&self, s1: f64, s2: f64, dphi: f64) -> Result<f64> {
        Ok(self.distance_detailed(s1, s2, dphi)?.value)
    }

    /// Distance with provenance and warnings.
    pub fn distance_detailed(&self, s1: f64, s2: f64, dphi: f64) -> Result<DistanceOutcome> {
        let v = self.pair_distances(s1, s2, &[dphi])?;
        Ok(v.into_iter().next().unwrap())
    }

    /// Batch distances from (s1, 0) to (s2, dphi) for every dphi in
    /// `dphis`; the shooting fan is integrated once and shared.
    pub fn pair_distances(&self, s1: f64, s2: f64, dphis: &[f64]) -> Result<Vec<DistanceOutcome>> {
        let d = self.d();
        for &x in [s1, s2].iter() {
            if !(0.0..=d).contains(&x) {
                return Err(Error::DomainError { what: format!("s = {x} outside [0, {d}]") });
            }
        }
        for &a in dphis {
            if !(-TAU_ANGLE..=std::f64::consts::PI + 1e-9).contains(&a) {
                return Err(Error::DomainError { what: format!("dphi = {a} outside [0, pi]") });
            }
        }
        // Cut-and-paste baseline: meridian to latitude s*, parallel arc,
        // meridian to target. s* = 0 / D recovers the through-pole paths;
        // s* = s1 = s2 recovers the parallel arc; dphi ~ 0 recovers the
        // same-meridian segment.
        let mut best: Vec<f64> = Vec::with_capacity(dphis.len());
        let mut method: Vec<DistanceMethod> = vec![DistanceMethod::CutAndPaste; dphis.len()];
        let m = self.opts.scan_size;
        let lo = s1.min(s2);
        let hi = s1.max(s2);
        for &dphi in dphis {
            let mut b = f64::INFINITY;
            for i in 0..=m {
                let ss = d * i as f64 / m as f64;
                let f_arc = self.f.eval(ss).max(0.0);
                let len = (s1 - ss).abs() + (s2 - ss).abs() + f_arc * dphi;
                b = b.min(len);
            }
            // Interior parallel arcs between the endpoints also qualify.
            for i in 0..=32 {
                let ss = lo + (hi - lo) * i as f64 / 32.0;
                let f_arc = self.f.eval(ss).max(0.0);
                b = b.min((s1 - ss).abs() + (s2 - ss).abs() + f_arc * dphi);
            }
            best.push(b);
        }
        // Degenerate configurations need no shooting.
        let poles = s1 < TAU_DIST * d || s1 > d - TAU_DIST * d || s2 < TAU_DIST * d || s2 > d - TAU_DIST * d;
        let all_meridian = dphis.iter().all(|&a| a <= TAU_ANGLE);
        if poles || all_meridian {
            return Ok(best
                .into_iter()
                .zip(method)
                .map(|(value, method)| DistanceOutcome { value, method, warning: None })
                .collect());
        }

        // Shooting fan from (s1, 0).
        let cap = best.iter().cloned().fold(0.0, f64::max) + 0.05 * d;
        let (branches, bridges) = self.shoot_fan(s1, s2, cap);
        let mut any_branch = false;
        let mut consider = |w0: &BranchPoint, w1: &BranchPoint, best: &mut Vec<f64>, method: &mut Vec<DistanceMethod>| {
            let (a0, a1) = (w0.angle, w1.angle);
            if !a0.is_finite() || !a1.is_finite() || (a1 - a0).abs() <= 1e-15 {
                return;
            }
            for (ti, &t) in dphis.iter().enumerate() {
                for target in [t, 2.0 * std::f64::consts::PI - t] {
                    if (a0 - target) * (a1 - target) <= 0.0 {
                        // Hermite in angle with exact slopes dL/dphi = c.
                        let u = (target - a0) / (a1 - a0);
                        let h = a1 - a0;
                        let len = hermite(u, w0.length, w0.c * h, w1.length, w1.c * h);
                        if len < best[ti] {
                            best[ti] = len;
                            method[ti] = DistanceMethod::Shooting;
                        }
                    }
                }
            }
        };
        for br in &branches {
            if br.len() >= 2 {
                any_branch = true;
            }
            for w in br.windows(2) {
                consider(&w[0], &w[1], &mut best, &mut method);
            }
        }
        for (a, b) in &bridges {
            consider(a, b, &mut best, &mut method);
        }
        let warning = if !any_branch && dphis.iter().any(|&a| a > 1e-3) {
            Some("shooting fan produced no usable branches; cut-and-paste bound returned".to_string())
        } else {
            None
        };
        Ok(best
            .into_iter()
            .zip(method)
            .map(|(value, method)| DistanceOutcome { value, method, warning: warning.clone() })
            .collect())
    }

    /// Integrate the launch fan and organize s2-crossings into branches by
    /// (sign of initial s-velocity, crossing index). Adjacent launches whose
    /// crossing counts differ straddle a fold of the endpoint map; these are
    /// refined by bisection in the launch angle, and the flanking branch ends
    /// are returned as bridge windows (the length is C1 in the swept angle
    /// through a fold, so Hermite interpolation across it stays accurate).
    fn shoot_fan(
        &self,
        s1: f64,
        s2: f64,
        cap: f64,
    ) -> (Vec<Vec<BranchPoint>>, Vec<(BranchPoint, BranchPoint)>) {
        let f1 = self.f.eval(s1).max(1e-12);
        let fan = self.opts.fan_size;
        let max_crossings = 8usize;
        // Launch angles beta in (0, pi/2]: c = f(s1) sin(beta). The tiny-beta
        // end degenerates to meridians already covered by cut-and-paste. The
        // tangential launch beta = pi/2 is shared by both sign families; it
        // is their common limit, and dropping it would leave an angle gap.
        let betas: Vec<f64> = (1..=fan)
            .map(|j| std::f64::consts::FRAC_PI_2 * j as f64 / fan as f64)
            .collect();
        let mut branches: Vec<Vec<BranchPoint>> = vec![Vec::new(); 2 * max_crossings];
        let mut bridges: Vec<(BranchPoint, BranchPoint)> = Vec::new();
        for (si, sgn) in [1.0_f64, -1.0].into_iter().enumerate() {
            let shoot = |beta: f64| -> Vec<BranchPoint> {
                let c = f1 * beta.sin();
                let v0 = sgn * beta.cos();
                self.integrate_shot(s1, v0, c, s2, cap)
                    .into_iter()
                    .take(max_crossings)
                    .map(|cr| BranchPoint { angle: cr.state[2].abs(), length: cr.t, c })
                    .collect()
            };
            let mut samples: Vec<(f64, Vec<BranchPoint>)> =
                betas.iter().map(|&b| (b, shoot(b))).collect();
            // Fold refinement: bisect wherever the crossing count changes.
            let mut extra: Vec<(f64, Vec<BranchPoint>)> = Vec::new();
            for w in samples.windows(2) {
                let (b_lo, n_lo) = (w[0].0, w[0].1.len());
                let (b_hi, n_hi) = (w[1].0, w[1].1.len());
                if n_lo == n_hi {
                    continue;
                }
                let (mut lo, mut hi) = (b_lo, b_hi);
                for _ in 0..12 {
                    let mid = 0.5 * (lo + hi);
                    let pts = shoot(mid);
                    let n_mid = pts.len();
                    extra.push((mid, pts));
                    if n_mid == n_lo {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo < 1e-9 {
                        break;
                    }
                }
            }
            samples.extend(extra);
            samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            // Assemble branches in launch-angle order.
            let base = si * max_crossings;
            for (_, pts) in &samples {
                for (k, pt) in pts.iter().enumerate() {
                    branches[base + k].push(*pt);
                }
            }
            // Bridge windows between branch ends that share the fold value of
            // the Clairaut constant.
            let tol_c = 1e-3 * (1.0 + f1);
            for ka in 0..max_crossings {
                for kb in (ka + 1)..max_crossings {
                    let (ba, bb) = (&branches[base + ka], &branches[base + kb]);
                    if ba.is_empty() || bb.is_empty() {
                        continue;
                    }
                    for pa in [ba.first().unwrap(), ba.last().unwrap()] {
                        for pb in [bb.first().unwrap(), bb.last().unwrap()] {
                            if (pa.c - pb.c).abs() <= tol_c && (pa.angle - pb.angle).abs() < 1.0 {
                                bridges.push((*pa, *pb));
                            }
                        }
                    }
                }
            }
        }
        // Refine large angle strides inside each branch so the Hermite model
        // stays tight; every extra shot is itself added to the branch.
        for (bi, br) in branches.iter_mut().enumerate() {
            let si = bi / max_crossings;
            let k = bi % max_crossings;
            let sgn = if si == 0 { 1.0 } else { -1.0 };
            let mut refined: Vec<BranchPoint> = Vec::with_capacity(br.len());
            for i in 0..br.len() {
                if i > 0 {
                    let (p0, p1) = (br[i - 1], br[i]);
                    if (p1.angle - p0.angle).abs() > 0.35 && (p1.c - p0.c).abs() > 1e-12 {
                        // One midpoint shot in c between the two launches.
                        let cm = 0.5 * (p0.c + p1.c);
                        let beta = (cm / f1).clamp(-1.0, 1.0).asin();
                        let pts: Vec<BranchPoint> = self
                            .integrate_shot(s1, sgn * beta.cos(), cm, s2, cap)
                            .into_iter()
                            .take(max_crossings)
                            .map(|cr| BranchPoint { angle: cr.state[2].abs(), length: cr.t, c: cm })
                            .collect();
                        if let Some(pm) = pts.get(k) {
                            refined.push(*pm);
                        }
                    }
                }
                refined.push(br[i]);
            }
            *br = refined;
        }
        (branches, bridges)
    }

    fn integrate_shot(&self, s1: f64, v0: f64, c: f64, s2: f64, cap: f64) -> Vec<Crossing> {
        let f = &self.f;
        let fp = &self.fp;
        let rhs = move |y: &[f64; 3]| -> [f64; 3] {
            let fv = f.eval(y[0]).max(1e-9);
            let fpv = fp.eval(y[0]);
            [y[1], c * c * fpv / (fv * fv * fv), c / (fv * fv)]
        };
        let d = self.d();
        let halt = move |y: &[f64; 3]| y[0] < -0.01 * d || y[0] > 1.01 * d;
        let crossings =
            integrate_to_crossing(rhs, [s1, v0, 0.0], cap, 0, s2, halt, &self.opts.ode);
        // Drop the departure event when shooting from s1 == s2.
        crossings.into_iter().filter(|cr| cr.t > 1e-12 * d.max(1.0)).collect()
    }

    /// Shortest path on a graph over the (s, phi) grid; converges to the true
    /// distance from above as grid_n grows. Pole rows are contracted.
    pub fn oracle_distance(&self, s1: f64, s2: f64, dphi: f64, grid_n: usize) -> f64 {
        oracle_distance(self.p, s1, s2, dphi, grid_n)
    }

    /// The diameter is D (realized pole-to-pole along meridians); verify on
    /// random sampled pairs that no solver distance exceeds it.
    pub fn diameter(&self, sample_n: usize, seed: u64) -> Result<DiameterReport> {
        let d = self.d();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut max_sampled: f64 = 0.0;
        let tol = TAU_DIST * d;
        for _ in 0..sample_n {
            let s1 = rng.gen_range(0.0..d);
            let s2 = rng.gen_range(0.0..d);
            let dphi = rng.gen_range(0.0..std::f64::consts::PI);
            let v = self.distance(s1, s2, dphi)?;
            if v > d + 10.0 * tol {
                return Err(Error::DiameterViolation { found: v, diameter: d });
            }
            max_sampled = max_sampled.max(v);
        }
        Ok(DiameterReport { diameter: d, max_sampled, sample_n })
    }
}

#[derive(Debug, Clone, Copy)]
struct BranchPoint {
    angle: f64,
    length: f64,
    /// Clairaut constant; equals dL/dangle along the fixed-endpoint family.
    c: f64,
}

fn hermite(u: f64, p0: f64, m0: f64, p1: f64, m1: f64) -> f64 {
    let u2 = u * u;
    let u3 = u2 * u;
    (2.0 * u3 - 3.0 * u2 + 1.0) * p0
        + (u3 - 2.0 * u2 + u) * m0
        + (-2.0 * u3 + 3.0 * u2) * p1
        + (u3 - u2) * m1
}

/// Diameter verification report.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DiameterReport {
    pub diameter: f64,
    pub max_sampled: f64,
    pub sample_n: usize,
}

/// Hausdorff defect of the band [s_lo, s_hi] inside the whole sphere: the
/// farthest point is a pole, reached along a meridian.
pub fn hausdorff_defect(p: &MetricProfile, s_lo: f64, s_hi: f64) -> f64 {
    let _ = p;
    s_lo.max(p.d() - s_hi).max(0.0)
}

#[derive(Copy, Clone, PartialEq)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap via reversed comparison.
        other.dist.partial_cmp(&self.dist).unwrap().then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Independent graph oracle: Dijkstra on [0, D] x [0, pi] with a 16-neighbor
/// stencil, reflecting angular boundary, and contracted pole rows. Edge
/// weights are reduced-metric chord lengths at the edge midpoint.
pub fn oracle_distance(p: &MetricProfile, s1: f64, s2: f64, dphi: f64, grid_n: usize) -> f64 {
    let n = grid_n.max(8);
    let d = p.d();
    let pi = std::f64::consts::PI;
    let ds = d / (n - 1) as f64;
    let dphi_step = pi / (n - 1) as f64;
    // Node layout: interior rows 1..n-1 have n angle columns; two pole nodes.
    let interior_rows = n - 2;
    let node_count = interior_rows * n + 2;
    let south = node_count - 2;
    let north = node_count - 1;
    let idx = |i: usize, j: usize| -> usize { (i - 1) * n + j };
    let fs: Vec<f64> = (0..n).map(|i| p.f(d * i as f64 / (n - 1) as f64).max(0.0)).collect();

    let to_node = |s: f64, phi: f64| -> usize {
        let i = ((s / ds).round() as usize).min(n - 1);
        if i == 0 {
            south
        } else if i == n - 1 {
            north
        } else {
            let j = ((phi / dphi_step).round() as usize).min(n - 1);
            idx(i, j)
        }
    };

    let src = to_node(s1, 0.0);
    let dst = to_node(s2, dphi.clamp(0.0, pi));
    if src == dst {
        return 0.0;
    }

    const STENCIL: [(i64, i64); 16] = [
        (0, 1),
        (0, -1),
        (1, 0),
        (-1, 0),
        (1, 1),
        (1, -1),
        (-1, 1),
        (-1, -1),
        (1, 2),
        (1, -2),
        (-1, 2),
        (-1, -2),
        (2, 1),
        (2, -1),
        (-2, 1),
        (-2, -1),
    ];

    let mut dist = vec![f64::INFINITY; node_count];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(HeapEntry { dist: 0.0, node: src });
    while let Some(HeapEntry { dist: du, node: u }) = heap.pop() {
        if du > dist[u] {
            continue;
        }
        if u == dst {
            return du;
        }
        let push = |v: usize, w: f64, dist: &mut Vec<f64>, heap: &mut BinaryHeap<HeapEntry>| {
            let nd = du + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(HeapEntry { dist: nd, node: v });
            }
        };
        if u == south || u == north {
            // Pole to every node of the two nearest interior rows; the
            // meridian absorbs any angle.
            let (rows, base): (Vec<usize>, usize) =
                if u == south { (vec![1, 2], 0) } else { (vec![n - 2, n - 3], n - 1) };
            for i in rows {
                let w = (i as i64 - base as i64).unsigned_abs() as f64 * ds;
                for j in 0..n {
                    push(idx(i, j), w, &mut dist, &mut heap);
                }
            }
            continue;
        }
        let i = (u / n) + 1;
        let j = u % n;
        for (di, dj) in STENCIL {
            let ii = i as i64 + di;
            let jj = j as i64 + dj;
            if jj < 0 || jj >= n as i64 {
                continue;
            }
            if ii <= 0 {
                push(south, (i as f64) * ds, &mut dist, &mut heap);
                continue;
            }
            if ii >= (n - 1) as i64 {
                push(north, ((n - 1 - i) as f64) * ds, &mut dist, &mut heap);
                continue;
            }
            let ii = ii as usize;
            let jj = jj as usize;
            let f_mid = 0.5 * (fs[i] + fs[ii]);
            let w = ((di as f64 * ds).powi(2) + (f_mid * dj as f64 * dphi_step).powi(2)).sqrt();
            push(idx(ii, jj), w, &mut dist, &mut heap);
        }
    }
    dist[dst]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use std::f64::consts::PI;

    #[test]
    fn round_closed_form_sanity() {
        assert!((round_distance(PI / 2.0, PI / 2.0, PI / 2.0) - PI / 2.0).abs() < 1e-12);
        assert!((round_distance(0.0, 1.3, 2.0) - 1.3).abs() < 1e-12);
        assert!((round_distance(PI / 4.0, 3.0 * PI / 4.0, PI) - PI).abs() < 1e-12);
    }

    #[test]
    fn solver_equatorial_quarter_arc() {
        let p = families::round(3).unwrap();
        let g = Geodesics::new(&p).unwrap();
        let v = g.distance(PI / 2.0, PI / 2.0, PI / 2.0).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-5, "got {v}");
    }

    #[test]
    fn solver_pole_distance() {
        let p = families::round(3).unwrap();
        let g = Geodesics::new(&p).unwrap();
        // Meridian from the pole: distance is s2 for any angle.
        let v = g.distance(0.0, 1.1, 2.3).unwrap();
        assert!((v - 1.1).abs() < 1e-9);
        let v2 = g.distance(0.0, PI, 0.7).unwrap();
        assert!((v2 - PI).abs() < 1e-4);
    }

    #[test]
    fn solver_antipodal_pair() {
        let p = families::round(3).unwrap();
        let g = Geodesics::new(&p).unwrap();
        let v = g.distance(PI / 4.0, 3.0 * PI / 4.0, PI).unwrap();
        assert!((v - PI).abs() < 1e-4, "got {v}");
    }

    #[test]
    fn solver_matches_round_closed_form_broadly() {
        let p = families::round(3).unwrap();
        let g = Geodesics::new(&p).unwrap();
        let mut worst = 0.0_f64;
        for &(s1, s2, a) in &[
            (0.7, 1.9, 1.0),
            (1.2, 1.2, 2.5),
            (0.4, 2.6, 0.7),
            (1.5707, 2.2, 3.0),
            (0.9, 1.1, 0.2),
            (2.8, 2.9, 1.4),
        ] {
            let v = g.distance(s1, s2, a).unwrap();
            let e = round_distance(s1, s2, a);
            worst = worst.max((v - e).abs());
            // Candidate-minimum is an upper estimate; it may exceed the true
            // distance only by the solver tolerance.
            assert!(v >= e - 1e-6, "undercut at ({s1},{s2},{a}): {v} < {e}");
        }
        assert!(worst < 2e-4, "worst deviation {worst}");
    }

    #[test]
    fn solver_symmetry() {
        let p = families::ellipsoid(3, 1.0, 1.5).unwrap();
        let g = Geodesics::new(&p).unwrap();
        for &(s1, s2, a) in &[(0.5, 1.9, 1.1), (1.0, 2.5, 2.9), (0.3, 0.9, 0.4)] {
            let v1 = g.distance(s1, s2, a).unwrap();
            let v2 = g.distance(s2, s1, a).unwrap();
            assert!((v1 - v2).abs() < 1e-5, "asymmetry {v1} vs {v2}");
        }
    }

    #[test]
    fn clairaut_conservation_along_shots() {
        // Integrate one shot and verify f^2 phi' stays at c.
        let p = families::ellipsoid(3, 1.0, 1.4).unwrap();
        let g = Geodesics::new(&p).unwrap();
        let s1 = 0.9;
        let c = 0.6 * p.f(s1);
        let f = &g.f;
        let fp = &g.fp;
        let rhs = move |y: &[f64; 3]| {
            let fv = f.eval(y[0]).max(1e-9);
            [y[1], c * c * fp.eval(y[0]) / (fv * fv * fv), c / (fv * fv)]
        };
        let v0 = (1.0 - (c / p.f(s1)).powi(2)).sqrt();
        // Sample the trajectory at successive angle levels and check the
        // unit-speed invariant v^2 + c^2/f^2 = 1 (equivalent to Clairaut
        // conservation for the arc-length parameterization).
        let opts = OdeOptions { rel_tol: TAU_ODE, ..Default::default() };
        let mut reached = 0.0_f64;
        for probe in [0.4, 0.9, 1.4, 1.9] {
            let crossings =
                integrate_to_crossing(rhs, [s1, v0, 0.0], 6.0, 2, probe, |_| false, &opts);
            for cr in crossings {
                reached = reached.max(cr.t);
                let fv = f.eval(cr.state[0]).max(1e-9);
                let inv = cr.state[1] * cr.state[1] + (c / fv) * (c / fv);
                assert!((inv - 1.0).abs() < 1e-7 * (1.0 + c.abs()), "drift {}", inv - 1.0);
            }
        }
        assert!(reached > 1.0, "trajectory too short: {reached}");
    }

    #[test]
    fn oracle_matches_round() {
        let p = families::round(3).unwrap();
        let v = oracle_distance(&p, PI / 2.0, PI / 2.0, PI / 2.0, 192);
        assert!((v - PI / 2.0).abs() < 0.01 * PI / 2.0 + 2.0 * PI / 191.0, "got {v}");
        // Pole to pole: meridian path within one grid step.
        let v2 = oracle_distance(&p, 0.0, PI, 0.3, 128);
        assert!((v2 - PI).abs() < 2.0 * PI / 127.0, "got {v2}");
    }

    #[test]
    fn oracle_triangle_inequality() {
        let p = families::round(3).unwrap();
        let a = oracle_distance(&p, 0.6, 1.9, 0.8, 96);
        let b = oracle_distance(&p, 1.9, 2.4, 0.5, 96);
        // Angles add in the worst case on the same fiber circle.
        let c = oracle_distance(&p, 0.6, 2.4, 1.3, 96);
        assert!(c <= a + b + 1e-12);
    }

    #[test]
    fn diameter_reports() {
        let p = families::round(3).unwrap();
        let g = Geodesics::new(&p).unwrap();
        let rep = g.diameter(40, 0).unwrap();
        assert_eq!(rep.diameter, PI);
        assert!(rep.max_sampled <= PI + 1e-5);
        let pc = families::capped_cylinder(3, 3.0, 1.0).unwrap();
        let gc = Geodesics::new(&pc).unwrap();
        let repc = gc.diameter(25, 1).unwrap();
        assert_eq!(repc.diameter, pc.d());
    }

    #[test]
    fn scaling_of_distances() {
        let c = 1.6;
        let p1 = families::round(3).unwrap();
        let pc = families::scaled_round(3, c).unwrap();
        let g1 = Geodesics::new(&p1).unwrap();
        let gc = Geodesics::new(&pc).unwrap();
        for &(s1, s2, a) in &[(0.5, 1.2, 0.9), (1.0, 2.0, 2.0)] {
            let v1 = g1.distance(s1, s2, a).unwrap();
            let vc = gc.distance(c * s1, c * s2, a).unwrap();
            assert!((vc - c * v1).abs() < 3e-4, "scaling: {vc} vs {}", c * v1);
        }
    }

    #[test]
    fn hausdorff_defect_values() {
        let p = families::round(3).unwrap();
        let band_lo = 0.1_f64.asin();
        let v = hausdorff_defect(&p, band_lo, PI - band_lo);
        assert!((v - band_lo).abs() < 1e-12);
        assert!((v - 0.10017).abs() < 1e-4);
        assert_eq!(hausdorff_defect(&p, 0.0, PI), 0.0);
        assert!((hausdorff_defect(&p, 0.2, PI) - 0.2).abs() < 1e-15);
    }
}

#[cfg(test)]
mod debug_probe {
    use super::*;
    use crate::families;

    #[test]
    fn probe_fan() {
        let p = families::round(3).unwrap();
        let g = Geodesics::new(&p).unwrap();
        let (s1, s2) = (0.55, 2.95);
        let branches = g.shoot_fan(s1, s2, 3.2);
        for (bi, br) in branches.iter().enumerate() {
            if br.is_empty() { continue; }
            println!("branch {bi}: {} points", br.len());
            for pt in br.iter().take(60) {
                println!("   angle {:.4} len {:.4} c {:.4}", pt.angle, pt.length, pt.c);
            }
        }
    }
}
