//! Upper bounds on the swept-area distance by penalized descent over the
//! interior keyframes of a path with frozen endpoints.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::calibration::{Bound, BoundKind};
use crate::error::{Error, Result};
use crate::isotopy::{face_area, swept_area, IsotopyPath, INTERVAL_TOLERANCE, JOIN_TOLERANCE};
use crate::knot::PolygonalKnot;
use crate::segment::{point_segment_distance, segment_segment_distance};
use crate::thickness::{
    check_admissible, for_each_critical_chord, radius_from_edges, slice_ok, thickness, ChordEnd,
    ADMISSIBILITY_SLACK,
};
use crate::vec3::Vec3;

/// Central difference step.
pub const FD_STEP: f64 = 1e-6;
/// Penalties aim at `Thi ≥ 1 + THICKNESS_MARGIN` so that penalized optima
/// land inside the admissible set rather than on its boundary.
pub const THICKNESS_MARGIN: f64 = 1e-4;
/// Relative margin on the length bound, same purpose.
pub const LENGTH_MARGIN: f64 = 1e-6;
const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;
const PERTURBATION: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeConfig {
    pub lambda: f64,
    pub keyframe_count: usize,
    pub time_samples: usize,
    pub penalty_weight_initial: f64,
    pub penalty_growth: f64,
    pub max_outer_iters: usize,
    pub max_inner_iters: usize,
    pub step_tolerance: f64,
    pub objective_tolerance: f64,
    pub seed: u64,
}

impl OptimizeConfig {
    pub fn new(lambda: f64) -> Self {
        OptimizeConfig {
            lambda,
            keyframe_count: 16,
            time_samples: 64,
            penalty_weight_initial: 10.0,
            penalty_growth: 10.0,
            max_outer_iters: 6,
            max_inner_iters: 60,
            step_tolerance: 1e-10,
            objective_tolerance: 1e-9,
            seed: 0,
        }
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        OptimizeConfig { lambda, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if !(self.lambda > 0.0) || self.lambda.is_nan() {
            return bad("lambda must be positive");
        }
        if self.keyframe_count < 2 {
            return bad("keyframe_count must be at least 2");
        }
        if self.time_samples == 0 || self.max_outer_iters == 0 || self.max_inner_iters == 0 {
            return bad("counts must be positive");
        }
        if !(self.penalty_weight_initial > 0.0 && self.penalty_growth >= 1.0) {
            return bad("penalty weight must be positive and growth at least 1");
        }
        if !(self.step_tolerance > 0.0 && self.objective_tolerance > 0.0) {
            return bad("tolerances must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeResult {
    pub path: IsotopyPath,
    pub upper_bound: f64,
    pub admissible: bool,
    pub constraint_violation_max: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelBound {
    pub lambda: f64,
    /// `None` when no admissible path is known at this level.
    pub upper_bound: Option<f64>,
}

type Frames = Vec<Vec<Vec3>>;

/// Runs `f(0..count)` on scoped threads and returns results in index order.
fn par_map<T: Send, F: Fn(usize) -> T + Sync>(count: usize, f: F) -> Vec<T> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(count);
    if threads <= 1 {
        return (0..count).map(f).collect();
    }
    let chunk = count.div_ceil(threads);
    let f = &f;
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| s.spawn(move || (t * chunk..((t + 1) * chunk).min(count)).map(f).collect::<Vec<T>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn bump(v: Vec3, c: usize, h: f64) -> Vec3 {
    match c {
        0 => Vec3::new(v.x + h, v.y, v.z),
        1 => Vec3::new(v.x, v.y + h, v.z),
        _ => Vec3::new(v.x, v.y, v.z + h),
    }
}

fn unit(c: usize) -> Vec3 {
    bump(Vec3::ZERO, c, 1.0)
}

fn hinge(x: f64) -> f64 {
    if x > 0.0 {
        x * x
    } else {
        0.0
    }
}

fn face(a: &[Vec3], b: &[Vec3], i: usize, tol: f64) -> f64 {
    let j = (i + 1) % a.len();
    face_area(a[j] - a[i], b[j] - b[i], b[i] - a[i], b[j] - a[j], tol)
}

fn chord_vertices(ends: &(ChordEnd, ChordEnd), n: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(4);
    for end in [ends.0, ends.1] {
        match end {
            ChordEnd::Vertex { index } => out.push(index),
            ChordEnd::Edge { index, .. } => {
                out.push(index);
                out.push((index + 1) % n);
            }
        }
    }
    out
}

/// Length of the chord between the same two features of `v`, without
/// re-testing criticality.
fn chord_distance(ends: &(ChordEnd, ChordEnd), v: &[Vec3]) -> f64 {
    let n = v.len();
    let seg = |i: usize| (v[i], v[(i + 1) % n]);
    match *ends {
        (ChordEnd::Edge { index: i, .. }, ChordEnd::Edge { index: j, .. }) => {
            let (p0, p1) = seg(i);
            let (q0, q1) = seg(j);
            segment_segment_distance(p0, p1, q0, q1)
        }
        (ChordEnd::Vertex { index: k }, ChordEnd::Edge { index: j, .. })
        | (ChordEnd::Edge { index: j, .. }, ChordEnd::Vertex { index: k }) => {
            let (q0, q1) = seg(j);
            point_segment_distance(v[k], q0, q1)
        }
        (ChordEnd::Vertex { index: k }, ChordEnd::Vertex { index: m }) => v[k].distance(v[m]),
    }
}

struct Problem {
    n: usize,
    times: Vec<f64>,
    /// Penalty slices strictly inside `(0, 1)`: interval and local parameter.
    slices: Vec<(usize, f64)>,
    thickness_target: f64,
    length_target: f64,
    face_tol: f64,
    scale: f64,
}

impl Problem {
    fn new(path: &IsotopyPath, cfg: &OptimizeConfig) -> Self {
        let slices = path
            .sample_times(cfg.time_samples.max(path.keyframes().len()))
            .into_iter()
            .filter(|&t| t > 0.0 && t < 1.0)
            .map(|t| path.locate(t))
            .collect();
        let n = path.vertex_count();
        let scale = 0.5 * (path.first().length() + path.last().length()) / n as f64;
        Problem {
            n,
            times: path.times().to_vec(),
            slices,
            thickness_target: 1.0 + THICKNESS_MARGIN,
            length_target: cfg.lambda * (1.0 - LENGTH_MARGIN),
            face_tol: INTERVAL_TOLERANCE / n as f64,
            scale,
        }
    }

    fn slice(&self, frames: &Frames, k: usize, s: f64) -> Vec<Vec3> {
        if s == 0.0 {
            return frames[k].clone();
        }
        frames[k].iter().zip(&frames[k + 1]).map(|(&a, &b)| a.lerp(b, s)).collect()
    }

    fn area(&self, frames: &Frames) -> f64 {
        par_map(frames.len() - 1, |k| {
            (0..self.n).map(|i| face(&frames[k], &frames[k + 1], i, self.face_tol)).sum::<f64>()
        })
        .iter()
        .sum()
    }

    fn slice_penalty(&self, v: &[Vec3]) -> f64 {
        let n = self.n;
        let knot = PolygonalKnot::from_vertices_unchecked(v.to_vec());
        let target = self.thickness_target;
        let mut p = 0.0;
        for i in 0..n {
            p += hinge(target - radius_from_edges(knot.edge(knot.prev(i)), knot.edge(i)));
        }
        for_each_critical_chord(&knot, |c| p += hinge(target - 0.5 * c.distance));
        p + hinge(knot.length() - self.length_target)
    }

    fn penalty(&self, frames: &Frames) -> f64 {
        par_map(self.slices.len(), |i| {
            let (k, s) = self.slices[i];
            self.slice_penalty(&self.slice(frames, k, s))
        })
        .iter()
        .sum()
    }

    fn objective(&self, frames: &Frames, mu: f64) -> f64 {
        self.area(frames) + mu * self.penalty(frames)
    }

    /// Gradient of the slice penalty with respect to the slice vertices.
    fn slice_penalty_gradient(&self, v: &[Vec3]) -> Vec<Vec3> {
        let n = self.n;
        let mut g = vec![Vec3::ZERO; n];
        let knot = PolygonalKnot::from_vertices_unchecked(v.to_vec());
        let target = self.thickness_target;
        let mut work = v.to_vec();

        for i in 0..n {
            let r = radius_from_edges(knot.edge(knot.prev(i)), knot.edge(i));
            if r >= target {
                continue;
            }
            let idx = [(i + n - 1) % n, i, (i + 1) % n];
            let coef = -2.0 * (target - r);
            for &m in &idx {
                for c in 0..3 {
                    let orig = work[m];
                    work[m] = bump(orig, c, FD_STEP);
                    let rp = radius_from_edges(work[idx[1]] - work[idx[0]], work[idx[2]] - work[idx[1]]);
                    work[m] = bump(orig, c, -FD_STEP);
                    let rm = radius_from_edges(work[idx[1]] - work[idx[0]], work[idx[2]] - work[idx[1]]);
                    work[m] = orig;
                    g[m] += unit(c) * (coef * (rp - rm) / (2.0 * FD_STEP));
                }
            }
        }

        let mut active = Vec::new();
        for_each_critical_chord(&knot, |c| {
            if 0.5 * c.distance < target {
                active.push(c);
            }
        });
        for c in active {
            let coef = -(target - 0.5 * c.distance);
            let mut idx = chord_vertices(&c.ends, n);
            idx.sort_unstable();
            idx.dedup();
            for &m in &idx {
                for comp in 0..3 {
                    let orig = work[m];
                    work[m] = bump(orig, comp, FD_STEP);
                    let dp = chord_distance(&c.ends, &work);
                    work[m] = bump(orig, comp, -FD_STEP);
                    let dm = chord_distance(&c.ends, &work);
                    work[m] = orig;
                    g[m] += unit(comp) * (coef * (dp - dm) / (2.0 * FD_STEP));
                }
            }
        }

        let excess = knot.length() - self.length_target;
        if excess > 0.0 {
            for (i, gi) in g.iter_mut().enumerate() {
                let din = knot.edge(knot.prev(i)).normalized().unwrap_or(Vec3::ZERO);
                let dout = knot.edge(i).normalized().unwrap_or(Vec3::ZERO);
                *gi += (din - dout) * (2.0 * excess);
            }
        }
        g
    }

    /// Gradient with respect to the interior keyframes (`frames[1..M-1]`).
    fn gradient(&self, frames: &Frames, mu: f64) -> Frames {
        let m = frames.len();
        let n = self.n;
        let mut grad: Frames = par_map(m - 2, |idx| {
            let k = idx + 1;
            let mut g = vec![Vec3::ZERO; n];
            let mut work = frames[k].clone();
            let local = |w: &[Vec3], j: usize| -> f64 {
                let mut s = 0.0;
                for e in [(j + n - 1) % n, j] {
                    s += face(&frames[k - 1], w, e, self.face_tol);
                    s += face(w, &frames[k + 1], e, self.face_tol);
                }
                s
            };
            for j in 0..n {
                for c in 0..3 {
                    let orig = work[j];
                    work[j] = bump(orig, c, FD_STEP);
                    let fp = local(&work, j);
                    work[j] = bump(orig, c, -FD_STEP);
                    let fm = local(&work, j);
                    work[j] = orig;
                    g[j] += unit(c) * ((fp - fm) / (2.0 * FD_STEP));
                }
            }
            g
        });

        let slice_grads = par_map(self.slices.len(), |i| {
            let (k, s) = self.slices[i];
            let v = self.slice(frames, k, s);
            if self.slice_penalty(&v) == 0.0 {
                None
            } else {
                Some(self.slice_penalty_gradient(&v))
            }
        });
        for (&(k, s), gs) in self.slices.iter().zip(slice_grads) {
            let Some(gs) = gs else { continue };
            for (frame, weight) in [(k, 1.0 - s), (k + 1, s)] {
                if frame == 0 || frame == m - 1 || weight == 0.0 {
                    continue;
                }
                for (a, b) in grad[frame - 1].iter_mut().zip(&gs) {
                    *a += *b * (mu * weight);
                }
            }
        }
        grad
    }

    fn path(&self, frames: &Frames) -> IsotopyPath {
        IsotopyPath::from_parts_unchecked(
            self.times.clone(),
            frames.iter().map(|v| PolygonalKnot::from_vertices_unchecked(v.clone())).collect(),
        )
    }
}

fn frames_of(path: &IsotopyPath) -> Frames {
    path.keyframes().iter().map(|k| k.vertices().to_vec()).collect()
}

fn step(frames: &Frames, grad: &Frames, alpha: f64) -> Frames {
    let mut out = frames.clone();
    for (f, g) in out[1..frames.len() - 1].iter_mut().zip(grad) {
        for (v, d) in f.iter_mut().zip(g) {
            *v -= *d * alpha;
        }
    }
    out
}

struct Descent {
    iterations: usize,
    converged: bool,
}

fn descend(problem: &Problem, frames: &mut Frames, mu: f64, cfg: &OptimizeConfig, perturbed: &mut bool) -> Descent {
    if frames.len() < 3 {
        return Descent { iterations: 0, converged: true };
    }
    let mut f = problem.objective(frames, mu);
    let mut alpha: Option<f64> = None;
    let mut it = 0;
    while it < cfg.max_inner_iters {
        let grad = problem.gradient(frames, mu);
        let gmax = grad.iter().flatten().map(|g| g.norm()).fold(0.0, f64::max);
        let gsq: f64 = grad.iter().flatten().map(|g| g.norm_squared()).sum();
        if !(gmax > 0.0) || !gsq.is_finite() {
            return Descent { iterations: it, converged: gmax == 0.0 };
        }
        let mut a = alpha.map_or(0.1 * problem.scale / gmax, |a| 2.0 * a);
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial = step(frames, &grad, a);
            let ft = problem.objective(&trial, mu);
            if ft <= f - ARMIJO * a * gsq {
                accepted = Some((trial, ft));
                break;
            }
            a *= 0.5;
        }
        it += 1;
        let Some((trial, ft)) = accepted else {
            if !*perturbed && alpha.is_none() {
                // Stuck on a kink at the start: nudge and retry.
                *perturbed = true;
                perturb(frames, cfg.seed);
                f = problem.objective(frames, mu);
                continue;
            }
            return Descent { iterations: it, converged: true };
        };
        let decrease = f - ft;
        *frames = trial;
        f = ft;
        alpha = Some(a);
        if decrease <= cfg.objective_tolerance * f.abs().max(1.0) || a * gmax < cfg.step_tolerance {
            return Descent { iterations: it, converged: true };
        }
    }
    Descent { iterations: it, converged: false }
}

fn perturb(frames: &mut Frames, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let last = frames.len() - 1;
    for f in &mut frames[1..last] {
        for v in f.iter_mut() {
            for c in 0..3 {
                *v = bump(*v, c, rng.random_range(-PERTURBATION..=PERTURBATION));
            }
        }
    }
}

fn check_endpoint(which: &'static str, p: &PolygonalKnot, lambda: f64) -> Result<()> {
    let thi = thickness(p).thickness;
    let len = p.length();
    if slice_ok(thi, len, lambda) {
        Ok(())
    } else {
        Err(Error::EndpointInadmissible {
            which,
            lambda,
            thickness: thi,
            length: len,
        })
    }
}

fn check_pair(g0: &PolygonalKnot, g1: &PolygonalKnot, lambda: f64) -> Result<()> {
    if g0.len() != g1.len() {
        return Err(Error::InvalidParameter(format!(
            "endpoints have {} and {} vertices",
            g0.len(),
            g1.len()
        )));
    }
    check_endpoint("start", g0, lambda)?;
    check_endpoint("end", g1, lambda)
}

/// Linear interpolation with `cfg.keyframe_count` uniform keyframes. Interior
/// keyframes next to sampled slices thinner than 1 are scaled about their
/// centroids, aiming at `1 + 2 THICKNESS_MARGIN`, for at most ten rounds.
pub fn initial_path(g0: &PolygonalKnot, g1: &PolygonalKnot, cfg: &OptimizeConfig) -> Result<IsotopyPath> {
    cfg.validate()?;
    if g0.len() != g1.len() {
        return Err(Error::InvalidParameter("endpoints have different vertex counts".into()));
    }
    let m = cfg.keyframe_count;
    let times: Vec<f64> = (0..m).map(|i| i as f64 / (m - 1) as f64).collect();
    let mut frames: Frames = times
        .iter()
        .map(|&t| g0.vertices().iter().zip(g1.vertices()).map(|(&a, &b)| a.lerp(b, t)).collect())
        .collect();
    frames[m - 1] = g1.vertices().to_vec();
    let probe = IsotopyPath::from_parts_unchecked(
        times.clone(),
        vec![g0.clone(); m],
    );
    let slices: Vec<(usize, f64)> = probe
        .sample_times(cfg.time_samples.max(m))
        .into_iter()
        .map(|t| probe.locate(t))
        .collect();
    let target = 1.0 + 2.0 * THICKNESS_MARGIN;
    for _ in 0..10 {
        let mut factors = vec![1.0f64; m];
        for &(k, s) in &slices {
            let v: Vec<Vec3> = frames[k].iter().zip(&frames[k + 1]).map(|(&a, &b)| a.lerp(b, s)).collect();
            let thi = thickness(&PolygonalKnot::from_vertices_unchecked(v)).thickness;
            if thi >= 1.0 - ADMISSIBILITY_SLACK {
                continue;
            }
            let f = if thi > 0.0 { (target / thi).min(2.0) } else { 2.0 };
            for (frame, w) in [(k, 1.0 - s), (k + 1, s)] {
                if frame > 0 && frame < m - 1 && w > 0.0 {
                    factors[frame] = factors[frame].max(f);
                }
            }
        }
        if factors.iter().all(|&f| f == 1.0) {
            break;
        }
        for (frame, &f) in frames.iter_mut().zip(&factors) {
            if f > 1.0 {
                let c = frame.iter().copied().sum::<Vec3>() / frame.len() as f64;
                for v in frame.iter_mut() {
                    *v = c + (*v - c) * f;
                }
            }
        }
    }
    Ok(IsotopyPath::from_parts_unchecked(
        times,
        frames.into_iter().map(PolygonalKnot::from_vertices_unchecked).collect(),
    ))
}

/// Locally minimizes swept area over the interior keyframes of `init`,
/// keeping its endpoints fixed. The returned path is the best admissible
/// iterate seen (the start included); if none was admissible, the last
/// iterate is returned with `admissible = false`.
pub fn optimize_from(init: &IsotopyPath, cfg: &OptimizeConfig) -> Result<OptimizeResult> {
    cfg.validate()?;
    check_pair(init.first(), init.last(), cfg.lambda)?;
    let samples = cfg.time_samples.max(init.keyframes().len());
    let problem = Problem::new(init, cfg);
    let mut frames = frames_of(init);

    let mut best: Option<(f64, IsotopyPath, f64)> = None;
    let consider = |path: IsotopyPath, best: &mut Option<(f64, IsotopyPath, f64)>| -> f64 {
        let report = check_admissible(&path, cfg.lambda, samples);
        let violation = report.max_violation();
        if report.admissible {
            let area = swept_area(&path).total;
            if best.as_ref().is_none_or(|b| area < b.0) {
                *best = Some((area, path, violation));
            }
        }
        violation
    };
    consider(init.clone(), &mut best);

    let mut mu = cfg.penalty_weight_initial;
    let mut iterations = 0;
    let mut converged = false;
    let mut perturbed = false;
    let mut violation = f64::INFINITY;
    for _ in 0..cfg.max_outer_iters {
        let d = descend(&problem, &mut frames, mu, cfg, &mut perturbed);
        iterations += d.iterations;
        violation = consider(problem.path(&frames), &mut best);
        if d.converged && violation <= ADMISSIBILITY_SLACK {
            converged = true;
            break;
        }
        mu *= cfg.penalty_growth;
    }

    Ok(match best {
        Some((area, path, v)) => OptimizeResult {
            path,
            upper_bound: area,
            admissible: true,
            constraint_violation_max: v,
            iterations,
            converged,
        },
        None => {
            let path = problem.path(&frames);
            OptimizeResult {
                upper_bound: swept_area(&path).total,
                path,
                admissible: false,
                constraint_violation_max: violation,
                iterations,
                converged,
            }
        }
    })
}

/// Upper bound on the distance between `g0` and `g1` at level `cfg.lambda`.
pub fn minimize_sweep(g0: &PolygonalKnot, g1: &PolygonalKnot, cfg: &OptimizeConfig) -> Result<OptimizeResult> {
    cfg.validate()?;
    check_pair(g0, g1, cfg.lambda)?;
    optimize_from(&initial_path(g0, g1, cfg)?, cfg)
}

/// Optimizes a based loop at `base`, starting from `seed_path`.
pub fn loop_cost(base: &PolygonalKnot, seed_path: &IsotopyPath, cfg: &OptimizeConfig) -> Result<OptimizeResult> {
    for (end, which) in [(seed_path.first(), "start"), (seed_path.last(), "end")] {
        if end.len() != base.len() {
            return Err(Error::InvalidParameter(format!("loop {which} has a different vertex count")));
        }
        let gap = end.max_vertex_distance(base);
        if gap > JOIN_TOLERANCE {
            return Err(Error::EndpointMismatch(gap));
        }
    }
    optimize_from(seed_path, cfg)
}

/// Smallest admissible upper bound over all pairs drawn from the two sets.
pub fn merge_cost(set0: &[PolygonalKnot], set1: &[PolygonalKnot], cfg: &OptimizeConfig) -> Result<Bound> {
    if set0.is_empty() || set1.is_empty() {
        return Err(Error::InvalidParameter("representative sets must be non-empty".into()));
    }
    let mut best: Option<(f64, usize, usize)> = None;
    let mut notes = Vec::new();
    for (i, a) in set0.iter().enumerate() {
        for (j, b) in set1.iter().enumerate() {
            match minimize_sweep(a, b, cfg) {
                Ok(r) if r.admissible => {
                    if best.is_none_or(|(v, _, _)| r.upper_bound < v) {
                        best = Some((r.upper_bound, i, j));
                    }
                }
                Ok(r) => notes.push(format!("({i}, {j}): no admissible path, violation {}", r.constraint_violation_max)),
                Err(e) => notes.push(format!("({i}, {j}): {e}")),
            }
        }
    }
    match best {
        Some((value, i, j)) => Ok(Bound {
            value,
            kind: BoundKind::UpperBound,
            witness: format!("pair ({i}, {j}) at level {}", cfg.lambda),
        }),
        None => Err(Error::NoAdmissiblePath(notes.join("; "))),
    }
}

fn feasible(g0: &PolygonalKnot, g1: &PolygonalKnot, cfg: &OptimizeConfig) -> Result<bool> {
    if check_pair(g0, g1, cfg.lambda).is_err() {
        return Ok(false);
    }
    let init = initial_path(g0, g1, cfg)?;
    if check_admissible(&init, cfg.lambda, cfg.time_samples).admissible {
        return Ok(true);
    }
    Ok(optimize_from(&init, cfg)?.admissible)
}

/// Bisection on the level for optimizer feasibility. The result is an upper
/// bound on the merge scale: failure to find a path is not a proof that none
/// exists.
pub fn merge_scale_upper(
    g0: &PolygonalKnot,
    g1: &PolygonalKnot,
    lambda_lo: f64,
    lambda_hi: f64,
    cfg: &OptimizeConfig,
) -> Result<f64> {
    if !(lambda_lo > 0.0 && lambda_lo < lambda_hi && lambda_hi.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < lambda_lo < lambda_hi, got [{lambda_lo}, {lambda_hi}]"
        )));
    }
    let at = |l: f64| cfg.with_lambda(l);
    check_pair(g0, g1, lambda_hi)?;
    if !feasible(g0, g1, &at(lambda_hi))? {
        return Err(Error::NoAdmissiblePath(format!("no path found at level {lambda_hi}")));
    }
    if feasible(g0, g1, &at(lambda_lo))? {
        return Ok(lambda_lo);
    }
    let (mut lo, mut hi) = (lambda_lo, lambda_hi);
    while hi - lo > 1e-3 * hi {
        let mid = 0.5 * (lo + hi);
        if feasible(g0, g1, &at(mid))? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Warm-started upper bounds over nondecreasing levels. Each level starts
/// from the best path of the previous one, which stays admissible as the
/// level grows, so the reported sequence never increases.
pub fn lambda_sweep(
    g0: &PolygonalKnot,
    g1: &PolygonalKnot,
    levels: &[f64],
    cfg: &OptimizeConfig,
) -> Result<Vec<LevelBound>> {
    if levels.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("levels must be nondecreasing".into()));
    }
    let mut out: Vec<LevelBound> = Vec::with_capacity(levels.len());
    let mut prev: Option<(f64, IsotopyPath)> = None;
    for &lambda in levels {
        if let Some(last) = out.last() {
            if last.lambda == lambda {
                out.push(*last);
                continue;
            }
        }
        let cfg = cfg.with_lambda(lambda);
        cfg.validate()?;
        if check_pair(g0, g1, lambda).is_err() {
            out.push(LevelBound { lambda, upper_bound: None });
            continue;
        }
        let init = match &prev {
            Some((_, p)) => p.clone(),
            None => initial_path(g0, g1, &cfg)?,
        };
        let r = optimize_from(&init, &cfg)?;
        if r.admissible && prev.as_ref().is_none_or(|(v, _)| r.upper_bound <= *v) {
            prev = Some((r.upper_bound, r.path));
        }
        out.push(LevelBound {
            lambda,
            upper_bound: prev.as_ref().map(|(v, _)| *v),
        });
    }
    Ok(out)
}
