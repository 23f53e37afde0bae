//! Polygonal thickness: the inscribed-arc radius at vertices (MinRad), the
//! doubly-critical self-distance, and admissibility at a ropelength level.
//!
//! A chord is doubly critical when, at each end, it is perpendicular to the
//! edge (interior points) or lies in the vertex normal cone (vertices). The
//! normal cone at `v_k` is the set of directions `c` with `c · a ≥ 0` and
//! `c · b ≤ 0`, where `a` is the incoming and `b` the outgoing unit edge
//! direction; a chord leaving `v_k` in that cone makes `v_k` a local minimum
//! of the distance to the far end. Candidates are solved in closed form per
//! edge/vertex pair; adjacent edges never contribute (MinRad covers them).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isotopy::IsotopyPath;
use crate::knot::PolygonalKnot;
use crate::vec3::Vec3;

/// Cosine tolerance for perpendicularity and cone membership.
pub const CRITICAL_COS_TOLERANCE: f64 = 1e-8;
/// Slack used in every admissibility comparison.
pub const ADMISSIBILITY_SLACK: f64 = 1e-9;

/// One end of a chord: a vertex or an interior point of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChordEnd {
    Vertex { index: usize },
    Edge { index: usize, param: f64 },
}

impl ChordEnd {
    pub fn point(&self, p: &PolygonalKnot) -> Vec3 {
        match *self {
            ChordEnd::Vertex { index } => p.vertex(index),
            ChordEnd::Edge { index, param } => {
                let (a, b) = p.edge_endpoints(index);
                a.lerp(b, param)
            }
        }
    }
}

/// A doubly-critical chord.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalChord {
    pub distance: f64,
    pub ends: (ChordEnd, ChordEnd),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThicknessBreakdown {
    pub min_rad: f64,
    pub half_dcsd: f64,
    pub thickness: f64,
    pub argmin_vertex: Option<usize>,
    pub argmin_pair: Option<(ChordEnd, ChordEnd)>,
}

/// `min(ℓ⁻, ℓ⁺) / (2 tan(θ/2))` at vertex `i`; `+∞` at straight vertices.
pub fn vertex_radius(p: &PolygonalKnot, i: usize) -> f64 {
    radius_from_edges(p.edge(p.prev(i)), p.edge(i))
}

/// Vertex radius from the incoming and outgoing edge vectors.
pub(crate) fn radius_from_edges(incoming: Vec3, outgoing: Vec3) -> f64 {
    let theta = incoming.angle_to(outgoing);
    if theta == 0.0 {
        return f64::INFINITY;
    }
    let shorter = incoming.norm().min(outgoing.norm());
    shorter / (2.0 * (theta / 2.0).tan())
}

/// Smallest vertex radius and where it occurs.
pub fn min_rad(p: &PolygonalKnot) -> (f64, Option<usize>) {
    (0..p.len())
        .map(|i| (vertex_radius(p, i), i))
        .filter(|(r, _)| r.is_finite())
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map_or((f64::INFINITY, None), |(r, i)| (r, Some(i)))
}

/// Whether the chord `c` leaving vertex `k` lies in its normal cone.
pub(crate) fn in_normal_cone(p: &PolygonalKnot, k: usize, c: Vec3) -> bool {
    let cn = c.norm();
    if cn == 0.0 {
        return true;
    }
    let a = p.edge(p.prev(k));
    let b = p.edge(k);
    c.dot(a) >= -CRITICAL_COS_TOLERANCE * cn * a.norm()
        && c.dot(b) <= CRITICAL_COS_TOLERANCE * cn * b.norm()
}

/// Doubly-critical chord joining interior points of non-adjacent edges
/// `i` and `j`, if one exists.
pub(crate) fn interior_pair_candidate(p: &PolygonalKnot, i: usize, j: usize) -> Option<CriticalChord> {
    let (p0, p1) = p.edge_endpoints(i);
    let (q0, q1) = p.edge_endpoints(j);
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = p0 - q0;
    let a = d1.norm_squared();
    let e = d2.norm_squared();
    let b = d1.dot(d2);
    let c = d1.dot(r);
    let f = d2.dot(r);
    let denom = a * e - b * b;

    let (s, t) = if denom > 1e-14 * a * e {
        let s = (b * f - c * e) / denom;
        let t = (a * f - b * c) / denom;
        if !(s > 0.0 && s < 1.0 && t > 0.0 && t < 1.0) {
            return None;
        }
        (s, t)
    } else {
        // Parallel edges: t(s) = (b s + f) / e along the whole edge. Take the
        // middle of the open range of s for which both feet are interior.
        let t_at = |s: f64| (b * s + f) / e;
        let (t0, t1) = (t_at(0.0), t_at(1.0));
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let slope = t1 - t0;
        if slope.abs() < 1e-300 {
            return None;
        }
        let s_at_t0 = (0.0 - t0) / slope;
        let s_at_t1 = (1.0 - t0) / slope;
        lo = lo.max(s_at_t0.min(s_at_t1));
        hi = hi.min(s_at_t0.max(s_at_t1));
        if !(hi - lo > 1e-12) {
            return None;
        }
        let s = 0.5 * (lo + hi);
        (s, t_at(s))
    };

    let pp = p0 + d1 * s;
    let qq = q0 + d2 * t;
    let w = pp - qq;
    let wn = w.norm();
    if wn > 0.0 {
        let tol = CRITICAL_COS_TOLERANCE * wn;
        if w.dot(d1).abs() > tol * a.sqrt() || w.dot(d2).abs() > tol * e.sqrt() {
            return None;
        }
    }
    Some(CriticalChord {
        distance: wn,
        ends: (
            ChordEnd::Edge { index: i, param: s },
            ChordEnd::Edge { index: j, param: t },
        ),
    })
}

/// Doubly-critical chord from vertex `k` to the interior of edge `j`
/// (`k` not incident to `j`).
pub(crate) fn vertex_edge_candidate(p: &PolygonalKnot, k: usize, j: usize) -> Option<CriticalChord> {
    let v = p.vertex(k);
    let (q0, q1) = p.edge_endpoints(j);
    let d = q1 - q0;
    let t = (v - q0).dot(d) / d.norm_squared();
    if !(t > 0.0 && t < 1.0) {
        return None;
    }
    let foot = q0 + d * t;
    let c = foot - v;
    if !in_normal_cone(p, k, c) {
        return None;
    }
    Some(CriticalChord {
        distance: c.norm(),
        ends: (
            ChordEnd::Vertex { index: k },
            ChordEnd::Edge { index: j, param: t },
        ),
    })
}

/// Doubly-critical chord between vertices `k` and `m`.
pub(crate) fn vertex_vertex_candidate(p: &PolygonalKnot, k: usize, m: usize) -> Option<CriticalChord> {
    let c = p.vertex(m) - p.vertex(k);
    if !(in_normal_cone(p, k, c) && in_normal_cone(p, m, -c)) {
        return None;
    }
    Some(CriticalChord {
        distance: c.norm(),
        ends: (ChordEnd::Vertex { index: k }, ChordEnd::Vertex { index: m }),
    })
}

/// Whether vertex `k` is an endpoint of edge `j`.
#[inline]
pub(crate) fn vertex_on_edge(p: &PolygonalKnot, k: usize, j: usize) -> bool {
    k == j || k == (j + 1) % p.len()
}

/// Calls `f` on every doubly-critical chord of `p`.
pub fn for_each_critical_chord(p: &PolygonalKnot, mut f: impl FnMut(CriticalChord)) {
    let n = p.len();
    if n < 4 {
        return;
    }
    for i in 0..n {
        for j in i + 1..n {
            if !p.edges_adjacent(i, j) {
                if let Some(c) = interior_pair_candidate(p, i, j) {
                    f(c);
                }
            }
        }
    }
    for k in 0..n {
        for j in 0..n {
            if !vertex_on_edge(p, k, j) {
                if let Some(c) = vertex_edge_candidate(p, k, j) {
                    f(c);
                }
            }
        }
    }
    for k in 0..n {
        for m in k + 1..n {
            if let Some(c) = vertex_vertex_candidate(p, k, m) {
                f(c);
            }
        }
    }
}

/// Shortest doubly-critical chord, if any.
pub fn shortest_critical_chord(p: &PolygonalKnot) -> Option<CriticalChord> {
    let mut best: Option<CriticalChord> = None;
    for_each_critical_chord(p, |c| {
        if best.is_none_or(|b| c.distance < b.distance) {
            best = Some(c);
        }
    });
    best
}

/// Doubly-critical self-distance; `+∞` when no candidate exists.
pub fn dcsd(p: &PolygonalKnot) -> f64 {
    shortest_critical_chord(p).map_or(f64::INFINITY, |c| c.distance)
}

pub fn thickness(p: &PolygonalKnot) -> ThicknessBreakdown {
    let (min_rad, argmin_vertex) = min_rad(p);
    let chord = shortest_critical_chord(p);
    let half_dcsd = chord.map_or(f64::INFINITY, |c| 0.5 * c.distance);
    ThicknessBreakdown {
        min_rad,
        half_dcsd,
        thickness: min_rad.min(half_dcsd),
        argmin_vertex,
        argmin_pair: chord.map(|c| c.ends),
    }
}

/// Length over thickness.
pub fn ropelength(p: &PolygonalKnot) -> Result<f64> {
    let thi = thickness(p).thickness;
    if !(thi > 0.0) || !thi.is_finite() {
        return Err(Error::Degenerate(format!("thickness {thi} is not a positive finite number")));
    }
    Ok(p.length() / thi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceVerdict {
    pub time: f64,
    pub thickness: f64,
    pub length: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub level_lambda: f64,
    pub per_slice: Vec<SliceVerdict>,
    pub admissible: bool,
    /// Index into `per_slice` of the first failing slice.
    pub first_failure: Option<usize>,
}

impl AdmissibilityReport {
    /// Largest amount by which any slice misses a bound (zero when every
    /// bound holds exactly).
    pub fn max_violation(&self) -> f64 {
        self.per_slice
            .iter()
            .map(|s| violation(s.thickness, s.length, self.level_lambda))
            .fold(0.0, f64::max)
    }
}

/// `max(0, 1 - thickness, length - Λ)`.
pub fn violation(thickness: f64, length: f64, lambda: f64) -> f64 {
    (1.0 - thickness).max(length - lambda).max(0.0)
}

/// Whether one polygon satisfies `Thi ≥ 1` and `Len ≤ Λ` up to the slack.
pub fn slice_ok(thickness: f64, length: f64, lambda: f64) -> bool {
    thickness >= 1.0 - ADMISSIBILITY_SLACK && length <= lambda + ADMISSIBILITY_SLACK
}

/// Evaluates thickness and length at every keyframe and at `time_samples`
/// uniformly spaced times (counts below the keyframe count are raised to it).
pub fn check_admissible(path: &IsotopyPath, lambda: f64, time_samples: usize) -> AdmissibilityReport {
    let times = path.sample_times(time_samples.max(path.keyframes().len()));
    let per_slice: Vec<SliceVerdict> = times
        .iter()
        .map(|&t| {
            let slice = path.slice(t);
            let thickness = thickness(&slice).thickness;
            let length = slice.length();
            SliceVerdict {
                time: t,
                thickness,
                length,
                ok: slice_ok(thickness, length, lambda),
            }
        })
        .collect();
    let first_failure = per_slice.iter().position(|s| !s.ok);
    AdmissibilityReport {
        level_lambda: lambda,
        admissible: first_failure.is_none(),
        first_failure,
        per_slice,
    }
}
