//! Knot diagrams under a fixed projection direction, Reidemeister events
//! along isotopies, and the swept-area weighted graph of diagram changes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use petgraph::algo::dijkstra;
use petgraph::graph::UnGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isotopy::{swept_area, IsotopyPath};
use crate::knot::{OrientedPlane, PolygonalKnot};
use crate::thickness::check_admissible;
use crate::vec3::Vec3;

/// Genericity tolerance for projections.
pub const GENERIC_TOLERANCE: f64 = 1e-9;
/// Width to which event times are localized.
pub const EVENT_TIME_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub over_edge: usize,
    pub under_edge: usize,
    /// `+1` or `-1`.
    pub sign: i8,
    pub position: [f64; 2],
    pub over_param: f64,
    pub under_param: f64,
}

/// One passage through a crossing in a Gauss code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussToken {
    pub label: u32,
    pub under: bool,
    pub sign: i8,
}

/// Signed Gauss code, canonical under rotation: the lexicographically
/// smallest rotation, with crossings labelled `1, 2, ...` by first passage.
/// Written as e.g. `O1+U2+O3+U1+O2+U3+`; the empty code is `empty`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GaussCode {
    tokens: Vec<GaussToken>,
}

impl GaussCode {
    /// Canonical code of a cyclic passage sequence `(crossing id, under, sign)`.
    pub fn canonical(passages: &[(usize, bool, i8)]) -> Self {
        let len = passages.len();
        let mut best: Option<Vec<GaussToken>> = None;
        for r in 0..len.max(1) {
            if len == 0 {
                break;
            }
            let mut labels: BTreeMap<usize, u32> = BTreeMap::new();
            let tokens: Vec<GaussToken> = (0..len)
                .map(|i| {
                    let (id, under, sign) = passages[(r + i) % len];
                    let next = labels.len() as u32 + 1;
                    let label = *labels.entry(id).or_insert(next);
                    GaussToken { label, under, sign }
                })
                .collect();
            if best.as_ref().is_none_or(|b| tokens < *b) {
                best = Some(tokens);
            }
        }
        GaussCode {
            tokens: best.unwrap_or_default(),
        }
    }

    pub fn tokens(&self) -> &[GaussToken] {
        &self.tokens
    }

    pub fn crossing_count(&self) -> usize {
        self.tokens.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Whether over and under passages alternate along the curve.
    pub fn is_alternating(&self) -> bool {
        let n = self.tokens.len();
        (0..n).all(|i| self.tokens[i].under != self.tokens[(i + 1) % n].under)
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tokens.is_empty() {
            return f.write_str("empty");
        }
        for t in &self.tokens {
            let kind = if t.under { 'U' } else { 'O' };
            let sign = if t.sign > 0 { '+' } else { '-' };
            write!(f, "{kind}{}{sign}", t.label)?;
        }
        Ok(())
    }
}

impl FromStr for GaussCode {
    type Err = Error;

    /// Parses any rotation or labelling and returns the canonical code.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "empty" || s.is_empty() {
            return Ok(GaussCode::default());
        }
        let bad = || Error::InvalidParameter(format!("malformed gauss code {s:?}"));
        let bytes = s.as_bytes();
        let mut passages = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let under = match bytes[i] {
                b'O' => false,
                b'U' => true,
                _ => return Err(bad()),
            };
            i += 1;
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let id: usize = s[start..i].parse().map_err(|_| bad())?;
            let sign = match bytes.get(i) {
                Some(b'+') => 1,
                Some(b'-') => -1,
                _ => return Err(bad()),
            };
            i += 1;
            passages.push((id, under, sign));
        }
        let mut seen: BTreeMap<usize, (usize, usize, i8)> = BTreeMap::new();
        for &(id, under, sign) in &passages {
            let e = seen.entry(id).or_insert((0, 0, sign));
            if under {
                e.1 += 1;
            } else {
                e.0 += 1;
            }
            if e.2 != sign {
                return Err(bad());
            }
        }
        if seen.values().any(|&(o, u, _)| o != 1 || u != 1) {
            return Err(bad());
        }
        Ok(GaussCode::canonical(&passages))
    }
}

impl Serialize for GaussCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagram {
    pub crossings: Vec<Crossing>,
    pub gauss_code: GaussCode,
}

fn cross2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub2(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn norm2(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

fn point_segment_distance_2d(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = sub2(b, a);
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 > 0.0 {
        ((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2
    } else {
        0.0
    };
    let t = t.clamp(0.0, 1.0);
    norm2(sub2(p, [a[0] + t * d[0], a[1] + t * d[1]]))
}

/// Projects `p` along `u` (viewer at `+u`). Over/under by height along `u`;
/// a crossing is positive when the under strand points to the left of the
/// over strand in the frame `(e1, e2)` with `e1 × e2 = u`.
pub fn project(p: &PolygonalKnot, u: Vec3) -> Result<Diagram> {
    let plane = OrientedPlane::new(u)?;
    let u = plane.normal();
    let (e1, e2) = plane.basis();
    let n = p.len();
    let eps = GENERIC_TOLERANCE;
    let pts: Vec<[f64; 2]> = p.vertices().iter().map(|v| [v.dot(e1), v.dot(e2)]).collect();
    let depth: Vec<f64> = p.vertices().iter().map(|v| v.dot(u)).collect();
    let non_generic = |msg: String| Err(Error::NonGeneric(msg));

    for i in 0..n {
        if norm2(sub2(pts[(i + 1) % n], pts[i])) < eps {
            return non_generic(format!("edge {i} projects to a point"));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if norm2(sub2(pts[i], pts[j])) < eps {
                return non_generic(format!("vertices {i} and {j} project to the same point"));
            }
        }
    }
    for k in 0..n {
        for j in 0..n {
            if k == j || k == (j + 1) % n {
                continue;
            }
            if point_segment_distance_2d(pts[k], pts[j], pts[(j + 1) % n]) < eps {
                return non_generic(format!("vertex {k} projects onto edge {j}"));
            }
        }
    }
    for k in 0..n {
        let a = sub2(pts[k], pts[(k + n - 1) % n]);
        let b = sub2(pts[(k + 1) % n], pts[k]);
        if cross2(a, b).abs() < eps * norm2(a) * norm2(b) && a[0] * b[0] + a[1] * b[1] < 0.0 {
            return non_generic(format!("edges meeting at vertex {k} fold onto each other"));
        }
    }

    let mut crossings = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if p.edges_adjacent(i, j) {
                continue;
            }
            let (pa, pb) = (pts[i], pts[(i + 1) % n]);
            let (qa, qb) = (pts[j], pts[(j + 1) % n]);
            let r = sub2(pb, pa);
            let w = sub2(qb, qa);
            let denom = cross2(r, w);
            if denom.abs() < eps * norm2(r) * norm2(w) {
                continue;
            }
            let d = sub2(qa, pa);
            let s = cross2(d, w) / denom;
            let t = cross2(d, r) / denom;
            if !(s > 0.0 && s < 1.0 && t > 0.0 && t < 1.0) {
                continue;
            }
            let hi = depth[i] + s * (depth[(i + 1) % n] - depth[i]);
            let hj = depth[j] + t * (depth[(j + 1) % n] - depth[j]);
            if (hi - hj).abs() < eps {
                return non_generic(format!("edges {i} and {j} meet in space"));
            }
            let position = [pa[0] + s * r[0], pa[1] + s * r[1]];
            let (over_edge, under_edge, over_param, under_param, d_over, d_under) = if hi > hj {
                (i, j, s, t, r, w)
            } else {
                (j, i, t, s, w, r)
            };
            crossings.push(Crossing {
                over_edge,
                under_edge,
                sign: if cross2(d_over, d_under) > 0.0 { 1 } else { -1 },
                position,
                over_param,
                under_param,
            });
        }
    }
    for a in 0..crossings.len() {
        for b in a + 1..crossings.len() {
            if norm2(sub2(crossings[a].position, crossings[b].position)) < eps {
                return non_generic("triple point".into());
            }
        }
    }

    let mut passages: Vec<(usize, f64, usize, bool, i8)> = Vec::with_capacity(2 * crossings.len());
    for (id, c) in crossings.iter().enumerate() {
        passages.push((c.over_edge, c.over_param, id, false, c.sign));
        passages.push((c.under_edge, c.under_param, id, true, c.sign));
    }
    passages.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let seq: Vec<(usize, bool, i8)> = passages.iter().map(|&(_, _, id, under, sign)| (id, under, sign)).collect();
    Ok(Diagram {
        gauss_code: GaussCode::canonical(&seq),
        crossings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveKind {
    R1,
    R2,
    R3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReidemeisterEvent {
    pub time: f64,
    pub kind: MoveKind,
    pub crossing_delta: i32,
    pub from: GaussCode,
    pub to: GaussCode,
    /// From the middle of the generic span before the event to the middle
    /// of the one after it.
    pub bracket: (f64, f64),
}

fn code_at(path: &IsotopyPath, u: Vec3, t: f64, lo: f64, hi: f64) -> Result<(f64, GaussCode)> {
    match project(&path.slice(t), u) {
        Ok(d) => return Ok((t, d.gauss_code)),
        Err(e) if t == 0.0 || t == 1.0 => return Err(e),
        Err(_) => {}
    }
    let room = 0.25 * (hi - lo);
    let mut delta = 1e-12;
    while delta <= room {
        for s in [t + delta, t - delta] {
            if s > lo && s < hi {
                if let Ok(d) = project(&path.slice(s), u) {
                    return Ok((s, d.gauss_code));
                }
            }
        }
        delta *= 10.0;
    }
    Err(Error::NonGeneric(format!("no generic projection near t = {t}")))
}

fn classify(time: f64, from: GaussCode, to: GaussCode) -> Result<ReidemeisterEvent> {
    let delta = to.crossing_count() as i32 - from.crossing_count() as i32;
    let kind = match delta.abs() {
        0 => MoveKind::R3,
        1 => MoveKind::R1,
        2 => MoveKind::R2,
        _ => {
            return Err(Error::UnresolvedEvents(format!(
                "crossing count changes by {delta} near t = {time} ({from} -> {to})"
            )))
        }
    };
    Ok(ReidemeisterEvent {
        time,
        kind,
        crossing_delta: delta,
        from,
        to,
        bracket: (time, time),
    })
}

#[allow(clippy::too_many_arguments)]
fn localize(
    path: &IsotopyPath,
    u: Vec3,
    ta: f64,
    ca: &GaussCode,
    tb: f64,
    cb: &GaussCode,
    depth: u32,
    out: &mut Vec<ReidemeisterEvent>,
) -> Result<()> {
    if tb - ta <= EVENT_TIME_TOLERANCE || depth > 80 {
        out.push(classify(0.5 * (ta + tb), ca.clone(), cb.clone())?);
        return Ok(());
    }
    let (tm, cm) = match code_at(path, u, 0.5 * (ta + tb), ta, tb) {
        Ok(x) => x,
        // Inside the degenerate instant itself.
        Err(_) if tb - ta <= 1e3 * EVENT_TIME_TOLERANCE => {
            out.push(classify(0.5 * (ta + tb), ca.clone(), cb.clone())?);
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    if cm == *ca {
        localize(path, u, tm, &cm, tb, cb, depth + 1, out)
    } else if cm == *cb {
        localize(path, u, ta, ca, tm, &cm, depth + 1, out)
    } else {
        localize(path, u, ta, ca, tm, &cm, depth + 1, out)?;
        localize(path, u, tm, &cm, tb, cb, depth + 1, out)
    }
}

/// Diagram changes along `path`, in time order. Samples `time_resolution`
/// uniform times (plus keyframes) and bisects every cell whose end codes
/// differ.
pub fn detect_events(path: &IsotopyPath, u: Vec3, time_resolution: usize) -> Result<Vec<ReidemeisterEvent>> {
    let samples = path.sample_times(time_resolution);
    let mut coded = Vec::with_capacity(samples.len());
    for (i, &t) in samples.iter().enumerate() {
        let lo = if i == 0 { 0.0 } else { samples[i - 1] };
        let hi = samples.get(i + 1).copied().unwrap_or(1.0);
        coded.push(code_at(path, u, t, lo, hi)?);
    }
    let mut events = Vec::new();
    for w in coded.windows(2) {
        let ((ta, ca), (tb, cb)) = (&w[0], &w[1]);
        if ca != cb {
            localize(path, u, *ta, ca, *tb, cb, 0, &mut events)?;
        }
    }
    let times: Vec<f64> = events.iter().map(|e| e.time).collect();
    for (i, e) in events.iter_mut().enumerate() {
        let before = if i == 0 { 0.0 } else { times[i - 1] };
        let after = times.get(i + 1).copied().unwrap_or(1.0);
        e.bracket = (0.5 * (before + e.time), 0.5 * (e.time + after));
    }
    Ok(events)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramEdge {
    pub from: GaussCode,
    pub to: GaussCode,
    pub weight: f64,
    pub witness_interval: (f64, f64),
    /// Index of the input path that realized the weight.
    pub witness_path: usize,
}

/// Diagrams as nodes, single Reidemeister moves as undirected edges weighted
/// by the least swept area seen over a bracketing time interval.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DiagramGraph {
    pub nodes: Vec<GaussCode>,
    pub edges: Vec<DiagramEdge>,
}

/// Builds the weighted graph from the events of every path. When `lambda`
/// is given, each path must pass [`check_admissible`] at that level.
pub fn build_graph(
    paths: &[IsotopyPath],
    u: Vec3,
    lambda: Option<f64>,
    time_resolution: usize,
) -> Result<DiagramGraph> {
    let mut nodes: BTreeSet<GaussCode> = BTreeSet::new();
    let mut edges: BTreeMap<(GaussCode, GaussCode), DiagramEdge> = BTreeMap::new();
    for (index, path) in paths.iter().enumerate() {
        if let Some(lambda) = lambda {
            let report = check_admissible(path, lambda, time_resolution);
            if !report.admissible {
                return Err(Error::InvalidPath(format!(
                    "path {index} is not admissible at level {lambda} (violation {})",
                    report.max_violation()
                )));
            }
        }
        nodes.insert(project(path.first(), u)?.gauss_code);
        nodes.insert(project(path.last(), u)?.gauss_code);
        for e in detect_events(path, u, time_resolution)? {
            let (ta, tb) = e.bracket;
            let weight = swept_area(&path.restrict(ta, tb)?).total;
            nodes.insert(e.from.clone());
            nodes.insert(e.to.clone());
            let key = if e.from <= e.to {
                (e.from.clone(), e.to.clone())
            } else {
                (e.to.clone(), e.from.clone())
            };
            let candidate = DiagramEdge {
                from: key.0.clone(),
                to: key.1.clone(),
                weight,
                witness_interval: (ta, tb),
                witness_path: index,
            };
            match edges.get(&key) {
                Some(existing) if existing.weight <= weight => {}
                _ => {
                    edges.insert(key, candidate);
                }
            }
        }
    }
    Ok(DiagramGraph {
        nodes: nodes.into_iter().collect(),
        edges: edges.into_values().collect(),
    })
}

/// Least total weight of a chain of edges joining `d0` to `d1`; `+∞` when
/// they are not connected.
pub fn diagram_distance(g: &DiagramGraph, d0: &GaussCode, d1: &GaussCode) -> Result<f64> {
    let mut graph: UnGraph<(), f64> = UnGraph::new_undirected();
    let index: BTreeMap<&GaussCode, _> = g.nodes.iter().map(|c| (c, graph.add_node(()))).collect();
    let lookup = |c: &GaussCode| index.get(c).copied().ok_or_else(|| Error::UnknownNode(c.to_string()));
    let (a, b) = (lookup(d0)?, lookup(d1)?);
    for e in &g.edges {
        graph.add_edge(lookup(&e.from)?, lookup(&e.to)?, e.weight);
    }
    let dist = dijkstra(&graph, a, Some(b), |e| *e.weight());
    Ok(dist.get(&b).copied().unwrap_or(f64::INFINITY))
}
