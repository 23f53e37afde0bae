//! Discrete isotopies: keyframed polygons with linear interpolation in time,
//! and the swept area of their ruled trace surfaces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knot::PolygonalKnot;
use crate::quadrature::{adaptive_gauss_legendre, gauss_legendre_32};
use crate::vec3::{RigidMotion, Vec3};

/// Absolute tolerance of the time integral over one keyframe interval.
pub const INTERVAL_TOLERANCE: f64 = 1e-10;
/// Maximum bisection depth of the time integral.
pub const MAX_DEPTH: u32 = 20;
/// Keyframes whose vertices differ by less than this are considered equal
/// when concatenating.
pub const JOIN_TOLERANCE: f64 = 1e-12;

/// A piecewise-linear path of labelled polygons on `t ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IsotopyFile", into = "IsotopyFile")]
pub struct IsotopyPath {
    times: Vec<f64>,
    keyframes: Vec<PolygonalKnot>,
}

/// On-disk form: `{"times": [...], "keyframes": [{"vertices": ...}, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsotopyFile {
    pub times: Vec<f64>,
    pub keyframes: Vec<PolygonalKnot>,
}

impl TryFrom<IsotopyFile> for IsotopyPath {
    type Error = Error;
    fn try_from(f: IsotopyFile) -> Result<Self> {
        IsotopyPath::new(f.times, f.keyframes)
    }
}

impl From<IsotopyPath> for IsotopyFile {
    fn from(p: IsotopyPath) -> Self {
        IsotopyFile {
            times: p.times,
            keyframes: p.keyframes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweptAreaResult {
    pub total: f64,
    pub per_interval: Vec<f64>,
    pub per_face_max: f64,
}

impl IsotopyPath {
    pub fn new(times: Vec<f64>, keyframes: Vec<PolygonalKnot>) -> Result<Self> {
        if keyframes.len() < 2 {
            return Err(Error::InvalidPath("need at least two keyframes".into()));
        }
        if times.len() != keyframes.len() {
            return Err(Error::InvalidPath(format!(
                "{} times for {} keyframes",
                times.len(),
                keyframes.len()
            )));
        }
        if times[0] != 0.0 || *times.last().unwrap() != 1.0 {
            return Err(Error::InvalidPath("times must start at 0 and end at 1".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidPath("times must be strictly increasing".into()));
        }
        let n = keyframes[0].len();
        if let Some(k) = keyframes.iter().position(|p| p.len() != n) {
            return Err(Error::InvalidPath(format!(
                "keyframe {k} has {} vertices, expected {n}",
                keyframes[k].len()
            )));
        }
        Ok(IsotopyPath { times, keyframes })
    }

    /// Keyframes at uniformly spaced times.
    pub fn uniform(keyframes: Vec<PolygonalKnot>) -> Result<Self> {
        let m = keyframes.len().max(2) - 1;
        let times = (0..keyframes.len())
            .map(|k| if k == m { 1.0 } else { k as f64 / m as f64 })
            .collect();
        Self::new(times, keyframes)
    }

    /// Single interval from `a` to `b`.
    pub fn linear(a: PolygonalKnot, b: PolygonalKnot) -> Result<Self> {
        Self::new(vec![0.0, 1.0], vec![a, b])
    }

    /// Constant path at `p`.
    pub fn constant(p: PolygonalKnot) -> Self {
        IsotopyPath {
            times: vec![0.0, 1.0],
            keyframes: vec![p.clone(), p],
        }
    }

    /// Straight-line interpolation from `a` to `b` with `count` evenly
    /// spaced keyframes (interior ones unvalidated).
    pub fn interpolated(a: &PolygonalKnot, b: &PolygonalKnot, count: usize) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidPath("endpoints have different vertex counts".into()));
        }
        let count = count.max(2);
        let keyframes = (0..count)
            .map(|k| {
                if k == 0 {
                    a.clone()
                } else if k == count - 1 {
                    b.clone()
                } else {
                    lerp_knot(a, b, k as f64 / (count - 1) as f64)
                }
            })
            .collect();
        Self::uniform(keyframes)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn keyframes(&self) -> &[PolygonalKnot] {
        &self.keyframes
    }

    /// Skips validation; keyframes may be non-embedded.
    pub(crate) fn from_parts_unchecked(times: Vec<f64>, keyframes: Vec<PolygonalKnot>) -> Self {
        IsotopyPath { times, keyframes }
    }

    pub fn first(&self) -> &PolygonalKnot {
        &self.keyframes[0]
    }

    pub fn last(&self) -> &PolygonalKnot {
        self.keyframes.last().unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.keyframes[0].len()
    }

    pub fn interval_count(&self) -> usize {
        self.keyframes.len() - 1
    }

    /// Keyframe interval containing `t` and the local parameter in it.
    pub fn locate(&self, t: f64) -> (usize, f64) {
        let t = t.clamp(0.0, 1.0);
        let k = match self.times.partition_point(|&x| x <= t) {
            0 => 0,
            p => (p - 1).min(self.interval_count() - 1),
        };
        let (t0, t1) = (self.times[k], self.times[k + 1]);
        (k, ((t - t0) / (t1 - t0)).clamp(0.0, 1.0))
    }

    /// The polygon at time `t` (not validated; may fail to be embedded).
    pub fn slice(&self, t: f64) -> PolygonalKnot {
        let (k, s) = self.locate(t);
        if s == 0.0 {
            return self.keyframes[k].clone();
        }
        if s == 1.0 {
            return self.keyframes[k + 1].clone();
        }
        lerp_knot(&self.keyframes[k], &self.keyframes[k + 1], s)
    }

    /// `count` uniform times in `[0, 1]` merged with the keyframe times.
    pub fn sample_times(&self, count: usize) -> Vec<f64> {
        let count = count.max(2);
        let mut ts: Vec<f64> = (0..count)
            .map(|i| i as f64 / (count - 1) as f64)
            .chain(self.times.iter().copied())
            .collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        ts
    }

    /// Runs `self` then `other` on `[0, ½]` and `[½, 1]`.
    pub fn concatenate(&self, other: &IsotopyPath) -> Result<IsotopyPath> {
        if self.vertex_count() != other.vertex_count() {
            return Err(Error::InvalidPath("paths have different vertex counts".into()));
        }
        let gap = self.last().max_vertex_distance(other.first());
        if gap > JOIN_TOLERANCE {
            return Err(Error::EndpointMismatch(gap));
        }
        let mut times: Vec<f64> = self.times.iter().map(|t| 0.5 * t).collect();
        let mut keyframes = self.keyframes.clone();
        for (t, k) in other.times.iter().zip(&other.keyframes).skip(1) {
            times.push(if *t == 1.0 { 1.0 } else { 0.5 + 0.5 * t });
            keyframes.push(k.clone());
        }
        IsotopyPath::new(times, keyframes)
    }

    /// The same motion run backwards.
    pub fn reverse(&self) -> IsotopyPath {
        let times = self.times.iter().rev().map(|t| 1.0 - t).collect();
        let keyframes = self.keyframes.iter().rev().cloned().collect();
        IsotopyPath { times, keyframes }
    }

    /// Splits every keyframe interval into `factor` equal pieces.
    pub fn refine(&self, factor: usize) -> IsotopyPath {
        if factor <= 1 {
            return self.clone();
        }
        let mut times = Vec::with_capacity(self.interval_count() * factor + 1);
        let mut keyframes = Vec::with_capacity(times.capacity());
        for k in 0..self.interval_count() {
            let (t0, t1) = (self.times[k], self.times[k + 1]);
            times.push(t0);
            keyframes.push(self.keyframes[k].clone());
            for j in 1..factor {
                let s = j as f64 / factor as f64;
                times.push(t0 + (t1 - t0) * s);
                keyframes.push(lerp_knot(&self.keyframes[k], &self.keyframes[k + 1], s));
            }
        }
        times.push(1.0);
        keyframes.push(self.last().clone());
        IsotopyPath { times, keyframes }
    }

    /// The part of the path over `[ta, tb]`, reparametrized to `[0, 1]`.
    pub fn restrict(&self, ta: f64, tb: f64) -> Result<IsotopyPath> {
        if !(0.0 <= ta && ta < tb && tb <= 1.0) {
            return Err(Error::InvalidParameter(format!("bad restriction window [{ta}, {tb}]")));
        }
        let span = tb - ta;
        let mut times = vec![0.0];
        let mut keyframes = vec![self.slice(ta)];
        for (t, k) in self.times.iter().zip(&self.keyframes) {
            if *t > ta && *t < tb {
                let local = (t - ta) / span;
                if local > *times.last().unwrap() && local < 1.0 {
                    times.push(local);
                    keyframes.push(k.clone());
                }
            }
        }
        times.push(1.0);
        keyframes.push(self.slice(tb));
        Ok(IsotopyPath { times, keyframes })
    }

    /// Applies one rigid motion to every keyframe.
    pub fn transformed(&self, motion: &RigidMotion) -> IsotopyPath {
        IsotopyPath {
            times: self.times.clone(),
            keyframes: self.keyframes.iter().map(|k| k.transformed(motion)).collect(),
        }
    }
}

pub(crate) fn lerp_knot(a: &PolygonalKnot, b: &PolygonalKnot, s: f64) -> PolygonalKnot {
    PolygonalKnot::from_vertices_unchecked(
        a.vertices()
            .iter()
            .zip(b.vertices())
            .map(|(&x, &y)| x.lerp(y, s))
            .collect(),
    )
}

/// `∫₀¹ |e × ((1-u) w0 + u w1)| du`, exact.
///
/// The integrand is `|A + uD|` with `A = e × w0`, `D = e × (w1 - w0)`. When
/// `|D| ≤ |A|/4` the square root stays analytic well beyond `[0, 1]` and the
/// 32-point Gauss–Legendre rule is exact to rounding; otherwise the
/// antiderivative of `√(a u² + 2b u + c)` (asinh branch) is used, whose
/// arguments are then bounded so no cancellation occurs.
pub fn segment_area_integral(e: Vec3, w0: Vec3, w1: Vec3) -> f64 {
    norm_of_linear_integral(e.cross(w0), e.cross(w1 - w0))
}

/// `∫₀¹ |A + uD| du`.
pub(crate) fn norm_of_linear_integral(a_vec: Vec3, d_vec: Vec3) -> f64 {
    let a = d_vec.norm_squared();
    let c = a_vec.norm_squared();
    if a <= c / 16.0 {
        if a == 0.0 {
            return c.sqrt();
        }
        return gauss_legendre_32(0.0, 1.0, |u| (a_vec + d_vec * u).norm());
    }
    let b = a_vec.dot(d_vec);
    let x0 = b / a;
    let x1 = 1.0 + x0;
    let m = a_vec.cross(d_vec).norm_squared() / (a * a);
    let antiderivative = |x: f64| {
        if m > 0.0 {
            0.5 * (x * (x * x + m).sqrt() + m * (x / m.sqrt()).asinh())
        } else {
            0.5 * x * x.abs()
        }
    };
    a.sqrt() * (antiderivative(x1) - antiderivative(x0))
}

/// Area of the ruled face traced by an edge whose endpoints move linearly
/// by `dv0` and `dv1` while the edge vector goes from `e0` to `e1`.
pub(crate) fn face_area(e0: Vec3, e1: Vec3, dv0: Vec3, dv1: Vec3, tol: f64) -> f64 {
    if dv0 == Vec3::ZERO && dv1 == Vec3::ZERO {
        return 0.0;
    }
    let de = e1 - e0;
    if de == Vec3::ZERO {
        return segment_area_integral(e0, dv0, dv1);
    }
    adaptive_gauss_legendre(0.0, 1.0, tol, MAX_DEPTH, |tau| {
        segment_area_integral(e0 + de * tau, dv0, dv1)
    })
}

/// Swept area of one keyframe interval, and its largest face.
pub(crate) fn interval_area(a: &PolygonalKnot, b: &PolygonalKnot) -> (f64, f64) {
    let n = a.len();
    let tol = INTERVAL_TOLERANCE / n as f64;
    let mut total = 0.0;
    let mut face_max = 0.0f64;
    for i in 0..n {
        let face = edge_face_area(a, b, i, tol);
        total += face;
        face_max = face_max.max(face);
    }
    (total, face_max)
}

/// Area swept by edge `i` between keyframes `a` and `b`.
pub(crate) fn edge_face_area(a: &PolygonalKnot, b: &PolygonalKnot, i: usize, tol: f64) -> f64 {
    let dv0 = b.vertex(i) - a.vertex(i);
    let dv1 = b.vertex(i + 1) - a.vertex(i + 1);
    face_area(a.edge(i), b.edge(i), dv0, dv1, tol)
}

/// Area of the trace surface, counted with multiplicity.
pub fn swept_area(path: &IsotopyPath) -> SweptAreaResult {
    let mut per_interval = Vec::with_capacity(path.interval_count());
    let mut per_face_max = 0.0f64;
    for w in path.keyframes.windows(2) {
        let (area, face_max) = interval_area(&w[0], &w[1]);
        per_interval.push(area);
        per_face_max = per_face_max.max(face_max);
    }
    SweptAreaResult {
        total: per_interval.iter().sum(),
        per_interval,
        per_face_max,
    }
}

/// `Σ_i ∫₀¹ |e_i × ((1-u) w_i + u w_{i+1})| du`: the rate of swept area when
/// the vertices of `p` move with velocities `w`.
pub fn infinitesimal_seminorm(p: &PolygonalKnot, w: &[Vec3]) -> Result<f64> {
    if w.len() != p.len() {
        return Err(Error::InvalidParameter(format!(
            "{} velocities for {} vertices",
            w.len(),
            p.len()
        )));
    }
    let n = p.len();
    Ok((0..n)
        .map(|i| segment_area_integral(p.edge(i), w[i], w[(i + 1) % n]))
        .sum())
}
