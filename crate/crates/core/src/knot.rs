//! Labelled closed polygons and their static functionals.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::meb::min_enclosing_ball;
use crate::segment::segment_segment_distance;
use crate::vec3::{RigidMotion, Vec3};

/// Non-adjacent edges closer than this are treated as intersecting.
pub const EMBED_TOLERANCE: f64 = 1e-9;
/// Edges shorter than this are rejected.
pub const MIN_EDGE_LENGTH: f64 = 1e-12;

/// A closed polygon with labelled vertices `v_0, …, v_{N-1}`; edge `i` runs
/// from `v_i` to `v_{i+1 mod N}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KnotFile", into = "KnotFile")]
pub struct PolygonalKnot {
    vertices: Vec<Vec3>,
}

/// On-disk form: `{"vertices": [[x, y, z], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KnotFile {
    pub vertices: Vec<Vec3>,
}

impl TryFrom<KnotFile> for PolygonalKnot {
    type Error = Error;
    fn try_from(f: KnotFile) -> Result<Self> {
        PolygonalKnot::new(f.vertices)
    }
}

impl From<PolygonalKnot> for KnotFile {
    fn from(k: PolygonalKnot) -> Self {
        KnotFile {
            vertices: k.vertices,
        }
    }
}

impl PolygonalKnot {
    /// Builds a knot, checking vertex count, finiteness, edge lengths and
    /// embeddedness.
    pub fn new(vertices: Vec<Vec3>) -> Result<Self> {
        let knot = Self::from_vertices_unchecked(vertices);
        knot.check_structure()?;
        knot.check_embedded()?;
        Ok(knot)
    }

    /// Builds a polygon without any validation. Used for interpolated time
    /// slices, whose validity is what admissibility checks measure.
    pub fn from_vertices_unchecked(vertices: Vec<Vec3>) -> Self {
        PolygonalKnot { vertices }
    }

    fn check_structure(&self) -> Result<()> {
        let n = self.vertices.len();
        if n < 3 {
            return Err(Error::InvalidKnot(format!("need at least 3 vertices, got {n}")));
        }
        if let Some(i) = self.vertices.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidKnot(format!("vertex {i} is not finite")));
        }
        for i in 0..n {
            let len = self.edge(i).norm();
            if len < MIN_EDGE_LENGTH {
                return Err(Error::InvalidKnot(format!(
                    "edge {i} has length {len:e} (vertices {i} and {} coincide)",
                    (i + 1) % n
                )));
            }
        }
        Ok(())
    }

    fn check_embedded(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a0, a1) = self.edge_endpoints(i);
                let (b0, b1) = self.edge_endpoints(j);
                let d = segment_segment_distance(a0, a1, b0, b1);
                if d <= EMBED_TOLERANCE {
                    return Err(Error::InvalidKnot(format!(
                        "edges {i} and {j} intersect (distance {d:e})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of vertices (equal to the number of edges).
    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    #[inline]
    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Vec3> {
        self.vertices
    }

    /// Vertex `i`, indices taken mod N.
    #[inline]
    pub fn vertex(&self, i: usize) -> Vec3 {
        self.vertices[i % self.vertices.len()]
    }

    /// Edge vector `v_{i+1} - v_i`.
    #[inline]
    pub fn edge(&self, i: usize) -> Vec3 {
        self.vertex(i + 1) - self.vertex(i)
    }

    #[inline]
    pub fn edge_endpoints(&self, i: usize) -> (Vec3, Vec3) {
        (self.vertex(i), self.vertex(i + 1))
    }

    /// Index of the edge before vertex `i`.
    #[inline]
    pub fn prev(&self, i: usize) -> usize {
        (i + self.len() - 1) % self.len()
    }

    /// Whether edges `i` and `j` are the same edge or share a vertex.
    #[inline]
    pub fn edges_adjacent(&self, i: usize, j: usize) -> bool {
        let n = self.len();
        i == j || (i + 1) % n == j || (j + 1) % n == i
    }

    pub fn length(&self) -> f64 {
        (0..self.len()).map(|i| self.edge(i).norm()).sum()
    }

    /// Turning angle at vertex `i`, in `[0, π]`.
    pub fn exterior_angle(&self, i: usize) -> f64 {
        let incoming = self.edge(self.prev(i));
        let outgoing = self.edge(i);
        incoming.angle_to(outgoing)
    }

    pub fn exterior_angles(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.exterior_angle(i)).collect()
    }

    /// Sum of exterior angles; the discrete total curvature.
    pub fn total_curvature(&self) -> f64 {
        (0..self.len()).map(|i| self.exterior_angle(i)).sum()
    }

    /// `½ Σ v_i × v_{i+1}`. For a closed polygon this is independent of the
    /// origin, and its component along a unit normal is the signed area of
    /// the projection to the plane with that normal.
    pub fn vector_area(&self) -> Vec3 {
        // Centering first keeps the cross products small for far-away knots.
        let c = self.centroid();
        (0..self.len())
            .map(|i| (self.vertex(i) - c).cross(self.vertex(i + 1) - c))
            .sum::<Vec3>()
            * 0.5
    }

    /// Shoelace signed area of the orthogonal projection to `plane`, with
    /// the orientation induced by its normal.
    pub fn projected_signed_area(&self, plane: &OrientedPlane) -> f64 {
        let (e1, e2) = plane.basis();
        let c = self.centroid();
        let proj = |v: Vec3| {
            let d = v - c;
            (d.dot(e1), d.dot(e2))
        };
        let twice: f64 = (0..self.len())
            .map(|i| {
                let (x0, y0) = proj(self.vertex(i));
                let (x1, y1) = proj(self.vertex(i + 1));
                x0 * y1 - x1 * y0
            })
            .sum();
        0.5 * twice
    }

    pub fn size(&self, kind: SizeFunctionalKind) -> f64 {
        match kind {
            SizeFunctionalKind::Diameter => {
                let mut best = 0.0f64;
                for (i, &a) in self.vertices.iter().enumerate() {
                    for &b in &self.vertices[i + 1..] {
                        best = best.max(a.distance(b));
                    }
                }
                best
            }
            SizeFunctionalKind::MinEnclosingBallRadius => min_enclosing_ball(&self.vertices).radius,
        }
    }

    /// Length over size.
    pub fn density(&self, kind: SizeFunctionalKind) -> Result<f64> {
        let d = self.size(kind);
        if !(d > 0.0) {
            return Err(Error::Degenerate(format!("{kind:?} of the polygon is {d}")));
        }
        Ok(self.length() / d)
    }

    /// Size over thickness.
    pub fn compression_radius(&self, kind: SizeFunctionalKind, thickness: f64) -> Result<f64> {
        if !(thickness > 0.0) {
            return Err(Error::Degenerate(format!("thickness {thickness} is not positive")));
        }
        let d = self.size(kind);
        if !(d > 0.0) {
            return Err(Error::Degenerate(format!("{kind:?} of the polygon is {d}")));
        }
        Ok(d / thickness)
    }

    pub fn centroid(&self) -> Vec3 {
        self.vertices.iter().copied().sum::<Vec3>() / self.len() as f64
    }

    pub fn transformed(&self, motion: &RigidMotion) -> Self {
        PolygonalKnot {
            vertices: self.vertices.iter().map(|&v| motion.apply(v)).collect(),
        }
    }

    pub fn translated(&self, t: Vec3) -> Self {
        PolygonalKnot {
            vertices: self.vertices.iter().map(|&v| v + t).collect(),
        }
    }

    /// Homothety about the origin.
    pub fn scaled(&self, factor: f64) -> Self {
        PolygonalKnot {
            vertices: self.vertices.iter().map(|&v| v * factor).collect(),
        }
    }

    /// Homothety about the centroid.
    pub fn scaled_about_centroid(&self, factor: f64) -> Self {
        let c = self.centroid();
        PolygonalKnot {
            vertices: self.vertices.iter().map(|&v| c + (v - c) * factor).collect(),
        }
    }

    /// Same polygon traversed backwards, starting from the same vertex.
    pub fn reversed(&self) -> Self {
        let n = self.len();
        PolygonalKnot {
            vertices: (0..n).map(|i| self.vertex((n - i) % n)).collect(),
        }
    }

    /// Largest vertexwise distance to another polygon with the same labelling.
    pub fn max_vertex_distance(&self, other: &Self) -> f64 {
        self.vertices
            .iter()
            .zip(&other.vertices)
            .map(|(a, b)| a.distance(*b))
            .fold(0.0, f64::max)
    }
}

/// An oriented plane through the origin, given by its unit normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedPlane {
    normal: Vec3,
}

impl OrientedPlane {
    /// Normalizes `normal`; fails for the zero vector.
    pub fn new(normal: Vec3) -> Result<Self> {
        normal
            .normalized()
            .map(|normal| OrientedPlane { normal })
            .ok_or_else(|| Error::InvalidParameter("plane normal must be nonzero".into()))
    }

    pub fn xy() -> Self {
        OrientedPlane { normal: Vec3::Z }
    }

    pub fn normal(&self) -> Vec3 {
        self.normal
    }

    /// Orthonormal in-plane basis `(e1, e2)` with `e1 × e2 = normal`.
    pub fn basis(&self) -> (Vec3, Vec3) {
        let n = self.normal;
        if (n - Vec3::Z).norm() == 0.0 {
            return (Vec3::X, Vec3::Y);
        }
        let e1 = n.any_orthogonal();
        let e2 = n.cross(e1);
        (e1, e2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SizeFunctionalKind {
    Diameter,
    MinEnclosingBallRadius,
}

/// Vertices of the regular `n`-gon of circumradius `r` in the xy-plane,
/// counterclockwise from `(r, 0, 0)`.
pub fn regular_polygon_vertices(n: usize, r: f64) -> Vec<Vec3> {
    (0..n)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / n as f64;
            Vec3::new(r * a.cos(), r * a.sin(), 0.0)
        })
        .collect()
}
