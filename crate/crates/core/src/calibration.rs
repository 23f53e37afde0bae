//! Projected-area lower bounds and closed-form reference distances.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knot::{OrientedPlane, PolygonalKnot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    LowerBound,
    UpperBound,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub value: f64,
    pub kind: BoundKind,
    pub witness: String,
}

impl Bound {
    fn new(value: f64, kind: BoundKind, witness: String) -> Self {
        Bound { value, kind, witness }
    }
}

fn check_same_len(g0: &PolygonalKnot, g1: &PolygonalKnot) -> Result<()> {
    if g0.len() != g1.len() {
        return Err(Error::InvalidParameter(format!(
            "endpoints have {} and {} vertices",
            g0.len(),
            g1.len()
        )));
    }
    Ok(())
}

/// `|A_Π(γ1) − A_Π(γ0)|` for a single oriented plane.
pub fn projected_area_bound(g0: &PolygonalKnot, g1: &PolygonalKnot, plane: &OrientedPlane) -> Result<Bound> {
    check_same_len(g0, g1)?;
    let value = (g1.projected_signed_area(plane) - g0.projected_signed_area(plane)).abs();
    let n = plane.normal();
    Ok(Bound::new(
        value,
        BoundKind::LowerBound,
        format!("plane normal ({}, {}, {})", n.x, n.y, n.z),
    ))
}

/// Supremum of [`projected_area_bound`] over all oriented planes. The
/// projected area is linear in the normal, so the supremum is the norm of
/// the vector-area difference, attained at its direction.
pub fn sup_plane_bound(g0: &PolygonalKnot, g1: &PolygonalKnot) -> Result<Bound> {
    check_same_len(g0, g1)?;
    let diff = g1.vector_area() - g0.vector_area();
    let value = diff.norm();
    let witness = match diff.normalized() {
        Some(n) => format!("plane normal ({}, {}, {})", n.x, n.y, n.z),
        None => "equal vector areas, every plane".to_string(),
    };
    Ok(Bound::new(value, BoundKind::LowerBound, witness))
}

/// Distance between round circles of radii 1 and `r` in the unknot
/// component: `π(r² − 1)`, valid once `Λ ≥ 2πr`.
pub fn circle_distance_oracle(r: f64) -> Result<Bound> {
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("circle oracle needs R ≥ 1, got {r}")));
    }
    Ok(Bound::new(
        PI * (r * r - 1.0),
        BoundKind::Exact,
        format!("pi (R^2 - 1), R = {r}, level >= {}", 2.0 * PI * r),
    ))
}

/// Distance between the ellipses with semi-axes `(a, b)` and `(ra, rb)`:
/// `π a b (r² − 1)`.
pub fn ellipse_distance_oracle(a: f64, b: f64, r: f64) -> Result<Bound> {
    check_ellipse(a, b)?;
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("ellipse oracle needs R ≥ 1, got {r}")));
    }
    let admissible = b * b / a >= 1.0;
    Ok(Bound::new(
        PI * a * b * (r * r - 1.0),
        BoundKind::Exact,
        format!(
            "pi a b (R^2 - 1), a = {a}, b = {b}, R = {r}; b^2/a = {} ({})",
            b * b / a,
            if admissible { "unit-thick at scale 1" } else { "below unit thickness at scale 1" }
        ),
    ))
}

/// Thickness of the smooth ellipse `r·(a cos s, b sin s)`: `r b² / a`.
pub fn ellipse_thickness_oracle(a: f64, b: f64, r: f64) -> Result<f64> {
    check_ellipse(a, b)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("scale must be positive, got {r}")));
    }
    Ok(r * b * b / a)
}

fn check_ellipse(a: f64, b: f64) -> Result<()> {
    if !(b > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!("need b > 0, got b = {b}")));
    }
    if a < b {
        return Err(Error::InvalidParameter(format!("need a ≥ b, got a = {a}, b = {b}")));
    }
    Ok(())
}
