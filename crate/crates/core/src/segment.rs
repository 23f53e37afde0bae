//! Closest-point queries between points and segments in R³.

use crate::vec3::Vec3;

/// Parameter in `[0, 1]` of the point on segment `a→b` closest to `p`.
pub fn project_point_param(p: Vec3, a: Vec3, b: Vec3) -> f64 {
    let d = b - a;
    let dd = d.norm_squared();
    if dd == 0.0 {
        return 0.0;
    }
    ((p - a).dot(d) / dd).clamp(0.0, 1.0)
}

pub fn point_segment_distance(p: Vec3, a: Vec3, b: Vec3) -> f64 {
    let s = project_point_param(p, a, b);
    p.distance(a.lerp(b, s))
}

/// Closest points between segments `p0→p1` and `q0→q1`.
///
/// Returns `(s, t, distance)` with the closest points at `p0 + s(p1-p0)` and
/// `q0 + t(q1-q0)`.
pub fn segment_segment_closest(p0: Vec3, p1: Vec3, q0: Vec3, q1: Vec3) -> (f64, f64, f64) {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = p0 - q0;
    let a = d1.norm_squared();
    let e = d2.norm_squared();
    let f = d2.dot(r);

    let (s, t) = if a == 0.0 && e == 0.0 {
        (0.0, 0.0)
    } else if a == 0.0 {
        (0.0, (f / e).clamp(0.0, 1.0))
    } else {
        let c = d1.dot(r);
        if e == 0.0 {
            ((-c / a).clamp(0.0, 1.0), 0.0)
        } else {
            let b = d1.dot(d2);
            let denom = a * e - b * b;
            let mut s = if denom > 1e-14 * a * e {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut t = (b * s + f) / e;
            if t < 0.0 {
                t = 0.0;
                s = (-c / a).clamp(0.0, 1.0);
            } else if t > 1.0 {
                t = 1.0;
                s = ((b - c) / a).clamp(0.0, 1.0);
            }
            (s, t)
        }
    };
    let dist = (p0 + d1 * s).distance(q0 + d2 * t);
    (s, t, dist)
}

pub fn segment_segment_distance(p0: Vec3, p1: Vec3, q0: Vec3, q1: Vec3) -> f64 {
    segment_segment_closest(p0, p1, q0, q1).2
}
