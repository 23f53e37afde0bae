#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ropesweep_core::corpus::{ellipse_polygon, random_perturbed, square_polygon, trefoil_polygon};
use ropesweep_core::knot::regular_polygon_vertices;
use ropesweep_core::{IsotopyPath, PolygonalKnot, RigidMotion, Vec3};

pub fn ngon(n: usize, r: f64) -> PolygonalKnot {
    PolygonalKnot::new(regular_polygon_vertices(n, r)).unwrap()
}

/// A mixed corpus: regular polygons, ellipses, squares, trefoils and
/// random perturbations, all embedded.
pub fn corpus() -> Vec<PolygonalKnot> {
    let mut out = Vec::new();
    for n in [3, 4, 5, 7, 12, 32, 64, 128] {
        out.push(ngon(n, 1.0 + n as f64 / 50.0));
    }
    for (a, b, n) in [(2.0, 1.5, 64), (3.0, 1.0, 48), (1.2, 1.0, 20), (5.0, 0.5, 100)] {
        out.push(ellipse_polygon(a, b, n).unwrap());
    }
    for (side, per) in [(2.0, 1), (3.0, 2), (1.0, 5)] {
        out.push(square_polygon(side, per).unwrap());
    }
    for (n, s) in [(24, 1.0), (48, 1.5), (60, 0.7), (96, 2.0), (120, 1.0)] {
        out.push(trefoil_polygon(n, s).unwrap());
    }
    for seed in 0..30u64 {
        let n = 5 + (seed as usize * 7) % 60;
        out.push(random_perturbed(n, 3.0, 0.1 + 0.05 * (seed % 10) as f64, seed).unwrap());
    }
    out
}

/// Random polygon with unit-free scale: a perturbed regular polygon with a
/// random rigid motion applied.
pub fn random_knot(rng: &mut ChaCha8Rng, n: usize) -> PolygonalKnot {
    let amp = rng.random_range(0.0..0.8);
    let seed = rng.random_range(0..u64::MAX);
    let k = random_perturbed(n, rng.random_range(2.0..5.0), amp, seed).unwrap();
    k.transformed(&random_motion(rng))
}

pub fn random_motion(rng: &mut ChaCha8Rng) -> RigidMotion {
    let axis = Vec3::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    );
    let axis = axis.normalized().unwrap_or(Vec3::Z);
    RigidMotion::rotation(axis, rng.random_range(-PI..PI)).with_translation(Vec3::new(
        rng.random_range(-10.0..10.0),
        rng.random_range(-10.0..10.0),
        rng.random_range(-10.0..10.0),
    ))
}

/// Random path with `m` keyframes obtained by jittering a base polygon and
/// keeping only embedded keyframes.
pub fn random_path(rng: &mut ChaCha8Rng, n: usize, m: usize) -> IsotopyPath {
    let base = random_knot(rng, n);
    let mut frames = vec![base.clone()];
    while frames.len() < m {
        let prev = frames.last().unwrap();
        let v: Vec<Vec3> = prev
            .vertices()
            .iter()
            .map(|p| {
                *p + Vec3::new(
                    rng.random_range(-0.3..0.3),
                    rng.random_range(-0.3..0.3),
                    rng.random_range(-0.3..0.3),
                )
            })
            .collect();
        if let Ok(k) = PolygonalKnot::new(v) {
            frames.push(k);
        }
    }
    let mut times: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..1.0)).collect();
    times.sort_by(f64::total_cmp);
    times[0] = 0.0;
    times[m - 1] = 1.0;
    times.dedup();
    if times.len() < m {
        times = (0..m).map(|i| i as f64 / (m - 1) as f64).collect();
    }
    IsotopyPath::new(times, frames).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Straight strand along the x axis with one curl of projected radius `rho`
/// (a prolate trochoid arc), closed by a rectangle below.
pub fn curl_knot(rho: f64, c: f64, h: f64, samples: usize, reach: f64) -> PolygonalKnot {
    let depth = reach;
    let mut v = vec![Vec3::new(-reach, 0.0, 0.0)];
    for k in 0..=samples {
        let phi = 2.0 * PI * k as f64 / samples as f64;
        v.push(Vec3::new(c * phi + rho * phi.sin(), rho * (1.0 - phi.cos()), h * phi.sin()));
    }
    v.push(Vec3::new(reach, 0.0, 0.0));
    v.push(Vec3::new(reach, -depth, 0.0));
    v.push(Vec3::new(-reach, -depth, 0.0));
    PolygonalKnot::new(v).unwrap()
}

/// Removes a curl of projected radius `rho` by shrinking it radially
/// during `[0.4, 0.6]`: one R1 move.
pub fn r1_removal(rho: f64) -> IsotopyPath {
    let c = 0.005 * rho;
    let h = 0.5 * rho;
    let reach = 3.0 * rho + 1.0;
    let full = curl_knot(rho, c, h, 64, reach);
    let flat = curl_knot(0.0, c, h, 64, reach);
    IsotopyPath::new(vec![0.0, 0.4, 0.6, 1.0], vec![full.clone(), full, flat.clone(), flat]).unwrap()
}

/// A V-shaped finger at height `h` pushed down across the bottom edge of a
/// rectangle: one R2 move.
pub fn finger_knot(tip_y: f64, h: f64, width: f64) -> PolygonalKnot {
    let (l, d) = (3.0, 2.0);
    PolygonalKnot::new(vec![
        Vec3::new(-l, 0.0, 0.0),
        Vec3::new(l, 0.0, 0.0),
        Vec3::new(l, d, 0.0),
        Vec3::new(width, d, 0.0),
        Vec3::new(0.0, tip_y, h),
        Vec3::new(-width, d, 0.0),
        Vec3::new(-l, d, 0.0),
    ])
    .unwrap()
}

pub fn r2_pass(h: f64, width: f64) -> IsotopyPath {
    let above = finger_knot(1.0, h, width);
    let below = finger_knot(-1.0, h, width);
    IsotopyPath::new(vec![0.0, 0.4, 0.6, 1.0], vec![above.clone(), above, below.clone(), below]).unwrap()
}

/// A trefoil turned rigidly about `axis` through `angle`.
pub fn trefoil_turn(axis: Vec3, angle: f64, keyframes: usize) -> IsotopyPath {
    let k = trefoil_polygon(48, 1.0).unwrap();
    let frames = (0..keyframes)
        .map(|i| k.transformed(&RigidMotion::rotation(axis, angle * i as f64 / (keyframes - 1) as f64)))
        .collect();
    IsotopyPath::uniform(frames).unwrap()
}

fn closest_on_segment(p: Vec3, a: Vec3, b: Vec3) -> Vec3 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return a;
    }
    a + d * ((p - a).dot(d) / len2).clamp(0.0, 1.0)
}

/// Chords between edges `ea` and `eb` that can be coordinatewise critical:
/// the common perpendicular if it meets both edges inside, every endpoint
/// against its foot on the other edge, every pair of endpoints, and the
/// feet of the sample points `x`, `y`.
fn local_candidates(k: &PolygonalKnot, ea: usize, eb: usize, x: Vec3, y: Vec3) -> Vec<(Vec3, Vec3)> {
    let (a0, a1) = k.edge_endpoints(ea);
    let (b0, b1) = k.edge_endpoints(eb);
    let (da, db) = (a1 - a0, b1 - b0);
    let w = a0 - b0;
    let (aa, ab, bb) = (da.dot(da), da.dot(db), db.dot(db));
    let det = aa * bb - ab * ab;
    let mut out = Vec::new();
    if det > 1e-14 * aa * bb {
        let s = (ab * db.dot(w) - bb * da.dot(w)) / det;
        let t = (aa * db.dot(w) - ab * da.dot(w)) / det;
        if (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&t) {
            out.push((a0 + da * s, b0 + db * t));
        }
    } else {
        // parallel: middle of the stretch of A facing B
        let (u0, u1) = ((b0 - a0).dot(da) / aa, (b1 - a0).dot(da) / aa);
        let (lo, hi) = (u0.min(u1).max(0.0), u0.max(u1).min(1.0));
        if lo <= hi {
            let x = a0 + da * (0.5 * (lo + hi));
            out.push((x, closest_on_segment(x, b0, b1)));
        }
    }
    for p in [a0, a1] {
        out.push((p, closest_on_segment(p, b0, b1)));
        for q in [b0, b1] {
            out.push((p, q));
        }
    }
    for q in [b0, b1] {
        out.push((closest_on_segment(q, a0, a1), q));
    }
    let xa = closest_on_segment(x, a0, a1);
    let yb = closest_on_segment(y, b0, b1);
    out.push((xa, closest_on_segment(xa, b0, b1)));
    out.push((closest_on_segment(yb, a0, a1), yb));
    out
}

/// Point at arclength offset `s` from the point at parameter `t` of edge `e`.
pub fn walk(k: &PolygonalKnot, e: usize, t: f64, s: f64) -> Vec3 {
    let n = k.len();
    let (mut e, mut t, mut s) = (e, t, s);
    loop {
        let len = k.edge(e).norm();
        let target = t * len + s;
        if target > len {
            s = target - len;
            e = (e + 1) % n;
            t = 0.0;
        } else if target < 0.0 {
            s = target;
            e = (e + n - 1) % n;
            t = 1.0;
        } else {
            let (a, b) = k.edge_endpoints(e);
            return a + (b - a) * (target / len);
        }
    }
}

pub fn param_on(k: &PolygonalKnot, e: usize, x: Vec3) -> f64 {
    let (a, b) = k.edge_endpoints(e);
    let d = b - a;
    ((x - a).dot(d) / d.dot(d)).clamp(0.0, 1.0)
}

/// Whether sliding either end a little along the curve never shortens the
/// chord.
pub fn locally_minimal(k: &PolygonalKnot, ex: usize, x: Vec3, ey: usize, y: Vec3) -> bool {
    let d = (x - y).norm();
    let tx = param_on(k, ex, x);
    let ty = param_on(k, ey, y);
    [1e-5, -1e-5, 1e-4, -1e-4].iter().all(|&h| {
        (walk(k, ex, tx, h) - y).norm() >= d - 1e-12 && (walk(k, ey, ty, h) - x).norm() >= d - 1e-12
    })
}
/// Closed edges containing sample `s` (sample `j·m` is vertex `j`).
fn sample_edges(n: usize, m: usize, s: usize) -> Vec<usize> {
    let e = s / m;
    if s.is_multiple_of(m) {
        vec![(e + n - 1) % n, e]
    } else {
        vec![e]
    }
}

fn non_adjacent(n: usize, a: usize, b: usize) -> bool {
    a != b && (a + 1) % n != b && (b + 1) % n != a
}

/// Dense-sampling oracle for the doubly-critical self-distance. Samples
/// `m` points per edge and keeps the pairs where the first point is a
/// discrete local minimum of the distance to the second. Each hit is
/// polished on the nearby edge pairs and accepted only if a direct slide
/// test confirms it: a chord is doubly critical exactly when sliding either
/// end alone cannot shorten it.
pub fn brute_force_dcsd(k: &PolygonalKnot, m: usize) -> f64 {
    let n = k.len();
    let total = n * m;
    let pts: Vec<Vec3> = (0..total)
        .map(|s| {
            let (a, b) = k.edge_endpoints(s / m);
            a + (b - a) * ((s % m) as f64 / m as f64)
        })
        .collect();
    let dist = |i: usize, j: usize| (pts[i % total] - pts[j % total]).norm();
    let mut best = f64::INFINITY;
    for i in 0..total {
        for j in 0..total {
            if i == j {
                continue;
            }
            let ok = sample_edges(n, m, i)
                .iter()
                .any(|&a| sample_edges(n, m, j).iter().any(|&b| non_adjacent(n, a, b)));
            if !ok {
                continue;
            }
            let d = dist(i, j);
            // along the first coordinate only; near flat saddles the two
            // discrete best responses need not meet on the grid
            let local_min = [total - 1, 1]
                .iter()
                .all(|&di| dist(i + di, j) >= d - 1e-12 * d.max(1.0));
            if !local_min {
                continue;
            }
            let near = |e: usize| [(e + n - 1) % n, e, (e + 1) % n];
            for ea in near(i / m) {
                for eb in near(j / m) {
                    if !non_adjacent(n, ea, eb) {
                        continue;
                    }
                    for (x, y) in local_candidates(k, ea, eb, pts[i], pts[j]) {
                        if locally_minimal(k, ea, x, eb, y) {
                            best = best.min((x - y).norm());
                        }
                    }
                }
            }
        }
    }
    best
}
