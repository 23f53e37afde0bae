mod common;

use std::f64::consts::PI;

use common::*;
use proptest::prelude::*;
use rand::RngExt;
use ropesweep_core::calibration::{projected_area_bound, sup_plane_bound};
use ropesweep_core::meb::min_enclosing_ball;
use ropesweep_core::*;

fn knot_from(seed: u64, n: usize) -> PolygonalKnot {
    random_knot(&mut rng(seed), n)
}

fn unit(seed: u64) -> Vec3 {
    let mut r = rng(seed ^ 0x5eed);
    loop {
        let v = Vec3::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        if let Some(u) = v.normalized().filter(|_| v.norm() > 0.1) {
            return u;
        }
    }
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euclidean_invariance_of_static_functionals(seed in any::<u64>(), n in 3usize..24) {
        let k = knot_from(seed, n);
        let m = random_motion(&mut rng(seed.wrapping_add(1)));
        let moved = k.transformed(&m);
        prop_assert!(close(k.length(), moved.length(), 1e-9));
        prop_assert!(close(k.total_curvature(), moved.total_curvature(), 1e-9));
        for kind in [SizeFunctionalKind::Diameter, SizeFunctionalKind::MinEnclosingBallRadius] {
            prop_assert!(close(k.size(kind), moved.size(kind), 1e-9));
        }
        let (t0, t1) = (thickness(&k).thickness, thickness(&moved).thickness);
        prop_assert!(close(t0, t1, 1e-9), "{} vs {}", t0, t1);
        // vector area rotates with the knot
        let va = m.rotate(k.vector_area());
        prop_assert!((va - moved.vector_area()).norm() <= 1e-9 * va.norm().max(1.0));
    }

    #[test]
    fn vector_area_is_translation_invariant(seed in any::<u64>(), n in 3usize..24, tx in -50.0..50.0f64, ty in -50.0..50.0f64, tz in -50.0..50.0f64) {
        let k = knot_from(seed, n);
        let a = k.vector_area();
        let b = k.translated(Vec3::new(tx, ty, tz)).vector_area();
        prop_assert!((a - b).norm() <= 1e-10 * a.norm().max(1.0) * (1.0 + tx.abs() + ty.abs() + tz.abs()));
    }

    #[test]
    fn projected_area_is_normal_dot_vector_area(seed in any::<u64>(), n in 3usize..24) {
        let k = knot_from(seed, n);
        let plane = OrientedPlane::new(unit(seed)).unwrap();
        let direct = k.projected_signed_area(&plane);
        let via = plane.normal().dot(k.vector_area());
        prop_assert!((direct - via).abs() <= 1e-10 * via.abs().max(1.0));
    }

    #[test]
    fn fenchel_floor(seed in any::<u64>(), n in 3usize..40) {
        prop_assert!(knot_from(seed, n).total_curvature() >= 2.0 * PI - 1e-9);
    }

    #[test]
    fn factorization_identity(seed in any::<u64>(), n in 3usize..24) {
        let k = knot_from(seed, n);
        let thi = thickness(&k).thickness;
        let rop = ropelength(&k).unwrap();
        for kind in [SizeFunctionalKind::Diameter, SizeFunctionalKind::MinEnclosingBallRadius] {
            let lhs = k.density(kind).unwrap() * k.compression_radius(kind, thi).unwrap();
            prop_assert!((lhs - rop).abs() <= 1e-12 * rop);
        }
    }

    #[test]
    fn thickness_branches_and_scaling(seed in any::<u64>(), n in 3usize..24, lambda in 0.1..10.0f64) {
        let k = knot_from(seed, n);
        let b = thickness(&k);
        let minrad = (0..k.len()).map(|i| vertex_radius(&k, i)).fold(f64::INFINITY, f64::min);
        let half = 0.5 * dcsd(&k);
        prop_assert!(b.thickness > 0.0);
        prop_assert!(b.thickness <= minrad && b.thickness <= half);
        prop_assert!(b.thickness == minrad || b.thickness == half);
        let scaled = thickness(&k.scaled(lambda)).thickness;
        prop_assert!(close(scaled, lambda * b.thickness, 1e-10));
        prop_assert!(close(ropelength(&k.scaled(lambda)).unwrap(), ropelength(&k).unwrap(), 1e-10));
    }

    #[test]
    fn enclosing_ball_contains_vertices(seed in any::<u64>(), n in 3usize..60) {
        let k = knot_from(seed, n);
        let ball = min_enclosing_ball(k.vertices());
        let far = k.vertices().iter().map(|v| v.distance(ball.center)).fold(0.0, f64::max);
        prop_assert!(far <= ball.radius * (1.0 + 1e-9));
        // some vertex lies on the boundary and the radius is at least half the diameter
        prop_assert!(far >= ball.radius * (1.0 - 1e-9));
        prop_assert!(ball.radius >= 0.5 * k.size(SizeFunctionalKind::Diameter) * (1.0 - 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn swept_area_is_nonnegative_and_reversal_invariant(seed in any::<u64>(), n in 3usize..16, m in 2usize..6) {
        let p = random_path(&mut rng(seed), n, m);
        let a = swept_area(&p);
        prop_assert!(a.total >= 0.0);
        prop_assert!((a.total - a.per_interval.iter().sum::<f64>()).abs() <= 1e-12 * a.total.max(1.0));
        prop_assert!((swept_area(&p.reverse()).total - a.total).abs() <= 1e-10);
    }

    #[test]
    fn concatenation_adds(seed in any::<u64>(), n in 3usize..16, m in 2usize..5) {
        let mut r = rng(seed);
        let p1 = random_path(&mut r, n, m);
        let p2 = p1.reverse();
        let total = swept_area(&p1.concatenate(&p2).unwrap()).total;
        prop_assert!((total - 2.0 * swept_area(&p1).total).abs() <= 1e-10);
        let still = IsotopyPath::constant(p1.last().clone());
        prop_assert!((swept_area(&p1.concatenate(&still).unwrap()).total - swept_area(&p1).total).abs() <= 1e-10);
    }

    #[test]
    fn swept_area_is_euclidean_invariant(seed in any::<u64>(), n in 3usize..16, m in 2usize..5) {
        let mut r = rng(seed);
        let p = random_path(&mut r, n, m);
        let moved = p.transformed(&random_motion(&mut r));
        prop_assert!((swept_area(&moved).total - swept_area(&p).total).abs() <= 1e-9);
    }

    #[test]
    fn refinement_preserves_area(seed in any::<u64>(), n in 3usize..12, factor in 1usize..5) {
        let p = random_path(&mut rng(seed), n, 3);
        let fine = p.refine(factor);
        prop_assert_eq!(fine.interval_count(), factor * p.interval_count());
        prop_assert!((swept_area(&fine).total - swept_area(&p).total).abs() <= 1e-10);
    }

    #[test]
    fn seminorm_is_the_rate_of_swept_area(seed in any::<u64>(), n in 3usize..16) {
        let mut r = rng(seed);
        let k = random_knot(&mut r, n);
        let w: Vec<Vec3> = (0..n)
            .map(|_| Vec3::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
            .collect();
        let delta = 1e-4;
        let moved = PolygonalKnot::new(k.vertices().iter().zip(&w).map(|(v, d)| *v + *d * delta).collect()).unwrap();
        let rate = swept_area(&IsotopyPath::linear(k.clone(), moved).unwrap()).total / delta;
        let s = infinitesimal_seminorm(&k, &w).unwrap();
        prop_assert!((rate - s).abs() <= 1e-3 * s, "rate {} seminorm {}", rate, s);
    }

    #[test]
    fn admissibility_is_monotone_in_level(seed in any::<u64>(), n in 4usize..12, grow in 1.0..2.0f64) {
        let mut r = rng(seed);
        let p = random_path(&mut r, n, 3);
        let thin = p.keyframes().iter().map(|k| thickness(k).thickness).fold(f64::INFINITY, f64::min);
        let p = IsotopyPath::new(p.times().to_vec(), p.keyframes().iter().map(|k| k.scaled(1.1 / thin)).collect()).unwrap();
        let longest = p.keyframes().iter().map(|k| k.length()).fold(0.0, f64::max);
        let level = longest * r.random_range(0.95..1.1);
        if check_admissible(&p, level, 24).admissible {
            prop_assert!(check_admissible(&p, level * grow, 24).admissible);
        }
    }

    #[test]
    fn calibration_bounds(seed in any::<u64>(), n in 3usize..16) {
        let mut r = rng(seed);
        let g0 = random_knot(&mut r, n);
        let g1 = random_knot(&mut r, n);
        let g2 = random_knot(&mut r, n);
        let sup01 = sup_plane_bound(&g0, &g1).unwrap().value;
        prop_assert_eq!(sup01, sup_plane_bound(&g1, &g0).unwrap().value);
        prop_assert_eq!(sup_plane_bound(&g0, &g0).unwrap().value, 0.0);
        for i in 0..20 {
            let plane = OrientedPlane::new(unit(seed.wrapping_add(i))).unwrap();
            let b = projected_area_bound(&g0, &g1, &plane).unwrap().value;
            prop_assert!(b <= sup01 + 1e-12 * sup01.max(1.0));
            prop_assert_eq!(b, projected_area_bound(&g1, &g0, &plane).unwrap().value);
        }
        let sup02 = sup_plane_bound(&g0, &g2).unwrap().value;
        let sup12 = sup_plane_bound(&g1, &g2).unwrap().value;
        prop_assert!(sup02 <= sup01 + sup12 + 1e-12 * (sup01 + sup12).max(1.0));
    }

    #[test]
    fn json_round_trip_is_bit_exact(seed in any::<u64>(), n in 3usize..16, m in 2usize..5) {
        let p = random_path(&mut rng(seed), n, m);
        let back: IsotopyPath = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(&back, &p);
        let k = p.last();
        let again: PolygonalKnot = serde_json::from_str(&serde_json::to_string(k).unwrap()).unwrap();
        prop_assert_eq!(&again, k);
    }

    #[test]
    fn projection_commutes_with_rotation(seed in any::<u64>(), angle in -PI..PI) {
        let k = ropesweep_core::corpus::trefoil_polygon(48, 1.0).unwrap();
        let u = unit(seed);
        let rot = RigidMotion::rotation(unit(seed.wrapping_add(7)), angle);
        if let Ok(d) = project(&k, u) {
            let turned = project(&k.transformed(&rot), rot.rotate(u)).unwrap();
            prop_assert_eq!(turned.gauss_code, d.gauss_code);
        }
    }
}

#[test]
fn sampled_planes_never_beat_the_closed_form() {
    let mut r = rng(3);
    let g0 = random_knot(&mut r, 12);
    let g1 = random_knot(&mut r, 12);
    let sup = sup_plane_bound(&g0, &g1).unwrap().value;
    let mut best: f64 = 0.0;
    for i in 0..10_000 {
        let plane = OrientedPlane::new(unit(i)).unwrap();
        let b = projected_area_bound(&g0, &g1, &plane).unwrap().value;
        assert!(b <= sup + 1e-9);
        best = best.max(b);
    }
    // dense sampling comes close to the supremum
    assert!(best >= 0.99 * sup);
}

#[test]
fn trefoils_exceed_twice_the_fenchel_floor() {
    for (n, s) in [(24, 1.0), (48, 1.5), (120, 1.0)] {
        let t = ropesweep_core::corpus::trefoil_polygon(n, s).unwrap().total_curvature();
        assert!(t >= 4.0 * PI - 1e-9, "N={n}: {t}");
    }
}

#[test]
fn seminorm_vanishes_only_at_zero() {
    let k = ngon(7, 2.0);
    assert_eq!(infinitesimal_seminorm(&k, &[Vec3::ZERO; 7]).unwrap(), 0.0);
    for i in 0..7 {
        let mut w = vec![Vec3::ZERO; 7];
        w[i] = Vec3::Z * 1e-6;
        assert!(infinitesimal_seminorm(&k, &w).unwrap() > 0.0);
    }
}
