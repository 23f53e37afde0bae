//! Smallest enclosing ball of a finite point set in R³ (move-to-front
//! incremental construction).

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::vec3::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub center: Vec3,
    pub radius: f64,
}

impl Ball {
    fn contains(&self, p: Vec3) -> bool {
        self.radius >= 0.0 && p.distance(self.center) <= self.radius + 1e-12 * self.radius.max(1.0)
    }

    fn from_two(a: Vec3, b: Vec3) -> Ball {
        Ball {
            center: (a + b) * 0.5,
            radius: a.distance(b) * 0.5,
        }
    }

    /// Smallest ball with `a`, `b`, `c` on its boundary (their circumcircle).
    fn from_three(a: Vec3, b: Vec3, c: Vec3) -> Ball {
        let u = b - a;
        let v = c - a;
        let w = u.cross(v);
        let ww = w.norm_squared();
        if ww <= 1e-24 * u.norm_squared() * v.norm_squared() {
            // Collinear: the farthest pair spans the ball.
            let cands = [Ball::from_two(a, b), Ball::from_two(a, c), Ball::from_two(b, c)];
            return cands
                .into_iter()
                .max_by(|x, y| x.radius.total_cmp(&y.radius))
                .unwrap();
        }
        let offset = (w.cross(u) * v.norm_squared() + v.cross(w) * u.norm_squared()) / (2.0 * ww);
        Ball {
            center: a + offset,
            radius: offset.norm(),
        }
    }

    /// Circumsphere of four points, or the best three-point ball when the
    /// points are coplanar.
    fn from_four(a: Vec3, b: Vec3, c: Vec3, d: Vec3) -> Ball {
        let u = b - a;
        let v = c - a;
        let w = d - a;
        let det = u.dot(v.cross(w));
        let scale = u.norm() * v.norm() * w.norm();
        if det.abs() <= 1e-12 * scale {
            let pts = [a, b, c, d];
            let mut best: Option<Ball> = None;
            for skip in 0..4 {
                let tri: Vec<Vec3> = (0..4).filter(|&i| i != skip).map(|i| pts[i]).collect();
                let ball = Ball::from_three(tri[0], tri[1], tri[2]);
                if ball.contains(pts[skip]) && best.is_none_or(|b| ball.radius < b.radius) {
                    best = Some(ball);
                }
            }
            return best.unwrap_or_else(|| Ball::from_three(a, b, c));
        }
        // Solve 2 [u v w]^T x = [|u|², |v|², |w|²].
        let rhs = Vec3::new(u.norm_squared(), v.norm_squared(), w.norm_squared()) * 0.5;
        let x = (v.cross(w) * rhs.x + w.cross(u) * rhs.y + u.cross(v) * rhs.z) / det;
        Ball {
            center: a + x,
            radius: x.norm(),
        }
    }
}

/// Smallest ball containing every point. The input order is shuffled with a
/// fixed seed, so the result is deterministic.
pub fn min_enclosing_ball(points: &[Vec3]) -> Ball {
    let mut pts = points.to_vec();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5eed));
    let mut ball = Ball {
        center: Vec3::ZERO,
        radius: -1.0,
    };
    for i in 0..pts.len() {
        if ball.contains(pts[i]) {
            continue;
        }
        ball = Ball {
            center: pts[i],
            radius: 0.0,
        };
        for j in 0..i {
            if ball.contains(pts[j]) {
                continue;
            }
            ball = Ball::from_two(pts[i], pts[j]);
            for k in 0..j {
                if ball.contains(pts[k]) {
                    continue;
                }
                ball = Ball::from_three(pts[i], pts[j], pts[k]);
                for l in 0..k {
                    if !ball.contains(pts[l]) {
                        ball = Ball::from_four(pts[i], pts[j], pts[k], pts[l]);
                    }
                }
            }
        }
    }
    ball
}
