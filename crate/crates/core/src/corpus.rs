//! Deterministic generators for the knot families used in tests and reports.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knot::{regular_polygon_vertices, PolygonalKnot};
use crate::vec3::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    RegularNGon,
    EllipseNGon,
    SquareFamily,
    TrefoilPolygon,
    RandomPerturbed,
}

impl Family {
    /// Parameter names the family understands.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            Family::RegularNGon => &["n", "r"],
            Family::EllipseNGon => &["a", "b", "n", "r"],
            Family::SquareFamily => &["side", "per_side"],
            Family::TrefoilPolygon => &["n", "scale"],
            Family::RandomPerturbed => &["n", "r", "amplitude"],
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "regular-ngon" => Ok(Family::RegularNGon),
            "ellipse-ngon" => Ok(Family::EllipseNGon),
            "square-family" => Ok(Family::SquareFamily),
            "trefoil-polygon" => Ok(Family::TrefoilPolygon),
            "random-perturbed" => Ok(Family::RandomPerturbed),
            other => Err(Error::InvalidParameter(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub family: Family,
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
}

impl CorpusSpec {
    pub fn new(family: Family) -> Self {
        CorpusSpec {
            family,
            parameters: BTreeMap::new(),
            seed: 0,
        }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.parameters.insert(name.to_string(), value);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn param(&self, name: &str, default: f64) -> f64 {
        self.parameters.get(name).copied().unwrap_or(default)
    }

    fn count(&self, name: &str, default: usize, min: usize) -> Result<usize> {
        let v = self.param(name, default as f64);
        if v.fract() != 0.0 || v < min as f64 {
            return Err(Error::InvalidParameter(format!("{name} must be an integer ≥ {min}, got {v}")));
        }
        Ok(v as usize)
    }

    fn positive(&self, name: &str, default: f64) -> Result<f64> {
        let v = self.param(name, default);
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
        }
        Ok(v)
    }
}

/// Builds the polygon described by `spec`.
///
/// Parameters (defaults in brackets):
/// - `regular-ngon`: `n` [64], `r` [1]
/// - `ellipse-ngon`: `a` [2], `b` [1.5], `n` [64], `r` [1]; requires `a ≥ b`
/// - `square-family`: `side` [2], `per_side` [1]
/// - `trefoil-polygon`: `n` [60], `scale` [1]
/// - `random-perturbed`: `n` [24], `r` [3], `amplitude` [0.5]
pub fn generate(spec: &CorpusSpec) -> Result<PolygonalKnot> {
    let known = spec.family.parameters();
    if let Some(name) = spec.parameters.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(Error::InvalidParameter(format!("unknown parameter {name:?}; expected one of {known:?}")));
    }
    match spec.family {
        Family::RegularNGon => {
            let n = spec.count("n", 64, 3)?;
            let r = spec.positive("r", 1.0)?;
            PolygonalKnot::new(regular_polygon_vertices(n, r))
        }
        Family::EllipseNGon => {
            let a = spec.positive("a", 2.0)?;
            let b = spec.positive("b", 1.5)?;
            if a < b {
                return Err(Error::InvalidParameter(format!("need a ≥ b, got a={a}, b={b}")));
            }
            let n = spec.count("n", 64, 3)?;
            let r = spec.positive("r", 1.0)?;
            ellipse_polygon(a * r, b * r, n)
        }
        Family::SquareFamily => {
            let side = spec.positive("side", 2.0)?;
            let per_side = spec.count("per_side", 1, 1)?;
            square_polygon(side, per_side)
        }
        Family::TrefoilPolygon => {
            let n = spec.count("n", 60, 6)?;
            let scale = spec.positive("scale", 1.0)?;
            trefoil_polygon(n, scale)
        }
        Family::RandomPerturbed => {
            let n = spec.count("n", 24, 3)?;
            let r = spec.positive("r", 3.0)?;
            let amplitude = spec.param("amplitude", 0.5);
            if !(amplitude >= 0.0) {
                return Err(Error::InvalidParameter("amplitude must be non-negative".into()));
            }
            random_perturbed(n, r, amplitude, spec.seed)
        }
    }
}

/// Ellipse with semi-axes `a` (x) and `b` (y), sampled uniformly in the
/// angle parameter.
pub fn ellipse_polygon(a: f64, b: f64, n: usize) -> Result<PolygonalKnot> {
    PolygonalKnot::new(
        (0..n)
            .map(|i| {
                let s = 2.0 * PI * i as f64 / n as f64;
                Vec3::new(a * s.cos(), b * s.sin(), 0.0)
            })
            .collect(),
    )
}

/// Axis-aligned square centred at the origin, counterclockwise from
/// `(-side/2, -side/2)`, with each side split into `per_side` edges.
pub fn square_polygon(side: f64, per_side: usize) -> Result<PolygonalKnot> {
    let h = 0.5 * side;
    let corners = [
        Vec3::new(-h, -h, 0.0),
        Vec3::new(h, -h, 0.0),
        Vec3::new(h, h, 0.0),
        Vec3::new(-h, h, 0.0),
    ];
    let mut v = Vec::with_capacity(4 * per_side);
    for c in 0..4 {
        for j in 0..per_side {
            v.push(corners[c].lerp(corners[(c + 1) % 4], j as f64 / per_side as f64));
        }
    }
    PolygonalKnot::new(v)
}

/// `(sin t + 2 sin 2t, cos t − 2 cos 2t, −sin 3t)` sampled at `n` points.
pub fn trefoil_polygon(n: usize, scale: f64) -> Result<PolygonalKnot> {
    PolygonalKnot::new(
        (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                Vec3::new(
                    t.sin() + 2.0 * (2.0 * t).sin(),
                    t.cos() - 2.0 * (2.0 * t).cos(),
                    -(3.0 * t).sin(),
                ) * scale
            })
            .collect(),
    )
}

/// Regular `n`-gon of radius `r` with every coordinate jittered uniformly in
/// `[-amplitude, amplitude]`. Draws are repeated (from the same stream)
/// until the result is embedded.
pub fn random_perturbed(n: usize, r: f64, amplitude: f64, seed: u64) -> Result<PolygonalKnot> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = regular_polygon_vertices(n, r);
    for _ in 0..1000 {
        let v: Vec<Vec3> = base
            .iter()
            .map(|&p| {
                let mut jitter = || {
                    if amplitude > 0.0 {
                        rng.random_range(-amplitude..=amplitude)
                    } else {
                        0.0
                    }
                };
                p + Vec3::new(jitter(), jitter(), jitter())
            })
            .collect();
        if let Ok(k) = PolygonalKnot::new(v) {
            return Ok(k);
        }
    }
    Err(Error::InvalidParameter(format!(
        "no embedded perturbation found for n={n}, r={r}, amplitude={amplitude}"
    )))
}
