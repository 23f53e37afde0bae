//! Gauss–Legendre rules on `[0, 1]` and a bisecting adaptive integrator.

use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

/// Nodes and weights of an `n`-point rule mapped to `[0, 1]`.
fn unit_rule(n: usize) -> Vec<(f64, f64)> {
    let gl = GaussLegendre::new(n.try_into().expect("rule degree must be at least 2"));
    gl.iter().map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect()
}

pub(crate) fn rule32() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| unit_rule(32))
}

fn rule10() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| unit_rule(10))
}

/// Fixed 32-point rule over `[a, b]`.
pub fn gauss_legendre_32(a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let h = b - a;
    rule32().iter().map(|&(x, w)| w * f(a + h * x)).sum::<f64>() * h
}

fn gl10(a: f64, b: f64, f: &mut impl FnMut(f64) -> f64) -> f64 {
    let h = b - a;
    rule10().iter().map(|&(x, w)| w * f(a + h * x)).sum::<f64>() * h
}

/// Adaptive integration: a panel is accepted when the 10-point rule on it
/// agrees with the sum over its two halves to within the panel's share of
/// `abs_tol`; otherwise both halves are refined, up to `max_depth` levels.
pub fn adaptive_gauss_legendre(
    a: f64,
    b: f64,
    abs_tol: f64,
    max_depth: u32,
    mut f: impl FnMut(f64) -> f64,
) -> f64 {
    let whole = gl10(a, b, &mut f);
    refine(a, b, whole, abs_tol, max_depth, &mut f)
}

fn refine(a: f64, b: f64, whole: f64, tol: f64, depth: u32, f: &mut impl FnMut(f64) -> f64) -> f64 {
    let m = 0.5 * (a + b);
    let left = gl10(a, m, f);
    let right = gl10(m, b, f);
    let halves = left + right;
    if depth == 0 || (halves - whole).abs() <= tol {
        return halves;
    }
    refine(a, m, left, 0.5 * tol, depth - 1, f) + refine(m, b, right, 0.5 * tol, depth - 1, f)
}
