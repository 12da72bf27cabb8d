use super::Mesh1D;
use crate::error::{domain, Result};
use std::f64::consts::PI;

/// `∫ x^r (x - a)/h dx` over `[a, b]`, the rising half of a hat.
fn rising_moment(a: f64, b: f64, r: f64, h: f64) -> f64 {
    let f1 = |x: f64| x.powf(r + 1.0) / (r + 1.0);
    let f2 = |x: f64| x.powf(r + 2.0) / (r + 2.0);
    (f2(b) - f2(a) - a * (f1(b) - f1(a))) / h
}

/// `∫ x^r (b - x)/h dx` over `[a, b]`, the falling half of a hat.
fn falling_moment(a: f64, b: f64, r: f64, h: f64) -> f64 {
    let f1 = |x: f64| x.powf(r + 1.0) / (r + 1.0);
    let f2 = |x: f64| x.powf(r + 2.0) / (r + 2.0);
    (b * (f1(b) - f1(a)) - (f2(b) - f2(a))) / h
}

/// `∫₀¹ x^r φ_node(x) dx` for mesh node `node ∈ 0..=n_cells`, boundary hats
/// included (they are half hats).
pub fn hat_power_moment(mesh: &Mesh1D, node: usize, r: f64) -> Result<f64> {
    if !(r > -1.0) {
        return Err(domain(format!("power load needs r > -1, got {r}")));
    }
    if node > mesh.n_cells() {
        return Err(domain(format!("node {node} outside mesh")));
    }
    let h = mesh.h();
    let mut s = 0.0;
    if node > 0 {
        s += rising_moment(mesh.x(node - 1), mesh.x(node), r, h);
    }
    if node < mesh.n_cells() {
        s += falling_moment(mesh.x(node), mesh.x(node + 1), r, h);
    }
    Ok(s)
}

/// Load vector of `x^r` against the interior hats.
pub fn power_load_vector(mesh: &Mesh1D, r: f64) -> Result<Vec<f64>> {
    (1..mesh.n_cells())
        .map(|node| hat_power_moment(mesh, node, r))
        .collect()
}

/// Load vector of `sin(mπx)`: `sin(mπx_i)·4 sin²(mπh/2)/((mπ)² h)`.
pub fn sine_load_vector(mesh: &Mesh1D, mode: usize) -> Result<Vec<f64>> {
    if mode == 0 {
        return Err(domain("sine mode must be at least 1"));
    }
    let k = mode as f64 * PI;
    let h = mesh.h();
    let factor = 4.0 * (0.5 * k * h).sin().powi(2) / (k * k * h);
    Ok(sine_nodal_vector(mesh, mode).iter().map(|s| s * factor).collect())
}

/// Nodal values `sin(mπx_i)` at the interior nodes.
pub fn sine_nodal_vector(mesh: &Mesh1D, mode: usize) -> Vec<f64> {
    let k = mode as f64 * PI;
    (0..mesh.n_interior())
        .map(|i| (k * mesh.interior_x(i)).sin())
        .collect()
}
