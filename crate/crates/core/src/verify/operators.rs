//! Properties of the fractional operators and their closed forms.

use super::{property, rel_err, within, PropertyOutcome, VerifyConfig};
use crate::fracops::{
    integral_of_power, pwc_derivative_pairing_with, pwc_integral_pairing, quadrature_oracle,
    riemann_liouville_derivative_power, riemann_liouville_integral_power, temporal_weights, PowerFunction,
    SingularIntegrand, TemporalGrid,
};
use crate::special::{beta, gamma};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const IDENTITY_TOL: f64 = 1e-12;
const ORACLE_TOL: f64 = 1e-9;

pub(super) fn random_grid(rng: &mut ChaCha8Rng, max_steps: usize) -> TemporalGrid {
    let steps = rng.gen_range(1..=max_steps);
    let scale = rng.gen_range(0.5..2.0);
    let mut nodes = vec![0.0];
    for _ in 0..steps {
        let last = *nodes.last().unwrap();
        nodes.push(last + scale * rng.gen_range(0.2..1.0));
    }
    TemporalGrid::from_nodes(nodes).expect("increasing nodes")
}

pub(super) fn random_values(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if v.iter().any(|x| x.abs() > 1e-3) {
            return v;
        }
    }
}

fn oracle(lo: f64, hi: f64, p: f64, q: f64, f: impl Fn(f64) -> f64) -> Result<f64, String> {
    quadrature_oracle(SingularIntegrand::new(lo, hi, p, q), f).map_err(|e| e.to_string())
}

/// A one-sided operator applied to a piecewise constant, as a sum of
/// shifted powers `Σ_i c_i·|t - t_i|^p` restricted to one side of each
/// node. On interval `m` one node produces an endpoint singularity; the
/// rest is smooth there.
struct ShiftedPowers<'a> {
    grid: &'a TemporalGrid,
    coef: Vec<f64>,
    exponent: f64,
    left: bool,
}

impl<'a> ShiftedPowers<'a> {
    /// `I_{0+}^p v` (`p > 0`) or `D_{0+}^{-p} v` (`p < 0`).
    fn left(grid: &'a TemporalGrid, v: &[f64], p: f64) -> Self {
        let jump = |i: usize| v.get(i).copied().unwrap_or(0.0) - if i > 0 { v[i - 1] } else { 0.0 };
        let norm = gamma(p + 1.0);
        let coef = (0..=grid.steps()).map(|i| jump(i) / norm).collect();
        Self { grid, coef, exponent: p, left: true }
    }

    /// `I_{T-}^p v` (`p > 0`) or `D_{T-}^{-p} v` (`p < 0`).
    fn right(grid: &'a TemporalGrid, v: &[f64], p: f64) -> Self {
        let jump = |i: usize| (if i > 0 { v[i - 1] } else { 0.0 }) - v.get(i).copied().unwrap_or(0.0);
        let norm = gamma(p + 1.0);
        let coef = (0..=grid.steps()).map(|i| jump(i) / norm).collect();
        Self { grid, coef, exponent: p, left: false }
    }

    /// Node carrying the endpoint singularity on interval `m`.
    fn singular_node(&self, m: usize) -> usize {
        if self.left {
            m
        } else {
            m + 1
        }
    }

    fn singular_coef(&self, m: usize) -> f64 {
        self.coef[self.singular_node(m)]
    }

    /// Everything except the singular node, at `t` inside interval `m`.
    fn regular(&self, m: usize, t: f64) -> f64 {
        let nodes = self.grid.nodes();
        let skip = self.singular_node(m);
        let mut s = 0.0;
        for (i, (&c, &x)) in self.coef.iter().zip(nodes).enumerate() {
            if i == skip || c == 0.0 {
                continue;
            }
            let d = if self.left { t - x } else { x - t };
            if d > 0.0 {
                s += c * d.powf(self.exponent);
            }
        }
        s
    }
}

/// `∫_0^T a·b dt` for one left and one right shifted-power sum, with each
/// interval split so the oracle sees endpoint singularities as weights.
/// Returns `(value, sum of |pieces|)`.
fn oracle_product(a: &ShiftedPowers, b: &ShiftedPowers) -> Result<(f64, f64), String> {
    let (mut total, mut scale) = (0.0, 0.0);
    for m in 0..a.grid.steps() {
        let (lo, hi) = (a.grid.node(m), a.grid.node(m + 1));
        let (ca, cb) = (a.singular_coef(m), b.singular_coef(m));
        let (pa, pb) = (a.exponent, b.exponent);
        let mut pieces = vec![oracle(lo, hi, 0.0, 0.0, |t| a.regular(m, t) * b.regular(m, t))?];
        if ca != 0.0 {
            pieces.push(ca * oracle(lo, hi, pa, 0.0, |t| b.regular(m, t))?);
        }
        if cb != 0.0 {
            pieces.push(cb * oracle(lo, hi, 0.0, pb, |t| a.regular(m, t))?);
        }
        if ca != 0.0 && cb != 0.0 {
            pieces.push(ca * cb * oracle(lo, hi, pa, pb, |_| 1.0)?);
        }
        total += pieces.iter().sum::<f64>();
        scale += pieces.iter().map(|p| p.abs()).sum::<f64>();
    }
    Ok((total, scale))
}

/// `‖a‖²_{L²(0,T)}` for a shifted-power sum with positive exponent.
fn oracle_square(a: &ShiftedPowers) -> Result<f64, String> {
    let mut total = 0.0;
    for m in 0..a.grid.steps() {
        let (lo, hi) = (a.grid.node(m), a.grid.node(m + 1));
        let c = a.singular_coef(m);
        let p = a.exponent;
        let (lp, rp) = if a.left { (p, 0.0) } else { (0.0, p) };
        total += oracle(lo, hi, 0.0, 0.0, |t| a.regular(m, t).powi(2))?;
        if c != 0.0 {
            total += 2.0 * c * oracle(lo, hi, lp, rp, |t| a.regular(m, t))?;
            total += c * c * oracle(lo, hi, 2.0 * lp, 2.0 * rp, |_| 1.0)?;
        }
    }
    Ok(total)
}

fn semigroup(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let sigma = rng.gen_range(-0.99..2.0);
    let c = rng.gen_range(-3.0..3.0);
    let offset = rng.gen_range(-1.0..1.0);
    let (b, g) = (rng.gen_range(0.05..0.95), rng.gen_range(0.05..0.95));
    let (p, t) = if rng.gen_bool(0.5) {
        (PowerFunction::new(c, sigma, offset), offset + rng.gen_range(0.1..3.0))
    } else {
        (PowerFunction::right(c, sigma, offset), offset - rng.gen_range(0.1..3.0))
    };
    let p = p.map_err(|e| e.to_string())?;
    let once = integral_of_power(&p, b).map_err(|e| e.to_string())?;
    let nested = riemann_liouville_integral_power(&once, g, t).map_err(|e| e.to_string())?;
    let direct = riemann_liouville_integral_power(&p, b + g, t).map_err(|e| e.to_string())?;
    within("I^g I^b - I^(b+g)", rel_err(nested, direct), IDENTITY_TOL)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `⟨I_{0+}^β v, w⟩ = ⟨v, I_{1-}^β w⟩` for random polynomials on `(0, 1)`.
/// The right side expands `t^n` in powers of `1 - t` so that both sides go
/// through the closed-form power integrals.
fn duality(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let b = rng.gen_range(0.05..0.95);
    let deg_v = rng.gen_range(0..=4);
    let deg_w = rng.gen_range(0..=4);
    let v: Vec<f64> = (0..=deg_v).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let w: Vec<f64> = (0..=deg_w).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let (mut lhs, mut rhs, mut scale) = (0.0, 0.0, 0.0);
    for (m, &a) in v.iter().enumerate() {
        let p = PowerFunction::new(a, m as f64, 0.0).map_err(|e| e.to_string())?;
        let ip = integral_of_power(&p, b).map_err(|e| e.to_string())?;
        for (n, &c) in w.iter().enumerate() {
            let term = c * ip.coefficient / (ip.exponent + n as f64 + 1.0);
            lhs += term;
            scale += term.abs();
            for k in 0..=n {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let q = PowerFunction::right(c * sign * binomial(n, k), k as f64, 1.0).map_err(|e| e.to_string())?;
                let iq = integral_of_power(&q, b).map_err(|e| e.to_string())?;
                let term = a * iq.coefficient * beta(m as f64 + 1.0, iq.exponent + 1.0);
                rhs += term;
                scale += term.abs();
            }
        }
    }
    within("duality defect", (lhs - rhs).abs() / scale.max(f64::MIN_POSITIVE), IDENTITY_TOL)
}

/// Positivity of `⟨D_{0+}^γ v, D_{T-}^γ v⟩` and its equality with
/// `vᵀ G_{2γ} v`.
fn coercivity(rng: &mut ChaCha8Rng, gamma_fn: &dyn Fn(f64) -> f64) -> Result<f64, String> {
    let grid = random_grid(rng, 12);
    let v = random_values(rng, grid.steps());
    let g = rng.gen_range(0.02..0.48);
    let pairing = pwc_derivative_pairing_with(&grid, &v, &v, g, gamma_fn).map_err(|e| e.to_string())?;
    if !(pairing > 0.0) {
        return Err(format!("pairing {pairing:e} is not positive"));
    }
    let weights = temporal_weights(&grid, 2.0 * g).map_err(|e| e.to_string())?;
    let (mut form, mut scale) = (0.0, 0.0);
    for k in 0..grid.steps() {
        for j in 0..=k {
            let term = v[k] * weights.entry(k, j) * v[j];
            form += term;
            scale += term.abs();
        }
    }
    within("pairing vs weight form", (pairing - form).abs() / scale, IDENTITY_TOL)
}

/// `cos(γπ)·‖I⁺v‖² ≤ ⟨I⁺v, I⁻v⟩ ≤ ‖I⁺v‖·‖I⁻v‖`, norms from the oracle.
/// Returns the measured ratio `⟨I⁺v, I⁻v⟩ / ‖I⁺v‖²`.
fn two_sided_ratio(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let grid = random_grid(rng, 6);
    let v = random_values(rng, grid.steps());
    let g = rng.gen_range(0.05..0.45);
    let pairing = pwc_integral_pairing(&grid, &v, &v, g).map_err(|e| e.to_string())?;
    let plus = oracle_square(&ShiftedPowers::left(&grid, &v, g))?;
    let minus = oracle_square(&ShiftedPowers::right(&grid, &v, g))?;
    let ratio = pairing / plus;
    let lower = (g * PI).cos();
    let upper = (minus / plus).sqrt();
    if !(pairing > 0.0 && ratio >= lower * (1.0 - ORACLE_TOL) && ratio <= upper * (1.0 + ORACLE_TOL)) {
        return Err(format!("ratio {ratio} outside [{lower}, {upper}] at gamma {g}"));
    }
    Ok(ratio)
}

fn toeplitz(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let steps = rng.gen_range(2..=40);
    let t_final = rng.gen_range(0.5..3.0);
    let alpha = rng.gen_range(0.05..0.95);
    let uniform = temporal_weights(&TemporalGrid::uniform(t_final, steps).unwrap(), alpha).unwrap();
    let nodes = (0..=steps).map(|k| t_final * k as f64 / steps as f64).collect();
    let packed = temporal_weights(&TemporalGrid::from_nodes(nodes).unwrap(), alpha).unwrap();
    if !uniform.is_toeplitz() || packed.is_toeplitz() {
        return Err("unexpected storage kind".into());
    }
    let d = uniform.diagonal(0);
    let mut worst = 0.0f64;
    for k in 0..steps {
        for j in 0..=k {
            worst = worst.max((packed.entry(k, j) - uniform.entry(k, j)).abs() / d);
            if k + 1 < steps {
                worst = worst.max((packed.entry(k + 1, j + 1) - packed.entry(k, j)).abs() / d);
            }
        }
        if uniform.entry(k, k) != d {
            return Err(format!("diagonal {k} differs from the first"));
        }
    }
    within("shift defect", worst, IDENTITY_TOL)
}

fn integral_vs_oracle(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let g = rng.gen_range(0.05..=0.95);
    let sigma = rng.gen_range(-0.99..=2.0);
    let t = rng.gen_range(0.2..2.0);
    let p = PowerFunction::new(1.0, sigma, 0.0).map_err(|e| e.to_string())?;
    let closed = riemann_liouville_integral_power(&p, g, t).map_err(|e| e.to_string())?;
    let norm = gamma(g);
    let quad = oracle(0.0, t, sigma, g - 1.0, |_| 1.0 / norm)?;
    within("integral vs oracle", rel_err(closed, quad), ORACLE_TOL)
}

/// `D^γ p(t) = d/dt I^{1-γ} p(t)`; the integral comes from the oracle and
/// the derivative from the homogeneity `d/dt K·t^s = (s/t)·K·t^s`.
fn derivative_vs_oracle(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let g = rng.gen_range(0.05..=0.95);
    let sigma = rng.gen_range((g - 0.99f64).max(-0.99)..=2.0);
    let t = rng.gen_range(0.2..2.0);
    let p = PowerFunction::new(1.0, sigma, 0.0).map_err(|e| e.to_string())?;
    let closed = riemann_liouville_derivative_power(&p, g, t).map_err(|e| e.to_string())?;
    let norm = gamma(1.0 - g);
    let integral = oracle(0.0, t, sigma, -g, |_| 1.0 / norm)?;
    let quad = (sigma + 1.0 - g) / t * integral;
    within("derivative vs oracle", rel_err(closed, quad), ORACLE_TOL)
}

/// `G[k][j] = ∫_{I_k} D^α χ_{I_j}` with
/// `D^α χ_{[a,b]} = ((t-a)₊^{-α} - (t-b)₊^{-α})/Γ(1-α)`.
fn weights_vs_oracle(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let grid = random_grid(rng, 8);
    let alpha = rng.gen_range(0.05..=0.95);
    let weights = temporal_weights(&grid, alpha).map_err(|e| e.to_string())?;
    let k = rng.gen_range(0..grid.steps());
    let j = rng.gen_range(0..=k);
    let (lo, hi) = (grid.node(k), grid.node(k + 1));
    let norm = gamma(1.0 - alpha);
    let piece = |anchor: usize| -> Result<f64, String> {
        let a = grid.node(anchor);
        if anchor == k {
            oracle(lo, hi, -alpha, 0.0, |_| 1.0 / norm)
        } else {
            oracle(lo, hi, 0.0, 0.0, |t| (t - a).powf(-alpha) / norm)
        }
    };
    let first = piece(j)?;
    let second = if j == k { 0.0 } else { piece(j + 1)? };
    let quad = first - second;
    let err = (weights.entry(k, j) - quad).abs() / (first.abs() + second.abs());
    within("weight vs oracle", err, ORACLE_TOL)
}

fn pairings_vs_oracle(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let grid = random_grid(rng, 4);
    let u = random_values(rng, grid.steps());
    let v = random_values(rng, grid.steps());
    let g = rng.gen_range(0.05..0.45);

    let closed = pwc_integral_pairing(&grid, &u, &v, g).map_err(|e| e.to_string())?;
    let (quad, scale) = oracle_product(&ShiftedPowers::left(&grid, &u, g), &ShiftedPowers::right(&grid, &v, g))?;
    let e1 = within("integral pairing vs oracle", (closed - quad).abs() / scale, ORACLE_TOL)?;

    let closed = pwc_derivative_pairing_with(&grid, &u, &v, g, &gamma).map_err(|e| e.to_string())?;
    let (quad, scale) = oracle_product(&ShiftedPowers::left(&grid, &u, -g), &ShiftedPowers::right(&grid, &v, -g))?;
    let e2 = within("derivative pairing vs oracle", (closed - quad).abs() / scale, ORACLE_TOL)?;
    Ok(e1.max(e2))
}

pub(super) fn run(config: &VerifyConfig) -> Vec<PropertyOutcome> {
    let n = config.instances;
    let draws = config.oracle_draws;
    let gamma_fn = config.gamma_fn();
    let mut out = vec![
        property("semigroup", n, &mut config.rng(1), semigroup),
        property("duality", n, &mut config.rng(2), duality),
        property("coercivity", n, &mut config.rng(3), |r| coercivity(r, &gamma_fn)),
    ];

    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    let mut bound = property("two_sided_bound", n, &mut config.rng(4), |r| {
        let ratio = two_sided_ratio(r)?;
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        Ok(ratio)
    });
    if bound.passed {
        bound.detail = format!("measured c1 {lo:.4}, c2 {hi:.4}");
    }
    out.push(bound);

    out.push(property("toeplitz", n, &mut config.rng(5), toeplitz));
    out.push(property("integral_vs_quadrature", draws, &mut config.rng(6), integral_vs_oracle));
    out.push(property("derivative_vs_quadrature", draws, &mut config.rng(7), derivative_vs_oracle));
    out.push(property("weights_vs_quadrature", draws, &mut config.rng(8), weights_vs_oracle));
    out.push(property("pairings_vs_quadrature", draws, &mut config.rng(9), pairings_vs_oracle));
    out
}
