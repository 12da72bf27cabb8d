//! Fractional pairings of piecewise-constant functions.
//!
//! For indicators of grid intervals both one-sided operators produce sums
//! of shifted powers, and the `L²(0,T)` pairing of a left- and a right-sided
//! power is a Beta integral:
//! `∫ (t-a)₊^p (b-t)₊^q dt = (b-a)₊^{p+q+1} B(p+1, q+1)` for `0 ≤ a`, `b ≤ T`.
//! Summing the four sign-alternating shifts gives [`interval_kernel`].

use super::{interval_kernel, FracOrder, OperatorRole, TemporalGrid};
use crate::error::{domain, Result};
use crate::special::gamma;

fn check_len(grid: &TemporalGrid, values: &[f64]) -> Result<()> {
    if values.len() != grid.steps() {
        return Err(domain(format!(
            "{} values for a grid with {} intervals",
            values.len(),
            grid.steps()
        )));
    }
    Ok(())
}

/// `Σ_k v_k Σ_{j≤k} u_j kernel(k, j, e)`.
fn bilinear(grid: &TemporalGrid, u: &[f64], v: &[f64], e: f64) -> f64 {
    let mut total = 0.0;
    for (k, &vk) in v.iter().enumerate() {
        if vk == 0.0 {
            continue;
        }
        let row: f64 = u[..=k]
            .iter()
            .enumerate()
            .map(|(j, &uj)| uj * interval_kernel(grid, k, j, e))
            .sum();
        total += vk * row;
    }
    total
}

/// `⟨D_{0+}^γ u, D_{T-}^γ v⟩` for piecewise constants `u`, `v`, with
/// `γ ∈ (0, 1/2)`.
pub fn pwc_derivative_pairing(grid: &TemporalGrid, u: &[f64], v: &[f64], order: f64) -> Result<f64> {
    pwc_derivative_pairing_with(grid, u, v, order, &gamma)
}

/// [`pwc_derivative_pairing`] with an explicit Γ implementation.
pub fn pwc_derivative_pairing_with(
    grid: &TemporalGrid,
    u: &[f64],
    v: &[f64],
    order: f64,
    gamma_fn: &dyn Fn(f64) -> f64,
) -> Result<f64> {
    let g = FracOrder::seminorm(order)?.value();
    check_len(grid, u)?;
    check_len(grid, v)?;
    // each derivative kernel is (t-a)^{-γ}/Γ(1-γ)
    let a = 1.0 - g;
    let beta = gamma_fn(a) * gamma_fn(a) / gamma_fn(2.0 * a);
    let coefficient = beta / (gamma_fn(a) * gamma_fn(a));
    Ok(coefficient * bilinear(grid, u, v, 1.0 - 2.0 * g))
}

/// `⟨I_{0+}^γ u, I_{T-}^γ v⟩` for piecewise constants, `γ ∈ (0, 1)`.
pub fn pwc_integral_pairing(grid: &TemporalGrid, u: &[f64], v: &[f64], order: f64) -> Result<f64> {
    pwc_integral_pairing_with(grid, u, v, order, &gamma)
}

pub fn pwc_integral_pairing_with(
    grid: &TemporalGrid,
    u: &[f64],
    v: &[f64],
    order: f64,
    gamma_fn: &dyn Fn(f64) -> f64,
) -> Result<f64> {
    let g = FracOrder::new(order, OperatorRole::Integral)?.value();
    check_len(grid, u)?;
    check_len(grid, v)?;
    let a = 1.0 + g;
    let beta = gamma_fn(a) * gamma_fn(a) / gamma_fn(2.0 * a);
    let coefficient = beta / (gamma_fn(a) * gamma_fn(a));
    Ok(coefficient * bilinear(grid, u, v, 1.0 + 2.0 * g))
}

/// `|v|_{H^γ(0,T)}` of a piecewise constant, recovered from the coercivity
/// identity `⟨D_{0+}^γ v, D_{T-}^γ v⟩ = cos(γπ) |v|²_{H^γ}`.
pub fn fractional_seminorm_pwc(grid: &TemporalGrid, values: &[f64], order: f64) -> Result<f64> {
    let pairing = pwc_derivative_pairing(grid, values, values, order)?;
    let c = (order * std::f64::consts::PI).cos();
    Ok((pairing / c).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracops::temporal_weights;

    #[test]
    fn zero_function_has_zero_seminorm() {
        let grid = TemporalGrid::uniform(1.0, 5).unwrap();
        assert_eq!(fractional_seminorm_pwc(&grid, &[0.0; 5], 0.3).unwrap(), 0.0);
    }

    #[test]
    fn constant_on_unit_interval() {
        let grid = TemporalGrid::uniform(1.0, 1).unwrap();
        let p = pwc_derivative_pairing(&grid, &[1.0], &[1.0], 0.25).unwrap();
        // 1/Γ(1.5)
        assert!((p - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-14);
        let s = fractional_seminorm_pwc(&grid, &[1.0], 0.25).unwrap();
        assert!((s * s - 1.595_769_121_605_730_711_8).abs() < 1e-13);
    }

    #[test]
    fn homogeneity() {
        let grid = TemporalGrid::from_nodes(vec![0.0, 0.2, 0.5, 0.6, 1.0]).unwrap();
        let v = [0.3, -1.0, 2.0, 0.7];
        let scaled: Vec<f64> = v.iter().map(|x| -3.0 * x).collect();
        let a = fractional_seminorm_pwc(&grid, &v, 0.35).unwrap();
        let b = fractional_seminorm_pwc(&grid, &scaled, 0.35).unwrap();
        assert!((b - 3.0 * a).abs() < 1e-13 * b);
    }

    #[test]
    fn rejects_half_order() {
        let grid = TemporalGrid::uniform(1.0, 2).unwrap();
        assert!(fractional_seminorm_pwc(&grid, &[1.0, 1.0], 0.5).is_err());
        assert!(fractional_seminorm_pwc(&grid, &[1.0, 1.0], 0.7).is_err());
        assert!(fractional_seminorm_pwc(&grid, &[1.0], 0.2).is_err());
    }

    #[test]
    fn derivative_pairing_is_the_causal_weight_form() {
        // ⟨D^γ u, D_-^γ v⟩ = vᵀ G_{2γ} u
        let grid = TemporalGrid::from_nodes(vec![0.0, 0.1, 0.35, 0.5, 0.9, 1.0]).unwrap();
        let u = [1.0, -0.5, 0.25, 2.0, -1.0];
        let v = [0.5, 0.5, -2.0, 1.0, 3.0];
        let g = temporal_weights(&grid, 0.6).unwrap();
        let mut via_weights = 0.0;
        for k in 0..5 {
            for j in 0..=k {
                via_weights += v[k] * g.entry(k, j) * u[j];
            }
        }
        let p = pwc_derivative_pairing(&grid, &u, &v, 0.3).unwrap();
        assert!((p - via_weights).abs() < 1e-13 * via_weights.abs());
    }
}
