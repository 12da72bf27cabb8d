use crate::assembly::{InitialData, ProblemSpec, SpatialProfile};
use crate::error::{domain, Result};
use serde::Serialize;

/// Which error estimate a parameter combination falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularityCase {
    /// `0 < α < 1/2`, data in `H^{-β}` with `0 ≤ β < 1`.
    LowOrder,
    /// `1/2 ≤ α < 1`. With `u₀ ∈ L²` the source index must satisfy
    /// `2 - 1/α < β ≤ 1`; with `u₀ = 0` any `0 ≤ β < 1` is covered.
    HighOrder { zero_initial: bool },
    /// `1/2 < α < 1`, `u₀ = 0` and `f ∈ H^{1-α}(0,T;L²)`.
    SmoothSource,
}

/// Orders for the `L²(0,T;H¹₀)` error (`e1`) and the `L²(0,T;L²)` error (`e2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderPair {
    pub e1: f64,
    pub e2: f64,
}

/// Predicted convergence orders in `h` and in `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectedOrders {
    pub space: OrderPair,
    pub time: OrderPair,
}

fn nonsmooth_rates(alpha: f64, beta: f64) -> ExpectedOrders {
    ExpectedOrders {
        space: OrderPair { e1: 1.0 - beta, e2: 2.0 - beta },
        time: OrderPair { e1: alpha * (1.0 - beta) / 2.0, e2: alpha * (1.0 - beta / 2.0) },
    }
}

fn smooth_source_rates(alpha: f64) -> ExpectedOrders {
    ExpectedOrders {
        space: OrderPair { e1: 1.0, e2: 2.0 },
        time: OrderPair { e1: 1.0 - alpha / 2.0, e2: 1.0 },
    }
}

/// Orders `h^{1-β}, τ^{α(1-β)/2}` (E1) and `h^{2-β}, τ^{α(1-β/2)}` (E2) in
/// the nonsmooth cases, `h, τ^{1-α/2}` and `h², τ` for smooth sources.
/// Combinations outside the stated hypotheses are rejected.
pub fn expected_orders(alpha: f64, beta: f64, case: RegularityCase) -> Result<ExpectedOrders> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    match case {
        RegularityCase::LowOrder => {
            if alpha >= 0.5 || !(0.0..1.0).contains(&beta) {
                return Err(domain(format!(
                    "no estimate for alpha = {alpha}, beta = {beta} with alpha < 1/2 assumed"
                )));
            }
        }
        RegularityCase::HighOrder { zero_initial } => {
            let ok = if zero_initial {
                (0.0..1.0).contains(&beta)
            } else {
                beta > 2.0 - 1.0 / alpha && beta <= 1.0
            };
            if alpha < 0.5 || !ok {
                return Err(domain(format!(
                    "no estimate for alpha = {alpha}, beta = {beta} (zero initial data: {zero_initial})"
                )));
            }
        }
        RegularityCase::SmoothSource => {
            if alpha <= 0.5 {
                return Err(domain(format!("smooth-source estimate needs alpha > 1/2, got {alpha}")));
            }
            return Ok(smooth_source_rates(alpha));
        }
    }
    Ok(nonsmooth_rates(alpha, beta))
}

/// Orders for the data of `spec`, taking `β` at the limit of its admissible
/// range (the estimates hold for every larger `β`, so observed rates
/// approach these from below).
pub fn predicted_orders(spec: &ProblemSpec) -> Result<ExpectedOrders> {
    let alpha = spec.alpha;
    let beta = spec.critical_beta();
    if alpha < 0.5 {
        if beta >= 1.0 {
            return Err(domain("data too rough for any estimate"));
        }
        return Ok(nonsmooth_rates(alpha, beta));
    }
    let zero_initial = !spec.has_initial_data();
    // f ∈ H^{1-α}(0,T;L²) needs x^r ∈ L² and t^e ∈ H^{1-α}(0,T)
    let smooth_source = spec.source.iter().all(|s| {
        let space_ok = match s.spatial {
            SpatialProfile::Power(r) => r > -0.5,
            SpatialProfile::Sine(_) => true,
        };
        space_ok && s.temporal_exponent > 0.5 - alpha
    });
    if alpha > 0.5 && zero_initial && smooth_source {
        return Ok(smooth_source_rates(alpha));
    }
    if zero_initial {
        return Ok(nonsmooth_rates(alpha, beta));
    }
    if let InitialData::Power { exponent, .. } = spec.initial {
        if exponent <= -0.5 {
            return Err(domain(format!(
                "initial data x^{exponent} is not square integrable; no estimate for alpha >= 1/2"
            )));
        }
    }
    Ok(nonsmooth_rates(alpha, beta.max(2.0 - 1.0 / alpha)))
}
