//! Riemann-Liouville calculus in closed form.
//!
//! The data of the model problem are powers of `t` and functions that are
//! piecewise constant on a temporal grid. For both families every operator
//! used by the scheme has an exact expression in Γ-function terms, so the
//! production path contains no discretized convolution kernels. The
//! [`quadrature`] submodule is an independent numerical route used only to
//! check those expressions.

mod grid;
mod pairing;
mod power;
pub mod quadrature;
mod weights;

pub use grid::TemporalGrid;
pub use pairing::{
    fractional_seminorm_pwc, pwc_derivative_pairing, pwc_derivative_pairing_with,
    pwc_integral_pairing, pwc_integral_pairing_with,
};
pub use power::{
    integral_of_power, riemann_liouville_derivative_power, riemann_liouville_integral_power,
    PowerFunction, Side,
};
pub use quadrature::{quadrature_oracle, SingularIntegrand};
pub use weights::{interval_kernel, temporal_weights, TemporalWeightMatrix};

use crate::error::{domain, Result};

/// Which operator a fractional order parametrizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorRole {
    Integral,
    LeftDerivative,
    RightDerivative,
}

/// A fractional order `0 < γ < 1` tagged with the operator it feeds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    value: f64,
    role: OperatorRole,
}

impl FracOrder {
    pub fn new(value: f64, role: OperatorRole) -> Result<Self> {
        if !(value > 0.0 && value < 1.0) {
            return Err(domain(format!("fractional order {value} outside (0, 1)")));
        }
        Ok(Self { value, role })
    }

    /// Order of a seminorm pairing. Indicator functions are not in
    /// `H^{1/2}`, so `γ` must stay strictly below one half.
    pub fn seminorm(value: f64) -> Result<Self> {
        if !(value > 0.0 && value < 0.5) {
            return Err(domain(format!(
                "seminorm order {value} outside (0, 1/2); piecewise constants are not in H^(1/2)"
            )));
        }
        Ok(Self {
            value,
            role: OperatorRole::LeftDerivative,
        })
    }

    pub fn value(self) -> f64 {
        self.value
    }

    pub fn role(self) -> OperatorRole {
        self.role
    }
}

/// `(x + δ)^e - x^e` for `x ≥ 0`, `δ > 0`, without the cancellation of the
/// naive difference when `δ ≪ x`.
pub(crate) fn power_increment(x: f64, delta: f64, e: f64) -> f64 {
    if x <= 0.0 {
        return delta.powf(e);
    }
    x.powf(e) * (e * (delta / x).ln_1p()).exp_m1()
}
