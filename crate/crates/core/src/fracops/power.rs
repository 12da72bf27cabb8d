use crate::error::{domain, Result};
use crate::special::gamma;

/// Which endpoint a power function is anchored at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `c·(t - a)^σ` on `t > a`, acted on by left-sided operators.
    Left,
    /// `c·(a - t)^σ` on `t < a`, acted on by right-sided operators.
    Right,
}

/// `c·(t - a)^σ` (or its mirror `c·(a - t)^σ`) with `σ > -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFunction {
    pub coefficient: f64,
    pub exponent: f64,
    pub offset: f64,
    pub side: Side,
}

impl PowerFunction {
    pub fn new(coefficient: f64, exponent: f64, offset: f64) -> Result<Self> {
        let p = Self {
            coefficient,
            exponent,
            offset,
            side: Side::Left,
        };
        p.validate()?;
        Ok(p)
    }

    /// Right-anchored power `c·(b - t)^σ`.
    pub fn right(coefficient: f64, exponent: f64, anchor: f64) -> Result<Self> {
        let p = Self {
            coefficient,
            exponent,
            offset: anchor,
            side: Side::Right,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !(self.exponent > -1.0) || !self.exponent.is_finite() {
            return Err(domain(format!(
                "power exponent {} is not locally integrable (need > -1)",
                self.exponent
            )));
        }
        if !self.coefficient.is_finite() || !self.offset.is_finite() {
            return Err(domain("power function coefficient and offset must be finite"));
        }
        Ok(())
    }

    /// Distance from the anchor, or a domain error outside the support.
    pub fn distance(&self, t: f64) -> Result<f64> {
        let d = match self.side {
            Side::Left => t - self.offset,
            Side::Right => self.offset - t,
        };
        if !(d > 0.0) {
            return Err(domain(format!(
                "t = {t} is not strictly inside the support of the power anchored at {}",
                self.offset
            )));
        }
        Ok(d)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        Ok(self.coefficient * self.distance(t)?.powf(self.exponent))
    }

    /// The same kind of power with new coefficient and exponent.
    pub fn with(&self, coefficient: f64, exponent: f64) -> Self {
        Self {
            coefficient,
            exponent,
            ..*self
        }
    }
}

/// Riemann-Liouville integral of order `γ ∈ (0, 2)` of a power, evaluated
/// at `t`. The left-anchored power gets `I_{a+}^γ`, the right-anchored one
/// `I_{b-}^γ`; both equal `c·Γ(σ+1)/Γ(σ+1+γ)·d^{σ+γ}` with `d` the distance
/// to the anchor.
pub fn riemann_liouville_integral_power(p: &PowerFunction, gamma_order: f64, t: f64) -> Result<f64> {
    if !(gamma_order > 0.0 && gamma_order < 2.0) {
        return Err(domain(format!("integral order {gamma_order} outside (0, 2)")));
    }
    p.validate()?;
    let d = p.distance(t)?;
    let s = p.exponent;
    Ok(p.coefficient * gamma(s + 1.0) / gamma(s + 1.0 + gamma_order) * d.powf(s + gamma_order))
}

/// The power produced by [`riemann_liouville_integral_power`], as a function.
pub fn integral_of_power(p: &PowerFunction, gamma_order: f64) -> Result<PowerFunction> {
    if !(gamma_order > 0.0 && gamma_order < 2.0) {
        return Err(domain(format!("integral order {gamma_order} outside (0, 2)")));
    }
    p.validate()?;
    let s = p.exponent;
    Ok(p.with(
        p.coefficient * gamma(s + 1.0) / gamma(s + 1.0 + gamma_order),
        s + gamma_order,
    ))
}

/// Riemann-Liouville derivative of order `γ ∈ (0, 1)` of a power:
/// `c·Γ(σ+1)/Γ(σ+1-γ)·d^{σ-γ}`. Requires `σ - γ > -1`. For the
/// right-anchored power this is `D_{b-}^γ`, which carries the `(-1)` of
/// its definition and lands on the same formula.
pub fn riemann_liouville_derivative_power(
    p: &PowerFunction,
    gamma_order: f64,
    t: f64,
) -> Result<f64> {
    if !(gamma_order > 0.0 && gamma_order < 1.0) {
        return Err(domain(format!("derivative order {gamma_order} outside (0, 1)")));
    }
    p.validate()?;
    let s = p.exponent;
    if !(s - gamma_order > -1.0) {
        return Err(domain(format!(
            "derivative of order {gamma_order} of exponent {s} is not locally integrable"
        )));
    }
    let d = p.distance(t)?;
    Ok(p.coefficient * gamma(s + 1.0) / gamma(s + 1.0 - gamma_order) * d.powf(s - gamma_order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn integral_of_one_is_t() {
        let one = PowerFunction::new(1.0, 0.0, 0.0).unwrap();
        assert!(rel(riemann_liouville_integral_power(&one, 1.0, 0.5).unwrap(), 0.5) < 1e-14);
    }

    #[test]
    fn half_integral_twice_is_full_integral() {
        let one = PowerFunction::new(1.0, 0.0, 0.0).unwrap();
        let half = integral_of_power(&one, 0.5).unwrap();
        let twice = riemann_liouville_integral_power(&half, 0.5, 0.7).unwrap();
        assert!(rel(twice, 0.7) < 1e-14);
    }

    #[test]
    fn integral_of_singular_power() {
        // Γ(0.51)/Γ(1.11), 30-digit reference
        let p = PowerFunction::new(1.0, -0.49, 0.0).unwrap();
        let v = riemann_liouville_integral_power(&p, 0.6, 1.0).unwrap();
        assert!(rel(v, 1.834_941_226_818_137_043) < 1e-13);
    }

    #[test]
    fn derivative_examples() {
        let t2 = PowerFunction::new(1.0, 2.0, 0.0).unwrap();
        let v = riemann_liouville_derivative_power(&t2, 0.8, 1.0).unwrap();
        assert!(rel(v, 1.815_207_368_430_560_513) < 1e-13);

        let one = PowerFunction::new(1.0, 0.0, 0.0).unwrap();
        let v = riemann_liouville_derivative_power(&one, 0.5, 4.0).unwrap();
        assert!(rel(v, 1.0 / (2.0 * PI.sqrt())) < 1e-14);

        for &(g, t) in &[(0.3, 0.2), (0.7, 3.0)] {
            let p = PowerFunction::new(1.0, g, 0.0).unwrap();
            let v = riemann_liouville_derivative_power(&p, g, t).unwrap();
            assert!(rel(v, gamma(g + 1.0)) < 1e-14);
        }
    }

    #[test]
    fn right_sided_mirror() {
        let p = PowerFunction::right(2.0, 0.5, 1.0).unwrap();
        let q = PowerFunction::new(2.0, 0.5, 0.0).unwrap();
        let a = riemann_liouville_integral_power(&p, 0.3, 0.25).unwrap();
        let b = riemann_liouville_integral_power(&q, 0.3, 0.75).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn domain_errors() {
        assert!(PowerFunction::new(1.0, -1.0, 0.0).is_err());
        let p = PowerFunction::new(1.0, 0.5, 0.2).unwrap();
        assert!(riemann_liouville_integral_power(&p, 0.5, 0.2).is_err());
        assert!(riemann_liouville_integral_power(&p, 2.0, 1.0).is_err());
        assert!(riemann_liouville_derivative_power(&p, 1.0, 1.0).is_err());
        let q = PowerFunction::new(1.0, -0.5, 0.0).unwrap();
        assert!(riemann_liouville_derivative_power(&q, 0.6, 1.0).is_err());
    }
}
