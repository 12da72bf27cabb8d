//! Adaptive Gauss-Jacobi quadrature for weakly singular integrands.
//!
//! This is the ground-truth generator against which the closed forms are
//! checked. It never calls the Γ function: every panel carries at most one
//! endpoint singularity `(t - a)^p` or `(b - t)^q`, whose one-sided Jacobi
//! rule has the elementary moment `2^{p+1}/(p+1)`.

use std::collections::HashMap;
use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{domain, Error, Result};

/// Default relative tolerance of [`quadrature_oracle`].
pub const ORACLE_TOLERANCE: f64 = 1e-10;

const LOW_ORDER: usize = 20;
const HIGH_ORDER: usize = 40;
const MAX_DEPTH: usize = 48;
const MAX_PANELS: usize = 20_000;

/// `∫_lower^upper (t - lower)^p (upper - t)^q f(t) dt` with `p, q > -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularIntegrand {
    pub lower: f64,
    pub upper: f64,
    pub left_exponent: f64,
    pub right_exponent: f64,
}

impl SingularIntegrand {
    pub fn new(lower: f64, upper: f64, left_exponent: f64, right_exponent: f64) -> Self {
        Self {
            lower,
            upper,
            left_exponent,
            right_exponent,
        }
    }

    /// A plain integral without endpoint weights.
    pub fn smooth(lower: f64, upper: f64) -> Self {
        Self::new(lower, upper, 0.0, 0.0)
    }
}

/// Nodes and weights on `[-1, 1]` for the weight `(1 + x)^b`, by the
/// Golub-Welsch eigenvalue method. Nodes are ascending.
pub fn gauss_jacobi_left(n: usize, b: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1 && b > -1.0);
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    jacobi[(0, 0)] = b / (b + 2.0);
    for i in 1..n {
        let m = i as f64;
        let s = 2.0 * m + b;
        jacobi[(i, i)] = b * b / (s * (s + 2.0));
        let off = 2.0 * m * (m + b) / s / ((s + 1.0) * (s - 1.0)).sqrt();
        jacobi[(i, i - 1)] = off;
        jacobi[(i - 1, i)] = off;
    }
    let moment = 2f64.powf(b + 1.0) / (b + 1.0);
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], moment * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

type Rule = (Vec<f64>, Vec<f64>);

fn legendre(n: usize) -> &'static Rule {
    static LOW: OnceLock<Rule> = OnceLock::new();
    static HIGH: OnceLock<Rule> = OnceLock::new();
    match n {
        LOW_ORDER => LOW.get_or_init(|| gauss_jacobi_left(LOW_ORDER, 0.0)),
        HIGH_ORDER => HIGH.get_or_init(|| gauss_jacobi_left(HIGH_ORDER, 0.0)),
        _ => unreachable!("only two Legendre orders are used"),
    }
}

#[derive(Clone, Copy)]
enum Weight {
    None,
    /// `(t - lo)^p` on the panel.
    AtLower(f64),
    /// `(hi - t)^q` on the panel.
    AtUpper(f64),
}

struct Oracle<'a> {
    spec: SingularIntegrand,
    f: &'a dyn Fn(f64) -> f64,
    rules: HashMap<(u64, usize), Rule>,
    panels: usize,
}

impl Oracle<'_> {
    /// The integrand with the weight of the panel factored out.
    fn reduced(&self, t: f64, weight: Weight) -> f64 {
        let s = &self.spec;
        let left = match weight {
            Weight::AtLower(_) => 1.0,
            _ if s.left_exponent == 0.0 => 1.0,
            _ => (t - s.lower).powf(s.left_exponent),
        };
        let right = match weight {
            Weight::AtUpper(_) => 1.0,
            _ if s.right_exponent == 0.0 => 1.0,
            _ => (s.upper - t).powf(s.right_exponent),
        };
        left * right * (self.f)(t)
    }

    /// (value, sum of |terms|) for one rule on one panel.
    fn apply(&mut self, lo: f64, hi: f64, weight: Weight, n: usize) -> (f64, f64) {
        let half = 0.5 * (hi - lo);
        let exponent = match weight {
            Weight::None => 0.0,
            Weight::AtLower(p) | Weight::AtUpper(p) => p,
        };
        let rule = if exponent == 0.0 {
            legendre(n).clone()
        } else {
            self.rules
                .entry((exponent.to_bits(), n))
                .or_insert_with(|| gauss_jacobi_left(n, exponent))
                .clone()
        };
        let mut sum = 0.0;
        let mut abs = 0.0;
        for (&x, &w) in rule.0.iter().zip(&rule.1) {
            let t = match weight {
                Weight::AtUpper(_) => hi - half * (1.0 + x),
                _ => lo + half * (1.0 + x),
            };
            let term = w * self.reduced(t, weight);
            sum += term;
            abs += term.abs();
        }
        let jac = half.powf(exponent + 1.0);
        (sum * jac, abs * jac)
    }

    fn panel(&mut self, lo: f64, hi: f64, weight: Weight, tol: f64, depth: usize) -> Result<f64> {
        self.panels += 1;
        if self.panels > MAX_PANELS || depth > MAX_DEPTH {
            return Err(Error::NonConvergence(format!(
                "tolerance {tol:e} not reached on [{}, {}] after {} panels",
                self.spec.lower, self.spec.upper, self.panels
            )));
        }
        let mid = 0.5 * (lo + hi);
        let (left_w, right_w) = match weight {
            Weight::None => (Weight::None, Weight::None),
            Weight::AtLower(_) => (weight, Weight::None),
            Weight::AtUpper(_) => (Weight::None, weight),
        };
        // Error estimate from the low-order rule on the two halves; two
        // symmetric rules on the same panel can agree exactly on a wrong
        // value when a jump hides between their central nodes.
        let (high, _) = self.apply(lo, hi, weight, HIGH_ORDER);
        let low = self.apply(lo, mid, left_w, LOW_ORDER).0 + self.apply(mid, hi, right_w, LOW_ORDER).0;
        if (high - low).abs() <= tol {
            return Ok(high);
        }
        let a = self.panel(lo, mid, left_w, 0.5 * tol, depth + 1)?;
        let b = self.panel(mid, hi, right_w, 0.5 * tol, depth + 1)?;
        Ok(a + b)
    }

    fn initial_panels(&self) -> Vec<(f64, f64, Weight)> {
        let s = &self.spec;
        match (s.left_exponent != 0.0, s.right_exponent != 0.0) {
            (false, false) => vec![(s.lower, s.upper, Weight::None)],
            (true, false) => vec![(s.lower, s.upper, Weight::AtLower(s.left_exponent))],
            (false, true) => vec![(s.lower, s.upper, Weight::AtUpper(s.right_exponent))],
            (true, true) => {
                let mid = 0.5 * (s.lower + s.upper);
                vec![
                    (s.lower, mid, Weight::AtLower(s.left_exponent)),
                    (mid, s.upper, Weight::AtUpper(s.right_exponent)),
                ]
            }
        }
    }
}

/// Integral of a weakly singular integrand to relative accuracy `1e-10`.
pub fn quadrature_oracle(spec: SingularIntegrand, f: impl Fn(f64) -> f64) -> Result<f64> {
    quadrature_oracle_with_tolerance(spec, f, ORACLE_TOLERANCE)
}

/// As [`quadrature_oracle`] with a caller-chosen relative tolerance.
///
/// The absolute target is `rel_tol · max(|I|, 1e-8·∫|integrand|)` from a
/// first pass, so integrals that cancel to nearly zero do not stall.
pub fn quadrature_oracle_with_tolerance(
    spec: SingularIntegrand,
    f: impl Fn(f64) -> f64,
    rel_tol: f64,
) -> Result<f64> {
    if !(spec.upper > spec.lower) {
        return Err(domain(format!(
            "empty interval [{}, {}]",
            spec.lower, spec.upper
        )));
    }
    if !(spec.left_exponent > -1.0 && spec.right_exponent > -1.0) {
        return Err(domain(format!(
            "endpoint exponents ({}, {}) must exceed -1",
            spec.left_exponent, spec.right_exponent
        )));
    }
    let mut oracle = Oracle {
        spec,
        f: &f,
        rules: HashMap::new(),
        panels: 0,
    };
    let panels = oracle.initial_panels();
    let (mut estimate, mut magnitude) = (0.0, 0.0);
    for &(lo, hi, w) in &panels {
        let (v, a) = oracle.apply(lo, hi, w, HIGH_ORDER);
        estimate += v;
        magnitude += a;
    }
    if magnitude == 0.0 {
        return Ok(0.0);
    }
    let tol = rel_tol * estimate.abs().max(1e-8 * magnitude) / panels.len() as f64;
    let mut total = 0.0;
    for (lo, hi, w) in panels {
        total += oracle.panel(lo, hi, w, tol, 0)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_rule_moments() {
        // ∫_{-1}^{1} (1+x)^b x dx = 2^{b+2}/(b+2) - 2^{b+1}/(b+1)
        for &b in &[-0.9, -0.5, 0.0, 0.7] {
            let (x, w) = gauss_jacobi_left(12, b);
            let m1: f64 = x.iter().zip(&w).map(|(x, w)| x * w).sum();
            let want = 2f64.powf(b + 2.0) / (b + 2.0) - 2f64.powf(b + 1.0) / (b + 1.0);
            assert!((m1 - want).abs() < 1e-13, "b = {b}");
        }
    }

    #[test]
    fn inverse_square_root() {
        let v = quadrature_oracle(SingularIntegrand::new(0.0, 1.0, -0.5, 0.0), |_| 1.0).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn symmetric_beta_integral() {
        // Γ(0.75)²/Γ(1.5), 30-digit reference
        let v = quadrature_oracle(SingularIntegrand::new(0.0, 1.0, -0.25, -0.25), |_| 1.0).unwrap();
        assert!((v - 1.694_426_169_587_958_173).abs() < 1e-12);
    }

    #[test]
    fn unit_integral() {
        let v = quadrature_oracle(SingularIntegrand::smooth(0.0, 1.0), |_| 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn undeclared_endpoint_singularity_is_reported() {
        // the (1-t)^{-1/4} factor is hidden in f instead of the weight;
        // bisection cannot reach the tolerance and must say so
        let v = quadrature_oracle(SingularIntegrand::new(0.0, 1.0, -0.25, 0.0), |t| {
            (1.0 - t).powf(-0.25)
        });
        assert!(matches!(v, Err(Error::NonConvergence(_))));
        let v = quadrature_oracle(SingularIntegrand::new(0.0, 1.0, -0.25, -0.25), |_| 1.0).unwrap();
        assert!((v - 1.694_426_169_587_958_173).abs() < 1e-12);
    }

    #[test]
    fn interior_kink_needs_refinement() {
        let v = quadrature_oracle(SingularIntegrand::smooth(0.0, 1.0), |t: f64| (t - 0.3).abs())
            .unwrap();
        let want = 0.5 * (0.09 + 0.49);
        assert!((v - want).abs() < 1e-10 * want);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(quadrature_oracle(SingularIntegrand::new(1.0, 0.0, 0.0, 0.0), |_| 1.0).is_err());
        assert!(quadrature_oracle(SingularIntegrand::new(0.0, 1.0, -1.0, 0.0), |_| 1.0).is_err());
    }

    #[test]
    fn jump_discontinuity_reports_non_convergence() {
        let r = quadrature_oracle(SingularIntegrand::smooth(0.0, 1.0), |t: f64| {
            if t < std::f64::consts::FRAC_1_SQRT_2 {
                0.0
            } else {
                1e300
            }
        });
        assert!(matches!(r, Err(Error::NonConvergence(_))));
    }
}
