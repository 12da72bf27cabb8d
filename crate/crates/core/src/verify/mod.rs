//! Seeded randomized property suite over the operator closed forms, the
//! finite-element pieces and the solver.
//!
//! Every property draws from its own ChaCha stream derived from the seed,
//! so reports are reproducible and independent of property order.

mod discrete;
mod operators;

use crate::special::{lanczos_gamma, LANCZOS_COEFFICIENTS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt::Write;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random instances for the operator identities.
    pub instances: usize,
    /// Random draws for closed form versus quadrature comparisons.
    pub oracle_draws: usize,
    /// Added to the leading Lanczos coefficient of the Γ used by the
    /// pairing checks; zero for a faithful run.
    pub gamma_tamper: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, instances: 100, oracle_draws: 50, gamma_tamper: 0.0 }
    }
}

impl VerifyConfig {
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// Γ as seen by the pairing checks.
    pub fn gamma_fn(&self) -> impl Fn(f64) -> f64 {
        let mut coefficients = LANCZOS_COEFFICIENTS;
        coefficients[0] += self.gamma_tamper;
        move |x| lanczos_gamma(x, &coefficients)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub outcomes: Vec<PropertyOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn outcome(&self, name: &str) -> Option<&PropertyOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }

    /// One line per property, then a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            let status = if o.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{status} {:<34} {:>4} cases  {}", o.name, o.cases, o.detail);
        }
        let failed = self.outcomes.iter().filter(|o| !o.passed).count();
        let _ = writeln!(
            out,
            "seed {}: {} properties, {} failed",
            self.seed,
            self.outcomes.len(),
            failed
        );
        out
    }
}

/// Runs `case` until it fails or `cases` instances pass. Each case returns
/// the metric it checked (reported as the worst value seen) or a failure
/// message.
pub(crate) fn property(
    name: &'static str,
    cases: usize,
    rng: &mut ChaCha8Rng,
    mut case: impl FnMut(&mut ChaCha8Rng) -> Result<f64, String>,
) -> PropertyOutcome {
    let mut worst = 0.0f64;
    for i in 0..cases {
        match case(rng) {
            Ok(metric) => worst = worst.max(metric),
            Err(msg) => {
                return PropertyOutcome {
                    name,
                    cases: i + 1,
                    passed: false,
                    detail: format!("case {i}: {msg}"),
                }
            }
        }
    }
    PropertyOutcome { name, cases, passed: true, detail: format!("worst {worst:.3e}") }
}

/// Fails with a message when `err > tol`; returns `err` otherwise.
pub(crate) fn within(what: &str, err: f64, tol: f64) -> Result<f64, String> {
    if err <= tol {
        Ok(err)
    } else {
        Err(format!("{what}: {err:.3e} exceeds {tol:.0e}"))
    }
}

pub(crate) fn rel_err(got: f64, want: f64) -> f64 {
    if got == want {
        0.0
    } else {
        (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
    }
}

/// Runs every property.
pub fn run_suite(config: &VerifyConfig) -> VerifyReport {
    let mut outcomes = operators::run(config);
    outcomes.extend(discrete::run(config));
    VerifyReport { seed: config.seed, outcomes }
}

/// Runs the operator identities only (semigroup, duality, coercivity,
/// two-sided bound, Toeplitz structure, closed forms versus quadrature).
pub fn run_operator_suite(config: &VerifyConfig) -> VerifyReport {
    VerifyReport { seed: config.seed, outcomes: operators::run(config) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> VerifyConfig {
        VerifyConfig { instances: 10, oracle_draws: 5, ..VerifyConfig::default() }
    }

    #[test]
    fn faithful_run_passes_and_is_reproducible() {
        let a = run_suite(&quick());
        assert!(a.all_passed(), "{}", a.to_text());
        assert_eq!(a, run_suite(&quick()));
    }

    #[test]
    fn tampered_gamma_breaks_coercivity() {
        let r = run_operator_suite(&VerifyConfig { gamma_tamper: 1e-6, ..quick() });
        assert!(!r.outcome("coercivity").unwrap().passed, "{}", r.to_text());
        assert!(!r.all_passed());
    }
}
