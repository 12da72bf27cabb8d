//! Named desk-scale sweeps. References use `τ_ref = 2^-12` or
//! `h_ref = 2^-9` unless an exact solution is available.

use super::{Level, Reference, SweepAxis, SweepPlan};
use crate::assembly::ProblemSpec;
use std::collections::BTreeMap;

const NAMES: &[&str] = &[
    "manufactured-space",
    "manufactured-time",
    "exp1-space",
    "exp1-time",
    "exp2-space",
    "exp2-time",
    "exp3-space",
    "exp3-time",
];

pub fn registered_plan_names() -> &'static [&'static str] {
    NAMES
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// The named plan, with its default data parameters.
pub fn registered_plan(name: &str) -> Option<SweepPlan> {
    let plan = match name {
        "manufactured-space" => SweepPlan::dyadic(
            ProblemSpec::manufactured(0.8).ok()?,
            params(&[]),
            SweepAxis::Space,
            Level::new(8, 1024),
            5,
            Reference::Numerical(Level::new(1024, 1024)),
        ),
        "manufactured-time" => SweepPlan::dyadic(
            ProblemSpec::manufactured(0.8).ok()?,
            params(&[]),
            SweepAxis::Time,
            Level::new(256, 16),
            6,
            Reference::Exact,
        ),
        "exp1-space" => SweepPlan::dyadic(
            ProblemSpec::experiment1(0.2, -0.8).ok()?,
            params(&[("r", -0.8)]),
            SweepAxis::Space,
            Level::new(8, 4096),
            4,
            Reference::Numerical(Level::new(512, 4096)),
        ),
        "exp1-time" => SweepPlan::dyadic(
            ProblemSpec::experiment1(0.4, -0.49).ok()?,
            params(&[("r", -0.49)]),
            SweepAxis::Time,
            Level::new(128, 32),
            4,
            Reference::Numerical(Level::new(128, 4096)),
        ),
        "exp2-space" => SweepPlan::dyadic(
            ProblemSpec::experiment2(0.7, 1.0).ok()?,
            params(&[("c", 1.0)]),
            SweepAxis::Space,
            Level::new(4, 4096),
            5,
            Reference::Numerical(Level::new(512, 4096)),
        ),
        "exp2-time" => SweepPlan::dyadic(
            ProblemSpec::experiment2(0.8, 0.0).ok()?,
            params(&[("c", 0.0)]),
            SweepAxis::Time,
            Level::new(128, 16),
            6,
            Reference::Numerical(Level::new(128, 4096)),
        ),
        "exp3-space" => SweepPlan::dyadic(
            ProblemSpec::experiment3(0.8).ok()?,
            params(&[("sigma", 0.29)]),
            SweepAxis::Space,
            Level::new(8, 4096),
            4,
            Reference::Numerical(Level::new(512, 4096)),
        ),
        "exp3-time" => SweepPlan::dyadic(
            ProblemSpec::experiment3(0.8).ok()?,
            params(&[("sigma", 0.29)]),
            SweepAxis::Time,
            Level::new(256, 64),
            4,
            Reference::Numerical(Level::new(256, 4096)),
        ),
        _ => return None,
    };
    Some(plan)
}
