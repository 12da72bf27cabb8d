//! Refinement sweeps: solve at a ladder of dyadic resolutions, measure
//! space-time errors against a finer reference (or an exact solution) and
//! report observed orders.

mod cache;
mod plans;
mod table;
mod theory;

pub use cache::{ReferenceCache, CACHE_DIR_VAR};
pub use plans::{registered_plan, registered_plan_names};
pub use table::{order_fit, ConvergenceRow, ConvergenceTable, TableMeta};
pub use theory::{expected_orders, predicted_orders, ExpectedOrders, OrderPair, RegularityCase};

use crate::assembly::{assemble_load, ProblemSpec};
use crate::error::{domain, Error, Result};
use crate::fem1d::{assemble_mass, assemble_stiffness, Mesh1D};
use crate::fracops::{temporal_weights, TemporalGrid};
use crate::solver::{solve_with_load, SolveReport, SpaceTimeField};
use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

/// Default cap on the estimated multiply-adds of one sweep.
pub const DEFAULT_BUDGET: f64 = 2e11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    Space,
    Time,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Space => "space",
            SweepAxis::Time => "time",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "space" | "h" => Some(SweepAxis::Space),
            "time" | "tau" => Some(SweepAxis::Time),
            _ => None,
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A resolution: `n_cells` uniform cells in space, `n_steps` uniform steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Level {
    pub n_cells: usize,
    pub n_steps: usize,
}

impl Level {
    pub fn new(n_cells: usize, n_steps: usize) -> Self {
        Self { n_cells, n_steps }
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n_cells as f64
    }

    /// Estimated multiply-adds of one solve: the history sums dominate.
    pub fn work(&self) -> f64 {
        let (j, n) = (self.n_steps as f64, self.n_cells as f64);
        0.5 * j * (j + 1.0) * n + 20.0 * j * n
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reference {
    Numerical(Level),
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub problem: ProblemSpec,
    /// Data parameters echoed into the table metadata.
    pub params: BTreeMap<String, f64>,
    pub axis: SweepAxis,
    pub levels: Vec<Level>,
    pub reference: Reference,
    /// Cap on estimated multiply-adds.
    pub budget: f64,
}

impl SweepPlan {
    /// `count` levels doubling along `axis`, starting from `coarsest`.
    pub fn dyadic(
        problem: ProblemSpec,
        params: BTreeMap<String, f64>,
        axis: SweepAxis,
        coarsest: Level,
        count: usize,
        reference: Reference,
    ) -> Self {
        let levels = (0..count)
            .map(|i| match axis {
                SweepAxis::Space => Level::new(coarsest.n_cells << i, coarsest.n_steps),
                SweepAxis::Time => Level::new(coarsest.n_cells, coarsest.n_steps << i),
            })
            .collect();
        Self { problem, params, axis, levels, reference, budget: DEFAULT_BUDGET }
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() {
            return Err(domain("a sweep needs at least one level"));
        }
        for l in &self.levels {
            if l.n_cells < 2 || l.n_steps < 1 {
                return Err(domain(format!("degenerate level {l:?}")));
            }
        }
        for w in self.levels.windows(2) {
            let (a, b) = (w[0], w[1]);
            let dyadic = match self.axis {
                SweepAxis::Space => b.n_cells == 2 * a.n_cells && b.n_steps == a.n_steps,
                SweepAxis::Time => b.n_steps == 2 * a.n_steps && b.n_cells == a.n_cells,
            };
            if !dyadic {
                return Err(Error::NotNested(format!(
                    "levels {a:?} -> {b:?} are not one dyadic {} refinement",
                    self.axis
                )));
            }
        }
        match self.reference {
            Reference::Exact => {
                if self.problem.exact_solution().is_none() {
                    return Err(domain(format!(
                        "problem {} has no exact solution to compare with",
                        self.problem.tag
                    )));
                }
            }
            Reference::Numerical(r) => {
                for l in &self.levels {
                    if r.n_cells % l.n_cells != 0 || r.n_steps % l.n_steps != 0 {
                        return Err(Error::NotNested(format!(
                            "reference {r:?} does not refine level {l:?}"
                        )));
                    }
                    let finer = match self.axis {
                        SweepAxis::Space => r.n_cells > l.n_cells,
                        SweepAxis::Time => r.n_steps > l.n_steps,
                    };
                    if !finer {
                        return Err(Error::NotNested(format!(
                            "reference {r:?} is not finer than level {l:?} along {}",
                            self.axis
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Estimated multiply-adds, counting the reference unless cached.
    pub fn work(&self, include_reference: bool) -> f64 {
        let levels: f64 = self.levels.iter().map(Level::work).sum();
        match self.reference {
            Reference::Numerical(r) if include_reference => levels + r.work(),
            _ => levels,
        }
    }
}

/// Solves `problem` at `level`, returning the field and its report.
pub fn solve_level(problem: &ProblemSpec, level: Level) -> Result<(SpaceTimeField, SolveReport)> {
    let grid = TemporalGrid::uniform(problem.t_final, level.n_steps)?;
    let mesh = Mesh1D::new(level.n_cells)?;
    let weights = temporal_weights(&grid, problem.alpha)?;
    let load = assemble_load(problem, &grid, &mesh)?;
    solve_with_load(&weights, &mesh, &load)
}

/// `(‖ũ - U‖_{L²(0,T;H¹₀)}, ‖ũ - U‖_{L²(0,T;L²)})` for `reference` living on
/// a nested refinement of `coarse` in space and time. The difference is
/// piecewise constant on the fine time grid and piecewise linear on the
/// fine mesh, so both norms are exact.
pub fn space_time_errors(coarse: &SpaceTimeField, reference: &SpaceTimeField) -> Result<(f64, f64)> {
    let q = coarse.grid.refinement_factor(&reference.grid)?;
    let fine_mesh = reference.mesh;
    coarse.mesh.refinement_factor(&fine_mesh)?;
    let mass = assemble_mass(&fine_mesh);
    let stiff = assemble_stiffness(&fine_mesh);
    let mut d = vec![0.0; fine_mesh.n_interior()];
    let (mut e1, mut e2) = (0.0, 0.0);
    for k in 0..coarse.steps() {
        let p = coarse.slice(k).prolong(&fine_mesh)?;
        for kf in k * q..(k + 1) * q {
            for ((d, a), b) in d.iter_mut().zip(&p.values).zip(reference.row(kf)) {
                *d = a - b;
            }
            let tau = reference.grid.tau(kf);
            e1 += tau * stiff.bilinear(&d, &d).max(0.0);
            e2 += tau * mass.bilinear(&d, &d).max(0.0);
        }
    }
    Ok((e1.sqrt(), e2.sqrt()))
}

/// Runs the sweep. The reference is read from `cache` when a matching entry
/// exists and written to it otherwise.
pub fn run_sweep(plan: &SweepPlan, cache: Option<&ReferenceCache>) -> Result<ConvergenceTable> {
    plan.validate()?;
    let start = Instant::now();
    let problem = &plan.problem;

    let cached = match (plan.reference, cache) {
        (Reference::Numerical(r), Some(c)) => c.load(problem, r)?,
        _ => None,
    };
    let work = plan.work(cached.is_none());
    if work > plan.budget {
        return Err(Error::Budget(format!(
            "sweep needs about {work:.3e} multiply-adds, budget is {:.3e}",
            plan.budget
        )));
    }

    let mut max_defect = 0.0f64;
    let mut max_residual = 0.0f64;
    let mut note = |report: &SolveReport| {
        max_defect = max_defect.max(report.energy_defect);
        max_residual = max_residual.max(report.max_residual());
    };

    let reference = match (plan.reference, cached) {
        (Reference::Numerical(_), Some(field)) => Some(field),
        (Reference::Numerical(r), None) => {
            let (field, report) = solve_level(problem, r)?;
            note(&report);
            if let Some(c) = cache {
                c.store(problem, r, &field)?;
            }
            Some(field)
        }
        (Reference::Exact, _) => None,
    };

    let mut rows = Vec::with_capacity(plan.levels.len());
    for &level in &plan.levels {
        let (field, report) = solve_level(problem, level)?;
        note(&report);
        let (e1, e2) = match &reference {
            Some(r) => space_time_errors(&field, r)?,
            None => problem
                .exact_solution()
                .expect("validated")
                .error_norms(&field.grid, &field.mesh, &field.values)?,
        };
        rows.push(ConvergenceRow {
            h: level.h(),
            tau: problem.t_final / level.n_steps as f64,
            e1,
            order1: None,
            e2,
            order2: None,
        });
    }

    let (h_ref, tau_ref) = match plan.reference {
        Reference::Numerical(r) => (Some(r.h()), Some(problem.t_final / r.n_steps as f64)),
        Reference::Exact => (None, None),
    };
    let meta = TableMeta {
        alpha: problem.alpha,
        experiment: problem.tag.to_string(),
        axis: plan.axis.to_string(),
        params: plan.params.clone(),
        h_ref,
        tau_ref,
        runtime_s: start.elapsed().as_secs_f64(),
        max_energy_defect: max_defect,
        max_step_residual: max_residual,
        predicted: predicted_orders(problem).ok(),
    };
    ConvergenceTable { meta, rows }.with_orders()
}

#[cfg(test)]
mod tests;
