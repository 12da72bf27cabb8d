//! Causal time marching for the space-time Galerkin system
//! `Σ_{j≤k} G[k][j]·M·U_j + τ_k·K·U_k = F_k`.

use crate::assembly::{assemble_load, LoadArray, ProblemSpec};
use crate::error::{domain, Error, Result};
use crate::fem1d::{assemble_mass, assemble_stiffness, Mesh1D, SpatialField, TridiagonalMatrix};
use crate::fracops::{temporal_weights, TemporalGrid, TemporalWeightMatrix};
use std::time::Instant;

/// Relative residual accepted for each step's tridiagonal solve.
pub const STEP_RESIDUAL_TOLERANCE: f64 = 1e-12;

/// Piecewise constant in time, P1 in space. `values` is row-major with one
/// row of `N` interior values per time interval.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    pub grid: TemporalGrid,
    pub mesh: Mesh1D,
    pub values: Vec<f64>,
}

impl SpaceTimeField {
    pub fn zeros(grid: TemporalGrid, mesh: Mesh1D) -> Self {
        let len = grid.steps() * mesh.n_interior();
        Self { grid, mesh, values: vec![0.0; len] }
    }

    pub fn steps(&self) -> usize {
        self.grid.steps()
    }

    pub fn row(&self, k: usize) -> &[f64] {
        let n = self.mesh.n_interior();
        &self.values[k * n..(k + 1) * n]
    }

    pub fn row_mut(&mut self, k: usize) -> &mut [f64] {
        let n = self.mesh.n_interior();
        &mut self.values[k * n..(k + 1) * n]
    }

    /// Value on interval `k` as a spatial field.
    pub fn slice(&self, k: usize) -> SpatialField {
        SpatialField { mesh: self.mesh, values: self.row(k).to_vec() }
    }

    /// Value on the last interval.
    pub fn final_slice(&self) -> SpatialField {
        self.slice(self.steps() - 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub steps: usize,
    /// Relative residual of each step's linear solve.
    pub residuals: Vec<f64>,
    pub wall_time_s: f64,
    /// Multiply-adds spent on history sums.
    pub history_flops: u64,
    /// Relative defect of the discrete energy identity, accumulated while
    /// marching; see [`energy_defect`].
    pub energy_defect: f64,
}

impl SolveReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Assembles the data of `spec` and marches over `grid`.
pub fn solve(spec: &ProblemSpec, grid: &TemporalGrid, mesh: &Mesh1D) -> Result<(SpaceTimeField, SolveReport)> {
    let weights = temporal_weights(grid, spec.alpha)?;
    let load = assemble_load(spec, grid, mesh)?;
    solve_with_load(&weights, mesh, &load)
}

/// `Σ_{j<k} G[k][j]·U_j` (without the mass matrix), summed in increasing `j`.
pub fn history_combination(weights: &TemporalWeightMatrix, field: &SpaceTimeField, k: usize, out: &mut [f64]) {
    out.iter_mut().for_each(|v| *v = 0.0);
    for j in 0..k {
        let g = weights.entry(k, j);
        for (o, u) in out.iter_mut().zip(field.row(j)) {
            *o += g * u;
        }
    }
}

/// `M·Σ_{j<k} G[k][j]·U_j`, the direct reference sum.
pub fn history_sum(weights: &TemporalWeightMatrix, mass: &TridiagonalMatrix, field: &SpaceTimeField, k: usize) -> Vec<f64> {
    let mut w = vec![0.0; field.mesh.n_interior()];
    history_combination(weights, field, k, &mut w);
    mass.mul_vec(&w)
}

fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Marches the lower block-triangular system for a given load.
pub fn solve_with_load(
    weights: &TemporalWeightMatrix,
    mesh: &Mesh1D,
    load: &LoadArray,
) -> Result<(SpaceTimeField, SolveReport)> {
    let start = Instant::now();
    let grid = weights.grid().clone();
    let steps = grid.steps();
    let n = mesh.n_interior();
    if load.steps() != steps || load.n() != n {
        return Err(domain(format!(
            "load of shape {}×{} does not match {} steps and {} unknowns",
            load.steps(),
            load.n(),
            steps,
            n
        )));
    }
    let mass = assemble_mass(mesh);
    let stiff = assemble_stiffness(mesh);
    let mut field = SpaceTimeField::zeros(grid, *mesh);
    let mut residuals = Vec::with_capacity(steps);
    let mut flops = 0u64;
    let mut combo = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let mut lhs = vec![0.0; n];
    let mut load_row = vec![0.0; n];
    // uniform grids share one system matrix across steps
    let mut system: Option<(f64, f64, TridiagonalMatrix)> = None;
    let (mut energy_lhs, mut energy_rhs, mut energy_scale) = (0.0, 0.0, 0.0);

    for k in 0..steps {
        let diag = weights.diagonal(k);
        let tau = field.grid.tau(k);
        if !(diag > 0.0) {
            return Err(Error::SingularStep {
                step: k,
                detail: format!("diagonal weight {diag:e} is not positive"),
            });
        }
        let a = match system.take() {
            Some((d, t, a)) if d == diag && t == tau => a,
            _ => mass.combine(diag, &stiff, tau),
        };

        history_combination(weights, &field, k, &mut combo);
        flops += (k * n) as u64;
        let history = mass.mul_vec(&combo);
        load.row_into(k, &mut rhs);
        load_row.copy_from_slice(&rhs);
        for (r, h) in rhs.iter_mut().zip(&history) {
            *r -= h;
        }

        let u = a.solve(&rhs).map_err(|e| match e {
            Error::SingularStep { detail, .. } => Error::SingularStep { step: k, detail },
            other => other,
        })?;
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularStep { step: k, detail: "non-finite solution".into() });
        }
        a.mul_vec_into(&u, &mut lhs);
        let r_norm = lhs.iter().zip(&rhs).fold(0.0f64, |m, (l, r)| m.max((l - r).abs()));
        let scale = a.max_row_sum() * sup_norm(&u) + sup_norm(&rhs);
        let rel = if scale > 0.0 { r_norm / scale } else { 0.0 };
        if rel > STEP_RESIDUAL_TOLERANCE {
            return Err(Error::Residual { step: k, residual: rel, tolerance: STEP_RESIDUAL_TOLERANCE });
        }
        residuals.push(rel);

        for (c, v) in combo.iter_mut().zip(&u) {
            *c += diag * v;
        }
        let memory = mass.bilinear(&u, &combo);
        let diffusion = tau * stiff.bilinear(&u, &u);
        let work: f64 = u.iter().zip(&load_row).map(|(u, f)| u * f).sum();
        energy_lhs += memory + diffusion;
        energy_rhs += work;
        energy_scale += memory.abs() + diffusion.abs() + work.abs();

        field.row_mut(k).copy_from_slice(&u);
        system = Some((diag, tau, a));
    }

    let report = SolveReport {
        steps,
        residuals,
        wall_time_s: start.elapsed().as_secs_f64(),
        history_flops: flops,
        energy_defect: if energy_scale > 0.0 {
            (energy_lhs - energy_rhs).abs() / energy_scale
        } else {
            0.0
        },
    };
    Ok((field, report))
}

/// Scalar analogue: `Σ_{j≤k} G[k][j]·y_j + τ_k·λ·y_k = y0·c_k + g_k`, where
/// `c_k` are the time factors of `D^α` applied to a constant and `g_k` are
/// the interval integrals of the source.
pub fn scalar_solve(alpha: f64, lambda: f64, grid: &TemporalGrid, y0: f64, g: &[f64]) -> Result<Vec<f64>> {
    let weights = temporal_weights(grid, alpha)?;
    scalar_solve_with_weights(&weights, lambda, y0, g)
}

pub fn scalar_solve_with_weights(weights: &TemporalWeightMatrix, lambda: f64, y0: f64, g: &[f64]) -> Result<Vec<f64>> {
    let grid = weights.grid();
    let steps = grid.steps();
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(domain(format!("scalar problem needs lambda >= 0, got {lambda}")));
    }
    if g.len() != steps {
        return Err(domain(format!("{} source factors for {steps} steps", g.len())));
    }
    let c = crate::assembly::initial_time_factors(grid, weights.alpha());
    let mut y = Vec::with_capacity(steps);
    for k in 0..steps {
        let history: f64 = (0..k).map(|j| weights.entry(k, j) * y[j]).sum();
        let d = weights.diagonal(k) + grid.tau(k) * lambda;
        y.push((y0 * c[k] + g[k] - history) / d);
    }
    Ok(y)
}

/// Relative defect of the discrete energy identity
/// `Σ_k U_kᵀ(M·Σ_{j≤k} G[k][j]·U_j + τ_k·K·U_k) = Σ_k U_kᵀ F_k`.
/// The defect is scaled by the sum of the absolute per-step terms.
pub fn energy_defect(weights: &TemporalWeightMatrix, field: &SpaceTimeField, load: &LoadArray) -> f64 {
    let n = field.mesh.n_interior();
    let mass = assemble_mass(&field.mesh);
    let stiff = assemble_stiffness(&field.mesh);
    let mut combo = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let (mut lhs_total, mut rhs_total, mut scale) = (0.0, 0.0, 0.0);
    for k in 0..field.steps() {
        let u = field.row(k);
        history_combination(weights, field, k, &mut combo);
        let g = weights.diagonal(k);
        for (c, v) in combo.iter_mut().zip(u) {
            *c += g * v;
        }
        let a = mass.bilinear(u, &combo);
        let b = field.grid.tau(k) * stiff.bilinear(u, u);
        load.row_into(k, &mut rhs);
        let f: f64 = u.iter().zip(&rhs).map(|(u, f)| u * f).sum();
        lhs_total += a + b;
        rhs_total += f;
        scale += a.abs() + b.abs() + f.abs();
    }
    if scale == 0.0 {
        0.0
    } else {
        (lhs_total - rhs_total).abs() / scale
    }
}

#[cfg(test)]
mod tests;
