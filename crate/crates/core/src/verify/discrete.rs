//! Properties of the spatial discretization and of the time-marching solver.

use super::operators::{random_grid, random_values};
use super::{property, within, PropertyOutcome, VerifyConfig};
use crate::assembly::{assemble_load, initial_time_factors, LoadArray, ProblemSpec};
use crate::fem1d::{
    assemble_mass, assemble_stiffness, discrete_eigenvalue, power_load_vector, sine_nodal_vector, Mesh1D,
    SpatialField,
};
use crate::fracops::{temporal_weights, TemporalGrid};
use crate::solver::{energy_defect, scalar_solve, solve, solve_with_load};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn random_mesh(rng: &mut ChaCha8Rng, max_cells: usize) -> Mesh1D {
    Mesh1D::new(rng.gen_range(2..=max_cells)).expect("at least two cells")
}

fn random_load(rng: &mut ChaCha8Rng, steps: usize, n: usize) -> LoadArray {
    let mut load = LoadArray::zero(steps, n);
    for _ in 0..3 {
        let time = (0..steps).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let space = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        load.push(time, space).expect("shapes match");
    }
    load
}

/// Row sums of `M` equal `h` away from the boundary; `M` and `K` are
/// positive definite (`xᵀAx > 0` for random `x`).
fn matrices(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let mesh = random_mesh(rng, 64);
    let (m, k) = (assemble_mass(&mesh), assemble_stiffness(&mesh));
    let n = mesh.n_interior();
    let h = mesh.h();
    let ones = m.mul_vec(&vec![1.0; n]);
    let mut worst = 0.0f64;
    for (i, s) in ones.iter().enumerate() {
        let want = if i == 0 || i + 1 == n { 5.0 * h / 6.0 } else { h };
        let want = if n == 1 { 4.0 * h / 6.0 } else { want };
        worst = worst.max((s - want).abs() / h);
    }
    let x = random_values(rng, n);
    if !(m.bilinear(&x, &x) > 0.0 && k.bilinear(&x, &x) > 0.0) {
        return Err("mass or stiffness form is not positive".into());
    }
    within("mass row sums", worst, 1e-14)
}

/// Closed-form eigenvalues of the pencil against a dense solve, and the
/// sine vectors as eigenvectors.
fn pencil(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let mesh = random_mesh(rng, 24);
    let n = mesh.n_interior();
    let md = assemble_mass(&mesh).to_dense();
    let kd = assemble_stiffness(&mesh).to_dense();
    let md = DMatrix::from_fn(n, n, |i, j| md[i][j]);
    let kd = DMatrix::from_fn(n, n, |i, j| kd[i][j]);
    let l = md.cholesky().ok_or("mass matrix is not positive definite")?.l();
    let li = l.try_inverse().ok_or("singular Cholesky factor")?;
    let a = &li * kd * li.transpose();
    let a = (&a + a.transpose()) * 0.5;
    let mut dense: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    dense.sort_by(f64::total_cmp);
    let mut worst = 0.0f64;
    let (m, k) = (assemble_mass(&mesh), assemble_stiffness(&mesh));
    for (mode, got) in (1..=n).zip(&dense) {
        let lam = discrete_eigenvalue(&mesh, mode);
        worst = worst.max((got - lam).abs() / lam);
        let s = sine_nodal_vector(&mesh, mode);
        for (a, b) in k.mul_vec(&s).iter().zip(m.mul_vec(&s)) {
            worst = worst.max((a - lam * b).abs() / lam);
        }
    }
    within("pencil eigenpairs", worst, 1e-10)
}

/// Prolongation of a coarse field is exact at the coarse nodes and linear
/// in between; restriction undoes it.
fn prolongation(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let coarse = random_mesh(rng, 32);
    let factor = 1usize << rng.gen_range(1..=3);
    let fine = Mesh1D::new(coarse.n_cells() * factor).map_err(err)?;
    let field = SpatialField::new(coarse, random_values(rng, coarse.n_interior())).map_err(err)?;
    let up = field.prolong(&fine).map_err(err)?;
    let mut worst = 0.0f64;
    for node in 0..=fine.n_cells() {
        let cell = (node / factor).min(coarse.n_cells() - 1);
        let s = (node - cell * factor) as f64 / factor as f64;
        let want = (1.0 - s) * field.node_value(cell) + s * field.node_value(cell + 1);
        worst = worst.max((up.node_value(node) - want).abs());
    }
    let back = up.restrict(&coarse).map_err(err)?;
    if back.values != field.values {
        return Err("restriction does not undo prolongation".into());
    }
    within("prolongation", worst, 1e-14)
}

/// Hat moments of `x^r` add up to `∫_0^1 x^r` minus the two boundary half
/// hats, and are positive.
fn loads(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let mesh = random_mesh(rng, 128);
    let r = rng.gen_range(-0.99..2.0);
    let f = power_load_vector(&mesh, r).map_err(err)?;
    if f.iter().any(|v| !(*v > 0.0)) {
        return Err(format!("non-positive load entry for r = {r}"));
    }
    let h = mesh.h();
    // the interior hats sum to 1 except on the first and last cells
    let tail = |s: f64| -(s * (-h).ln_1p()).exp_m1();
    let want = ((1.0 - h).powf(r + 1.0) - h.powf(r + 1.0)) / (r + 1.0)
        + h.powf(r + 1.0) / (r + 2.0)
        + (tail(r + 1.0) / (r + 1.0) - tail(r + 2.0) / (r + 2.0)) / h;
    let got: f64 = f.iter().sum();
    within("load telescoping", (got - want).abs() / want, 1e-12)
}

fn block_equivalence(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let mesh = Mesh1D::new(8).map_err(err)?;
    let n = mesh.n_interior();
    let steps = 16;
    let alpha = [0.3, 0.5, 0.8][rng.gen_range(0..3)];
    let grid = if rng.gen_bool(0.5) {
        TemporalGrid::uniform(1.0, steps).map_err(err)?
    } else {
        let mut nodes = vec![0.0];
        for _ in 0..steps {
            let last = *nodes.last().unwrap();
            nodes.push(last + rng.gen_range(0.2..1.0) / steps as f64);
        }
        TemporalGrid::from_nodes(nodes).map_err(err)?
    };
    let weights = temporal_weights(&grid, alpha).map_err(err)?;
    let load = random_load(rng, steps, n);
    let (field, _) = solve_with_load(&weights, &mesh, &load).map_err(err)?;

    let mass = assemble_mass(&mesh).to_dense();
    let stiff = assemble_stiffness(&mesh).to_dense();
    let size = steps * n;
    let mut a = DMatrix::<f64>::zeros(size, size);
    for k in 0..steps {
        for j in 0..=k {
            let g = weights.entry(k, j);
            for p in 0..n {
                for q in 0..n {
                    let diffusion = if j == k { grid.tau(k) * stiff[p][q] } else { 0.0 };
                    a[(k * n + p, j * n + q)] = g * mass[p][q] + diffusion;
                }
            }
        }
    }
    let x = a.lu().solve(&DVector::from_vec(load.to_dense())).ok_or("dense system is singular")?;
    let scale = x.amax();
    let worst = field.values.iter().zip(x.iter()).fold(0.0f64, |m, (u, v)| m.max((u - v).abs()));
    within("marching vs dense", worst / scale, 1e-10)
}

fn spectral(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let mesh = Mesh1D::new(32).map_err(err)?;
    let grid = TemporalGrid::uniform(1.0, 128).map_err(err)?;
    let alpha = 0.6;
    let mode = rng.gen_range(1..32);
    let spec = ProblemSpec::spectral_test(alpha, mode, &mesh).map_err(err)?;
    let (field, _) = solve(&spec, &grid, &mesh).map_err(err)?;
    let y = scalar_solve(alpha, discrete_eigenvalue(&mesh, mode), &grid, 1.0, &[0.0; 128]).map_err(err)?;
    let s = sine_nodal_vector(&mesh, mode);
    let mut worst = 0.0f64;
    for (k, yk) in y.iter().enumerate() {
        for (u, s) in field.row(k).iter().zip(&s) {
            worst = worst.max((u - yk * s).abs());
        }
    }
    within("spectral decoupling", worst / y[0].abs(), 1e-10)
}

/// Changing the load from step `k0` on leaves earlier steps bit-identical.
fn causality(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let mesh = random_mesh(rng, 16);
    let grid = random_grid(rng, 24);
    let steps = grid.steps();
    let n = mesh.n_interior();
    let weights = temporal_weights(&grid, rng.gen_range(0.05..0.95)).map_err(err)?;
    let base = random_load(rng, steps, n);
    let k0 = rng.gen_range(0..steps);
    let mut changed = base.clone();
    let mut time = vec![0.0; steps];
    time[k0] = 1.0;
    changed.push(time, random_values(rng, n)).map_err(err)?;
    let (a, _) = solve_with_load(&weights, &mesh, &base).map_err(err)?;
    let (b, _) = solve_with_load(&weights, &mesh, &changed).map_err(err)?;
    if a.values[..k0 * n] != b.values[..k0 * n] {
        return Err(format!("steps before {k0} changed"));
    }
    Ok(0.0)
}

fn energy(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let mesh = random_mesh(rng, 32);
    let grid = random_grid(rng, 32);
    let alpha = rng.gen_range(0.05..0.95);
    let weights = temporal_weights(&grid, alpha).map_err(err)?;
    let load = if rng.gen_bool(0.5) {
        random_load(rng, grid.steps(), mesh.n_interior())
    } else {
        let grid = TemporalGrid::uniform(1.0, grid.steps()).map_err(err)?;
        let spec = match rng.gen_range(0..3) {
            0 => ProblemSpec::experiment1(alpha, rng.gen_range(-0.99..0.0)),
            1 => ProblemSpec::experiment2(alpha, rng.gen_range(0.0..2.0)),
            _ => ProblemSpec::manufactured(alpha),
        }
        .map_err(err)?;
        let weights = temporal_weights(&grid, alpha).map_err(err)?;
        let load = assemble_load(&spec, &grid, &mesh).map_err(err)?;
        let (field, report) = solve_with_load(&weights, &mesh, &load).map_err(err)?;
        let defect = energy_defect(&weights, &field, &load);
        if (defect - report.energy_defect).abs() > 1e-12 {
            return Err("inline and recomputed energy defects disagree".into());
        }
        return within("energy defect", defect, 1e-10);
    };
    let (field, _) = solve_with_load(&weights, &mesh, &load).map_err(err)?;
    within("energy defect", energy_defect(&weights, &field, &load), 1e-10)
}

/// Zero load gives the zero field; a constant-in-time load with `λ = 0`
/// reproduces the initial value through the row sums of the weights.
fn zero_data(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let mesh = random_mesh(rng, 16);
    let grid = random_grid(rng, 16);
    let weights = temporal_weights(&grid, rng.gen_range(0.05..0.95)).map_err(err)?;
    let (field, _) =
        solve_with_load(&weights, &mesh, &LoadArray::zero(grid.steps(), mesh.n_interior())).map_err(err)?;
    if field.values.iter().any(|v| *v != 0.0) {
        return Err("zero data produced a nonzero field".into());
    }
    let c = initial_time_factors(&grid, weights.alpha());
    let y0 = rng.gen_range(-2.0..2.0);
    let y = scalar_solve(weights.alpha(), 0.0, &grid, y0, &vec![0.0; grid.steps()]).map_err(err)?;
    if c.iter().any(|v| !(*v > 0.0)) {
        return Err("initial time factors must be positive".into());
    }
    let worst = y.iter().fold(0.0f64, |m, v| m.max((v - y0).abs()));
    within("constant initial value", worst / y0.abs().max(1e-3), 1e-12)
}

pub(super) fn run(config: &VerifyConfig) -> Vec<PropertyOutcome> {
    let n = config.instances;
    // the dense and full-solve properties are the expensive ones
    let few = (n / 10).max(3);
    vec![
        property("matrices", n, &mut config.rng(20), matrices),
        property("pencil_eigenpairs", few, &mut config.rng(21), pencil),
        property("prolongation", n, &mut config.rng(22), prolongation),
        property("load_telescoping", n, &mut config.rng(23), loads),
        property("block_equivalence", few, &mut config.rng(24), block_equivalence),
        property("spectral_decoupling", few, &mut config.rng(25), spectral),
        property("causality", n, &mut config.rng(26), causality),
        property("energy_identity", n, &mut config.rng(27), energy),
        property("zero_data", n, &mut config.rng(28), zero_data),
    ]
}
