use super::*;
use crate::assembly::{initial_time_factors, Experiment, InitialData};
use crate::fem1d::{discrete_eigenvalue, sine_nodal_vector};
use crate::special::gamma;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_load(steps: usize, mesh: &Mesh1D, seed: u64) -> LoadArray {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut load = LoadArray::zero(steps, mesh.n_interior());
    for _ in 0..3 {
        let time = (0..steps).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let space = (0..mesh.n_interior()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        load.push(time, space).unwrap();
    }
    load
}

#[test]
fn zero_data_gives_zero_field() {
    let grid = TemporalGrid::uniform(1.0, 16).unwrap();
    let mesh = Mesh1D::new(8).unwrap();
    let spec = ProblemSpec::new(0.5, 1.0, InitialData::Zero, Vec::new(), Experiment::Experiment3).unwrap();
    let (field, report) = solve(&spec, &grid, &mesh).unwrap();
    assert!(field.values.iter().all(|v| *v == 0.0));
    assert_eq!(report.steps, 16);
}

#[test]
fn marching_equals_dense_block_solve() {
    let mesh = Mesh1D::new(8).unwrap();
    let n = 7;
    let steps = 16;
    for (alpha, grid) in [
        (0.3, TemporalGrid::uniform(1.0, steps).unwrap()),
        (0.5, TemporalGrid::from_nodes((0..=steps).map(|k| (k as f64 / steps as f64).powi(2)).collect()).unwrap()),
        (0.8, TemporalGrid::uniform(1.0, steps).unwrap()),
    ] {
        let weights = temporal_weights(&grid, alpha).unwrap();
        let load = random_load(steps, &mesh, 5);
        let (field, _) = solve_with_load(&weights, &mesh, &load).unwrap();

        let mass = assemble_mass(&mesh).to_dense();
        let stiff = assemble_stiffness(&mesh).to_dense();
        let size = steps * n;
        let mut a = DMatrix::<f64>::zeros(size, size);
        for k in 0..steps {
            for j in 0..=k {
                let g = weights.entry(k, j);
                for p in 0..n {
                    for q in 0..n {
                        let mut v = g * mass[p][q];
                        if j == k {
                            v += grid.tau(k) * stiff[p][q];
                        }
                        a[(k * n + p, j * n + q)] = v;
                    }
                }
            }
        }
        let b = DVector::from_vec(load.to_dense());
        let x = a.lu().solve(&b).unwrap();
        let scale = x.amax();
        for (got, want) in field.values.iter().zip(x.iter()) {
            assert!((got - want).abs() < 1e-10 * scale, "alpha {alpha}");
        }
    }
}

#[test]
fn spectral_problem_decouples() {
    let mesh = Mesh1D::new(32).unwrap();
    let grid = TemporalGrid::uniform(1.0, 128).unwrap();
    for mode in [1, 5, 31] {
        let spec = ProblemSpec::spectral_test(0.6, mode, &mesh).unwrap();
        let (field, _) = solve(&spec, &grid, &mesh).unwrap();
        let lam = discrete_eigenvalue(&mesh, mode);
        let y = scalar_solve(0.6, lam, &grid, 1.0, &vec![0.0; 128]).unwrap();
        let s = sine_nodal_vector(&mesh, mode);
        for k in 0..128 {
            for (u, s) in field.row(k).iter().zip(&s) {
                assert!((u - y[k] * s).abs() < 1e-10 * y[0].abs(), "mode {mode} step {k}");
            }
        }
    }
}

#[test]
fn scalar_first_step() {
    let grid = TemporalGrid::uniform(1.0, 8).unwrap();
    let tau = 0.125;
    let y = scalar_solve(0.4, 0.0, &grid, 0.0, &[tau; 8]).unwrap();
    assert!((y[0] - gamma(1.6) * tau.powf(0.4)).abs() < 1e-14);
    assert!(scalar_solve(0.4, 1.0, &grid, 0.0, &[0.0; 8]).unwrap().iter().all(|v| *v == 0.0));
    assert!(scalar_solve(0.4, -1.0, &grid, 0.0, &[0.0; 8]).is_err());
}

#[test]
fn scalar_without_decay_keeps_constant_initial_value() {
    // λ = 0, g = 0: the discrete solution of D^α(y - y0) = 0 is y ≡ y0
    // because each row of G sums to the initial time factor
    let grid = TemporalGrid::from_nodes(vec![0.0, 0.05, 0.2, 0.3, 0.7, 1.0]).unwrap();
    let y = scalar_solve(0.7, 0.0, &grid, 2.5, &[0.0; 5]).unwrap();
    let c = initial_time_factors(&grid, 0.7);
    assert!(c.iter().all(|v| *v > 0.0));
    for v in y {
        assert!((v - 2.5).abs() < 1e-13);
    }
}

#[test]
fn causality_is_bit_exact() {
    let mesh = Mesh1D::new(10).unwrap();
    let grid = TemporalGrid::uniform(1.0, 20).unwrap();
    let weights = temporal_weights(&grid, 0.45).unwrap();
    let base = random_load(20, &mesh, 9);
    let (a, _) = solve_with_load(&weights, &mesh, &base).unwrap();
    let mut late = base.clone();
    let mut time = vec![0.0; 20];
    time[12] = 3.0;
    time[19] = -1.0;
    late.push(time, vec![1.0; 9]).unwrap();
    let (b, _) = solve_with_load(&weights, &mesh, &late).unwrap();
    assert_eq!(a.values[..12 * 9], b.values[..12 * 9]);
    assert_ne!(a.row(12), b.row(12));
}

#[test]
fn history_of_constant_field_telescopes() {
    let mesh = Mesh1D::new(6).unwrap();
    let grid = TemporalGrid::uniform(2.0, 10).unwrap();
    let weights = temporal_weights(&grid, 0.35).unwrap();
    let mut field = SpaceTimeField::zeros(grid, mesh);
    field.values.iter_mut().for_each(|v| *v = 1.0);
    let mass = assemble_mass(&mesh);
    assert!(history_sum(&weights, &mass, &field, 0).iter().all(|v| *v == 0.0));
    for k in 1..10 {
        let h = history_sum(&weights, &mass, &field, k);
        let factor = weights.telescoped_row_sum(k) - weights.diagonal(k);
        let want = mass.mul_vec(&[factor; 5]);
        for (h, w) in h.iter().zip(&want) {
            assert!((h - w).abs() < 1e-13 * w.abs());
        }
    }
}

#[test]
fn energy_identity_and_residuals() {
    let mesh = Mesh1D::new(16).unwrap();
    let grid = TemporalGrid::uniform(1.0, 32).unwrap();
    for spec in [
        ProblemSpec::experiment1(0.2, -0.8).unwrap(),
        ProblemSpec::experiment2(0.7, 1.0).unwrap(),
        ProblemSpec::experiment3(0.8).unwrap(),
        ProblemSpec::manufactured(0.5).unwrap(),
    ] {
        let weights = temporal_weights(&grid, spec.alpha).unwrap();
        let load = assemble_load(&spec, &grid, &mesh).unwrap();
        let (field, report) = solve_with_load(&weights, &mesh, &load).unwrap();
        assert!(report.max_residual() <= STEP_RESIDUAL_TOLERANCE);
        let defect = energy_defect(&weights, &field, &load);
        assert!(defect < 1e-10, "{:?}", spec.tag);
        assert!((defect - report.energy_defect).abs() < 1e-12);
    }
}

#[test]
fn manufactured_errors_shrink() {
    let spec = ProblemSpec::manufactured(0.8).unwrap();
    let exact = spec.exact_solution().unwrap();
    let mut prev = f64::INFINITY;
    for (nx, nt) in [(16, 64), (32, 128), (64, 256)] {
        let mesh = Mesh1D::new(nx).unwrap();
        let grid = TemporalGrid::uniform(1.0, nt).unwrap();
        let (field, _) = solve(&spec, &grid, &mesh).unwrap();
        let (_, e2) = exact.error_norms(&grid, &mesh, &field.values).unwrap();
        assert!(e2 < 0.6 * prev, "{e2} after {prev}");
        prev = e2;
    }
}

#[test]
fn rejects_mismatched_load() {
    let mesh = Mesh1D::new(4).unwrap();
    let grid = TemporalGrid::uniform(1.0, 4).unwrap();
    let weights = temporal_weights(&grid, 0.5).unwrap();
    assert!(solve_with_load(&weights, &mesh, &LoadArray::zero(5, 3)).is_err());
}
