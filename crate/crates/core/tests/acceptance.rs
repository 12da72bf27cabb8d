//! Acceptance criteria, one line each. Run with
//! `cargo test -p fracstep-core --test acceptance`.

use fracstep::assembly::{LoadArray, ProblemSpec};
use fracstep::fem1d::{assemble_mass, assemble_stiffness, discrete_eigenvalue, sine_nodal_vector, Mesh1D};
use fracstep::fracops::{temporal_weights, TemporalGrid};
use fracstep::harness::{registered_plan, run_sweep, ConvergenceTable};
use fracstep::solver::{scalar_solve, solve, solve_with_load};
use fracstep::verify::{run_operator_suite, VerifyConfig};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::ExitCode;
use std::time::Instant;

struct Outcome {
    passed: bool,
    detail: String,
}

fn check(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn in_band(v: f64, lo: f64, hi: f64) -> bool {
    (lo..=hi).contains(&v)
}

fn sweep(name: &str, defects: &mut Vec<(String, f64)>) -> ConvergenceTable {
    let table = run_sweep(&registered_plan(name).expect("registered"), None).expect("sweep runs");
    defects.push((name.to_string(), table.meta.max_energy_defect));
    table
}

fn operator_suite() -> Outcome {
    let start = Instant::now();
    let report = run_operator_suite(&VerifyConfig::default());
    let secs = start.elapsed().as_secs_f64();
    let failed: Vec<&str> = report.outcomes.iter().filter(|o| !o.passed).map(|o| o.name).collect();
    let required = ["semigroup", "duality", "coercivity", "two_sided_bound"];
    let present = required.iter().all(|n| report.outcome(n).is_some_and(|o| o.cases >= 100));
    check(
        failed.is_empty() && present && secs < 30.0,
        format!("{} properties, failed {:?}, {secs:.1} s", report.outcomes.len(), failed),
    )
}

fn block_equivalence(defects: &mut Vec<(String, f64)>) -> Outcome {
    let mesh = Mesh1D::new(8).unwrap();
    let n = mesh.n_interior();
    let steps = 16;
    let grid = TemporalGrid::uniform(1.0, steps).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut worst = 0.0f64;
    for alpha in [0.3, 0.5, 0.8] {
        let weights = temporal_weights(&grid, alpha).unwrap();
        let mut load = LoadArray::zero(steps, n);
        for _ in 0..3 {
            let time = (0..steps).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let space = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            load.push(time, space).unwrap();
        }
        let (field, report) = solve_with_load(&weights, &mesh, &load).unwrap();
        defects.push((format!("block alpha {alpha}"), report.energy_defect));
        let mass = assemble_mass(&mesh).to_dense();
        let stiff = assemble_stiffness(&mesh).to_dense();
        let size = steps * n;
        let mut a = DMatrix::<f64>::zeros(size, size);
        for k in 0..steps {
            for j in 0..=k {
                for p in 0..n {
                    for q in 0..n {
                        let diffusion = if j == k { grid.tau(k) * stiff[p][q] } else { 0.0 };
                        a[(k * n + p, j * n + q)] = weights.entry(k, j) * mass[p][q] + diffusion;
                    }
                }
            }
        }
        let x = a.lu().solve(&DVector::from_vec(load.to_dense())).unwrap();
        let diff = field.values.iter().zip(x.iter()).fold(0.0f64, |m, (u, v)| m.max((u - v).abs()));
        worst = worst.max(diff / x.amax());
    }
    check(worst <= 1e-10, format!("max relative difference {worst:.2e} (tol 1e-10)"))
}

fn spectral(defects: &mut Vec<(String, f64)>) -> Outcome {
    let mesh = Mesh1D::new(32).unwrap();
    let grid = TemporalGrid::uniform(1.0, 128).unwrap();
    let mut worst = 0.0f64;
    for mode in 1..32 {
        let spec = ProblemSpec::spectral_test(0.6, mode, &mesh).unwrap();
        let (field, report) = solve(&spec, &grid, &mesh).unwrap();
        defects.push((format!("spectral mode {mode}"), report.energy_defect));
        let y = scalar_solve(0.6, discrete_eigenvalue(&mesh, mode), &grid, 1.0, &[0.0; 128]).unwrap();
        let s = sine_nodal_vector(&mesh, mode);
        for (k, yk) in y.iter().enumerate() {
            for (u, s) in field.row(k).iter().zip(&s) {
                worst = worst.max((u - yk * s).abs());
            }
        }
    }
    check(worst <= 1e-10, format!("max difference {worst:.2e} over modes 1..31 (tol 1e-10)"))
}

fn manufactured(defects: &mut Vec<(String, f64)>) -> Outcome {
    let space = sweep("manufactured-space", defects);
    let time = sweep("manufactured-time", defects);
    let (s1, s2) = space.final_orders().unwrap();
    let (_, t2) = time.final_orders().unwrap();
    let secs = space.meta.runtime_s + time.meta.runtime_s;
    check(
        (s2 - 2.0).abs() <= 0.1 && (s1 - 1.0).abs() <= 0.1 && (t2 - 1.0).abs() <= 0.1 && secs < 120.0,
        format!("space E1 {s1:.3} E2 {s2:.3}, time E2 {t2:.3}, {secs:.1} s"),
    )
}

fn experiment1(defects: &mut Vec<(String, f64)>) -> (Outcome, ConvergenceTable) {
    let table = sweep("exp1-space", defects);
    let (o1, o2) = table.final_orders().unwrap();
    let secs = table.meta.runtime_s;
    let outcome = check(
        in_band(o1, 0.51, 0.84) && in_band(o2, 1.51, 1.84) && secs < 600.0,
        format!("final E1 order {o1:.3} in [0.51, 0.84], E2 order {o2:.3} in [1.51, 1.84], {secs:.1} s"),
    );
    (outcome, table)
}

fn experiment3(defects: &mut Vec<(String, f64)>) -> Outcome {
    let space = sweep("exp3-space", defects);
    let time = sweep("exp3-time", defects);
    let (s1, s2) = space.final_orders().unwrap();
    let (t1, t2) = time.final_orders().unwrap();
    let secs = space.meta.runtime_s + time.meta.runtime_s;
    check(
        in_band(s1, 0.75, 1.05) && in_band(s2, 1.75, 2.05) && in_band(t1, 0.47, 0.80) && secs < 600.0,
        format!(
            "space E1 {s1:.3} E2 {s2:.3}, time E1 {t1:.3}, time E2 {t2:.3} (reported; band 0.54-1.02 {}), {secs:.1} s",
            if in_band(t2, 0.54, 1.02) { "inside" } else { "outside" }
        ),
    )
}

fn determinism(first: &ConvergenceTable, defects: &mut Vec<(String, f64)>) -> Outcome {
    let again = sweep("exp1-space", defects);
    let (a, b) = (first.to_csv(), again.to_csv());
    check(a == b, format!("{} bytes, identical: {}", a.len(), a == b))
}

fn main() -> ExitCode {
    let mut defects = Vec::new();
    let mut outcomes = vec![
        ("operator identities", operator_suite()),
        ("block-system equivalence", block_equivalence(&mut defects)),
        ("spectral decoupling", spectral(&mut defects)),
        ("manufactured convergence", manufactured(&mut defects)),
    ];
    let (exp1, table) = experiment1(&mut defects);
    outcomes.push(("experiment 1 spatial orders", exp1));
    outcomes.push(("experiment 3 orders", experiment3(&mut defects)));
    outcomes.push(("deterministic sweep CSV", determinism(&table, &mut defects)));
    let (name, worst) = defects
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .cloned()
        .unwrap_or_default();
    outcomes.push((
        "energy identity",
        check(worst <= 1e-10, format!("worst relative defect {worst:.2e} ({name}) over {} runs", defects.len())),
    ));

    let mut failed = 0;
    for (i, (what, o)) in outcomes.iter().enumerate() {
        println!("criterion {} {}: {what}: {}", i + 1, if o.passed { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.passed);
    }
    println!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
