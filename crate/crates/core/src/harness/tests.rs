use super::*;

fn small_plan(axis: SweepAxis) -> SweepPlan {
    let problem = ProblemSpec::experiment3(0.8).unwrap();
    let (coarse, reference) = match axis {
        SweepAxis::Space => (Level::new(4, 64), Level::new(64, 64)),
        SweepAxis::Time => (Level::new(16, 8), Level::new(16, 256)),
    };
    SweepPlan::dyadic(problem, BTreeMap::new(), axis, coarse, 3, Reference::Numerical(reference))
}

#[test]
fn self_comparison_is_zero() {
    let (field, _) = solve_level(&ProblemSpec::experiment1(0.3, -0.8).unwrap(), Level::new(8, 16)).unwrap();
    assert_eq!(space_time_errors(&field, &field).unwrap(), (0.0, 0.0));
}

#[test]
fn prolonged_coarse_solution_has_the_same_error() {
    let problem = ProblemSpec::experiment1(0.3, -0.8).unwrap();
    let (coarse, _) = solve_level(&problem, Level::new(4, 8)).unwrap();
    let (reference, _) = solve_level(&problem, Level::new(16, 32)).unwrap();
    // inject the coarse solution into the space of an intermediate level
    let mid_mesh = Mesh1D::new(8).unwrap();
    let mid_grid = TemporalGrid::uniform(1.0, 16).unwrap();
    let mut injected = SpaceTimeField::zeros(mid_grid, mid_mesh);
    for k in 0..16 {
        let p = coarse.slice(k / 2).prolong(&mid_mesh).unwrap();
        injected.row_mut(k).copy_from_slice(&p.values);
    }
    let (a1, a2) = space_time_errors(&coarse, &reference).unwrap();
    let (b1, b2) = space_time_errors(&injected, &reference).unwrap();
    assert!((a1 - b1).abs() < 1e-12 * a1);
    assert!((a2 - b2).abs() < 1e-12 * a2);
}

#[test]
fn errors_decrease_along_both_axes() {
    for axis in [SweepAxis::Space, SweepAxis::Time] {
        let table = run_sweep(&small_plan(axis), None).unwrap();
        assert_eq!(table.rows.len(), 3);
        for w in table.rows.windows(2) {
            assert!(w[1].e1 < w[0].e1 && w[1].e2 < w[0].e2, "{axis}");
        }
        assert!(table.rows[0].order1.is_none());
        assert!(table.rows[2].order2.unwrap() > 0.3);
        assert!(table.meta.max_energy_defect < 1e-10);
    }
}

#[test]
fn plans_are_validated() {
    let mut plan = small_plan(SweepAxis::Space);
    plan.reference = Reference::Numerical(Level::new(40, 64));
    assert!(matches!(run_sweep(&plan, None), Err(Error::NotNested(_))));
    plan.reference = Reference::Numerical(Level::new(16, 64));
    assert!(matches!(plan.validate(), Err(Error::NotNested(_))));
    plan.reference = Reference::Exact;
    assert!(matches!(plan.validate(), Err(Error::Domain(_))));

    let mut plan = small_plan(SweepAxis::Time);
    plan.levels.swap(0, 1);
    assert!(plan.validate().is_err());
    plan.levels.clear();
    assert!(plan.validate().is_err());
}

#[test]
fn budget_is_enforced() {
    let mut plan = small_plan(SweepAxis::Time);
    plan.budget = 1e3;
    assert!(matches!(run_sweep(&plan, None), Err(Error::Budget(_))));
}

#[test]
fn single_level_has_no_orders() {
    let mut plan = small_plan(SweepAxis::Space);
    plan.levels.truncate(1);
    let table = run_sweep(&plan, None).unwrap();
    let csv = table.to_csv();
    let line = csv.lines().nth(1).unwrap();
    let cells: Vec<&str> = line.split(',').collect();
    assert_eq!(cells.len(), 6);
    assert!(cells[3].is_empty() && cells[5].is_empty());
    assert!(table.final_orders().is_none());
}

#[test]
fn csv_uses_seventeen_significant_digits() {
    let table = run_sweep(&small_plan(SweepAxis::Space), None).unwrap();
    let csv = table.to_csv();
    assert_eq!(csv.lines().next().unwrap(), "h,tau,E1,order1,E2,order2");
    for line in csv.lines().skip(1) {
        for c in line.split(',').filter(|c| !c.is_empty()) {
            let mantissa = c.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.replace('.', "").len(), 17, "{c}");
            let v: f64 = c.parse().unwrap();
            assert_eq!(format!("{v:.16e}"), c);
        }
    }
    let json: serde_json::Value = serde_json::from_str(&table.to_json()).unwrap();
    for key in ["alpha", "experiment", "params", "h_ref", "tau_ref", "runtime_s"] {
        assert!(json["meta"].get(key).is_some(), "{key}");
    }
    assert_eq!(json["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn cached_reference_reproduces_table() {
    let dir = tempfile::tempdir().unwrap();
    let cache = ReferenceCache::new(dir.path());
    let plan = small_plan(SweepAxis::Time);
    let first = run_sweep(&plan, Some(&cache)).unwrap();
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
    let second = run_sweep(&plan, Some(&cache)).unwrap();
    assert_eq!(first.rows, second.rows);
    // a cached reference no longer counts against the budget
    let mut tight = plan.clone();
    tight.budget = plan.work(false) * 1.01;
    assert!(run_sweep(&tight, Some(&cache)).is_ok());
    assert!(run_sweep(&tight, None).is_err());
}

#[test]
fn registered_plans_are_valid() {
    for name in registered_plan_names() {
        let plan = registered_plan(name).unwrap();
        plan.validate().unwrap();
        assert!(plan.work(true) < DEFAULT_BUDGET, "{name}");
    }
    assert!(registered_plan("nope").is_none());
}
