use crate::settings::Settings;
use crate::CliError;
use fracstep::assembly::{Experiment, ProblemSpec};
use fracstep::fem1d::Mesh1D;
use fracstep::fracops::TemporalGrid;
use fracstep::harness::{
    registered_plan, registered_plan_names, run_sweep, Level, Reference, ReferenceCache, SweepAxis, SweepPlan,
    DEFAULT_BUDGET,
};
use fracstep::solver::solve as solve_problem;
use fracstep::verify::{run_suite, VerifyConfig, DEFAULT_SEED};
use serde_json::json;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

fn format(s: &Settings) -> Result<Format, CliError> {
    match s.text("format").unwrap_or("csv") {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(CliError::Config(format!("unknown format {other:?}; use csv or json"))),
    }
}

/// Fails early when the output file could not be created later.
fn check_output(s: &Settings) -> Result<(), CliError> {
    if let Some(path) = s.text("output") {
        let parent = Path::new(path).parent().filter(|p| !p.as_os_str().is_empty());
        if let Some(dir) = parent {
            if !dir.is_dir() {
                return Err(CliError::Config(format!("output directory {} does not exist", dir.display())));
            }
        }
        if Path::new(path).is_dir() {
            return Err(CliError::Config(format!("output path {path} is a directory")));
        }
    }
    Ok(())
}

fn emit(s: &Settings, content: &str) -> Result<(), CliError> {
    match s.text("output") {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Config(format!("cannot write {path}: {e}"))),
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| CliError::Config(format!("cannot write to standard output: {e}"))),
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// The problem named by the settings and the data parameters it used.
fn problem(s: &Settings, n_cells: usize) -> Result<(ProblemSpec, BTreeMap<String, f64>), CliError> {
    let name: String = s.require("experiment")?;
    let tag = Experiment::from_name(&name).ok_or_else(|| {
        CliError::Config(format!("unknown experiment {name:?}; use exp1, exp2, exp3, manufactured or spectral"))
    })?;
    let alpha: f64 = s.require("alpha")?;
    let mut params = BTreeMap::new();
    let spec = match tag {
        Experiment::Experiment1 => {
            let r = s.require("r")?;
            params.insert("r".to_string(), r);
            ProblemSpec::experiment1(alpha, r)?
        }
        Experiment::Experiment2 => {
            let c = s.require("c")?;
            params.insert("c".to_string(), c);
            ProblemSpec::experiment2(alpha, c)?
        }
        Experiment::Experiment3 => {
            let sigma = s.get("sigma")?.unwrap_or(0.29);
            params.insert("sigma".to_string(), sigma);
            ProblemSpec::experiment3_with_sigma(alpha, sigma)?
        }
        Experiment::Manufactured => ProblemSpec::manufactured(alpha)?,
        Experiment::SpectralTest => {
            let mode: usize = s.get("mode")?.unwrap_or(1);
            params.insert("mode".to_string(), mode as f64);
            ProblemSpec::spectral_test(alpha, mode, &Mesh1D::new(n_cells)?)?
        }
    };
    Ok((spec, params))
}

pub fn solve(s: &Settings) -> Result<(), CliError> {
    let fmt = format(s)?;
    check_output(s)?;
    let nx: usize = s.require("nx")?;
    let nt: usize = s.require("nt")?;
    let (spec, params) = problem(s, nx)?;
    let mesh = Mesh1D::new(nx)?;
    let grid = TemporalGrid::uniform(spec.t_final, nt)?;
    let (field, report) = solve_problem(&spec, &grid, &mesh)?;
    let last = field.final_slice();

    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("max_step_residual", report.max_residual());
    diagnostics.insert("energy_defect", report.energy_defect);
    if let Some(exact) = spec.exact_solution() {
        let (e1, e2) = exact.error_norms(&grid, &mesh, &field.values)?;
        diagnostics.insert("E1", e1);
        diagnostics.insert("E2", e2);
    }
    for (k, v) in &diagnostics {
        eprintln!("{k} = {}", num(*v));
    }
    eprintln!("wall_time_s = {:.3}", report.wall_time_s);

    let xs: Vec<f64> = (0..=nx).map(|i| mesh.x(i)).collect();
    let us: Vec<f64> = (0..=nx).map(|i| last.node_value(i)).collect();
    let content = match fmt {
        Format::Csv => {
            let mut out = String::from("x,u\n");
            for (x, u) in xs.iter().zip(&us) {
                let _ = writeln!(out, "{},{}", num(*x), num(*u));
            }
            out
        }
        Format::Json => {
            let value = json!({
                "meta": {
                    "alpha": spec.alpha,
                    "experiment": spec.tag.name(),
                    "params": params,
                    "nx": nx,
                    "nt": nt,
                    "t_final": spec.t_final,
                    "runtime_s": report.wall_time_s,
                },
                "diagnostics": diagnostics,
                "x": xs,
                "u": us,
            });
            serde_json::to_string_pretty(&value).expect("plain data") + "\n"
        }
    };
    emit(s, &content)
}

fn is_sweep_size(n: usize) -> bool {
    n >= 4 && n.is_power_of_two()
}

/// Fills unset sweep settings from a registered plan.
fn apply_plan(s: &mut Settings, name: &str) -> Result<(), CliError> {
    let plan = registered_plan(name).ok_or_else(|| {
        CliError::Config(format!("unknown plan {name:?}; known plans: {}", registered_plan_names().join(", ")))
    })?;
    s.default_to("experiment", plan.problem.tag.name());
    s.default_to("alpha", plan.problem.alpha);
    for (k, v) in &plan.params {
        s.default_to(k, v);
    }
    s.default_to("axis", plan.axis.name());
    s.default_to("nx", plan.levels[0].n_cells);
    s.default_to("nt", plan.levels[0].n_steps);
    s.default_to("levels", plan.levels.len());
    if let Reference::Numerical(r) = plan.reference {
        if !s.has("ref-nx") && !s.has("ref-nt") {
            s.default_to("ref-nx", r.n_cells);
            s.default_to("ref-nt", r.n_steps);
        }
    }
    s.default_to("budget", plan.budget);
    Ok(())
}

fn sweep_plan(s: &Settings) -> Result<SweepPlan, CliError> {
    let axis_name: String = s.require("axis")?;
    let axis = SweepAxis::from_name(&axis_name)
        .ok_or_else(|| CliError::Config(format!("unknown axis {axis_name:?}; use space or time")))?;
    let nx: usize = s.require("nx")?;
    let nt: usize = s.require("nt")?;
    let levels: usize = s.require("levels")?;
    if levels == 0 {
        return Err(CliError::Config("a sweep needs at least one level".into()));
    }
    let (spec, params) = problem(s, nx)?;
    let reference = match (s.get::<usize>("ref-nx")?, s.get::<usize>("ref-nt")?) {
        (None, None) if spec.exact_solution().is_some() => Reference::Exact,
        (None, None) => {
            return Err(CliError::Config(format!(
                "experiment {} has no exact solution; give --ref-nx or --ref-nt",
                spec.tag
            )))
        }
        (rx, rt) => Reference::Numerical(Level::new(rx.unwrap_or(nx), rt.unwrap_or(nt))),
    };
    let mut sizes = vec![("nx", nx), ("nt", nt)];
    if let Reference::Numerical(r) = reference {
        sizes.push(("ref-nx", r.n_cells));
        sizes.push(("ref-nt", r.n_steps));
    }
    for (key, n) in sizes {
        if !is_sweep_size(n) {
            return Err(CliError::Config(format!("{key} = {n} must be a power of two of at least 4")));
        }
    }
    let mut plan = SweepPlan::dyadic(spec, params, axis, Level::new(nx, nt), levels, reference);
    plan.budget = s.get("budget")?.unwrap_or(DEFAULT_BUDGET);
    Ok(plan)
}

pub fn sweep(s: &mut Settings) -> Result<(), CliError> {
    if let Some(name) = s.text("plan").map(str::to_string) {
        apply_plan(s, &name)?;
    }
    let fmt = format(s)?;
    check_output(s)?;
    let plan = sweep_plan(s)?;
    let cache = ReferenceCache::from_env();
    let table = run_sweep(&plan, cache.as_ref())?;
    eprint!("{}", table.to_text());
    eprintln!(
        "runtime {:.1} s, max energy defect {:.3e}, max step residual {:.3e}",
        table.meta.runtime_s, table.meta.max_energy_defect, table.meta.max_step_residual
    );
    let content = match fmt {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json() + "\n",
    };
    emit(s, &content)
}

pub fn verify(s: &Settings, tamper: f64) -> Result<(), CliError> {
    check_output(s)?;
    let config = VerifyConfig {
        seed: s.get("seed")?.unwrap_or(DEFAULT_SEED),
        gamma_tamper: tamper,
        ..VerifyConfig::default()
    };
    let report = run_suite(&config);
    let text = report.to_text();
    emit(s, &text)?;
    if report.all_passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report.outcomes.iter().filter(|o| !o.passed).map(|o| o.name).collect();
        Err(CliError::Property(format!("failed properties: {}", failed.join(", "))))
    }
}
