//! Problem data and the space-time load `F[k][i] = ⟨D^α u₀ + f, χ_k φ_i⟩`.
//!
//! Every supported datum is separable, so the load is stored as a short
//! list of (time factor, space vector) pairs and rows are formed on demand.

mod manufactured;

pub use manufactured::ManufacturedSolution;

use crate::error::{domain, Result};
use crate::fem1d::{assemble_mass, power_load_vector, sine_load_vector, sine_nodal_vector, Mesh1D};
use crate::fracops::{power_increment, TemporalGrid};
use crate::special::gamma;
use std::f64::consts::PI;
use std::fmt;

/// Which family a problem belongs to; used in reports and cache keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    Experiment1,
    Experiment2,
    Experiment3,
    Manufactured,
    SpectralTest,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Experiment1 => "exp1",
            Experiment::Experiment2 => "exp2",
            Experiment::Experiment3 => "exp3",
            Experiment::Manufactured => "manufactured",
            Experiment::SpectralTest => "spectral",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp1" | "experiment1" => Experiment::Experiment1,
            "exp2" | "experiment2" => Experiment::Experiment2,
            "exp3" | "experiment3" => Experiment::Experiment3,
            "manufactured" => Experiment::Manufactured,
            "spectral" | "spectral_test" => Experiment::SpectralTest,
            _ => return None,
        })
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Initial value `u₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialData {
    Zero,
    /// `scale · x^exponent`.
    Power { scale: f64, exponent: f64 },
    /// P1 interpolant of `amplitude · sin(mode·πx)` on the solve mesh.
    SineNodal { mode: usize, amplitude: f64 },
}

/// Spatial factor of a source term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpatialProfile {
    /// `x^r`, `r > -1`.
    Power(f64),
    /// `sin(mπx)`, `m ≥ 1`.
    Sine(usize),
}

impl SpatialProfile {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            SpatialProfile::Power(r) => x.powf(r),
            SpatialProfile::Sine(m) => (m as f64 * PI * x).sin(),
        }
    }

    /// Moments against the interior hats of `mesh`.
    pub fn load_vector(&self, mesh: &Mesh1D) -> Result<Vec<f64>> {
        match *self {
            SpatialProfile::Power(r) => power_load_vector(mesh, r),
            SpatialProfile::Sine(m) => sine_load_vector(mesh, m),
        }
    }
}

/// `coefficient · spatial(x) · t^temporal_exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceTerm {
    pub coefficient: f64,
    pub spatial: SpatialProfile,
    pub temporal_exponent: f64,
}

impl SourceTerm {
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        self.coefficient * self.spatial.eval(x) * t.powf(self.temporal_exponent)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub alpha: f64,
    pub t_final: f64,
    pub initial: InitialData,
    pub source: Vec<SourceTerm>,
    pub tag: Experiment,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

fn check_spatial(s: &SpatialProfile) -> Result<()> {
    match *s {
        SpatialProfile::Power(r) if !(r > -1.0) || !r.is_finite() => {
            Err(domain(format!("spatial power x^{r} needs r > -1")))
        }
        SpatialProfile::Sine(0) => Err(domain("sine mode must be at least 1")),
        _ => Ok(()),
    }
}

impl ProblemSpec {
    pub fn new(
        alpha: f64,
        t_final: f64,
        initial: InitialData,
        source: Vec<SourceTerm>,
        tag: Experiment,
    ) -> Result<Self> {
        check_alpha(alpha)?;
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(domain(format!("final time must be positive, got {t_final}")));
        }
        match initial {
            InitialData::Power { scale, exponent } => {
                if !scale.is_finite() {
                    return Err(domain("initial scale must be finite"));
                }
                check_spatial(&SpatialProfile::Power(exponent))?;
            }
            InitialData::SineNodal { mode, amplitude } => {
                if !amplitude.is_finite() {
                    return Err(domain("initial amplitude must be finite"));
                }
                check_spatial(&SpatialProfile::Sine(mode))?;
            }
            InitialData::Zero => {}
        }
        for term in &source {
            check_spatial(&term.spatial)?;
            if !(term.temporal_exponent > -1.0) || !term.temporal_exponent.is_finite() {
                return Err(domain(format!(
                    "temporal factor t^{} is not integrable near 0 (need exponent > -1)",
                    term.temporal_exponent
                )));
            }
            if !term.coefficient.is_finite() {
                return Err(domain("source coefficient must be finite"));
            }
        }
        Ok(Self { alpha, t_final, initial, source, tag })
    }

    /// `u₀ = x^r`, `f = x^r t^{-0.49}` on `(0, 1) × (0, 1)`.
    pub fn experiment1(alpha: f64, r: f64) -> Result<Self> {
        Self::new(
            alpha,
            1.0,
            InitialData::Power { scale: 1.0, exponent: r },
            vec![SourceTerm {
                coefficient: 1.0,
                spatial: SpatialProfile::Power(r),
                temporal_exponent: -0.49,
            }],
            Experiment::Experiment1,
        )
    }

    /// `u₀ = c·x^{-0.49}`, `f = x^{-0.8} t^{-0.49}`.
    pub fn experiment2(alpha: f64, c: f64) -> Result<Self> {
        let initial = if c == 0.0 {
            InitialData::Zero
        } else {
            InitialData::Power { scale: c, exponent: -0.49 }
        };
        Self::new(
            alpha,
            1.0,
            initial,
            vec![SourceTerm {
                coefficient: 1.0,
                spatial: SpatialProfile::Power(-0.8),
                temporal_exponent: -0.49,
            }],
            Experiment::Experiment2,
        )
    }

    /// `u₀ = 0`, `f = x^{-0.49} t^{-0.29}`.
    pub fn experiment3(alpha: f64) -> Result<Self> {
        Self::experiment3_with_sigma(alpha, 0.29)
    }

    /// `u₀ = 0`, `f = x^{-0.49} t^{-σ}`.
    pub fn experiment3_with_sigma(alpha: f64, sigma: f64) -> Result<Self> {
        Self::new(
            alpha,
            1.0,
            InitialData::Zero,
            vec![SourceTerm {
                coefficient: 1.0,
                spatial: SpatialProfile::Power(-0.49),
                temporal_exponent: -sigma,
            }],
            Experiment::Experiment3,
        )
    }

    /// Data whose exact solution is `u = t² sin(πx)`.
    pub fn manufactured(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Self::new(
            alpha,
            1.0,
            InitialData::Zero,
            vec![
                SourceTerm {
                    coefficient: 2.0 / gamma(3.0 - alpha),
                    spatial: SpatialProfile::Sine(1),
                    temporal_exponent: 2.0 - alpha,
                },
                SourceTerm {
                    coefficient: PI * PI,
                    spatial: SpatialProfile::Sine(1),
                    temporal_exponent: 2.0,
                },
            ],
            Experiment::Manufactured,
        )
    }

    /// `u₀` = interpolant of `sin(mπx)`, `f = 0`. The discrete solution is
    /// that sine vector times the scalar recursion with the pencil
    /// eigenvalue of mode `m`.
    pub fn spectral_test(alpha: f64, mode: usize, mesh: &Mesh1D) -> Result<Self> {
        if mode == 0 || mode >= mesh.n_cells() {
            return Err(domain(format!(
                "sine mode {mode} is not resolved by a mesh with {} cells",
                mesh.n_cells()
            )));
        }
        Self::new(
            alpha,
            1.0,
            InitialData::SineNodal { mode, amplitude: 1.0 },
            Vec::new(),
            Experiment::SpectralTest,
        )
    }

    /// Exact solution, available for manufactured problems only.
    pub fn exact_solution(&self) -> Option<ManufacturedSolution> {
        (self.tag == Experiment::Manufactured).then_some(ManufacturedSolution { alpha: self.alpha })
    }

    /// Pointwise source value.
    pub fn source_value(&self, x: f64, t: f64) -> f64 {
        self.source.iter().map(|s| s.eval(x, t)).sum()
    }

    /// Largest `β` for which the data lie in the smoothness class the
    /// error estimates assume: `x^r` sits in `H^{-β}` for `β > -r - 1/2`.
    pub fn critical_beta(&self) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        let mut note = |r: f64| worst = worst.max(-r - 0.5);
        if let InitialData::Power { scale, exponent } = self.initial {
            if scale != 0.0 {
                note(exponent);
            }
        }
        for s in &self.source {
            if let SpatialProfile::Power(r) = s.spatial {
                note(r);
            }
        }
        worst.max(0.0)
    }

    pub fn has_initial_data(&self) -> bool {
        match self.initial {
            InitialData::Zero => false,
            InitialData::Power { scale, .. } => scale != 0.0,
            InitialData::SineNodal { amplitude, .. } => amplitude != 0.0,
        }
    }
}

/// One separable piece `time[k] · space[i]` of a load array.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableTerm {
    pub time: Vec<f64>,
    pub space: Vec<f64>,
}

/// Space-time load with `J` rows of `N` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadArray {
    steps: usize,
    n: usize,
    terms: Vec<SeparableTerm>,
}

impl LoadArray {
    pub fn zero(steps: usize, n: usize) -> Self {
        Self { steps, n, terms: Vec::new() }
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[SeparableTerm] {
        &self.terms
    }

    pub fn push(&mut self, time: Vec<f64>, space: Vec<f64>) -> Result<()> {
        if time.len() != self.steps || space.len() != self.n {
            return Err(domain(format!(
                "separable term of shape {}×{} does not match load {}×{}",
                time.len(),
                space.len(),
                self.steps,
                self.n
            )));
        }
        if time.iter().chain(&space).any(|v| !v.is_finite()) {
            return Err(domain("load contribution has non-finite entries"));
        }
        self.terms.push(SeparableTerm { time, space });
        Ok(())
    }

    /// Writes row `k` into `out`.
    pub fn row_into(&self, k: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for term in &self.terms {
            let c = term.time[k];
            for (o, s) in out.iter_mut().zip(&term.space) {
                *o += c * s;
            }
        }
    }

    pub fn row(&self, k: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.row_into(k, &mut out);
        out
    }

    pub fn get(&self, k: usize, i: usize) -> f64 {
        self.terms.iter().map(|t| t.time[k] * t.space[i]).sum()
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        (0..self.steps).flat_map(|k| self.row(k)).collect()
    }
}

/// `∫_{I_k} t^{-α}/Γ(1-α) dt = (t_{k+1}^{1-α} - t_k^{1-α})/Γ(2-α)`, the time
/// factor of `D^α` applied to data constant in time.
pub fn initial_time_factors(grid: &TemporalGrid, alpha: f64) -> Vec<f64> {
    let e = 1.0 - alpha;
    let g = gamma(2.0 - alpha);
    (0..grid.steps())
        .map(|k| power_increment(grid.node(k), grid.tau(k), e) / g)
        .collect()
}

/// `∫_{I_k} t^e dt` for `e > -1`.
pub fn source_time_factors(grid: &TemporalGrid, exponent: f64) -> Result<Vec<f64>> {
    if !(exponent > -1.0) {
        return Err(domain(format!(
            "temporal factor t^{exponent} is not integrable near 0"
        )));
    }
    let e = exponent + 1.0;
    Ok((0..grid.steps())
        .map(|k| power_increment(grid.node(k), grid.tau(k), e) / e)
        .collect())
}

/// Contribution of `D^α u₀`.
pub fn initial_data_load(spec: &ProblemSpec, grid: &TemporalGrid, mesh: &Mesh1D) -> Result<LoadArray> {
    let mut load = LoadArray::zero(grid.steps(), mesh.n_interior());
    let space = match spec.initial {
        InitialData::Zero => return Ok(load),
        InitialData::Power { scale, exponent } => {
            if scale == 0.0 {
                return Ok(load);
            }
            let mut v = power_load_vector(mesh, exponent)?;
            v.iter_mut().for_each(|x| *x *= scale);
            v
        }
        InitialData::SineNodal { mode, amplitude } => {
            if mode >= mesh.n_cells() {
                return Err(domain(format!(
                    "sine mode {mode} is not resolved by a mesh with {} cells",
                    mesh.n_cells()
                )));
            }
            let s: Vec<f64> = sine_nodal_vector(mesh, mode).iter().map(|v| amplitude * v).collect();
            assemble_mass(mesh).mul_vec(&s)
        }
    };
    load.push(initial_time_factors(grid, spec.alpha), space)?;
    Ok(load)
}

/// Contribution of `f`.
pub fn source_load(spec: &ProblemSpec, grid: &TemporalGrid, mesh: &Mesh1D) -> Result<LoadArray> {
    let mut load = LoadArray::zero(grid.steps(), mesh.n_interior());
    for term in &spec.source {
        let mut space = term.spatial.load_vector(mesh)?;
        space.iter_mut().for_each(|v| *v *= term.coefficient);
        load.push(source_time_factors(grid, term.temporal_exponent)?, space)?;
    }
    Ok(load)
}

/// Full right-hand side `⟨D^α u₀ + f, χ_k φ_i⟩`.
pub fn assemble_load(spec: &ProblemSpec, grid: &TemporalGrid, mesh: &Mesh1D) -> Result<LoadArray> {
    if (grid.t_final() - spec.t_final).abs() > 1e-12 * spec.t_final {
        return Err(domain(format!(
            "grid ends at {} but the problem is posed on (0, {})",
            grid.t_final(),
            spec.t_final
        )));
    }
    let mut load = initial_data_load(spec, grid, mesh)?;
    load.terms.extend(source_load(spec, grid, mesh)?.terms);
    Ok(load)
}
