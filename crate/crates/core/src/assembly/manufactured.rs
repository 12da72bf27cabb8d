use crate::error::{domain, Result};
use crate::fem1d::{assemble_mass, assemble_stiffness, sine_load_vector, Mesh1D};
use crate::fracops::TemporalGrid;
use std::f64::consts::PI;

/// The exact solution `u = t² sin(πx)` of the manufactured problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedSolution {
    pub alpha: f64,
}

impl ManufacturedSolution {
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        t * t * (PI * x).sin()
    }

    /// `L²(0,T;H¹₀)` and `L²(0,T;L²)` norms of `u - U` for a discrete
    /// solution stored row-major (`J` rows of `N` interior values), exact
    /// up to rounding.
    ///
    /// On `I_k` with midpoint `c` and mean `m` of `t²`, the error splits
    /// into `(t² - m)·sin(πx)` plus the constant-in-time `m·sin(πx) - U_k`;
    /// the cross term integrates to zero over `I_k`.
    pub fn error_norms(&self, grid: &TemporalGrid, mesh: &Mesh1D, values: &[f64]) -> Result<(f64, f64)> {
        let n = mesh.n_interior();
        if values.len() != grid.steps() * n {
            return Err(domain(format!(
                "solution has {} values, expected {}×{}",
                values.len(),
                grid.steps(),
                n
            )));
        }
        let mass = assemble_mass(mesh);
        let stiff = assemble_stiffness(mesh);
        let b = sine_load_vector(mesh, 1)?;
        let (mut e1, mut e2) = (0.0, 0.0);
        for (k, u) in values.chunks_exact(n).enumerate() {
            let tau = grid.tau(k);
            let c = grid.node(k) + 0.5 * tau;
            let m = c * c + tau * tau / 12.0;
            let spread = c * c * tau.powi(3) / 3.0 + tau.powi(5) / 180.0;
            let bu: f64 = b.iter().zip(u).map(|(b, u)| b * u).sum();
            let l2 = (0.5 * m * m - 2.0 * m * bu + mass.bilinear(u, u)).max(0.0);
            let h1 = (0.5 * PI * PI * m * m - 2.0 * m * PI * PI * bu + stiff.bilinear(u, u)).max(0.0);
            e2 += 0.5 * spread + tau * l2;
            e1 += 0.5 * PI * PI * spread + tau * h1;
        }
        Ok((e1.sqrt(), e2.sqrt()))
    }
}
