use super::{power_increment, TemporalGrid};
use crate::error::{domain, Result};
use crate::special::gamma;

/// Mixed second difference of `x ↦ x₊^e` over a pair of intervals,
/// `j ≤ k` (zero-based):
///
/// `(t_{k+1}-t_j)^e - (t_k-t_j)^e - (t_{k+1}-t_{j+1})₊^e + (t_k-t_{j+1})₊^e`.
///
/// With `e = 1-α` and the factor `1/Γ(2-α)` this is the Galerkin entry
/// `⟨D^α χ_j, χ_k⟩`; with `e = 1-2γ` or `e = 1+2γ` it is the interval
/// pairing of `γ`-order derivatives or integrals. Zero above the diagonal.
pub fn interval_kernel(grid: &TemporalGrid, k: usize, j: usize, e: f64) -> f64 {
    if j > k {
        return 0.0;
    }
    let tau_k = grid.tau(k);
    if j == k {
        return tau_k.powf(e);
    }
    let t = grid.nodes();
    // far from the diagonal both increments are small and nearly equal;
    // forming them separately keeps the subtraction at O(τ/dist) loss
    power_increment(t[k] - t[j], tau_k, e) - power_increment(t[k] - t[j + 1], tau_k, e)
}

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    /// `column[d] = G[k][k-d]` on a uniform grid.
    Toeplitz(Vec<f64>),
    /// Packed rows of the lower triangle.
    Packed(Vec<f64>),
}

/// Lower-triangular matrix `G[k][j] = ⟨D_{0+}^α χ_j, χ_k⟩` of the causal
/// temporal Galerkin form.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalWeightMatrix {
    grid: TemporalGrid,
    alpha: f64,
    storage: Storage,
}

/// Assembles the causal weights for `α ∈ (0, 1)`. Uniform grids store only
/// the first column.
pub fn temporal_weights(grid: &TemporalGrid, alpha: f64) -> Result<TemporalWeightMatrix> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain(format!("alpha = {alpha} outside (0, 1)")));
    }
    let e = 1.0 - alpha;
    let scale = 1.0 / gamma(2.0 - alpha);
    let steps = grid.steps();
    let storage = if grid.uniform_step().is_some() {
        Storage::Toeplitz(
            (0..steps)
                .map(|d| scale * interval_kernel(grid, d, 0, e))
                .collect(),
        )
    } else {
        let mut packed = Vec::with_capacity(steps * (steps + 1) / 2);
        for k in 0..steps {
            packed.extend((0..=k).map(|j| scale * interval_kernel(grid, k, j, e)));
        }
        Storage::Packed(packed)
    };
    Ok(TemporalWeightMatrix {
        grid: grid.clone(),
        alpha,
        storage,
    })
}

impl TemporalWeightMatrix {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn grid(&self) -> &TemporalGrid {
        &self.grid
    }

    pub fn steps(&self) -> usize {
        self.grid.steps()
    }

    pub fn is_toeplitz(&self) -> bool {
        matches!(self.storage, Storage::Toeplitz(_))
    }

    /// First column `G[d][0]` when the matrix is Toeplitz.
    pub fn toeplitz_column(&self) -> Option<&[f64]> {
        match &self.storage {
            Storage::Toeplitz(c) => Some(c),
            Storage::Packed(_) => None,
        }
    }

    pub fn entry(&self, k: usize, j: usize) -> f64 {
        if j > k {
            return 0.0;
        }
        match &self.storage {
            Storage::Toeplitz(c) => c[k - j],
            Storage::Packed(p) => p[k * (k + 1) / 2 + j],
        }
    }

    pub fn diagonal(&self, k: usize) -> f64 {
        self.entry(k, k)
    }

    /// Writes `G[k][0..=k]` into `out`.
    pub fn row_into(&self, k: usize, out: &mut Vec<f64>) {
        out.clear();
        match &self.storage {
            Storage::Toeplitz(c) => out.extend(c[..=k].iter().rev()),
            Storage::Packed(p) => {
                let start = k * (k + 1) / 2;
                out.extend_from_slice(&p[start..=start + k]);
            }
        }
    }

    pub fn row_sum(&self, k: usize) -> f64 {
        (0..=k).map(|j| self.entry(k, j)).sum()
    }

    /// `⟨D^α 1, χ_k⟩ = (t_{k+1}^{1-α} - t_k^{1-α})/Γ(2-α)`, the value every
    /// row sums to.
    pub fn telescoped_row_sum(&self, k: usize) -> f64 {
        let e = 1.0 - self.alpha;
        power_increment(self.grid.node(k), self.grid.tau(k), e) / gamma(2.0 - self.alpha)
    }
}
