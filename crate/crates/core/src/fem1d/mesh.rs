use crate::error::{domain, Error, Result};

/// Uniform mesh of `(0, 1)` with `n_cells` cells. Interior nodes are
/// `x_i = (i + 1)·h` for `i = 0..n_cells-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mesh1D {
    n_cells: usize,
}

impl Mesh1D {
    pub fn new(n_cells: usize) -> Result<Self> {
        if n_cells < 2 {
            return Err(domain(format!(
                "a mesh needs at least 2 cells for an interior node, got {n_cells}"
            )));
        }
        Ok(Self { n_cells })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n_cells as f64
    }

    /// Number of unknowns `N = n_cells - 1`.
    pub fn n_interior(&self) -> usize {
        self.n_cells - 1
    }

    /// Coordinate of mesh node `node ∈ 0..=n_cells` (boundaries included).
    pub fn x(&self, node: usize) -> f64 {
        node as f64 / self.n_cells as f64
    }

    /// Coordinate of the `i`-th unknown.
    pub fn interior_x(&self, i: usize) -> f64 {
        self.x(i + 1)
    }

    /// Integer factor by which `fine` subdivides every cell of `self`.
    pub fn refinement_factor(&self, fine: &Mesh1D) -> Result<usize> {
        if !fine.n_cells.is_multiple_of(self.n_cells) {
            return Err(Error::NotNested(format!(
                "mesh with {} cells is not a refinement of one with {}",
                fine.n_cells, self.n_cells
            )));
        }
        Ok(fine.n_cells / self.n_cells)
    }
}
