use super::Mesh1D;
use crate::error::{Error, Result};

/// Square tridiagonal matrix. `lower[i]` sits at `(i+1, i)`, `upper[i]` at
/// `(i, i+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

/// `M = h/6 · tridiag(1, 4, 1)`.
pub fn assemble_mass(mesh: &Mesh1D) -> TridiagonalMatrix {
    let n = mesh.n_interior();
    let h = mesh.h();
    TridiagonalMatrix {
        lower: vec![h / 6.0; n - 1],
        diag: vec![4.0 * h / 6.0; n],
        upper: vec![h / 6.0; n - 1],
    }
}

/// `K = 1/h · tridiag(-1, 2, -1)`.
pub fn assemble_stiffness(mesh: &Mesh1D) -> TridiagonalMatrix {
    let n = mesh.n_interior();
    let h = mesh.h();
    TridiagonalMatrix {
        lower: vec![-1.0 / h; n - 1],
        diag: vec![2.0 / h; n],
        upper: vec![-1.0 / h; n - 1],
    }
}

impl TridiagonalMatrix {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &TridiagonalMatrix, b: f64) -> TridiagonalMatrix {
        let mix = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(x, y)| a * x + b * y).collect();
        TridiagonalMatrix {
            lower: mix(&self.lower, &other.lower),
            diag: mix(&self.diag, &other.diag),
            upper: mix(&self.upper, &other.upper),
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.mul_vec_into(x, &mut y);
        y
    }

    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            let mut s = self.diag[i] * x[i];
            if i > 0 {
                s += self.lower[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += self.upper[i] * x[i + 1];
            }
            y[i] = s;
        }
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            let mut row = self.diag[i] * y[i];
            if i > 0 {
                row += self.lower[i - 1] * y[i - 1];
            }
            if i + 1 < n {
                row += self.upper[i] * y[i + 1];
            }
            s += x[i] * row;
        }
        s
    }

    pub fn max_row_sum(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.lower[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.upper[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    /// Solves `A x = rhs` by Thomas elimination without pivoting.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        let mut c = vec![0.0; n];
        let mut x = vec![0.0; n];
        let scale = self.max_row_sum();
        let mut pivot = self.diag[0];
        for i in 0..n {
            if i > 0 {
                pivot = self.diag[i] - self.lower[i - 1] * c[i - 1];
            }
            if !(pivot.abs() > 1e-14 * scale) {
                return Err(Error::SingularStep {
                    step: usize::MAX,
                    detail: format!("zero pivot {pivot:e} in row {i}"),
                });
            }
            if i + 1 < n {
                c[i] = self.upper[i] / pivot;
            }
            let prev = if i > 0 { self.lower[i - 1] * x[i - 1] } else { 0.0 };
            x[i] = (rhs[i] - prev) / pivot;
        }
        for i in (0..n.saturating_sub(1)).rev() {
            x[i] -= c[i] * x[i + 1];
        }
        Ok(x)
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut d = vec![vec![0.0; n]; n];
        for i in 0..n {
            d[i][i] = self.diag[i];
            if i + 1 < n {
                d[i][i + 1] = self.upper[i];
                d[i + 1][i] = self.lower[i];
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cells() {
        let mesh = Mesh1D::new(2).unwrap();
        let m = assemble_mass(&mesh);
        let k = assemble_stiffness(&mesh);
        assert_eq!(m.diag, vec![1.0 / 3.0]);
        assert_eq!(k.diag, vec![4.0]);
        assert!(m.lower.is_empty());
    }

    #[test]
    fn interior_mass_rows_sum_to_h() {
        let mesh = Mesh1D::new(10).unwrap();
        let m = assemble_mass(&mesh);
        let ones = vec![1.0; 9];
        let rows = m.mul_vec(&ones);
        for r in &rows[1..8] {
            assert!((r - 0.1).abs() < 1e-15);
        }
        // boundary rows miss the neighbour beyond the Dirichlet node
        assert!((rows[0] - 0.1 * 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn thomas_solves() {
        let mesh = Mesh1D::new(9).unwrap();
        let a = assemble_mass(&mesh).combine(2.0, &assemble_stiffness(&mesh), 0.01);
        let x: Vec<f64> = (0..8).map(|i| (i as f64 * 0.7).sin()).collect();
        let b = a.mul_vec(&x);
        let y = a.solve(&b).unwrap();
        for (x, y) in x.iter().zip(&y) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_pivot_is_reported() {
        let a = TridiagonalMatrix {
            lower: vec![1.0],
            diag: vec![0.0, 1.0],
            upper: vec![1.0],
        };
        assert!(matches!(a.solve(&[1.0, 1.0]), Err(Error::SingularStep { .. })));
    }
}
