//! P1 finite elements on a uniform mesh of `(0, 1)` with homogeneous
//! Dirichlet conditions. Unknowns are the interior nodal values only.

mod field;
mod loads;
mod mesh;
mod tridiag;

pub use field::{field_norms, SpatialField};
pub use loads::{hat_power_moment, power_load_vector, sine_load_vector, sine_nodal_vector};
pub use mesh::Mesh1D;
pub use tridiag::{assemble_mass, assemble_stiffness, TridiagonalMatrix};

/// Generalized eigenvalue of the pencil `(K, M)` for the sine mode `m`:
/// `(6/h²)(1 - cos(mπh))/(2 + cos(mπh))`.
pub fn discrete_eigenvalue(mesh: &Mesh1D, mode: usize) -> f64 {
    let h = mesh.h();
    let c = (mode as f64 * std::f64::consts::PI * h).cos();
    6.0 / (h * h) * (1.0 - c) / (2.0 + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, SymmetricEigen};

    #[test]
    fn pencil_eigenvalues_match_dense_solve() {
        let mesh = Mesh1D::new(8).unwrap();
        let n = mesh.n_interior();
        let m = assemble_mass(&mesh).to_dense();
        let k = assemble_stiffness(&mesh).to_dense();
        let m = DMatrix::from_fn(n, n, |i, j| m[i][j]);
        let k = DMatrix::from_fn(n, n, |i, j| k[i][j]);
        // reduce to a standard problem through the Cholesky factor of M
        let l = m.cholesky().unwrap().l();
        let li = l.clone().try_inverse().unwrap();
        let a = &li * k * li.transpose();
        let a = (&a + a.transpose()) * 0.5;
        let mut dense: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
        dense.sort_by(f64::total_cmp);
        for (mode, got) in (1..=n).zip(&dense) {
            let want = discrete_eigenvalue(&mesh, mode);
            assert!((got - want).abs() < 1e-10 * want, "mode {mode}");
        }
        assert!((discrete_eigenvalue(&mesh, 1) - 9.997_080_656_247_266_587_89).abs() < 1e-12);
    }

    #[test]
    fn sine_vectors_are_pencil_eigenvectors() {
        let mesh = Mesh1D::new(8).unwrap();
        let m = assemble_mass(&mesh);
        let k = assemble_stiffness(&mesh);
        for mode in 1..8 {
            let s = sine_nodal_vector(&mesh, mode);
            let lam = discrete_eigenvalue(&mesh, mode);
            let ks = k.mul_vec(&s);
            let ms = m.mul_vec(&s);
            for (a, b) in ks.iter().zip(&ms) {
                assert!((a - lam * b).abs() < 1e-10 * lam);
            }
        }
    }
}
