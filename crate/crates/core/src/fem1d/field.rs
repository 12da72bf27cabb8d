use super::{assemble_mass, assemble_stiffness, Mesh1D};
use crate::error::{domain, Result};

/// P1 function vanishing at 0 and 1, stored by its interior nodal values.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialField {
    pub mesh: Mesh1D,
    pub values: Vec<f64>,
}

impl SpatialField {
    pub fn new(mesh: Mesh1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.n_interior() {
            return Err(domain(format!(
                "field has {} values but the mesh has {} interior nodes",
                values.len(),
                mesh.n_interior()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(domain("field values must be finite"));
        }
        Ok(Self { mesh, values })
    }

    pub fn zero(mesh: Mesh1D) -> Self {
        Self { mesh, values: vec![0.0; mesh.n_interior()] }
    }

    /// Value at mesh node `node ∈ 0..=n_cells`.
    pub fn node_value(&self, node: usize) -> f64 {
        if node == 0 || node == self.mesh.n_cells() {
            0.0
        } else {
            self.values[node - 1]
        }
    }

    /// Exact representation on a nested finer mesh.
    pub fn prolong(&self, fine: &Mesh1D) -> Result<SpatialField> {
        let factor = self.mesh.refinement_factor(fine)?;
        let mut values = Vec::with_capacity(fine.n_interior());
        for node in 1..fine.n_cells() {
            let cell = node / factor;
            let offset = node % factor;
            let v = if offset == 0 {
                self.node_value(cell)
            } else {
                let w = offset as f64 / factor as f64;
                (1.0 - w) * self.node_value(cell) + w * self.node_value(cell + 1)
            };
            values.push(v);
        }
        Ok(SpatialField { mesh: *fine, values })
    }

    /// Samples the fine field at the coarse nodes.
    pub fn restrict(&self, coarse: &Mesh1D) -> Result<SpatialField> {
        let factor = coarse.refinement_factor(&self.mesh)?;
        let values = (1..coarse.n_cells()).map(|n| self.node_value(n * factor)).collect();
        Ok(SpatialField { mesh: *coarse, values })
    }
}

/// L² and H¹₀ norms of the difference between two P1 fields, evaluated
/// exactly on the finer mesh. `b` must live on a refinement of `a`'s mesh.
pub fn field_norms(a: &SpatialField, b: &SpatialField) -> Result<(f64, f64)> {
    let fine = b.mesh;
    let pa = a.prolong(&fine)?;
    let d: Vec<f64> = pa.values.iter().zip(&b.values).map(|(x, y)| x - y).collect();
    let l2 = assemble_mass(&fine).bilinear(&d, &d).max(0.0).sqrt();
    let h1 = assemble_stiffness(&fine).bilinear(&d, &d).max(0.0).sqrt();
    Ok((l2, h1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem1d::sine_nodal_vector;

    #[test]
    fn identical_fields_have_zero_difference() {
        let mesh = Mesh1D::new(8).unwrap();
        let f = SpatialField::new(mesh, sine_nodal_vector(&mesh, 2)).unwrap();
        assert_eq!(field_norms(&f, &f).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn sine_interpolant_norm() {
        let fine = Mesh1D::new(64).unwrap();
        let b = SpatialField::new(fine, sine_nodal_vector(&fine, 1)).unwrap();
        let a = SpatialField::zero(Mesh1D::new(4).unwrap());
        let (l2, _) = field_norms(&a, &b).unwrap();
        assert!((l2 - 0.5f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn parabola_interpolant_gradient_norm() {
        let fine = Mesh1D::new(64).unwrap();
        let vals = (0..63).map(|i| {
            let x = fine.interior_x(i);
            x * (1.0 - x)
        });
        let b = SpatialField::new(fine, vals.collect()).unwrap();
        let (_, h1) = field_norms(&SpatialField::zero(fine), &b).unwrap();
        assert!((h1 - (1.0f64 / 3.0).sqrt()).abs() < 1e-3);
    }

    #[test]
    fn prolong_then_restrict_is_identity() {
        let coarse = Mesh1D::new(5).unwrap();
        let fine = Mesh1D::new(20).unwrap();
        let f = SpatialField::new(coarse, vec![1.0, -2.0, 0.5, 3.0]).unwrap();
        let back = f.prolong(&fine).unwrap().restrict(&coarse).unwrap();
        assert_eq!(back, f);
        assert!(field_norms(&f, &SpatialField::zero(Mesh1D::new(12).unwrap())).is_err());
    }
}
