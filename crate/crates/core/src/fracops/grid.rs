use crate::error::{domain, Error, Result};

/// Partition `0 = t_0 < t_1 < ... < t_J = T` of the time interval.
///
/// Intervals are indexed from zero: interval `k` is `(t_k, t_{k+1})` with
/// length `tau(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalGrid {
    nodes: Vec<f64>,
    uniform_step: Option<f64>,
}

impl TemporalGrid {
    /// `steps` equal intervals on `[0, t_final]`.
    pub fn uniform(t_final: f64, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(domain("a temporal grid needs at least one interval"));
        }
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(domain(format!("final time {t_final} must be positive")));
        }
        let tau = t_final / steps as f64;
        let mut nodes: Vec<f64> = (0..=steps).map(|k| k as f64 * tau).collect();
        nodes[steps] = t_final;
        Ok(Self {
            nodes,
            uniform_step: Some(tau),
        })
    }

    /// Arbitrary partition. The grid is treated as nonuniform even when the
    /// nodes happen to be equispaced.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(domain("a temporal grid needs at least two nodes"));
        }
        if nodes[0] != 0.0 {
            return Err(domain(format!("first node must be 0, got {}", nodes[0])));
        }
        if let Some(w) = nodes.windows(2).find(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return Err(domain(format!(
                "nodes must be finite and strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Self {
            nodes,
            uniform_step: None,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, k: usize) -> f64 {
        self.nodes[k]
    }

    /// Number of intervals `J`.
    pub fn steps(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn t_final(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn tau(&self, k: usize) -> f64 {
        self.nodes[k + 1] - self.nodes[k]
    }

    /// Maximum interval length.
    pub fn max_tau(&self) -> f64 {
        match self.uniform_step {
            Some(tau) => tau,
            None => (0..self.steps()).map(|k| self.tau(k)).fold(0.0, f64::max),
        }
    }

    /// Step length when the grid was built by [`TemporalGrid::uniform`].
    pub fn uniform_step(&self) -> Option<f64> {
        self.uniform_step
    }

    /// Index of the interval containing `t` (right-closed at the end).
    pub fn locate(&self, t: f64) -> Option<usize> {
        if !(t >= 0.0 && t <= self.t_final()) {
            return None;
        }
        let k = self.nodes.partition_point(|&n| n <= t);
        Some(k.saturating_sub(1).min(self.steps() - 1))
    }

    /// Ratio `fine.steps() / self.steps()` when every node of `self` is a
    /// node of `fine` and the subdivision is the same on every interval.
    pub fn refinement_factor(&self, fine: &TemporalGrid) -> Result<usize> {
        let (jc, jf) = (self.steps(), fine.steps());
        if jf % jc != 0 {
            return Err(Error::NotNested(format!(
                "{jf} fine intervals do not subdivide {jc} coarse intervals"
            )));
        }
        let factor = jf / jc;
        for k in 0..=jc {
            let (a, b) = (self.nodes[k], fine.nodes[k * factor]);
            if (a - b).abs() > 1e-12 * self.t_final() {
                return Err(Error::NotNested(format!(
                    "coarse node {a} does not coincide with fine node {b}"
                )));
            }
        }
        Ok(factor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_properties() {
        let g = TemporalGrid::uniform(1.0, 8).unwrap();
        assert_eq!(g.steps(), 8);
        assert_eq!(g.t_final(), 1.0);
        assert_eq!(g.tau(3), 0.125);
        assert_eq!(g.uniform_step(), Some(0.125));
        assert_eq!(g.locate(0.0), Some(0));
        assert_eq!(g.locate(0.3), Some(2));
        assert_eq!(g.locate(1.0), Some(7));
        assert_eq!(g.locate(1.1), None);
    }

    #[test]
    fn rejects_bad_partitions() {
        assert!(TemporalGrid::from_nodes(vec![0.0]).is_err());
        assert!(TemporalGrid::from_nodes(vec![0.1, 1.0]).is_err());
        assert!(TemporalGrid::from_nodes(vec![0.0, 0.5, 0.5, 1.0]).is_err());
        assert!(TemporalGrid::uniform(1.0, 0).is_err());
        assert!(TemporalGrid::uniform(-1.0, 4).is_err());
    }

    #[test]
    fn nesting() {
        let c = TemporalGrid::uniform(1.0, 4).unwrap();
        let f = TemporalGrid::uniform(1.0, 16).unwrap();
        assert_eq!(c.refinement_factor(&f).unwrap(), 4);
        let odd = TemporalGrid::uniform(1.0, 6).unwrap();
        assert!(c.refinement_factor(&odd).is_err());
        let skew = TemporalGrid::from_nodes(vec![0.0, 0.3, 0.5, 0.75, 1.0]).unwrap();
        assert!(TemporalGrid::uniform(1.0, 2).unwrap().refinement_factor(&skew).is_ok());
        assert!(c.refinement_factor(&skew).is_err());
    }
}
