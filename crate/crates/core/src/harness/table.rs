use super::theory::ExpectedOrders;
use crate::error::{domain, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write;

/// One refinement level of a convergence table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub h: f64,
    pub tau: f64,
    #[serde(rename = "E1")]
    pub e1: f64,
    pub order1: Option<f64>,
    #[serde(rename = "E2")]
    pub e2: f64,
    pub order2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableMeta {
    pub alpha: f64,
    pub experiment: String,
    pub axis: String,
    pub params: BTreeMap<String, f64>,
    /// `None` when errors are measured against an exact solution.
    pub h_ref: Option<f64>,
    pub tau_ref: Option<f64>,
    pub runtime_s: f64,
    pub max_energy_defect: f64,
    pub max_step_residual: f64,
    pub predicted: Option<ExpectedOrders>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub meta: TableMeta,
    pub rows: Vec<ConvergenceRow>,
}

/// `log₂(E_prev / E_cur)` between consecutive dyadic levels.
pub fn order_fit(errors: &[f64]) -> Result<Vec<f64>> {
    if errors.len() < 2 {
        return Err(domain("orders need at least two levels"));
    }
    if let Some(bad) = errors.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        return Err(domain(format!("cannot take orders of error value {bad}")));
    }
    Ok(errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
}

fn cell(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

impl ConvergenceTable {
    /// Fills the order columns from the error columns.
    pub fn with_orders(mut self) -> Result<Self> {
        if self.rows.len() >= 2 {
            let o1 = order_fit(&self.rows.iter().map(|r| r.e1).collect::<Vec<_>>())?;
            let o2 = order_fit(&self.rows.iter().map(|r| r.e2).collect::<Vec<_>>())?;
            for (i, row) in self.rows.iter_mut().enumerate() {
                row.order1 = i.checked_sub(1).map(|j| o1[j]);
                row.order2 = i.checked_sub(1).map(|j| o2[j]);
            }
        }
        Ok(self)
    }

    pub fn final_orders(&self) -> Option<(f64, f64)> {
        let last = self.rows.last()?;
        Some((last.order1?, last.order2?))
    }

    /// `h,tau,E1,order1,E2,order2` with 17 significant digits; the first
    /// row leaves the order cells empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("h,tau,E1,order1,E2,order2\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                cell(Some(r.h)),
                cell(Some(r.tau)),
                cell(Some(r.e1)),
                cell(r.order1),
                cell(Some(r.e2)),
                cell(r.order2)
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables contain only plain data")
    }

    /// Aligned text rendering for terminals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>10} {:>10} {:>11} {:>6} {:>11} {:>6}",
            "h", "tau", "E1", "order", "E2", "order"
        );
        let ord = |o: Option<f64>| o.map(|o| format!("{o:.2}")).unwrap_or_else(|| "--".into());
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>10.3e} {:>10.3e} {:>11.3e} {:>6} {:>11.3e} {:>6}",
                r.h,
                r.tau,
                r.e1,
                ord(r.order1),
                r.e2,
                ord(r.order2)
            );
        }
        out
    }
}
