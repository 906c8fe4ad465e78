use nalgebra::{DMatrix, SymmetricEigen};

use super::Topology;
use crate::error::{Error, Result};

/// Laplacian eigenvalues in ascending order.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumResult {
    eigenvalues: Vec<f64>,
}

impl SpectrumResult {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Second-smallest eigenvalue (algebraic connectivity).
    pub fn lambda_2(&self) -> f64 {
        self.eigenvalues[1]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().expect("spectrum has at least two values")
    }

    /// Number of eigenvalues with magnitude below `tol`.
    pub fn zero_multiplicity(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|v| v.abs() < tol).count()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.eigenvalues
    }
}

/// Dense `L = D − A`.
pub fn laplacian_matrix(g: &Topology) -> DMatrix<f64> {
    let n = g.node_count();
    let mut lap = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        lap[(i, i)] = g.degree(i) as f64;
    }
    for e in g.edges() {
        let (a, b) = e.endpoints();
        lap[(a, b)] = -1.0;
        lap[(b, a)] = -1.0;
    }
    lap
}

/// Full Laplacian spectrum by dense symmetric eigendecomposition.
pub fn laplacian_spectrum(g: &Topology) -> Result<SpectrumResult> {
    if g.node_count() < 2 {
        return Err(Error::Domain(format!(
            "Laplacian spectrum needs at least two nodes, got {}",
            g.node_count()
        )));
    }
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(laplacian_matrix(g))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(SpectrumResult { eigenvalues })
}
