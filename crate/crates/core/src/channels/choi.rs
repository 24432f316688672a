use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::KrausSet;
use crate::error::{Result, SgadError};

/// Eigenpair certification bound ‖Cv − λv‖.
pub const CHOI_RESIDUAL_TOL: f64 = 1e-9;

/// Unnormalized Choi matrix Σ_j (E_j ⊗ 𝕀)|Φ⁺⟩⟨Φ⁺|(E_j ⊗ 𝕀)†, |Φ⁺⟩ = |00⟩ + |11⟩.
/// Row/column index is `2·out + ref`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChoiMatrix {
    pub entries: [[Complex64; 4]; 4],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChoiSpectrum {
    /// Descending.
    pub eigenvalues: [f64; 4],
    /// Largest ‖Cv − λv‖ over the four eigenpairs.
    pub max_residual: f64,
}

pub fn choi_matrix(k: &KrausSet) -> ChoiMatrix {
    let mut entries = [[Complex64::new(0.0, 0.0); 4]; 4];
    for e in &k.operators {
        for (row, out) in entries.iter_mut().enumerate() {
            let (a, i) = (row / 2, row % 2);
            for (col, c) in out.iter_mut().enumerate() {
                let (b, j) = (col / 2, col % 2);
                *c += e.get(a, i) * e.get(b, j).conj();
            }
        }
    }
    ChoiMatrix { entries }
}

impl ChoiMatrix {
    fn to_nalgebra(self) -> Matrix4<Complex64> {
        Matrix4::from_fn(|i, j| self.entries[i][j])
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.entries[i][i]).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let m = self.to_nalgebra();
        (m - m.adjoint()).norm()
    }

    /// Hermitian eigendecomposition, certified eigenpair by eigenpair.
    pub fn spectrum(&self) -> Result<ChoiSpectrum> {
        let m = self.to_nalgebra();
        // Symmetrize so the solver sees an exactly Hermitian input.
        let h = (m + m.adjoint()) * Complex64::from(0.5);
        let eig = SymmetricEigen::new(h);
        let mut pairs: Vec<(f64, usize)> = eig.eigenvalues.iter().copied().zip(0..4).collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut max_residual: f64 = 0.0;
        for &(lambda, idx) in &pairs {
            let v = eig.eigenvectors.column(idx);
            let r = (m * v - v * Complex64::from(lambda)).norm();
            max_residual = max_residual.max(r);
        }
        if !(max_residual <= CHOI_RESIDUAL_TOL) {
            return Err(SgadError::EigenCertification {
                residual: max_residual,
                limit: CHOI_RESIDUAL_TOL,
            });
        }
        Ok(ChoiSpectrum {
            eigenvalues: [pairs[0].0, pairs[1].0, pairs[2].0, pairs[3].0],
            max_residual,
        })
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.spectrum()?.eigenvalues[3])
    }
}

/// −(smallest eigenvalue), clamped below at 0. An uncertifiable spectrum
/// reports +∞ so it can never pass a tolerance check.
pub fn cp_defect(c: &ChoiMatrix) -> f64 {
    match c.min_eigenvalue() {
        Ok(m) => (-m).max(0.0),
        Err(_) => f64::INFINITY,
    }
}
