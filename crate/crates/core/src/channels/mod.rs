//! Kraus-operator channels: amplitude damping (AD), generalized amplitude
//! damping (GAD) and squeezed generalized amplitude damping (SGAD).

mod choi;
mod damping;
mod sgad;

use serde::{Deserialize, Serialize};

use crate::bath::BathSpec;
use crate::qubit::{ComplexMatrix2, DensityMatrix};

pub use choi::{choi_matrix, cp_defect, ChoiMatrix, ChoiSpectrum, CHOI_RESIDUAL_TOL};
pub use damping::{ad_kraus, gad_kraus, gad_params};
pub use sgad::{
    sgad_kraus, sgad_kraus_from, sgad_params, sgad_residuals, sgad_solve, sgad_sweep,
    synthesize_channel, Branch, SgadParams, SgadSolution, RESIDUAL_TOL,
};

/// Completeness tolerance for synthesized channels.
pub const COMPLETENESS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelLabel {
    Identity,
    Ad,
    Gad,
    Sgad,
}

/// The bath and time a channel was synthesized for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSource {
    pub bath: BathSpec,
    pub t: f64,
}

/// Ordered Kraus operators.
///
/// JSON form: `{"label": ..., "operators": [[[[re, im], ...], ...], ...], "source": {...}}`
/// with each operator a row-major 2×2 matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrausSet {
    pub label: ChannelLabel,
    pub operators: Vec<ComplexMatrix2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<ChannelSource>,
}

impl KrausSet {
    pub fn new(label: ChannelLabel, operators: Vec<ComplexMatrix2>) -> Self {
        Self { label, operators, source: None }
    }

    pub fn identity() -> Self {
        Self::new(ChannelLabel::Identity, vec![ComplexMatrix2::identity()])
    }

    pub fn with_source(mut self, bath: BathSpec, t: f64) -> Self {
        self.source = Some(ChannelSource { bath, t });
        self
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        apply_channel(self, rho)
    }

    /// Σ_j E_j ρ E_j† on an arbitrary matrix (the channel is linear).
    pub fn apply_matrix(&self, m: &ComplexMatrix2) -> ComplexMatrix2 {
        self.operators.iter().fold(ComplexMatrix2::zero(), |acc, e| acc + e.sandwich(m))
    }

    pub fn completeness_defect(&self) -> f64 {
        completeness_defect(&self.operators)
    }
}

pub fn apply_channel(k: &KrausSet, rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::new_unchecked(k.apply_matrix(rho.matrix()))
}

/// ‖Σ_j E_j†E_j − 𝕀‖_F.
pub fn completeness_defect(operators: &[ComplexMatrix2]) -> f64 {
    let sum = operators.iter().fold(ComplexMatrix2::zero(), |acc, e| acc + e.adjoint() * *e);
    (sum - ComplexMatrix2::identity()).frobenius_norm()
}
