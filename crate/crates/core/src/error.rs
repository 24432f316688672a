use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SgadError {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter { name: &'static str, value: f64, reason: &'static str },

    #[error("unphysical state: {0}")]
    UnphysicalState(String),

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    /// N = 0 (zero temperature, zero squeezing): the squeezed parameterization
    /// divides by N, the channel is plain amplitude damping.
    #[error("degenerate bath (N = 0): use the amplitude damping channel")]
    DegenerateBath,

    #[error("no admissible root for p2 at t = {t}: {detail}")]
    NoAdmissibleBranch { t: f64, detail: String },

    #[error("branch flip at t = {t}: {from} -> {to}")]
    BranchFlip { t: f64, from: &'static str, to: &'static str },

    #[error("trace drift {drift:.3e} exceeds {limit:.1e}; step size too large")]
    TraceDrift { drift: f64, limit: f64 },

    #[error("eigenpair residual {residual:.3e} exceeds {limit:.1e}")]
    EigenCertification { residual: f64, limit: f64 },

    #[error("channel output is complex-valued (imaginary residue {0:.3e})")]
    ComplexResidue(f64),
}

pub type Result<T> = std::result::Result<T, SgadError>;

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(SgadError::NegativeTime(t));
    }
    if !t.is_finite() {
        return Err(SgadError::InvalidParameter { name: "t", value: t, reason: "must be finite" });
    }
    Ok(())
}
