//! Qubit channels generated by a squeezed thermal bath.
//!
//! Builds the squeezed generalized amplitude damping (SGAD) channel and its
//! unsqueezed (GAD) and zero-temperature (AD) limits as Kraus sets, checks
//! them against the closed-form Bloch solution and an RK4 integration of the
//! master equation, and evaluates Holevo quantities and the binary-ensemble
//! capacity.
//!
//! Basis ordering is (|1⟩, |0⟩) everywhere: index 0 is the upper level.

// `!(x >= 0.0)` is the NaN-rejecting form of `x < 0.0`; used on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bath;
pub mod bloch;
pub mod capacity;
pub mod channels;
pub mod error;
pub mod jc;
pub mod lindblad;
pub mod qubit;

pub use bath::{derive_bath, planck_occupation, BathSpec, DerivedBath};
pub use bloch::{asymptotic_state, evolve_bloch, evolve_density, EvolutionQuery, Picture};
pub use capacity::{
    binary_orthogonal_ensemble, chi_surface, classical_capacity, holevo_chi, CapacityConfig,
    CapacityResult, ChiSurface, Ensemble, GridSpec,
};
pub use channels::{
    ad_kraus, apply_channel, choi_matrix, completeness_defect, cp_defect, gad_kraus, gad_params,
    sgad_kraus, sgad_kraus_from, sgad_params, sgad_residuals, sgad_solve, sgad_sweep,
    synthesize_channel, Branch, ChannelLabel, ChoiMatrix, KrausSet, SgadParams, SgadSolution,
};
pub use error::{Result, SgadError};
pub use jc::{jc_evolve, jc_lambda, JcSpec};
pub use lindblad::{
    build_generator, default_step, integrate, integrate_at, rhs, LindbladGenerator,
};
pub use qubit::{
    bloch_to_density, density_to_bloch, eigenvalues_hermitian2, pure_state, validate_density,
    von_neumann_entropy, BlochVector, ComplexMatrix2, DensityMatrix,
};
