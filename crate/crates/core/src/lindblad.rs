//! Fixed-step RK4 integration of the master equation, used as an independent
//! check on the closed-form solution. Interaction picture throughout.

use num_complex::Complex64;

use crate::bath::{derive_bath, BathSpec};
use crate::error::{check_time, Result, SgadError};
use crate::qubit::{ComplexMatrix2, DensityMatrix};

/// Largest tolerated |Tr ρ − 1| at the end of an integration.
pub const TRACE_DRIFT_LIMIT: f64 = 1e-6;

/// Dissipator Σ_j (2R_jρR_j† − R_j†R_jρ − ρR_j†R_j) with
/// R₁ = √(γ₀(N_th+1)/2)·R, R₂ = √(γ₀N_th/2)·R†, R = σ₋cosh r + e^{iΦ}σ₊sinh r.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladGenerator {
    pub bath: BathSpec,
    /// Rate prefactors √(γ₀(N_th+1)/2) and √(γ₀N_th/2).
    pub prefactors: [f64; 2],
    /// R₁ and R₂ including their prefactors.
    pub operators: [ComplexMatrix2; 2],
    products: [ComplexMatrix2; 2],
}

pub fn build_generator(bath: &BathSpec) -> Result<LindbladGenerator> {
    let d = derive_bath(bath)?;
    let r = bath.squeezing;
    let base = ComplexMatrix2::sigma_minus() * r.cosh()
        + ComplexMatrix2::sigma_plus() * Complex64::from_polar(r.sinh(), bath.phase);
    let prefactors =
        [(bath.gamma0 * (d.n_th + 1.0) / 2.0).sqrt(), (bath.gamma0 * d.n_th / 2.0).sqrt()];
    let operators = [base * prefactors[0], base.adjoint() * prefactors[1]];
    let products = operators.map(|op| op.adjoint() * op);
    Ok(LindbladGenerator { bath: *bath, prefactors, operators, products })
}

impl LindbladGenerator {
    pub fn rhs(&self, rho: &ComplexMatrix2) -> ComplexMatrix2 {
        rhs(self, rho)
    }
}

pub fn rhs(gen: &LindbladGenerator, rho: &ComplexMatrix2) -> ComplexMatrix2 {
    let mut out = ComplexMatrix2::zero();
    for (op, prod) in gen.operators.iter().zip(&gen.products) {
        out = out + op.sandwich(rho) * 2.0 - *prod * *rho - *rho * *prod;
    }
    out
}

/// min(1e-3, 1/(100 γ₀(2N+1+a))): a hundred steps per time constant of the
/// fastest mode.
pub fn default_step(bath: &BathSpec) -> Result<f64> {
    let d = derive_bath(bath)?;
    Ok((1.0 / (100.0 * bath.gamma0 * (d.two_n_plus_one() + d.a))).min(1e-3))
}

fn rk4_step(gen: &LindbladGenerator, rho: &ComplexMatrix2, h: f64) -> ComplexMatrix2 {
    let k1 = rhs(gen, rho);
    let k2 = rhs(gen, &(*rho + k1 * (0.5 * h)));
    let k3 = rhs(gen, &(*rho + k2 * (0.5 * h)));
    let k4 = rhs(gen, &(*rho + k3 * h));
    let next = *rho + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    next.hermitian_part()
}

/// Advances by `span` in ⌈span/dt⌉ equal steps.
fn advance(gen: &LindbladGenerator, rho: ComplexMatrix2, span: f64, dt: f64) -> ComplexMatrix2 {
    if span == 0.0 {
        return rho;
    }
    let steps = (span / dt).ceil().max(1.0) as u64;
    let h = span / steps as f64;
    (0..steps).fold(rho, |acc, _| rk4_step(gen, &acc, h))
}

fn check_step(dt: f64) -> Result<()> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(SgadError::InvalidParameter {
            name: "dt",
            value: dt,
            reason: "step must be finite and > 0",
        })
    }
}

fn check_drift(rho: &ComplexMatrix2) -> Result<()> {
    let drift = (rho.trace() - Complex64::from(1.0)).norm();
    if drift.is_finite() && drift <= TRACE_DRIFT_LIMIT {
        Ok(())
    } else {
        Err(SgadError::TraceDrift { drift, limit: TRACE_DRIFT_LIMIT })
    }
}

/// ρ(t) by classical RK4 with steps no longer than `dt`. The trace is never
/// renormalized; drift past [`TRACE_DRIFT_LIMIT`] is an error.
pub fn integrate(
    gen: &LindbladGenerator,
    rho0: &DensityMatrix,
    t: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    check_time(t)?;
    check_step(dt)?;
    let rho = advance(gen, *rho0.matrix(), t, dt);
    check_drift(&rho)?;
    Ok(DensityMatrix::new_unchecked(rho))
}

/// ρ at each of the ascending `times`, continuing one trajectory through
/// successive checkpoints.
pub fn integrate_at(
    gen: &LindbladGenerator,
    rho0: &DensityMatrix,
    times: &[f64],
    dt: f64,
) -> Result<Vec<DensityMatrix>> {
    check_step(dt)?;
    let mut out = Vec::with_capacity(times.len());
    let mut now = 0.0;
    let mut rho = *rho0.matrix();
    for &t in times {
        check_time(t)?;
        if t < now {
            return Err(SgadError::InvalidParameter {
                name: "times",
                value: t,
                reason: "checkpoints must be ascending",
            });
        }
        rho = advance(gen, rho, t - now, dt);
        check_drift(&rho)?;
        out.push(DensityMatrix::new_unchecked(rho));
        now = t;
    }
    Ok(out)
}
