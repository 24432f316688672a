//! Dissipative Jaynes–Cummings model: a two-level atom in a lossy cavity at
//! zero temperature, single excitation, Lorentzian coupling of width κ.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::Picture;
use crate::error::{check_time, Result, SgadError};
use crate::qubit::{pure_state, ComplexMatrix2, DensityMatrix};

/// Below this |l|t the closed form is replaced by its Taylor expansion.
pub const SERIES_THRESHOLD: f64 = 1e-6;
const RESIDUE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JcSpec {
    pub kappa: f64,
    pub gamma0: f64,
    #[serde(default = "default_omega0")]
    pub omega0: f64,
}

fn default_omega0() -> f64 {
    1.0
}

impl JcSpec {
    pub fn new(kappa: f64, gamma0: f64) -> Self {
        Self { kappa, gamma0, omega0: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, value| {
            Err(SgadError::InvalidParameter { name, value, reason: "must be finite and > 0" })
        };
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return bad("kappa", self.kappa);
        }
        if !(self.gamma0 > 0.0 && self.gamma0.is_finite()) {
            return bad("gamma0", self.gamma0);
        }
        if !(self.omega0 > 0.0 && self.omega0.is_finite()) {
            return bad("omega0", self.omega0);
        }
        Ok(())
    }

    /// l² = κ² − 2γ₀κ; negative in the underdamped regime.
    pub fn l_squared(&self) -> f64 {
        self.kappa * (self.kappa - 2.0 * self.gamma0)
    }
}

/// Excited-state amplitude factor e^{−κt/2}[cosh(lt/2) + (κ/l) sinh(lt/2)].
///
/// Evaluated as ½[(1 + κ/l)e^{(l−κ)t/2} + (1 − κ/l)e^{−(l+κ)t/2}] in complex
/// arithmetic, which covers imaginary l and never overflows. Can be negative
/// late in the underdamped regime.
pub fn jc_amplitude(spec: &JcSpec, t: f64) -> Result<f64> {
    spec.validate()?;
    check_time(t)?;
    let kappa = spec.kappa;
    let l2 = spec.l_squared();
    if l2.abs().sqrt() * t < SERIES_THRESHOLD {
        let bracket = 1.0 + 0.5 * kappa * t + 0.125 * l2 * t * t * (1.0 + kappa * t / 6.0);
        return Ok((-0.5 * kappa * t).exp() * bracket);
    }
    let l = Complex64::from(l2).sqrt();
    let ratio = kappa / l;
    let g = 0.5
        * ((1.0 + ratio) * ((l - kappa) * (0.5 * t)).exp()
            + (1.0 - ratio) * ((-l - kappa) * (0.5 * t)).exp());
    if g.im.abs() > RESIDUE_TOL {
        return Err(SgadError::ComplexResidue(g.im.abs()));
    }
    Ok(g.re)
}

/// λ(t) = 1 − e^{−κt}[cosh(lt/2) + (κ/l) sinh(lt/2)]².
pub fn jc_lambda(spec: &JcSpec, t: f64) -> Result<f64> {
    let g = jc_amplitude(spec, t)?;
    let lambda = 1.0 - g * g;
    let clamped = lambda.clamp(0.0, 1.0);
    if (clamped - lambda).abs() > RESIDUE_TOL {
        return Err(SgadError::InvalidParameter {
            name: "lambda",
            value: lambda,
            reason: "damping parameter left [0, 1]",
        });
    }
    Ok(clamped)
}

/// Atom state at time t for the initial pure state (θ₀, φ₀).
///
/// The upper-level population is scaled by the squared amplitude factor and
/// the coherence by the factor itself.
pub fn jc_evolve(
    theta0: f64,
    phi0: f64,
    spec: &JcSpec,
    t: f64,
    picture: Picture,
) -> Result<DensityMatrix> {
    let g = jc_amplitude(spec, t)?;
    let rho0 = pure_state(theta0, phi0)?;
    let e = &rho0.matrix().entries;
    let a = e[0][0].re * g * g;
    let mut b = e[0][1] * g;
    if picture == Picture::Schroedinger {
        b *= Complex64::from_polar(1.0, -spec.omega0 * t);
    }
    Ok(DensityMatrix::new_unchecked(ComplexMatrix2::new([
        [Complex64::from(a), b],
        [b.conj(), Complex64::from(1.0 - a)],
    ])))
}
