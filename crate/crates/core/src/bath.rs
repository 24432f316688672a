//! Squeezed thermal bath parameters.
//!
//! Units are ħ = k_B = 1. Rates (γ₀) and times only ever appear as the
//! product γ₀t.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_time, Result, SgadError};

/// ω/T beyond which the occupation is reported as exactly zero.
const PLANCK_CUTOFF: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    #[serde(rename = "T")]
    pub temperature: f64,
    #[serde(rename = "r")]
    pub squeezing: f64,
    #[serde(rename = "Phi")]
    pub phase: f64,
    pub gamma0: f64,
    #[serde(default = "default_omega")]
    pub omega: f64,
}

fn default_omega() -> f64 {
    1.0
}

impl BathSpec {
    /// Bath with ω = 1.
    pub fn new(temperature: f64, squeezing: f64, phase: f64, gamma0: f64) -> Self {
        Self { temperature, squeezing, phase, gamma0, omega: 1.0 }
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, value, reason| Err(SgadError::InvalidParameter { name, value, reason });
        if !(self.temperature >= 0.0) || !self.temperature.is_finite() {
            return bad("T", self.temperature, "temperature must be finite and >= 0");
        }
        if !(self.squeezing >= 0.0) || !self.squeezing.is_finite() {
            return bad("r", self.squeezing, "squeezing must be finite and >= 0");
        }
        if !self.phase.is_finite() {
            return bad("Phi", self.phase, "phase must be finite");
        }
        if !(self.gamma0 > 0.0) || !self.gamma0.is_finite() {
            return bad("gamma0", self.gamma0, "rate must be finite and > 0");
        }
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return bad("omega", self.omega, "frequency must be finite and > 0");
        }
        Ok(())
    }

    pub fn derive(&self) -> Result<DerivedBath> {
        derive_bath(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedBath {
    pub n_th: f64,
    /// Effective photon number N.
    pub n_eff: f64,
    /// Squeezing correlation M.
    pub m: Complex64,
    pub a: f64,
}

impl DerivedBath {
    /// 2N + 1.
    pub fn two_n_plus_one(&self) -> f64 {
        2.0 * self.n_eff + 1.0
    }

    /// Upper-level population 1 − q = N/(2N+1) of the fixed point diag(1−q, q).
    pub fn asymptotic_excited_population(&self) -> f64 {
        self.n_eff / self.two_n_plus_one()
    }

    /// q = (N+1)/(2N+1).
    pub fn asymptotic_ground_population(&self) -> f64 {
        (self.n_eff + 1.0) / self.two_n_plus_one()
    }
}

/// Mean thermal occupation 1/(e^{ω/T} − 1).
pub fn planck_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(SgadError::InvalidParameter {
            name: "omega",
            value: omega,
            reason: "frequency must be finite and > 0",
        });
    }
    if !(temperature >= 0.0) {
        return Err(SgadError::InvalidParameter {
            name: "T",
            value: temperature,
            reason: "temperature must be >= 0",
        });
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let x = omega / temperature;
    if x > PLANCK_CUTOFF {
        return Ok(0.0);
    }
    Ok(1.0 / x.exp_m1())
}

pub fn derive_bath(spec: &BathSpec) -> Result<DerivedBath> {
    spec.validate()?;
    let n_th = planck_occupation(spec.omega, spec.temperature)?;
    let r = spec.squeezing;
    let k = 2.0 * n_th + 1.0;
    let sh = r.sinh();
    let n_eff = n_th * (2.0 * r).cosh() + sh * sh;
    let a = (2.0 * r).sinh() * k;
    let m = Complex64::from_polar(-0.5 * a, spec.phase);
    if !n_eff.is_finite() || !a.is_finite() {
        return Err(SgadError::InvalidParameter {
            name: "r",
            value: r,
            reason: "squeezing overflows double precision",
        });
    }
    // 2N + 1 − a = (2N_th + 1) e^{−2r}: the slow relaxation rate. Positive
    // analytically; it can only vanish through underflow.
    if !(slow_rate_factor(spec, n_th) > 0.0) {
        return Err(SgadError::InvalidParameter {
            name: "r",
            value: r,
            reason: "2N + 1 - a underflows to zero",
        });
    }
    Ok(DerivedBath { n_th, n_eff, m, a })
}

fn slow_rate_factor(spec: &BathSpec, n_th: f64) -> f64 {
    (2.0 * n_th + 1.0) * (-2.0 * spec.squeezing).exp()
}

/// Exponential factors of the analytic solution at time t.
///
/// With τ = γ₀(2N_th+1)t/2 the two relaxation exponents are
/// δ = τe^{−2r} = γ₀(2N+1−a)t/2 and σ = τe^{2r} = γ₀(2N+1+a)t/2. The
/// products e^{∓γ₀(2N+1)t/2}·{cosh, sinh}(γ₀at/2) are formed from e^{−δ} and
/// e^{−σ} directly, so nothing overflows however large a·t gets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFactors {
    pub delta: f64,
    pub sigma: f64,
    /// e^{−γ₀(2N+1)t/2} cosh(γ₀at/2).
    pub k: f64,
    /// e^{−γ₀(2N+1)t/2} sinh(γ₀at/2).
    pub s: f64,
    /// e^{−γ₀(2N+1)t}.
    pub e: f64,
    /// 1 − e^{−γ₀(2N+1)t}.
    pub d: f64,
}

impl DecayFactors {
    pub fn new(spec: &BathSpec, derived: &DerivedBath, t: f64) -> Result<Self> {
        check_time(t)?;
        let tau = 0.5 * spec.gamma0 * (2.0 * derived.n_th + 1.0) * t;
        let delta = tau * (-2.0 * spec.squeezing).exp();
        let sigma = tau * (2.0 * spec.squeezing).exp();
        let slow = (-delta).exp();
        let fast = (-sigma).exp();
        let s = -0.5 * slow * (delta - sigma).exp_m1();
        Ok(Self {
            delta,
            sigma,
            k: 0.5 * (slow + fast),
            s,
            e: (-(delta + sigma)).exp(),
            d: -(-(delta + sigma)).exp_m1(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn planck_examples() {
        assert_eq!(planck_occupation(1.0, 0.0).unwrap(), 0.0);
        // 1/(e − 1)
        assert_abs_diff_eq!(planck_occupation(1.0, 1.0).unwrap(), 0.58198, epsilon = 1e-5);
        // 1/(e^{0.2} − 1)
        assert_abs_diff_eq!(planck_occupation(1.0, 5.0).unwrap(), 4.51665, epsilon = 1e-4);
        assert_eq!(planck_occupation(1000.0, 1.0).unwrap(), 0.0);
        assert!(planck_occupation(0.0, 1.0).is_err());
        assert!(planck_occupation(-1.0, 1.0).is_err());
    }

    #[test]
    fn derived_examples() {
        let d = derive_bath(&BathSpec::new(0.0, 0.0, 0.0, 0.05)).unwrap();
        assert_eq!((d.n_th, d.n_eff, d.a), (0.0, 0.0, 0.0));
        assert_eq!(d.m, Complex64::new(0.0, 0.0));

        let d = derive_bath(&BathSpec::new(0.0, 1.0, 0.0, 0.05)).unwrap();
        assert_abs_diff_eq!(d.n_eff, 1.38109, epsilon = 1e-4);
        assert_abs_diff_eq!(d.a, 3.62686, epsilon = 1e-4);

        let d = derive_bath(&BathSpec::new(1.0, 0.0, 0.0, 0.05)).unwrap();
        assert_abs_diff_eq!(d.n_eff, 0.58198, epsilon = 1e-5);
        assert_eq!(d.n_eff, d.n_th);
        assert_eq!(d.a, 0.0);
    }

    #[test]
    fn squeezing_correlation() {
        for &(t, r, phi) in &[(0.0, 0.3, 0.0), (2.0, 1.0, 1.0), (5.0, 2.0, -2.5)] {
            let d = derive_bath(&BathSpec::new(t, r, phi, 0.05)).unwrap();
            assert!((d.a - 2.0 * d.m.norm()).abs() <= 1e-12 * d.a.max(1.0));
            let expect = -0.5 * (2.0f64 * r).sinh() * (2.0 * d.n_th + 1.0);
            assert!((d.m - Complex64::from_polar(1.0, phi) * expect).norm() <= 1e-12);
            // 2N+1 − a = (2N_th+1)e^{−2r}
            let lhs = d.two_n_plus_one() - d.a;
            let rhs = (2.0 * d.n_th + 1.0) * (-2.0 * r).exp();
            assert!((lhs - rhs).abs() <= 1e-12 * d.two_n_plus_one());
        }
    }

    #[test]
    fn monotone_in_r_and_t() {
        let n = |t, r| derive_bath(&BathSpec::new(t, r, 0.0, 0.05)).unwrap().n_eff;
        for i in 0..20 {
            let r = 0.1 * i as f64;
            assert!(n(1.0, r + 0.1) > n(1.0, r));
            assert!(n(0.5 + r, 0.5) < n(0.6 + r, 0.5));
        }
    }

    #[test]
    fn rejects_bad_specs() {
        for spec in [
            BathSpec::new(-1.0, 0.0, 0.0, 0.05),
            BathSpec::new(1.0, -0.1, 0.0, 0.05),
            BathSpec::new(1.0, 0.0, f64::NAN, 0.05),
            BathSpec::new(1.0, 0.0, 0.0, 0.0),
            BathSpec::new(1.0, 0.0, 0.0, 0.05).with_omega(0.0),
            BathSpec::new(1.0, 400.0, 0.0, 0.05),
        ] {
            assert!(derive_bath(&spec).is_err(), "{spec:?}");
        }
    }

    #[test]
    fn decay_factors_match_direct_forms() {
        let spec = BathSpec::new(1.0, 0.7, 0.3, 0.05);
        let d = derive_bath(&spec).unwrap();
        for &t in &[0.0, 1e-9, 0.3, 5.0, 40.0] {
            let f = DecayFactors::new(&spec, &d, t).unwrap();
            let g = spec.gamma0 * d.two_n_plus_one() * t / 2.0;
            let x = spec.gamma0 * d.a * t / 2.0;
            assert!((f.k - (-g).exp() * x.cosh()).abs() <= 1e-14);
            assert!((f.s - (-g).exp() * x.sinh()).abs() <= 1e-14);
            assert!((f.e - (-2.0 * g).exp()).abs() <= 1e-14);
            assert!((f.d + f.e - 1.0).abs() <= 1e-15);
        }
        assert!(DecayFactors::new(&spec, &d, -1.0).is_err());
    }

    #[test]
    fn bath_spec_json_names() {
        let spec = BathSpec::new(1.0, 0.5, 0.25, 0.05);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"T":1.0,"r":0.5,"Phi":0.25,"gamma0":0.05,"omega":1.0}"#);
        let back: BathSpec =
            serde_json::from_str(r#"{"T":1.0,"r":0.5,"Phi":0.25,"gamma0":0.05}"#).unwrap();
        assert_eq!(back, spec);
    }
}
