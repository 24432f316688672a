//! Closed-form solution of the squeezed-bath master equation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bath::{derive_bath, BathSpec, DecayFactors};
use crate::error::{check_time, Result};
use crate::qubit::{BlochVector, ComplexMatrix2, DensityMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Picture {
    #[default]
    Interaction,
    Schroedinger,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionQuery {
    pub initial: BlochVector,
    pub bath: BathSpec,
    pub t: f64,
    #[serde(default)]
    pub picture: Picture,
}

/// Bloch vector at time t.
///
/// The interaction-picture components follow the analytic solution, x and y
/// mixing through sin Φ. In the Schrödinger picture the transverse part is
/// additionally rotated by the free precession ωt.
pub fn evolve_bloch(q: &EvolutionQuery) -> Result<BlochVector> {
    check_time(q.t)?;
    let derived = derive_bath(&q.bath)?;
    let f = DecayFactors::new(&q.bath, &derived, q.t)?;
    let (sin_phi, cos_phi) = q.bath.phase.sin_cos();
    let b0 = q.initial;
    let x = (f.k + f.s * cos_phi) * b0.x - sin_phi * f.s * b0.y;
    let y = (f.k - f.s * cos_phi) * b0.y - sin_phi * f.s * b0.x;
    let z = f.e * b0.z - f.d / derived.two_n_plus_one();
    let b = BlochVector::new(x, y, z);
    Ok(match q.picture {
        Picture::Interaction => b,
        Picture::Schroedinger => {
            // x − iy carries the upper-right entry, which picks up e^{−iωt}.
            let w = Complex64::new(b.x, -b.y) * Complex64::from_polar(1.0, -q.bath.omega * q.t);
            BlochVector::new(w.re, -w.im, b.z)
        }
    })
}

/// ρ(t) from ρ₀.
///
/// Populations relax as ρ₁₁(t) = e^{−γ₀(2N+1)t}ρ₁₁(0) + (1 − e^{−γ₀(2N+1)t})·N/(2N+1)
/// (upper level), and the coherence ⟨σ₋⟩ as
/// K⟨σ₋(0)⟩ + S e^{iΦ}⟨σ₊(0)⟩ with K, S the damped cosh/sinh factors.
pub fn evolve_density(
    rho0: &DensityMatrix,
    bath: &BathSpec,
    t: f64,
    picture: Picture,
) -> Result<DensityMatrix> {
    check_time(t)?;
    if t == 0.0 {
        return Ok(*rho0);
    }
    let derived = derive_bath(bath)?;
    let f = DecayFactors::new(bath, &derived, t)?;
    let e0 = &rho0.matrix().entries;
    let n = derived.two_n_plus_one();
    let upper = f.e * e0[0][0].re + f.d * (derived.n_eff / n);
    let lower = f.e * e0[1][1].re + f.d * ((derived.n_eff + 1.0) / n);
    let minus0 = e0[0][1];
    let plus0 = e0[1][0];
    let mut coherence = minus0 * f.k + Complex64::from_polar(f.s, bath.phase) * plus0;
    if picture == Picture::Schroedinger {
        coherence *= Complex64::from_polar(1.0, -bath.omega * t);
    }
    Ok(DensityMatrix::new_unchecked(ComplexMatrix2::new([
        [Complex64::from(upper), coherence],
        [coherence.conj(), Complex64::from(lower)],
    ])))
}

/// The fixed point diag(1−q, q), q = (N+1)/(2N+1).
pub fn asymptotic_state(bath: &BathSpec) -> Result<DensityMatrix> {
    let d = derive_bath(bath)?;
    Ok(DensityMatrix::new_unchecked(ComplexMatrix2::diag(
        d.asymptotic_excited_population(),
        d.asymptotic_ground_population(),
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{bloch_to_density, pure_state, validate_density};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn query(b: BlochVector, bath: BathSpec, t: f64) -> EvolutionQuery {
        EvolutionQuery { initial: b, bath, t, picture: Picture::Interaction }
    }

    #[test]
    fn zero_time_is_identity() {
        let b0 = BlochVector::new(0.3, -0.4, 0.5);
        let bath = BathSpec::new(3.0, 1.2, 0.7, 0.05);
        assert_eq!(evolve_bloch(&query(b0, bath, 0.0)).unwrap(), b0);
        let rho = pure_state(1.0, 2.0).unwrap();
        assert_eq!(evolve_density(&rho, &bath, 0.0, Picture::Schroedinger).unwrap(), rho);
    }

    #[test]
    fn vacuum_decay_from_upper_state() {
        let bath = BathSpec::new(0.0, 0.0, 0.0, 0.05);
        let b = evolve_bloch(&query(BlochVector::new(0.0, 0.0, 1.0), bath, 10.0)).unwrap();
        // 2e^{−0.5} − 1
        assert_abs_diff_eq!(b.z, 0.21306, epsilon = 1e-5);
        assert_eq!((b.x, b.y), (0.0, 0.0));
    }

    #[test]
    fn long_time_limit() {
        for &(temp, r, phi) in &[(0.0, 0.0, 0.0), (1.0, 1.0, 0.5), (5.0, 2.0, PI)] {
            let bath = BathSpec::new(temp, r, phi, 0.05);
            let d = derive_bath(&bath).unwrap();
            // The transverse part decays at the slow rate γ₀(2N+1−a)/2.
            let slow = 0.5 * bath.gamma0 * (d.two_n_plus_one() - d.a);
            let t = 60.0 / slow;
            let b = evolve_bloch(&query(BlochVector::new(0.6, 0.0, 0.8), bath, t)).unwrap();
            let target = BlochVector::new(0.0, 0.0, -1.0 / d.two_n_plus_one());
            assert!(b.max_abs_diff(&target) <= 1e-10, "{b:?}");
        }
    }

    #[test]
    fn density_matches_bloch_form() {
        let bath = BathSpec::new(2.0, 0.8, 1.1, 0.05);
        let rho0 = pure_state(0.9, 2.2).unwrap();
        for &t in &[0.5, 5.0, 50.0] {
            for picture in [Picture::Interaction, Picture::Schroedinger] {
                let q = EvolutionQuery { initial: rho0.bloch(), bath, t, picture };
                let b = evolve_bloch(&q).unwrap();
                let rho = evolve_density(&rho0, &bath, t, picture).unwrap();
                let from_b = bloch_to_density(b).unwrap();
                assert!((*rho.matrix() - *from_b.matrix()).max_abs() <= 1e-14);
                assert!(validate_density(rho.matrix()).passed());
            }
        }
    }

    #[test]
    fn pictures_share_spectrum() {
        let bath = BathSpec::new(1.0, 1.0, 0.3, 0.05);
        let rho0 = pure_state(1.3, 0.4).unwrap();
        let a = evolve_density(&rho0, &bath, 7.0, Picture::Interaction).unwrap();
        let b = evolve_density(&rho0, &bath, 7.0, Picture::Schroedinger).unwrap();
        let (a1, a2) = a.eigenvalues();
        let (b1, b2) = b.eigenvalues();
        assert!((a1 - b1).abs() <= 1e-14 && (a2 - b2).abs() <= 1e-14);
    }

    #[test]
    fn asymptotic_examples() {
        let s = asymptotic_state(&BathSpec::new(0.0, 0.0, 0.0, 0.05)).unwrap();
        assert_eq!(*s.matrix(), ComplexMatrix2::diag(0.0, 1.0));
        // N = 1 needs sinh²r = 1 at T = 0.
        let r = 1.0f64.asinh();
        let s = asymptotic_state(&BathSpec::new(0.0, r, 0.0, 0.05)).unwrap();
        assert_abs_diff_eq!(s.excited_population(), 1.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn asymptotic_state_is_reached() {
        for &(temp, r) in &[(0.0, 0.0), (1.0, 0.5), (3.0, 1.0), (5.0, 2.0)] {
            let bath = BathSpec::new(temp, r, 0.4, 0.05);
            let target = asymptotic_state(&bath).unwrap();
            let rho0 = pure_state(2.0, 1.0).unwrap();
            let rho =
                evolve_density(&rho0, &bath, 1e4 / bath.gamma0, Picture::Interaction).unwrap();
            assert!((*rho.matrix() - *target.matrix()).max_abs() <= 1e-8, "T={temp} r={r}");
        }
    }

    #[test]
    fn no_cross_terms_without_squeezing() {
        let bath = BathSpec::new(2.0, 0.0, 1.0, 0.05);
        let b = evolve_bloch(&query(BlochVector::new(0.8, 0.0, 0.0), bath, 3.0)).unwrap();
        assert_eq!(b.y, 0.0);
    }

    #[test]
    fn z_contracts_toward_fixed_point() {
        let bath = BathSpec::new(1.0, 1.0, 0.0, 0.05);
        let zinf = -1.0 / derive_bath(&bath).unwrap().two_n_plus_one();
        let mut prev = f64::INFINITY;
        for i in 0..50 {
            let b = evolve_bloch(&query(BlochVector::new(0.0, 0.6, 0.8), bath, i as f64)).unwrap();
            let gap = (b.z - zinf).abs();
            assert!(gap <= prev);
            prev = gap;
        }
    }

    #[test]
    fn huge_times_stay_finite() {
        let bath = BathSpec::new(3.0, 2.0, 0.0, 0.05);
        let rho0 = pure_state(1.0, 0.0).unwrap();
        let rho = evolve_density(&rho0, &bath, 1e6, Picture::Interaction).unwrap();
        assert!(rho.matrix().is_finite());
    }

    #[test]
    fn rejects_negative_time() {
        let bath = BathSpec::new(1.0, 0.0, 0.0, 0.05);
        assert!(evolve_bloch(&query(BlochVector::default(), bath, -1.0)).is_err());
        assert!(evolve_density(
            &DensityMatrix::maximally_mixed(),
            &bath,
            -0.1,
            Picture::Interaction
        )
        .is_err());
    }
}
