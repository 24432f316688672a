//! Holevo quantity and the binary-ensemble capacity.
//!
//! The optimization is restricted to ensembles of two orthogonal pure states
//! {(θ₀, φ₀), (θ₀+π, φ₀)} with fixed weights (f, 1−f). The result is a lower
//! bound on the product-state classical capacity and is labelled as such.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::KrausSet;
use crate::error::{Result, SgadError};
use crate::qubit::{pure_state, von_neumann_entropy, DensityMatrix};

pub const CAPACITY_KIND: &str = "restricted_binary_capacity";

/// χ values closer than this are treated as equal when ranking nodes.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ensemble {
    members: Vec<(f64, DensityMatrix)>,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        let mut total = 0.0;
        for &(p, _) in &members {
            if !(p >= 0.0) {
                return Err(SgadError::InvalidParameter {
                    name: "probability",
                    value: p,
                    reason: "ensemble weights must be >= 0",
                });
            }
            total += p;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(SgadError::InvalidParameter {
                name: "probability",
                value: total,
                reason: "ensemble weights must sum to 1",
            });
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(f64, DensityMatrix)] {
        &self.members
    }
}

/// {(f, |θ₀,φ₀⟩), (1−f, |θ₀+π,φ₀⟩)}.
pub fn binary_orthogonal_ensemble(theta0: f64, phi0: f64, f: f64) -> Result<Ensemble> {
    if !(0.0..=1.0).contains(&f) {
        return Err(SgadError::InvalidParameter {
            name: "f",
            value: f,
            reason: "must lie in [0, 1]",
        });
    }
    Ensemble::new(vec![(f, pure_state(theta0, phi0)?), (1.0 - f, pure_state(theta0 + PI, phi0)?)])
}

/// χ = S(Σ p_j ℰ(ρ_j)) − Σ p_j S(ℰ(ρ_j)), in bits.
pub fn holevo_chi(e: &Ensemble, k: &KrausSet) -> f64 {
    let outputs: Vec<(f64, DensityMatrix)> =
        e.members.iter().map(|(p, rho)| (*p, k.apply(rho))).collect();
    let mean = outputs
        .iter()
        .fold(crate::qubit::ComplexMatrix2::zero(), |acc, (p, rho)| acc + *rho.matrix() * *p);
    let mean = DensityMatrix::new_unchecked(mean);
    let conditional: f64 = outputs.iter().map(|(p, rho)| p * von_neumann_entropy(rho)).sum();
    von_neumann_entropy(&mean) - conditional
}

fn chi_at(k: &KrausSet, theta0: f64, phi0: f64, f: f64) -> f64 {
    // Angles and f are always valid here.
    binary_orthogonal_ensemble(theta0, phi0, f).map(|e| holevo_chi(&e, k)).unwrap_or(f64::NAN)
}

/// Node counts over θ₀ ∈ [0, π] and φ₀ ∈ [0, 2π], endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { n_theta: 61, n_phi: 121 }
    }
}

impl GridSpec {
    fn validate(&self) -> Result<()> {
        if self.n_theta < 2 || self.n_phi < 2 {
            return Err(SgadError::InvalidParameter {
                name: "grid",
                value: self.n_theta.min(self.n_phi) as f64,
                reason: "need at least 2x2 nodes",
            });
        }
        Ok(())
    }

    pub fn theta_step(&self) -> f64 {
        PI / (self.n_theta - 1) as f64
    }

    pub fn phi_step(&self) -> f64 {
        2.0 * PI / (self.n_phi - 1) as f64
    }

    pub fn theta(&self, i: usize) -> f64 {
        if i + 1 == self.n_theta {
            PI
        } else {
            i as f64 * self.theta_step()
        }
    }

    pub fn phi(&self, j: usize) -> f64 {
        if j + 1 == self.n_phi {
            2.0 * PI
        } else {
            j as f64 * self.phi_step()
        }
    }
}

/// χ sampled on a grid, row-major in (θ₀, φ₀).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSurface {
    pub grid: GridSpec,
    pub f: f64,
    pub chi: Vec<f64>,
}

impl ChiSurface {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.chi[i * self.grid.n_phi + j]
    }

    /// (θ₀, φ₀, χ) triples in row-major order.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.chi.iter().enumerate().map(|(idx, &c)| {
            let (i, j) = (idx / self.grid.n_phi, idx % self.grid.n_phi);
            (self.grid.theta(i), self.grid.phi(j), c)
        })
    }

    /// Best node; ties within 1e-12 go to the first node in row-major order,
    /// i.e. the lexicographically smallest (θ₀, φ₀).
    pub fn argmax(&self) -> (usize, usize, f64) {
        let mut best = (0, 0, f64::NEG_INFINITY);
        for (idx, &c) in self.chi.iter().enumerate() {
            if c > best.2 + TIE_TOL {
                best = (idx / self.grid.n_phi, idx % self.grid.n_phi, c);
            }
        }
        best
    }
}

pub fn chi_surface(k: &KrausSet, grid: GridSpec, f: f64) -> Result<ChiSurface> {
    grid.validate()?;
    binary_orthogonal_ensemble(0.0, 0.0, f)?;
    let chi = (0..grid.n_theta * grid.n_phi)
        .into_par_iter()
        .map(|idx| chi_at(k, grid.theta(idx / grid.n_phi), grid.phi(idx % grid.n_phi), f))
        .collect();
    Ok(ChiSurface { grid, f, chi })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityConfig {
    pub grid: GridSpec,
    pub refine_rounds: u32,
    pub shrink: f64,
    pub f: f64,
    /// When set, f is swept over this many evenly spaced values in [0, 1]
    /// instead of being held at `f`.
    pub f_sweep: Option<usize>,
    pub keep_surface: bool,
}

impl Default for CapacityConfig {
    fn default() -> Self {
        Self {
            grid: GridSpec::default(),
            refine_rounds: 3,
            shrink: 10.0,
            f: 0.5,
            f_sweep: None,
            keep_surface: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Argmax {
    pub theta0: f64,
    pub phi0: f64,
    pub f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    pub kind: String,
    pub c: f64,
    pub argmax: Argmax,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<ChiSurface>,
}

/// Grid search followed by coordinate refinement.
///
/// Each refinement round scans θ₀ then φ₀ over ±h around the incumbent in
/// steps of h/shrink, starting from h = one grid cell and shrinking h by
/// `shrink` per round.
pub fn classical_capacity(k: &KrausSet, cfg: &CapacityConfig) -> Result<CapacityResult> {
    if !(cfg.shrink > 1.0) {
        return Err(SgadError::InvalidParameter {
            name: "shrink",
            value: cfg.shrink,
            reason: "must exceed 1",
        });
    }
    let fs: Vec<f64> = match cfg.f_sweep {
        None => vec![cfg.f],
        Some(n) if n >= 2 => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
        Some(n) => {
            return Err(SgadError::InvalidParameter {
                name: "f_sweep",
                value: n as f64,
                reason: "need at least 2 values",
            })
        }
    };
    let mut best: Option<CapacityResult> = None;
    for f in fs {
        let candidate = optimize_at(k, cfg, f)?;
        if best.as_ref().is_none_or(|b| candidate.c > b.c + TIE_TOL) {
            best = Some(candidate);
        }
    }
    Ok(best.expect("at least one f value"))
}

fn optimize_at(k: &KrausSet, cfg: &CapacityConfig, f: f64) -> Result<CapacityResult> {
    let surface = chi_surface(k, cfg.grid, f)?;
    let (i, j, mut c) = surface.argmax();
    let mut theta = cfg.grid.theta(i);
    let mut phi = cfg.grid.phi(j);
    let mut h_theta = cfg.grid.theta_step();
    let mut h_phi = cfg.grid.phi_step();
    let per_side = cfg.shrink.round().max(1.0) as i64;
    for _ in 0..cfg.refine_rounds {
        (theta, c) = scan(theta, h_theta, per_side, (0.0, PI), c, |x| chi_at(k, x, phi, f));
        (phi, c) = scan(phi, h_phi, per_side, (0.0, 2.0 * PI), c, |y| chi_at(k, theta, y, f));
        h_theta /= cfg.shrink;
        h_phi /= cfg.shrink;
    }
    Ok(CapacityResult {
        kind: CAPACITY_KIND.to_string(),
        c,
        argmax: Argmax { theta0: theta, phi0: phi, f },
        surface: cfg.keep_surface.then_some(surface),
    })
}

/// 1-D scan of `x0 ± h` at spacing h/per_side, clipped to `bounds`. The
/// incumbent is kept unless beaten by more than the tie tolerance; among
/// improvements the smallest coordinate wins ties.
fn scan(
    x0: f64,
    h: f64,
    per_side: i64,
    bounds: (f64, f64),
    c0: f64,
    eval: impl Fn(f64) -> f64 + Sync,
) -> (f64, f64) {
    let step = h / per_side as f64;
    let xs: Vec<f64> = (-per_side..=per_side)
        .map(|s| x0 + s as f64 * step)
        .filter(|x| (bounds.0..=bounds.1).contains(x))
        .collect();
    let values: Vec<f64> = xs.par_iter().map(|&x| eval(x)).collect();
    let mut best = (x0, c0);
    let mut improved: Option<(f64, f64)> = None;
    for (&x, &v) in xs.iter().zip(&values) {
        if v > c0 + TIE_TOL && improved.is_none_or(|(_, bv)| v > bv + TIE_TOL) {
            improved = Some((x, v));
        }
    }
    if let Some(b) = improved {
        best = b;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::BathSpec;
    use crate::channels::{ad_kraus, gad_kraus, gad_params, synthesize_channel, ChannelLabel};
    use crate::qubit::{binary_entropy, ComplexMatrix2};
    use num_complex::Complex64;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn ensemble_examples() {
        let e = binary_orthogonal_ensemble(0.0, 0.0, 0.5).unwrap();
        assert_eq!(e.members()[0].0, 0.5);
        assert!((*e.members()[0].1.matrix() - ComplexMatrix2::diag(1.0, 0.0)).max_abs() <= 1e-15);
        assert!((*e.members()[1].1.matrix() - ComplexMatrix2::diag(0.0, 1.0)).max_abs() <= 1e-15);

        // (|1⟩ ± |0⟩)/√2
        let e = binary_orthogonal_ensemble(FRAC_PI_2, 0.0, 0.5).unwrap();
        assert!((e.members()[0].1.coherence().re - 0.5).abs() <= 1e-15);
        assert!((e.members()[1].1.coherence().re + 0.5).abs() <= 1e-15);

        for &(th, ph) in &[(0.3, 1.0), (2.0, 5.0), (FRAC_PI_2, 0.0)] {
            let e = binary_orthogonal_ensemble(th, ph, 0.2).unwrap();
            let overlap = (*e.members()[0].1.matrix() * *e.members()[1].1.matrix()).trace();
            assert!(overlap.norm() <= 1e-12);
        }
        assert!(binary_orthogonal_ensemble(0.0, 0.0, 1.5).is_err());
        assert!(Ensemble::new(vec![(0.7, DensityMatrix::maximally_mixed())]).is_err());
    }

    #[test]
    fn chi_examples() {
        let e = binary_orthogonal_ensemble(0.4, 0.2, 0.5).unwrap();
        assert!((holevo_chi(&e, &KrausSet::identity()) - 1.0).abs() <= 1e-12);

        let single = Ensemble::new(vec![(1.0, pure_state(1.0, 1.0).unwrap())]).unwrap();
        let k = gad_kraus(0.4, 0.7).unwrap();
        assert!(holevo_chi(&single, &k).abs() <= 1e-15);

        // AD on {|1⟩, |0⟩}: outputs diag(1−λ, λ) and |0⟩⟨0|.
        let e = binary_orthogonal_ensemble(0.0, 0.0, 0.5).unwrap();
        let lambda = 0.3;
        let chi = holevo_chi(&e, &ad_kraus(lambda).unwrap());
        let expect = binary_entropy((1.0 - lambda) / 2.0) - 0.5 * binary_entropy(lambda);
        assert!((chi - expect).abs() <= 1e-14);
    }

    #[test]
    fn chi_is_label_invariant() {
        let k = synthesize_channel(&BathSpec::new(2.0, 1.0, 0.5, 0.05), 3.0).unwrap();
        let a = pure_state(1.0, 0.3).unwrap();
        let b = pure_state(2.5, 4.0).unwrap();
        let e1 = Ensemble::new(vec![(0.3, a), (0.7, b)]).unwrap();
        let e2 = Ensemble::new(vec![(0.7, b), (0.3, a)]).unwrap();
        assert!((holevo_chi(&e1, &k) - holevo_chi(&e2, &k)).abs() <= 1e-14);
    }

    #[test]
    fn identity_surface_is_flat() {
        let grid = GridSpec { n_theta: 7, n_phi: 9 };
        let s = chi_surface(&KrausSet::identity(), grid, 0.5).unwrap();
        assert!(s.chi.iter().all(|&c| (c - 1.0).abs() <= 1e-12));
        let r = classical_capacity(&KrausSet::identity(), &CapacityConfig::default()).unwrap();
        assert!((r.c - 1.0).abs() <= 1e-12);
        assert_eq!((r.argmax.theta0, r.argmax.phi0), (0.0, 0.0));
        assert_eq!(r.kind, CAPACITY_KIND);
    }

    #[test]
    fn constant_channel_has_no_capacity() {
        let r = classical_capacity(&ad_kraus(1.0).unwrap(), &CapacityConfig::default()).unwrap();
        assert!(r.c.abs() <= 1e-12);
    }

    #[test]
    fn unsqueezed_surface_ignores_phi() {
        let bath = BathSpec::new(5.0, 0.0, 0.0, 0.05);
        let (l, p) = gad_params(&bath, 5.0).unwrap();
        let s = chi_surface(&gad_kraus(l, p).unwrap(), GridSpec { n_theta: 13, n_phi: 25 }, 0.5)
            .unwrap();
        for i in 0..13 {
            for j in 0..25 {
                assert!((s.at(i, j) - s.at(i, 0)).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let g = GridSpec::default();
        assert_eq!(g.theta(30), FRAC_PI_2);
        assert_eq!(g.phi(60), PI);
        assert_eq!(g.theta(60), PI);
        assert_eq!(g.phi(120), 2.0 * PI);
    }

    #[test]
    fn squeezed_optimum_on_equator() {
        let k = synthesize_channel(&BathSpec::new(5.0, 1.0, 0.0, 0.05), 5.0).unwrap();
        let r = classical_capacity(&k, &CapacityConfig::default()).unwrap();
        assert!((r.argmax.theta0 - FRAC_PI_2).abs() <= 0.01, "{:?}", r.argmax);
        assert!(r.c > 0.0 && r.c <= 1.0);
    }

    #[test]
    fn free_precession_does_not_change_capacity() {
        let t = 4.0;
        let k = synthesize_channel(&BathSpec::new(3.0, 0.5, 0.0, 0.05), t).unwrap();
        let u = ComplexMatrix2::new([
            [Complex64::from_polar(1.0, -t / 2.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, t / 2.0)],
        ]);
        let rotated =
            KrausSet::new(ChannelLabel::Sgad, k.operators.iter().map(|e| u * *e).collect());
        let cfg =
            CapacityConfig { grid: GridSpec { n_theta: 31, n_phi: 61 }, ..Default::default() };
        let a = classical_capacity(&k, &cfg).unwrap();
        let b = classical_capacity(&rotated, &cfg).unwrap();
        assert!((a.c - b.c).abs() <= 1e-12);
    }

    #[test]
    fn swapping_weights_keeps_capacity() {
        let k = synthesize_channel(&BathSpec::new(1.0, 1.0, 0.3, 0.05), 2.0).unwrap();
        for &(th, ph) in &[(0.4, 0.3), (FRAC_PI_2, 1.0)] {
            let a = holevo_chi(&binary_orthogonal_ensemble(th, ph, 0.5).unwrap(), &k);
            let b = holevo_chi(&binary_orthogonal_ensemble(th + PI, ph, 0.5).unwrap(), &k);
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn f_sweep_never_loses() {
        let k = synthesize_channel(&BathSpec::new(5.0, 0.0, 0.0, 0.05), 8.0).unwrap();
        let grid = GridSpec { n_theta: 13, n_phi: 5 };
        let fixed = classical_capacity(&k, &CapacityConfig { grid, ..Default::default() }).unwrap();
        let swept = classical_capacity(
            &k,
            &CapacityConfig { grid, f_sweep: Some(11), ..Default::default() },
        )
        .unwrap();
        assert!(swept.c >= fixed.c - 1e-12);
    }
}
