//! Squeezed generalized amplitude damping.
//!
//! The channel is the four-operator family
//!   E₀ = √p₁ diag(√(1−α), 1),        E₁ = √p₁ √α |0⟩⟨1|,
//!   E₂ = √p₂ diag(√(1−μ), √(1−ν)),   E₃ = √p₂ (√ν |1⟩⟨0| + √μ e^{−iθ} |0⟩⟨1|),
//! with θ = Φ. Its parameters are fixed by matching the channel output to the
//! analytic solution. Writing δ = γ₀(2N+1−a)t/2 and σ = γ₀(2N+1+a)t/2 for the
//! slow and fast relaxation exponents, the matching conditions are solved in
//! closed form:
//!
//!   p₂μ = (2N+1)S² / (N(1 − e^{−δ−σ})),   p₂ν = N(1 − e^{−δ−σ})/(2N+1),
//!   α = 1 − e^{−2σ}  (or 1 − e^{−2δ} on the second root),
//!   p₁α = 1 − p₂(μ+ν) − e^{−δ−σ},
//!
//! where S = (e^{−δ} − e^{−σ})/2. The quadratic for p₂ in the usual
//! (A, B, C, D) form has these two roots; evaluating it literally loses all
//! precision for small t (0/0) and overflows for large a·t, so the factored
//! form is used instead. For small t, p₁α is a near-total cancellation and is
//! evaluated from a positive series.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ad_kraus, ChannelLabel, KrausSet};
use crate::bath::{derive_bath, BathSpec, DecayFactors, DerivedBath};
use crate::error::{check_time, Result, SgadError};
use crate::qubit::ComplexMatrix2;

/// Bound on each of the five matching residuals.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Slack allowed on the [0, 1] ranges of probabilities and damping parameters.
const RANGE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SgadParams {
    pub p1: f64,
    pub p2: f64,
    pub alpha: f64,
    pub mu: f64,
    pub nu: f64,
    pub theta: f64,
}

impl SgadParams {
    pub fn validate(&self) -> Result<()> {
        let unit = |name: &'static str, v: f64| {
            if v.is_finite() && (-RANGE_TOL..=1.0 + RANGE_TOL).contains(&v) {
                Ok(())
            } else {
                Err(SgadError::InvalidParameter { name, value: v, reason: "must lie in [0, 1]" })
            }
        };
        unit("p1", self.p1)?;
        unit("p2", self.p2)?;
        unit("alpha", self.alpha)?;
        unit("mu", self.mu)?;
        unit("nu", self.nu)?;
        if !self.theta.is_finite() {
            return Err(SgadError::InvalidParameter {
                name: "theta",
                value: self.theta,
                reason: "must be finite",
            });
        }
        let sum = self.p1 + self.p2 - 1.0;
        if sum.abs() > RANGE_TOL {
            return Err(SgadError::InvalidParameter {
                name: "p1 + p2",
                value: self.p1 + self.p2,
                reason: "probabilities must sum to 1",
            });
        }
        Ok(())
    }
}

/// Which root of the p₂ quadratic a solution sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// α = 1 − e^{−2σ}; the root continuous with the unsqueezed limit.
    Plus,
    /// α = 1 − e^{−2δ}.
    Minus,
    /// t = 0: α = μ = ν = 0, p₁ by continuity.
    Limit,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
            Branch::Limit => "limit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SgadSolution {
    pub params: SgadParams,
    pub branch: Branch,
    pub residuals: [f64; 5],
    /// (1−α, 1−μ, 1−ν) evaluated without cancellation. Forming 1 − α from a
    /// stored α near 1 loses everything below one ulp, and the square roots
    /// in the Kraus operators amplify that to ~1e-8.
    pub complements: [f64; 3],
}

impl SgadSolution {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

pub fn sgad_params(bath: &BathSpec, t: f64) -> Result<SgadParams> {
    sgad_solve(bath, t).map(|s| s.params)
}

/// Parameters, chosen root and certification residuals at time t.
pub fn sgad_solve(bath: &BathSpec, t: f64) -> Result<SgadSolution> {
    check_time(t)?;
    let derived = derive_bath(bath)?;
    if derived.n_eff == 0.0 {
        return Err(SgadError::DegenerateBath);
    }
    let f = DecayFactors::new(bath, &derived, t)?;
    let alpha_plus = -(-2.0 * f.sigma).exp_m1();
    if t == 0.0 || !alpha_plus.is_normal() {
        let params = limit_params(bath, &derived);
        let residuals = residuals_from(&params, &f, bath.phase, derived.two_n_plus_one());
        let complements = naive_complements(&params);
        return Ok(SgadSolution { params, branch: Branch::Limit, residuals, complements });
    }

    let n = derived.n_eff;
    let n2 = derived.two_n_plus_one();
    let p = product_p1_alpha(bath, &derived, &f, t);
    let a = n2 * f.s * f.s / (n * f.d);
    let b = n * f.d / n2;

    let mut failures = Vec::new();
    for (branch, alpha, alpha_c, cross) in [
        (Branch::Plus, alpha_plus, (-2.0 * f.sigma).exp(), 2.0 * (-f.sigma).exp() * f.s),
        (
            Branch::Minus,
            -(-2.0 * f.delta).exp_m1(),
            (-2.0 * f.delta).exp(),
            -2.0 * (-f.delta).exp() * f.s,
        ),
    ] {
        if !alpha.is_normal() {
            failures.push(format!("{}: alpha underflows", branch.name()));
            continue;
        }
        let p2 = (a + b + cross) / alpha;
        let params =
            SgadParams { p1: p / alpha, p2, alpha, mu: a / p2, nu: b / p2, theta: bath.phase };
        // p₂ − A = (B + cross + (1−α)A)/α and p₂ − B = (A + cross + (1−α)B)/α;
        // on the "+" root every term is nonnegative.
        let complements = [
            alpha_c,
            (b + cross + alpha_c * a) / (alpha * p2),
            (a + cross + alpha_c * b) / (alpha * p2),
        ];
        let residuals = residuals_with(&params, complements, &f, bath.phase, n2);
        let solution = SgadSolution { params, branch, residuals, complements };
        match params.validate() {
            Ok(()) if solution.max_residual() <= RESIDUAL_TOL => return Ok(solution),
            Ok(()) => failures.push(format!(
                "{}: residual {:.3e}",
                branch.name(),
                solution.max_residual()
            )),
            Err(e) => failures.push(format!("{}: {e}", branch.name())),
        }
    }
    Err(SgadError::NoAdmissibleBranch { t, detail: failures.join("; ") })
}

/// Solves at each time and flags any change of root between consecutive
/// points. The t = 0 limit is compatible with either root.
pub fn sgad_sweep(bath: &BathSpec, times: &[f64]) -> Vec<Result<SgadSolution>> {
    let mut out: Vec<Result<SgadSolution>> =
        times.par_iter().map(|&t| sgad_solve(bath, t)).collect();
    let mut prev: Option<Branch> = None;
    for (slot, &t) in out.iter_mut().zip(times) {
        let Ok(sol) = slot else { continue };
        let branch = sol.branch;
        if branch == Branch::Limit {
            continue;
        }
        if let Some(p) = prev {
            if p != branch {
                *slot = Err(SgadError::BranchFlip { t, from: p.name(), to: branch.name() });
            }
        }
        prev = Some(branch);
    }
    out
}

/// The five matching residuals for (bath, t) at β = φ = 0.
pub fn sgad_residuals(params: &SgadParams, bath: &BathSpec, t: f64) -> Result<[f64; 5]> {
    let derived = derive_bath(bath)?;
    let f = DecayFactors::new(bath, &derived, t)?;
    Ok(residuals_from(params, &f, bath.phase, derived.two_n_plus_one()))
}

fn naive_complements(p: &SgadParams) -> [f64; 3] {
    [1.0 - p.alpha, 1.0 - p.mu, 1.0 - p.nu]
}

fn residuals_from(p: &SgadParams, f: &DecayFactors, phase: f64, n2: f64) -> [f64; 5] {
    residuals_with(p, naive_complements(p), f, phase, n2)
}

fn residuals_with(
    p: &SgadParams,
    [alpha_c, mu_c, nu_c]: [f64; 3],
    f: &DecayFactors,
    phase: f64,
    n2: f64,
) -> [f64; 5] {
    let (sin_phi, cos_phi) = phase.sin_cos();
    let (sin_t, cos_t) = p.theta.sin_cos();
    let cross = p.p2 * (p.mu * p.nu).max(0.0).sqrt();
    [
        p.p1 * alpha_c.max(0.0).sqrt() + p.p2 * (mu_c * nu_c).max(0.0).sqrt() - f.k,
        cross * cos_t - cos_phi * f.s,
        cross * sin_t - sin_phi * f.s,
        p.p1 * p.alpha + p.p2 * (p.mu - p.nu) - f.d / n2,
        1.0 - p.p1 * p.alpha - p.p2 * (p.mu + p.nu) - f.e,
    ]
}

/// t → 0⁺ limit: α, μ, ν vanish while p₁ tends to N_th(N_th+1)/(N(2N_th+1)e^{2r}).
fn limit_params(bath: &BathSpec, d: &DerivedBath) -> SgadParams {
    let k = 2.0 * d.n_th + 1.0;
    let p1 = d.n_th * (d.n_th + 1.0) / (d.n_eff * k * (2.0 * bath.squeezing).exp());
    SgadParams { p1, p2: 1.0 - p1, alpha: 0.0, mu: 0.0, nu: 0.0, theta: bath.phase }
}

/// p₁α = 1 − p₂(μ+ν) − e^{−δ−σ}, free of cancellation.
///
/// Large t: [N(N+1)(1−e^{−2δ})(1−e^{−2σ}) − S²] / (N(2N+1)(1−e^{−δ−σ})).
/// Small t (τ cosh 2r < 1, τ = γ₀(2N_th+1)t/2): the numerator is rewritten as
/// e^{−δ−σ}[W + 4N_th(N_th+1) cosh²2r sinh δ sinh σ], where every term of W is
/// nonnegative.
fn product_p1_alpha(bath: &BathSpec, d: &DerivedBath, f: &DecayFactors, t: f64) -> f64 {
    let n = d.n_eff;
    let n2 = d.two_n_plus_one();
    let r2 = 2.0 * bath.squeezing;
    let (c, sh) = (r2.cosh(), r2.sinh());
    let tau = 0.5 * bath.gamma0 * (2.0 * d.n_th + 1.0) * t;
    if tau * c < 1.0 {
        let w = series_w(tau, c, sh);
        let thermal = 4.0 * d.n_th * (d.n_th + 1.0) * c * c * f.delta.sinh() * f.sigma.sinh();
        f.e * (w + thermal) / (n * n2 * f.d)
    } else {
        let a = -(-2.0 * f.delta).exp_m1();
        let b = -(-2.0 * f.sigma).exp_m1();
        (n * (n + 1.0) * a * b - f.s * f.s) / (n * n2 * f.d)
    }
}

/// W = F₁F₂ with F₂ = sinh2r·sinh(τc) + c·sinh(τ sinh2r) and
/// F₁ = τ c sinh2r Σ_{n≥1} τ^{2n} D_n/(2n+1)!, D₁ = 1, D_n = c²D_{n−1} + sinh^{2(n−1)}2r.
fn series_w(tau: f64, c: f64, sh: f64) -> f64 {
    if sh == 0.0 {
        return 0.0;
    }
    let tau2 = tau * tau;
    let mut power = tau2;
    let mut dn = 1.0;
    let mut sh_pow = 1.0;
    let mut fact = 6.0;
    let mut sum = 0.0;
    for n in 1..200 {
        if n > 1 {
            sh_pow *= sh * sh;
            dn = c * c * dn + sh_pow;
            let m = n as f64;
            fact *= (2.0 * m) * (2.0 * m + 1.0);
            power *= tau2;
        }
        let term = power * dn / fact;
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    let f1 = tau * c * sh * sum;
    let f2 = sh * (tau * c).sinh() + c * (tau * sh).sinh();
    f1 * f2
}

/// Kraus operators in the order (E₀, E₁, E₂, E₃).
pub fn sgad_kraus(params: &SgadParams) -> Result<KrausSet> {
    kraus_with(params, naive_complements(params))
}

/// As [`sgad_kraus`], taking 1−α, 1−μ, 1−ν from a solution.
pub fn sgad_kraus_from(solution: &SgadSolution) -> Result<KrausSet> {
    kraus_with(&solution.params, solution.complements)
}

fn kraus_with(params: &SgadParams, complements: [f64; 3]) -> Result<KrausSet> {
    params.validate()?;
    let unit = |v: f64| v.clamp(0.0, 1.0);
    let (p1, p2) = (unit(params.p1), unit(params.p2));
    let (alpha, mu, nu) = (unit(params.alpha), unit(params.mu), unit(params.nu));
    let [alpha_c, mu_c, nu_c] = complements.map(unit);
    let s1 = p1.sqrt();
    let s2 = p2.sqrt();
    let zero = Complex64::new(0.0, 0.0);
    let e0 = ComplexMatrix2::diag(s1 * alpha_c.sqrt(), s1);
    let e1 = ComplexMatrix2::from_real([[0.0, 0.0], [s1 * alpha.sqrt(), 0.0]]);
    let e2 = ComplexMatrix2::diag(s2 * mu_c.sqrt(), s2 * nu_c.sqrt());
    let e3 = ComplexMatrix2::new([
        [zero, Complex64::from(s2 * nu.sqrt())],
        [Complex64::from_polar(s2 * mu.sqrt(), -params.theta), zero],
    ]);
    Ok(KrausSet::new(ChannelLabel::Sgad, vec![e0, e1, e2, e3]))
}

/// The channel generated by `bath` over time t: SGAD in general, plain AD
/// when N = 0 (zero temperature and no squeezing).
pub fn synthesize_channel(bath: &BathSpec, t: f64) -> Result<KrausSet> {
    check_time(t)?;
    let derived = derive_bath(bath)?;
    let set = if derived.n_eff == 0.0 {
        ad_kraus(-(-bath.gamma0 * t).exp_m1())?
    } else {
        sgad_kraus_from(&sgad_solve(bath, t)?)?
    };
    Ok(set.with_source(*bath, t))
}
