use num_complex::Complex64;

use super::{ChannelLabel, KrausSet};
use crate::bath::{derive_bath, BathSpec};
use crate::error::{check_time, Result, SgadError};
use crate::qubit::ComplexMatrix2;

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(SgadError::InvalidParameter { name, value, reason: "must lie in [0, 1]" })
    }
}

/// E₀ = diag(√(1−λ), 1), E₁ = √λ |0⟩⟨1|.
pub fn ad_kraus(lambda: f64) -> Result<KrausSet> {
    check_unit("lambda", lambda)?;
    Ok(KrausSet::new(ChannelLabel::Ad, ad_operators(lambda).to_vec()))
}

fn ad_operators(lambda: f64) -> [ComplexMatrix2; 2] {
    [
        ComplexMatrix2::diag((1.0 - lambda).sqrt(), 1.0),
        ComplexMatrix2::from_real([[0.0, 0.0], [lambda.sqrt(), 0.0]]),
    ]
}

/// λ = 1 − e^{−γ₀(2N_th+1)t} and p = (N_th+1)/(2N_th+1) for an unsqueezed bath.
pub fn gad_params(bath: &BathSpec, t: f64) -> Result<(f64, f64)> {
    check_time(t)?;
    if bath.squeezing != 0.0 {
        return Err(SgadError::InvalidParameter {
            name: "r",
            value: bath.squeezing,
            reason: "generalized amplitude damping needs r = 0",
        });
    }
    let d = derive_bath(bath)?;
    let k = 2.0 * d.n_th + 1.0;
    let lambda = -(-bath.gamma0 * k * t).exp_m1();
    Ok((lambda, (d.n_th + 1.0) / k))
}

/// √p·(AD operators), then E₂ = √(1−p) diag(1, √(1−λ)), E₃ = √(1−p)√λ |1⟩⟨0|.
///
/// The fixed point is diag(1−p, p) in the (|1⟩, |0⟩) ordering.
pub fn gad_kraus(lambda: f64, p: f64) -> Result<KrausSet> {
    check_unit("lambda", lambda)?;
    check_unit("p", p)?;
    let [e0, e1] = ad_operators(lambda);
    let sp = Complex64::from(p.sqrt());
    let sq = (1.0 - p).sqrt();
    let e2 = ComplexMatrix2::diag(sq, sq * (1.0 - lambda).sqrt());
    let e3 = ComplexMatrix2::from_real([[0.0, sq * lambda.sqrt()], [0.0, 0.0]]);
    Ok(KrausSet::new(ChannelLabel::Gad, vec![e0 * sp, e1 * sp, e2, e3]))
}
