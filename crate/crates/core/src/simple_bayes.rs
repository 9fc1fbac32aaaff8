//! Bayesian analysis with an informative normal prior on the treatment
//! effect. Success is declared when the lower 1−α posterior credible bound
//! for the effect excludes zero; the resulting error probabilities, the
//! optimal decision-criterion parameter, and the calibration that restores a
//! nominal frequentist type I error rate all live here.

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, check_unit_open, Result};
use crate::numerics::{cdf_raw, quantile_raw};
use crate::report::{OptimumResult, Regime};
use crate::simple_freq::DesignParams;

/// Normal prior on the treatment effect with mean `delta0` and variance
/// equivalent to `n0` patients per arm. `n0 = 0` is the flat prior, under
/// which every operation reduces to its frequentist counterpart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectPrior {
    pub delta0: f64,
    pub n0: f64,
}

impl EffectPrior {
    pub fn new(delta0: f64, n0: f64) -> Result<Self> {
        check_positive("delta0", delta0)?;
        if !(n0.is_finite() && n0 >= 0.0) {
            return Err(crate::error::Error::domain(format!(
                "n0 must be finite and >= 0, got {n0}"
            )));
        }
        Ok(EffectPrior { delta0, n0 })
    }

    /// Prior information fraction f₀ = n₀/(n₀ + n₁).
    pub fn f0(&self, n1: f64) -> f64 {
        self.n0 / (self.n0 + n1)
    }

    /// Standardized prior effect Z₀ = √(n₀/2)·δ₀/σ.
    pub fn z0(&self, sigma: f64) -> f64 {
        (self.n0 / 2.0).sqrt() * self.delta0 / sigma
    }

    pub(crate) fn check(&self) -> Result<()> {
        EffectPrior::new(self.delta0, self.n0).map(|_| ())
    }
}

pub(crate) fn check_design(design: &DesignParams) -> Result<()> {
    DesignParams::new(design.n1, design.delta0, design.sigma).map(|_| ())
}

/// The type I argument √(1/(1−f₀))·Z_α + √(f₀/(1−f₀))·Z₀ that standardizes
/// the credible-bound criterion under the null.
fn transformed_z_alpha(design: &DesignParams, prior: &EffectPrior, alpha: f64) -> f64 {
    let f0 = prior.f0(design.n1);
    (1.0 / (1.0 - f0)).sqrt() * quantile_raw(alpha)
        + (f0 / (1.0 - f0)).sqrt() * prior.z0(design.sigma)
}

/// Success threshold on the effect estimate implied by the credible-bound
/// criterion: δ̂ must exceed
/// −((n₁+n₀)/n₁)·Z_α·√(2σ²/(n₁+n₀)) − (n₀/n₁)·δ₀.
pub fn bayes_threshold(design: &DesignParams, prior: &EffectPrior, alpha: f64) -> Result<f64> {
    check_design(design)?;
    prior.check()?;
    check_unit_open("alpha", alpha)?;
    Ok(bayes_threshold_raw(design, prior, alpha))
}

pub(crate) fn bayes_threshold_raw(design: &DesignParams, prior: &EffectPrior, alpha: f64) -> f64 {
    let n1 = design.n1;
    let n0 = prior.n0;
    let total = n1 + n0;
    -(total / n1) * quantile_raw(alpha) * (2.0 * design.sigma * design.sigma / total).sqrt()
        - (n0 / n1) * prior.delta0
}

/// P(T1E) = Φ(√(1/(1−f₀))·Z_α + √(f₀/(1−f₀))·Z₀); equals α for a flat prior.
pub fn t1e_bayes(design: &DesignParams, prior: &EffectPrior, alpha: f64) -> Result<f64> {
    check_design(design)?;
    prior.check()?;
    check_unit_open("alpha", alpha)?;
    Ok(cdf_raw(transformed_z_alpha(design, prior, alpha)))
}

/// P(T2E) = 1 − Φ(√(1/(1−f₀))·Z_α + √(f₀/(1−f₀))·Z₀ + θ), the complement of
/// conditional Bayesian power.
pub fn t2e_bayes(design: &DesignParams, prior: &EffectPrior, alpha: f64) -> Result<f64> {
    check_design(design)?;
    prior.check()?;
    check_unit_open("alpha", alpha)?;
    Ok(1.0 - cdf_raw(transformed_z_alpha(design, prior, alpha) + design.noncentrality()))
}

/// Cost-weighted sum of the two Bayesian error probabilities.
pub fn psi_bayes(
    design: &DesignParams,
    prior: &EffectPrior,
    alpha: f64,
    omega: f64,
) -> Result<f64> {
    check_positive("omega", omega)?;
    let t1e = t1e_bayes(design, prior, alpha)?;
    let t2e = t2e_bayes(design, prior, alpha)?;
    Ok((omega * t1e + t2e) / (omega + 1.0))
}

/// The α minimizing the Bayesian weighted error sum:
/// α = Φ(√(1−f₀)·(−ln(ω)/θ − θ/2) − √f₀·Z₀). The attained Ψ equals the
/// frequentist minimum at the same θ.
pub fn optimal_simple_bayes(
    design: &DesignParams,
    prior: &EffectPrior,
    omega: f64,
) -> Result<OptimumResult> {
    check_design(design)?;
    prior.check()?;
    check_positive("omega", omega)?;
    let theta = design.noncentrality();
    if theta == 0.0 {
        return Err(crate::error::Error::domain(
            "theta = 0 makes the optimal criterion singular".to_string(),
        ));
    }
    let f0 = prior.f0(design.n1);
    let m = -omega.ln() / theta - theta / 2.0;
    let z_alpha = (1.0 - f0).sqrt() * m - f0.sqrt() * prior.z0(design.sigma);
    let alpha = cdf_raw(z_alpha);
    let t1e = t1e_bayes(design, prior, alpha)?;
    let t2e = t2e_bayes(design, prior, alpha)?;
    Ok(OptimumResult {
        regime: Regime::SimpleBayes,
        alpha,
        t1e,
        t2e,
        psi: (omega * t1e + t2e) / (omega + 1.0),
        omega,
    })
}

/// The α at which the Bayesian criterion attains frequentist type I error
/// ε/2: Z₁₋α = √(1−f₀)·Z₁₋ε/2 + √f₀·Z₀. At this α the success threshold
/// equals the frequentist one, fully discounting the prior.
pub fn calibrate_alpha(prior: &EffectPrior, design: &DesignParams, epsilon: f64) -> Result<f64> {
    check_design(design)?;
    prior.check()?;
    check_unit_open("epsilon", epsilon)?;
    let f0 = prior.f0(design.n1);
    let z_one_minus_alpha =
        (1.0 - f0).sqrt() * quantile_raw(1.0 - epsilon / 2.0) + f0.sqrt() * prior.z0(design.sigma);
    Ok(cdf_raw(-z_one_minus_alpha))
}
