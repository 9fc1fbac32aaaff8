//! Composite hypotheses H₀: δ ≤ 0 vs H₁: δ > 0. Error rates are averaged
//! over the effect prior, giving bivariate-normal probabilities in the
//! standardized (effect, estimate) pair; closed-form optimal decision
//! criteria exist for both the frequentist and the credible-bound rule, and
//! the same joint law yields the probability of success and its
//! decomposition by clinical relevance.

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, check_unit_open, Error, Result};
use crate::numerics::{bvn_cdf, cdf_raw, quantile_raw, BvnArgs};
use crate::report::{OptimumResult, Regime};
use crate::simple_bayes::{bayes_threshold_raw, EffectPrior};
use crate::simple_freq::DesignParams;

/// A design paired with a proper effect prior centred on the design effect.
/// Caches the derived standardized quantities used by every operation.
/// Serialized as its (design, prior) pair; deserialization re-runs the
/// constructor so the caches can never disagree with the inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ContextInputs", into = "ContextInputs")]
pub struct CompositeContext {
    design: DesignParams,
    prior: EffectPrior,
    f0: f64,
    z0: f64,
    z1: f64,
    rho: f64,
}

#[derive(Serialize, Deserialize)]
struct ContextInputs {
    design: DesignParams,
    prior: EffectPrior,
}

impl TryFrom<ContextInputs> for CompositeContext {
    type Error = Error;

    fn try_from(inputs: ContextInputs) -> Result<Self> {
        CompositeContext::new(inputs.design, inputs.prior)
    }
}

impl From<CompositeContext> for ContextInputs {
    fn from(ctx: CompositeContext) -> Self {
        ContextInputs {
            design: ctx.design,
            prior: ctx.prior,
        }
    }
}

impl CompositeContext {
    pub fn new(design: DesignParams, prior: EffectPrior) -> Result<Self> {
        crate::simple_bayes::check_design(&design)?;
        prior.check()?;
        check_positive("n0", prior.n0)?;
        let scale = design.delta0.abs().max(1.0);
        if (design.delta0 - prior.delta0).abs() > 1e-12 * scale {
            return Err(Error::domain(format!(
                "the effect prior must be centred on the design effect: \
                 design delta0 = {}, prior delta0 = {}",
                design.delta0, prior.delta0
            )));
        }
        let f0 = prior.f0(design.n1);
        Ok(CompositeContext {
            design,
            prior,
            f0,
            z0: prior.z0(design.sigma),
            z1: design.noncentrality(),
            rho: -(1.0 - f0).sqrt(),
        })
    }

    pub fn design(&self) -> &DesignParams {
        &self.design
    }

    pub fn prior(&self) -> &EffectPrior {
        &self.prior
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn z1(&self) -> f64 {
        self.z1
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Standardized frequentist success boundary on the estimate axis,
    /// √f₀·(Z₁₋α − Z₁).
    pub(crate) fn boundary_freq(&self, alpha: f64) -> f64 {
        self.f0.sqrt() * (quantile_raw(1.0 - alpha) - self.z1)
    }

    /// Standardized credible-bound success boundary on the estimate axis,
    /// √(f₀/(1−f₀))·(Z₁₋α − √(1/(1−f₀))·Z₁).
    pub(crate) fn boundary_bayes(&self, alpha: f64) -> f64 {
        let shrink = 1.0 / (1.0 - self.f0);
        (self.f0 * shrink).sqrt() * (quantile_raw(1.0 - alpha) - shrink.sqrt() * self.z1)
    }

    pub(crate) fn threshold_freq(&self, alpha: f64) -> f64 {
        self.design.frequentist_threshold(alpha)
    }

    pub(crate) fn threshold_bayes(&self, alpha: f64) -> f64 {
        bayes_threshold_raw(&self.design, &self.prior, alpha)
    }
}

fn b(h: f64, k: f64, rho: f64) -> f64 {
    bvn_cdf(BvnArgs::new(h, k, rho).expect("correlation derived from 0 < f0 < 1"))
}

/// Prior probability of a positive effect, Φ(Z₀).
pub fn prior_prob_effective(ctx: &CompositeContext) -> f64 {
    cdf_raw(ctx.z0)
}

/// Average type I error of the frequentist rule:
/// B(−Z₀, −√f₀(Z₁₋α − Z₁), −√(1−f₀)).
pub fn ave_t1e_freq(ctx: &CompositeContext, alpha: f64) -> Result<f64> {
    check_unit_open("alpha", alpha)?;
    Ok(b(-ctx.z0, -ctx.boundary_freq(alpha), ctx.rho))
}

/// Average type II error of the frequentist rule:
/// B(Z₀, √f₀(Z₁₋α − Z₁), −√(1−f₀)).
pub fn ave_t2e_freq(ctx: &CompositeContext, alpha: f64) -> Result<f64> {
    check_unit_open("alpha", alpha)?;
    Ok(b(ctx.z0, ctx.boundary_freq(alpha), ctx.rho))
}

/// Average type I error of the credible-bound rule.
pub fn ave_t1e_bayes(ctx: &CompositeContext, alpha: f64) -> Result<f64> {
    check_unit_open("alpha", alpha)?;
    Ok(b(-ctx.z0, -ctx.boundary_bayes(alpha), ctx.rho))
}

/// Average type II error of the credible-bound rule.
pub fn ave_t2e_bayes(ctx: &CompositeContext, alpha: f64) -> Result<f64> {
    check_unit_open("alpha", alpha)?;
    Ok(b(ctx.z0, ctx.boundary_bayes(alpha), ctx.rho))
}

/// Cost-weighted average error rate of the frequentist rule.
pub fn psi_composite_freq(ctx: &CompositeContext, alpha: f64, omega: f64) -> Result<f64> {
    check_positive("omega", omega)?;
    Ok((omega * ave_t1e_freq(ctx, alpha)? + ave_t2e_freq(ctx, alpha)?) / (omega + 1.0))
}

/// Cost-weighted average error rate of the credible-bound rule.
pub fn psi_composite_bayes(ctx: &CompositeContext, alpha: f64, omega: f64) -> Result<f64> {
    check_positive("omega", omega)?;
    Ok((omega * ave_t1e_bayes(ctx, alpha)? + ave_t2e_bayes(ctx, alpha)?) / (omega + 1.0))
}

/// The α minimizing the frequentist weighted average error rate:
/// α = 1 − Φ((Φ⁻¹(1/(ω+1))·√(1−ρ²) + Z₀)/(ρ√f₀) + Z₁).
pub fn optimal_composite_freq(ctx: &CompositeContext, omega: f64) -> Result<OptimumResult> {
    check_positive("omega", omega)?;
    let q = quantile_raw(1.0 / (omega + 1.0));
    let z_one_minus_alpha =
        (q * (1.0 - ctx.rho * ctx.rho).sqrt() + ctx.z0) / (ctx.rho * ctx.f0.sqrt()) + ctx.z1;
    finish_optimum(ctx, z_one_minus_alpha, omega, Regime::CompositeFreq)
}

/// The α minimizing the credible-bound weighted average error rate:
/// α = 1 − Φ((Φ⁻¹(1/(ω+1))·√(1−ρ²) + Z₀)/(ρ√(f₀/(1−f₀))) + √(1/(1−f₀))·Z₁),
/// which collapses algebraically to 1/(ω+1).
pub fn optimal_composite_bayes(ctx: &CompositeContext, omega: f64) -> Result<OptimumResult> {
    check_positive("omega", omega)?;
    let q = quantile_raw(1.0 / (omega + 1.0));
    let shrink = 1.0 / (1.0 - ctx.f0);
    let z_one_minus_alpha = (q * (1.0 - ctx.rho * ctx.rho).sqrt() + ctx.z0)
        / (ctx.rho * (ctx.f0 * shrink).sqrt())
        + shrink.sqrt() * ctx.z1;
    finish_optimum(ctx, z_one_minus_alpha, omega, Regime::CompositeBayes)
}

fn finish_optimum(
    ctx: &CompositeContext,
    z_one_minus_alpha: f64,
    omega: f64,
    regime: Regime,
) -> Result<OptimumResult> {
    let alpha = cdf_raw(-z_one_minus_alpha);
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Infeasible(format!(
            "optimal alpha degenerates to {alpha} at Z(1-alpha) = {z_one_minus_alpha}; \
             the prior leaves no interior optimum at omega = {omega}"
        )));
    }
    let (t1e, t2e) = match regime {
        Regime::CompositeFreq => (ave_t1e_freq(ctx, alpha)?, ave_t2e_freq(ctx, alpha)?),
        _ => (ave_t1e_bayes(ctx, alpha)?, ave_t2e_bayes(ctx, alpha)?),
    };
    Ok(OptimumResult {
        regime,
        alpha,
        t1e,
        t2e,
        psi: (omega * t1e + t2e) / (omega + 1.0),
        omega,
    })
}

/// Probability of success of the frequentist rule: the prior-predictive
/// probability the estimate clears the threshold, Φ(√f₀·(Z₁ − Z₁₋α)).
pub fn pos(ctx: &CompositeContext, alpha: f64) -> Result<f64> {
    check_unit_open("alpha", alpha)?;
    Ok(cdf_raw(-ctx.boundary_freq(alpha)))
}

/// Probability of success of the credible-bound rule.
pub fn pos_bayes(ctx: &CompositeContext, alpha: f64) -> Result<f64> {
    check_unit_open("alpha", alpha)?;
    Ok(cdf_raw(-ctx.boundary_bayes(alpha)))
}

/// The probability of success split by where the true effect lies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PosDecomposition {
    /// Success with δ > δ_MCID (term A).
    pub relevant: f64,
    /// Success with 0 < δ < δ_MCID (term B).
    pub marginal: f64,
    /// Success with δ ≤ 0 (term C, the average type I error).
    pub null_region: f64,
}

impl PosDecomposition {
    pub fn total(&self) -> f64 {
        self.relevant + self.marginal + self.null_region
    }
}

/// Splits the frequentist PoS into success beyond the minimal clinically
/// important difference, success below it, and success under the null.
pub fn pos_decomposition(
    ctx: &CompositeContext,
    alpha: f64,
    delta_mcid: f64,
) -> Result<PosDecomposition> {
    check_unit_open("alpha", alpha)?;
    if !(delta_mcid.is_finite() && delta_mcid >= 0.0) {
        return Err(Error::domain(format!(
            "delta_mcid must be finite and >= 0, got {delta_mcid}"
        )));
    }
    let c = ctx.boundary_freq(alpha);
    // MCID standardized on the prior scale of the true effect.
    let prior_sd = (2.0 * ctx.design.sigma * ctx.design.sigma / ctx.prior.n0).sqrt();
    let m = (delta_mcid - ctx.prior.delta0) / prior_sd;
    let r = -ctx.rho; // positive correlation of (effect, estimate)
    let relevant = b(-m, -c, r);
    let null_region = b(-ctx.z0, -c, -r);
    let marginal = b(m, -c, -r) - null_region;
    Ok(PosDecomposition {
        relevant,
        marginal,
        null_region,
    })
}
