//! Borrowing historical control data: an informative normal prior on the
//! placebo mean with a flat prior on the treatment effect. The success
//! criterion shifts the usual two-sample comparison by the borrowed control
//! information; error probabilities are conditional on an assumed true
//! placebo mean, or unconditional under a design prior for it.

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, check_unit_open, Error, Result};
use crate::numerics::{cdf_raw, quantile_raw};
use crate::report::{OptimumResult, Regime};

/// Design prior on the true placebo mean, used to average the conditional
/// operating characteristics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignPrior {
    pub pi00: f64,
    pub n00: f64,
}

/// Historical information on the placebo mean: N(pi0, σ²/n0), plus the true
/// placebo mean at which conditional errors are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaceboPrior {
    pub pi0: f64,
    pub n0: f64,
    pub pi_true: f64,
    pub design_prior: Option<DesignPrior>,
}

impl PlaceboPrior {
    pub fn new(pi0: f64, n0: f64, pi_true: f64) -> Result<Self> {
        check_positive("n0", n0)?;
        if !pi0.is_finite() || !pi_true.is_finite() {
            return Err(Error::domain(format!(
                "placebo means must be finite, got pi0 = {pi0}, pi_true = {pi_true}"
            )));
        }
        Ok(PlaceboPrior {
            pi0,
            n0,
            pi_true,
            design_prior: None,
        })
    }

    pub fn with_design_prior(mut self, pi00: f64, n00: f64) -> Result<Self> {
        check_positive("n00", n00)?;
        if !pi00.is_finite() {
            return Err(Error::domain(format!("pi00 must be finite, got {pi00}")));
        }
        self.design_prior = Some(DesignPrior { pi00, n00 });
        Ok(self)
    }

    pub(crate) fn check(&self) -> Result<()> {
        let base = PlaceboPrior::new(self.pi0, self.n0, self.pi_true)?;
        if let Some(dp) = self.design_prior {
            base.with_design_prior(dp.pi00, dp.n00)?;
        }
        Ok(())
    }
}

/// Arm sizes, known SD, and the effect size at which the type II error is
/// evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoArmLayout {
    pub n_active: f64,
    pub n_placebo: f64,
    pub sigma: f64,
    pub delta: f64,
}

impl TwoArmLayout {
    pub fn new(n_active: f64, n_placebo: f64, sigma: f64, delta: f64) -> Result<Self> {
        if !(n_active.is_finite() && n_active >= 1.0)
            || !(n_placebo.is_finite() && n_placebo >= 1.0)
        {
            return Err(Error::domain(format!(
                "arm sizes must be >= 1, got n_active = {n_active}, n_placebo = {n_placebo}"
            )));
        }
        check_positive("sigma", sigma)?;
        if !delta.is_finite() {
            return Err(Error::domain(format!("delta must be finite, got {delta}")));
        }
        Ok(TwoArmLayout {
            n_active,
            n_placebo,
            sigma,
            delta,
        })
    }

    pub(crate) fn check(&self) -> Result<()> {
        TwoArmLayout::new(self.n_active, self.n_placebo, self.sigma, self.delta).map(|_| ())
    }
}

/// Standard deviations and drift of the borrowed-control test statistic
/// x̄_A − n_P·x̄_P/(n₀+n_P).
struct Scales {
    /// SD multiplier in the success threshold, σ√(1/n_A + 1/(n₀+n_P)).
    s_threshold: f64,
    /// Sampling SD of the statistic, σ√(1/n_A + n_P/(n₀+n_P)²).
    s_stat: f64,
    /// Mean shift from prior-truth disagreement, n₀(π₀−π)/(n₀+n_P).
    drift: f64,
}

fn scales(layout: &TwoArmLayout, prior: &PlaceboPrior, pi: f64) -> Scales {
    let pool = prior.n0 + layout.n_placebo;
    let s_threshold = layout.sigma * (1.0 / layout.n_active + 1.0 / pool).sqrt();
    let s_stat = layout.sigma * (1.0 / layout.n_active + layout.n_placebo / (pool * pool)).sqrt();
    let drift = prior.n0 * (prior.pi0 - pi) / pool;
    Scales {
        s_threshold,
        s_stat,
        drift,
    }
}

/// Standardized exceedance argument: P(statistic > threshold) = Φ(arg).
fn exceedance_arg(sc: &Scales, alpha: f64) -> f64 {
    -(sc.drift + quantile_raw(1.0 - alpha) * sc.s_threshold) / sc.s_stat
}

/// Success threshold on x̄_A − n_P·x̄_P/(n₀+n_P):
/// n₀π₀/(n₀+n_P) + z₁₋α·σ√(1/n_A + 1/(n₀+n_P)).
pub fn hc_threshold(layout: &TwoArmLayout, prior: &PlaceboPrior, alpha: f64) -> Result<f64> {
    layout.check()?;
    prior.check()?;
    check_unit_open("alpha", alpha)?;
    Ok(hc_threshold_raw(layout, prior, alpha))
}

pub(crate) fn hc_threshold_raw(layout: &TwoArmLayout, prior: &PlaceboPrior, alpha: f64) -> f64 {
    let pool = prior.n0 + layout.n_placebo;
    prior.n0 * prior.pi0 / pool
        + quantile_raw(1.0 - alpha) * layout.sigma * (1.0 / layout.n_active + 1.0 / pool).sqrt()
}

/// P(T1E) conditional on the assumed true placebo mean: the probability the
/// statistic exceeds the threshold when δ = 0.
pub fn hc_t1e(layout: &TwoArmLayout, prior: &PlaceboPrior, alpha: f64) -> Result<f64> {
    layout.check()?;
    prior.check()?;
    check_unit_open("alpha", alpha)?;
    let sc = scales(layout, prior, prior.pi_true);
    Ok(cdf_raw(exceedance_arg(&sc, alpha)))
}

/// P(T2E) conditional on the assumed true placebo mean: the probability the
/// statistic falls below the threshold when δ = `layout.delta`.
pub fn hc_t2e(layout: &TwoArmLayout, prior: &PlaceboPrior, alpha: f64) -> Result<f64> {
    layout.check()?;
    prior.check()?;
    check_unit_open("alpha", alpha)?;
    check_positive("delta", layout.delta)?;
    let sc = scales(layout, prior, prior.pi_true);
    let theta = layout.delta / sc.s_stat;
    Ok(1.0 - cdf_raw(exceedance_arg(&sc, alpha) + theta))
}

/// The α minimizing (ω·P(T1E) + P(T2E))/(ω+1) for the borrowed-control rule.
pub fn hc_optimal_alpha(
    layout: &TwoArmLayout,
    prior: &PlaceboPrior,
    omega: f64,
) -> Result<OptimumResult> {
    layout.check()?;
    prior.check()?;
    check_positive("omega", omega)?;
    check_positive("delta", layout.delta)?;
    let sc = scales(layout, prior, prior.pi_true);
    let theta = layout.delta / sc.s_stat;
    // The weighted sum has the simple-hypothesis shape in the exceedance
    // argument, so the interior optimum sets it to -ln(omega)/theta - theta/2.
    let m = -omega.ln() / theta - theta / 2.0;
    let z_one_minus_alpha = (-m * sc.s_stat - sc.drift) / sc.s_threshold;
    let alpha = cdf_raw(-z_one_minus_alpha);
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Infeasible(format!(
            "optimal alpha degenerates to {alpha} (drift {:.6}, theta {:.6}); \
             the drift term overwhelms the decision scale",
            sc.drift, theta
        )));
    }
    let t1e = hc_t1e(layout, prior, alpha)?;
    let t2e = hc_t2e(layout, prior, alpha)?;
    Ok(OptimumResult {
        regime: Regime::HistoricalControl,
        alpha,
        t1e,
        t2e,
        psi: (omega * t1e + t2e) / (omega + 1.0),
        omega,
    })
}

/// Unconditional error probabilities under the design prior for the placebo
/// mean: the conditional forms with π replaced by π₀₀ and the statistic SD
/// inflated by the design-prior variance of its mean.
pub fn hc_unconditional_errors(
    layout: &TwoArmLayout,
    prior: &PlaceboPrior,
    alpha: f64,
) -> Result<(f64, f64)> {
    layout.check()?;
    prior.check()?;
    check_unit_open("alpha", alpha)?;
    check_positive("delta", layout.delta)?;
    let dp = prior.design_prior.ok_or_else(|| {
        Error::Validation("hc_unconditional_errors requires a design prior (pi00, n00)".to_string())
    })?;
    let pool = prior.n0 + layout.n_placebo;
    let s_threshold = layout.sigma * (1.0 / layout.n_active + 1.0 / pool).sqrt();
    // Var of the statistic mean under the design prior: the coefficient of π
    // in the statistic mean is n0/(n0+nP).
    let var_inflation = (prior.n0 / pool).powi(2) / dp.n00;
    let s_marginal = layout.sigma
        * (1.0 / layout.n_active + layout.n_placebo / (pool * pool) + var_inflation).sqrt();
    let drift = prior.n0 * (prior.pi0 - dp.pi00) / pool;
    let arg = -(drift + quantile_raw(1.0 - alpha) * s_threshold) / s_marginal;
    let theta = layout.delta / s_marginal;
    Ok((cdf_raw(arg), 1.0 - cdf_raw(arg + theta)))
}
