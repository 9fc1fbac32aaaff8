//! Frequentist machinery for simple point null and alternative hypotheses:
//! sample sizing, the noncentrality parameter, the cost-weighted error sum Ψ,
//! its closed-form minimizer, sizing to a Ψ bound, and the generic
//! density-ratio criterion for non-normal test statistics.

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, check_unit_open, Error, Result};
use crate::numerics::{cdf_raw, quantile_raw, solve_root, Bracket};
use crate::report::{OptimumResult, Regime};

/// Effect size and known standard deviation, the design template before a
/// per-arm sample size has been chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialEffect {
    /// Treatment effect to detect (outcome units).
    pub delta0: f64,
    /// Known outcome standard deviation.
    pub sigma: f64,
}

impl TrialEffect {
    pub fn new(delta0: f64, sigma: f64) -> Result<Self> {
        check_positive("delta0", delta0)?;
        check_positive("sigma", sigma)?;
        Ok(TrialEffect { delta0, sigma })
    }

    /// Completes the template with a per-arm sample size.
    pub fn design(&self, n1: f64) -> Result<DesignParams> {
        DesignParams::new(n1, self.delta0, self.sigma)
    }
}

/// A two-arm design: per-arm sample size (fractional before rounding),
/// effect size, and known standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignParams {
    pub n1: f64,
    pub delta0: f64,
    pub sigma: f64,
}

impl DesignParams {
    pub fn new(n1: f64, delta0: f64, sigma: f64) -> Result<Self> {
        check_positive("n1", n1)?;
        check_positive("delta0", delta0)?;
        check_positive("sigma", sigma)?;
        Ok(DesignParams { n1, delta0, sigma })
    }

    /// Noncentrality θ = √(n₁/2)·δ₀/σ.
    pub fn noncentrality(&self) -> f64 {
        (self.n1 / 2.0).sqrt() * self.delta0 / self.sigma
    }

    /// Standard deviation of the effect estimate, √(2σ²/n₁).
    pub(crate) fn estimate_sd(&self) -> f64 {
        (2.0 * self.sigma * self.sigma / self.n1).sqrt()
    }

    /// Frequentist success threshold on the effect estimate,
    /// √(2σ²/n₁)·Z₁₋α.
    pub(crate) fn frequentist_threshold(&self, alpha: f64) -> f64 {
        self.estimate_sd() * quantile_raw(1.0 - alpha)
    }
}

/// A per-arm sample size, before and after rounding up to a whole patient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSize {
    pub fractional: f64,
    pub rounded: u64,
}

pub(crate) fn ceil_count(x: f64) -> u64 {
    // Guard against 63.000000000000007-style noise pushing the count up.
    (x - 1e-9).ceil().max(1.0) as u64
}

/// Per-arm sample size for significance level `alpha` and type II error
/// `beta`: n₁ = 2σ²(Z₁₋α + Z₁₋β)²/δ₀².
pub fn sample_size(delta0: f64, sigma: f64, alpha: f64, beta: f64) -> Result<SampleSize> {
    check_positive("delta0", delta0)?;
    check_positive("sigma", sigma)?;
    check_unit_open("alpha", alpha)?;
    check_unit_open("beta", beta)?;
    let z_sum = quantile_raw(1.0 - alpha) + quantile_raw(1.0 - beta);
    let fractional = 2.0 * sigma * sigma * z_sum * z_sum / (delta0 * delta0);
    Ok(SampleSize {
        fractional,
        rounded: ceil_count(fractional),
    })
}

/// Type II error at significance level `alpha`: β = 1 − Φ(θ + Z_α).
pub fn beta_from_alpha(alpha: f64, theta: f64) -> Result<f64> {
    check_unit_open("alpha", alpha)?;
    check_positive("theta", theta)?;
    Ok(1.0 - cdf_raw(theta + quantile_raw(alpha)))
}

/// Cost-weighted sum of errors Ψ = (ωα + 1 − Φ(θ + Z_α))/(ω + 1).
pub fn psi(alpha: f64, theta: f64, omega: f64) -> Result<f64> {
    check_unit_open("alpha", alpha)?;
    check_positive("theta", theta)?;
    check_positive("omega", omega)?;
    Ok((omega * alpha + 1.0 - cdf_raw(theta + quantile_raw(alpha))) / (omega + 1.0))
}

/// Minimum of Ψ over α at noncentrality θ, in closed form.
pub(crate) fn minimal_psi(theta: f64, omega: f64) -> f64 {
    let log_omega = omega.ln();
    let alpha = cdf_raw(-log_omega / theta - theta / 2.0);
    let beta = cdf_raw(log_omega / theta - theta / 2.0);
    (omega * alpha + beta) / (omega + 1.0)
}

/// The (α, β) pair minimizing Ψ: α = Φ(−ln(ω)/θ − θ/2),
/// β = 1 − Φ(−ln(ω)/θ + θ/2).
pub fn optimal_simple_freq(theta: f64, omega: f64) -> Result<OptimumResult> {
    if theta == 0.0 {
        return Err(Error::domain(
            "theta = 0 makes the optimal criterion singular (ln(omega)/theta)".to_string(),
        ));
    }
    check_positive("theta", theta)?;
    check_positive("omega", omega)?;
    let z_alpha = -omega.ln() / theta - theta / 2.0;
    let alpha = cdf_raw(z_alpha);
    let beta = 1.0 - cdf_raw(z_alpha + theta);
    Ok(OptimumResult {
        regime: Regime::SimpleFreq,
        alpha,
        t1e: alpha,
        t2e: beta,
        psi: (omega * alpha + beta) / (omega + 1.0),
        omega,
    })
}

/// Sizing that controls the minimum weighted error sum to `psi0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiBoundSizing {
    /// θ*² solving minimal Ψ(θ) = psi0.
    pub theta_sq: f64,
    pub n1_fractional: f64,
    pub n1: u64,
    /// Optimal α re-derived at the rounded sample size.
    pub alpha: f64,
    /// Optimal β re-derived at the rounded sample size.
    pub beta: f64,
    /// Weighted error sum attained at the rounded sample size.
    pub psi: f64,
}

/// Smallest design whose optimal weighted error sum does not exceed `psi0`,
/// searching θ² over the default interval [1e-4, 100].
pub fn size_for_psi_bound(
    psi0: f64,
    omega: f64,
    delta0: f64,
    sigma: f64,
) -> Result<PsiBoundSizing> {
    size_for_psi_bound_in(psi0, omega, delta0, sigma, 1e-4, 100.0)
}

/// As [`size_for_psi_bound`] with a caller-chosen θ² search interval.
pub fn size_for_psi_bound_in(
    psi0: f64,
    omega: f64,
    delta0: f64,
    sigma: f64,
    theta_sq_lo: f64,
    theta_sq_hi: f64,
) -> Result<PsiBoundSizing> {
    check_unit_open("psi0", psi0)?;
    check_positive("omega", omega)?;
    check_positive("delta0", delta0)?;
    check_positive("sigma", sigma)?;
    check_positive("theta_sq_lo", theta_sq_lo)?;
    if theta_sq_hi <= theta_sq_lo || !theta_sq_hi.is_finite() {
        return Err(Error::domain(format!(
            "theta-squared interval must satisfy 0 < lo < hi, got [{theta_sq_lo}, {theta_sq_hi}]"
        )));
    }
    let objective = |theta_sq: f64| minimal_psi(theta_sq.sqrt(), omega) - psi0;
    let bracket = Bracket::evaluate(objective, theta_sq_lo, theta_sq_hi).map_err(|_| {
        Error::Bracket(format!(
            "psi0 = {psi0} is not attained for theta^2 in [{theta_sq_lo}, {theta_sq_hi}]"
        ))
    })?;
    let theta_sq = solve_root(objective, bracket, 1e-12, 200)?;
    let n1_fractional = 2.0 * sigma * sigma * theta_sq / (delta0 * delta0);
    let n1 = ceil_count(n1_fractional);
    let design = DesignParams::new(n1 as f64, delta0, sigma)?;
    let at_rounded = optimal_simple_freq(design.noncentrality(), omega)?;
    Ok(PsiBoundSizing {
        theta_sq,
        n1_fractional,
        n1,
        alpha: at_rounded.alpha,
        beta: at_rounded.t2e,
        psi: at_rounded.psi,
    })
}

/// Critical value t with g_alt(t)/g_null(t) = ω, for any pair of positive
/// noncentral densities with a ratio crossing ω inside [lo, hi].
pub fn optimal_critical_generic<N, A>(
    omega: f64,
    density_null: N,
    density_alt: A,
    lo: f64,
    hi: f64,
) -> Result<f64>
where
    N: Fn(f64) -> f64,
    A: Fn(f64) -> f64,
{
    check_positive("omega", omega)?;
    let ratio = |t: f64| density_alt(t) / density_null(t) - omega;
    let bracket = Bracket::evaluate(ratio, lo, hi).map_err(|_| {
        Error::Bracket(format!(
            "density ratio does not cross omega = {omega} on [{lo}, {hi}]"
        ))
    })?;
    solve_root(ratio, bracket, 1e-13, 200)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{norm_cdf, norm_pdf, norm_quantile};

    #[test]
    fn sample_size_reproduces_worked_design() {
        let n = sample_size(4.0, 8.0, 0.025, 0.20).unwrap();
        assert!((n.fractional - 62.8).abs() < 0.05, "{}", n.fractional);
        assert_eq!(n.rounded, 63);
    }

    #[test]
    fn sample_size_is_scale_invariant() {
        let base = sample_size(4.0, 8.0, 0.025, 0.20).unwrap();
        for k in [0.5, 2.0, 17.3] {
            let scaled = sample_size(4.0 * k, 8.0 * k, 0.025, 0.20).unwrap();
            assert!((scaled.fractional - base.fractional).abs() < 1e-9);
        }
    }

    #[test]
    fn sample_size_at_psi_optimal_rates() {
        let n = sample_size(4.0, 8.0, 0.0279, 0.1133).unwrap();
        assert_eq!(n.rounded, 78);
    }

    #[test]
    fn sample_size_rejects_bad_inputs() {
        assert!(sample_size(0.0, 8.0, 0.025, 0.2).is_err());
        assert!(sample_size(4.0, 8.0, 1.0, 0.2).is_err());
        assert!(sample_size(4.0, -8.0, 0.025, 0.2).is_err());
    }

    #[test]
    fn noncentrality_values() {
        let d = DesignParams::new(64.0, 4.0, 8.0).unwrap();
        assert!((d.noncentrality() - 2.8284).abs() < 5e-5);
        let unit = DesignParams::new(2.0, 3.7, 3.7).unwrap();
        assert!((unit.noncentrality() - 1.0).abs() < 1e-15);
        let sized = DesignParams::new(78.0, 4.0, 8.0).unwrap();
        assert!((sized.noncentrality() - (39.0f64).sqrt() * 0.5).abs() < 1e-12);
        assert!((sized.noncentrality() - 3.1225).abs() < 5e-5);
    }

    #[test]
    fn beta_from_alpha_values() {
        let theta = 2.8284;
        // Z_0.5 = 0 reduces to 1 - Φ(θ).
        let b = beta_from_alpha(0.5, theta).unwrap();
        assert!((b - (1.0 - norm_cdf(theta).unwrap())).abs() < 1e-15);
        // Oracle: 1 - Φ(θ + Z_α) evaluated through the quantile directly.
        let expected = 1.0 - norm_cdf(theta + norm_quantile(0.025).unwrap()).unwrap();
        assert!((beta_from_alpha(0.025, theta).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.1925).abs() < 1e-4);
        assert!((beta_from_alpha(0.0357, theta).unwrap() - 0.1525).abs() < 1e-4);
    }

    #[test]
    fn psi_values() {
        assert!((psi(0.0357, 2.8284, 3.0).unwrap() - 0.0649).abs() < 5e-5);
        // Equal costs average the two error rates.
        let alpha = 0.04;
        let beta = beta_from_alpha(alpha, 2.8284).unwrap();
        assert!((psi(alpha, 2.8284, 1.0).unwrap() - (alpha + beta) / 2.0).abs() < 1e-15);
        // Composition of the published pieces at the conventional 0.025.
        let beta_025 = beta_from_alpha(0.025, 2.8284).unwrap();
        let expected = (3.0 * 0.025 + beta_025) / 4.0;
        assert!((psi(0.025, 2.8284, 3.0).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.0669).abs() < 5e-5);
    }

    #[test]
    fn optimum_matches_worked_example() {
        let opt = optimal_simple_freq(2.8284, 3.0).unwrap();
        assert!((opt.alpha - 0.0357).abs() < 5e-5);
        assert!((opt.t2e - 0.1525).abs() < 5e-5);
        assert!((opt.psi - 0.0649).abs() < 5e-5);
    }

    #[test]
    fn equal_costs_give_equal_probability_test() {
        for theta in [0.5, 1.7, 2.8284, 4.0] {
            let opt = optimal_simple_freq(theta, 1.0).unwrap();
            let expected = norm_cdf(-theta / 2.0).unwrap();
            assert!((opt.alpha - expected).abs() < 1e-15);
            assert!((opt.t2e - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn optimum_beats_dense_alpha_grid() {
        let opt = optimal_simple_freq(2.8284, 3.0).unwrap();
        let mut alpha = 1e-4;
        while alpha < 1.0 {
            assert!(opt.psi <= psi(alpha, 2.8284, 3.0).unwrap() + 1e-12);
            alpha += 1e-4;
        }
        for extreme in [1e-6, 1.0 - 1e-6] {
            assert!(opt.psi <= psi(extreme, 2.8284, 3.0).unwrap() + 1e-12);
        }
    }

    #[test]
    fn theta_zero_is_rejected() {
        assert!(optimal_simple_freq(0.0, 3.0).is_err());
    }

    #[test]
    fn psi_bound_sizing_reproduces_worked_example() {
        let sizing = size_for_psi_bound(0.05, 3.0, 4.0, 8.0).unwrap();
        assert!(
            (sizing.theta_sq - 9.6487).abs() < 1e-3,
            "{}",
            sizing.theta_sq
        );
        assert!((sizing.n1_fractional - 77.2).abs() < 0.05);
        assert_eq!(sizing.n1, 78);
        assert!((sizing.alpha - 0.0279).abs() < 5e-5);
        assert!((sizing.beta - 0.1133).abs() < 5e-5);
    }

    #[test]
    fn psi_bound_round_trips_through_the_optimum() {
        let sizing = size_for_psi_bound(0.05, 3.0, 4.0, 8.0).unwrap();
        let back = optimal_simple_freq(sizing.theta_sq.sqrt(), 3.0).unwrap();
        assert!((back.psi - 0.05).abs() < 1e-6);
    }

    #[test]
    fn psi_bound_outside_bracket_is_bracket_error() {
        assert!(matches!(
            size_for_psi_bound_in(0.05, 3.0, 4.0, 8.0, 50.0, 100.0),
            Err(Error::Bracket(_))
        ));
    }

    #[test]
    fn generic_criterion_agrees_with_closed_form() {
        let theta = 2.8284;
        let omega = 3.0;
        let null = |t: f64| norm_pdf(t).unwrap();
        let alt = move |t: f64| norm_pdf(t - theta).unwrap();
        let t = optimal_critical_generic(omega, null, alt, 0.0, theta).unwrap();
        // -Z_alpha from the closed-form optimum.
        let closed = omega.ln() / theta + theta / 2.0;
        assert!((t - closed).abs() < 1e-9);
        assert!((t - 1.80263).abs() < 5e-5);
    }

    #[test]
    fn generic_criterion_equal_costs_hits_midpoint() {
        let theta = 1.9;
        let null = |t: f64| norm_pdf(t).unwrap();
        let alt = move |t: f64| norm_pdf(t - theta).unwrap();
        let t = optimal_critical_generic(1.0, null, alt, 0.0, theta).unwrap();
        assert!((t - theta / 2.0).abs() < 1e-9);
    }

    #[test]
    fn generic_criterion_root_is_unique_under_mlr() {
        // Monotone likelihood ratio: the shifted-normal ratio is strictly
        // increasing, so the grid sees exactly one sign change.
        let theta = 2.2;
        let omega = 2.5;
        let ratio = |t: f64| norm_pdf(t - theta).unwrap() / norm_pdf(t).unwrap() - omega;
        let mut crossings = 0;
        let mut prev = ratio(-6.0);
        let mut t = -6.0;
        while t < 8.0 {
            t += 0.01;
            let cur = ratio(t);
            if prev.signum() != cur.signum() {
                crossings += 1;
            }
            prev = cur;
        }
        assert_eq!(crossings, 1);
    }

    #[test]
    fn generic_criterion_without_crossing_is_bracket_error() {
        let null = |t: f64| norm_pdf(t).unwrap();
        let alt = |t: f64| norm_pdf(t - 1.0).unwrap();
        assert!(matches!(
            optimal_critical_generic(1.0e6, null, alt, 0.0, 1.0),
            Err(Error::Bracket(_))
        ));
    }
}
