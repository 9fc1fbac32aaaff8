//! Cost formulations that reduce the choice of error rates to a single cost
//! ratio ω, plus the joint (α, n) expected-cost minimization that separates
//! post-trial error costs from in-trial enrollment and delay costs.

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, check_unit_open, Error, Result};
use crate::simple_freq::{optimal_simple_freq, TrialEffect};

/// Per-error costs and the prior probability the drug is effective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostSpec {
    /// Cost of a type I error (arbitrary cost units).
    pub cost_t1e: f64,
    /// Cost of a type II error.
    pub cost_t2e: f64,
    /// Prior probability the drug is effective.
    pub p_effective: f64,
}

impl CostSpec {
    pub fn new(cost_t1e: f64, cost_t2e: f64, p_effective: f64) -> Result<Self> {
        check_positive("cost_t1e", cost_t1e)?;
        check_positive("cost_t2e", cost_t2e)?;
        check_unit_open("p_effective", p_effective)?;
        Ok(CostSpec {
            cost_t1e,
            cost_t2e,
            p_effective,
        })
    }
}

/// Population-scaled cost model with in-trial enrollment and delay terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsakovSpec {
    /// Per-person cost of a type I error.
    pub cost_t1e: f64,
    /// Per-person cost of a type II error.
    pub cost_t2e: f64,
    /// Size of the target population.
    pub population: f64,
    /// Delay cost per enrolled patient, as a fraction of the population
    /// type II cost.
    pub delay_fraction: f64,
    /// Minimum acceptable power 1 − β at the chosen design.
    pub power_floor: f64,
}

impl IsakovSpec {
    pub fn new(
        cost_t1e: f64,
        cost_t2e: f64,
        population: f64,
        delay_fraction: f64,
        power_floor: f64,
    ) -> Result<Self> {
        check_positive("cost_t1e", cost_t1e)?;
        check_positive("cost_t2e", cost_t2e)?;
        check_positive("population", population)?;
        if !(delay_fraction.is_finite() && delay_fraction >= 0.0) {
            return Err(Error::domain(format!(
                "delay_fraction must be finite and >= 0, got {delay_fraction}"
            )));
        }
        if !(power_floor.is_finite() && (0.0..1.0).contains(&power_floor)) {
            return Err(Error::domain(format!(
                "power_floor must lie in [0, 1), got {power_floor}"
            )));
        }
        Ok(IsakovSpec {
            cost_t1e,
            cost_t2e,
            population,
            delay_fraction,
            power_floor,
        })
    }

    /// Folds unequal hypothesis priors (p0, p1) into the per-person costs;
    /// with p0 = p1 = 1/2 the costs are unchanged up to overall scale, which
    /// the optimization is invariant to.
    pub fn fold_hypothesis_priors(mut self, p0: f64, p1: f64) -> Result<Self> {
        check_unit_open("p0", p0)?;
        check_unit_open("p1", p1)?;
        if (p0 + p1 - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "hypothesis priors must sum to 1, got p0 + p1 = {}",
                p0 + p1
            )));
        }
        self.cost_t1e *= 2.0 * p0;
        self.cost_t2e *= 2.0 * p1;
        Ok(self)
    }

    pub(crate) fn check(&self) -> Result<()> {
        IsakovSpec::new(
            self.cost_t1e,
            self.cost_t2e,
            self.population,
            self.delay_fraction,
            self.power_floor,
        )
        .map(|_| ())
    }
}

/// ω from explicit per-error weights: ω = ω₁/ω₂.
pub fn omega_from_weights(w1: f64, w2: f64) -> Result<f64> {
    check_positive("w1", w1)?;
    check_positive("w2", w2)?;
    Ok(w1 / w2)
}

/// ω from costs and the effectiveness prior:
/// ω = C_I·(1 − P(E)) / (C_II·P(E)).
pub fn omega_from_costspec(spec: &CostSpec) -> Result<f64> {
    CostSpec::new(spec.cost_t1e, spec.cost_t2e, spec.p_effective)?;
    Ok(spec.cost_t1e * (1.0 - spec.p_effective) / (spec.cost_t2e * spec.p_effective))
}

/// Expected total cost at significance level α and per-arm size n:
/// c₁Nα + c₂Nβ + c₁n + c₂nγN, with β implied by (α, θ(n)).
pub fn isakov_total_cost(
    spec: &IsakovSpec,
    effect: &TrialEffect,
    alpha: f64,
    n: f64,
) -> Result<f64> {
    spec.check()?;
    check_unit_open("alpha", alpha)?;
    check_positive("n", n)?;
    let theta = effect.design(n)?.noncentrality();
    let beta = crate::simple_freq::beta_from_alpha(alpha, theta)?;
    Ok(spec.cost_t1e * spec.population * alpha
        + spec.cost_t2e * spec.population * beta
        + spec.cost_t1e * n
        + spec.cost_t2e * n * spec.delay_fraction * spec.population)
}

/// Joint optimum over the decision criterion and the sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsakovOptimum {
    pub alpha: f64,
    pub n: u32,
    pub cost: f64,
    /// Power 1 − β attained at the optimum.
    pub power: f64,
}

/// Minimizes expected total cost over n in `n_range`, with the inner α at
/// each n taken as the closed-form optimum at cost ratio ω = c₁/c₂. Only
/// sizes whose optimal power reaches `power_floor` are eligible; cost ties
/// break toward the smaller trial.
pub fn isakov_optimize(
    spec: &IsakovSpec,
    effect: &TrialEffect,
    n_range: std::ops::RangeInclusive<u32>,
) -> Result<IsakovOptimum> {
    spec.check()?;
    if n_range.is_empty() {
        return Err(Error::domain("n_range must be nonempty".to_string()));
    }
    if *n_range.start() == 0 {
        return Err(Error::domain("per-arm sizes must be >= 1".to_string()));
    }
    let omega = spec.cost_t1e / spec.cost_t2e;
    let mut best: Option<IsakovOptimum> = None;
    for n in n_range {
        let theta = effect.design(n as f64)?.noncentrality();
        let inner = optimal_simple_freq(theta, omega)?;
        let power = 1.0 - inner.t2e;
        if power < spec.power_floor {
            continue;
        }
        let cost = isakov_total_cost(spec, effect, inner.alpha, n as f64)?;
        if best.is_none_or(|b| cost < b.cost) {
            best = Some(IsakovOptimum {
                alpha: inner.alpha,
                n,
                cost,
                power,
            });
        }
    }
    best.ok_or_else(|| {
        Error::Infeasible(format!(
            "no per-arm size reaches power {} at its optimal criterion",
            spec.power_floor
        ))
    })
}
