//! Monte Carlo simulation of two-arm normal trials under every decision rule
//! in the package. Replicates are keyed by (seed, replicate, slot) through a
//! counter-based generator, so results are bit-identical regardless of
//! parallelism, and sweeps over the decision criterion reuse the same draws
//! (common random numbers), which makes the empirical type I error rate an
//! exactly nondecreasing function of α.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::composite::CompositeContext;
use crate::error::{Error, Result};
use crate::historical_control::{hc_threshold_raw, PlaceboPrior, TwoArmLayout};
use crate::numerics::quantile_raw;
use crate::simple_bayes::{bayes_threshold_raw, EffectPrior};
use crate::simple_freq::DesignParams;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
/// Draw slots reserved per replicate, fixed across regimes so the same seed
/// produces aligned streams everywhere.
const DRAW_SLOTS: u64 = 4;
const REPS_PER_CHUNK: u64 = 1 << 14;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The `index`-th uniform of the stream keyed by `seed`, strictly inside
/// (0, 1). Pure function of its arguments: random access, no state.
#[inline]
fn uniform01(seed: u64, index: u64) -> f64 {
    let state = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    ((mix64(state) >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

/// Standard normal variate by inverse-CDF transform, keeping the coupling
/// across thresholds exact.
#[inline]
fn normal01(seed: u64, index: u64) -> f64 {
    quantile_raw(uniform01(seed, index))
}

/// Which decision rule to simulate, with its full parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SimRegime {
    SimpleFreq {
        design: DesignParams,
    },
    SimpleBayes {
        design: DesignParams,
        prior: EffectPrior,
    },
    HistoricalControl {
        layout: TwoArmLayout,
        prior: PlaceboPrior,
        /// Draw the true placebo mean from the design prior each replicate
        /// instead of holding it at `pi_true`.
        use_design_prior: bool,
    },
    CompositeFreq {
        ctx: CompositeContext,
    },
    CompositeBayes {
        ctx: CompositeContext,
    },
}

/// A fully specified simulation: regime, decision criterion, replicate count
/// and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimPlan {
    pub regime: SimRegime,
    pub alpha: f64,
    pub replications: u64,
    pub seed: u64,
}

impl SimPlan {
    pub fn validate(&self) -> Result<()> {
        let mut offending: Vec<String> = Vec::new();
        if self.replications == 0 {
            offending.push("replications: must be >= 1".to_string());
        }
        if self.alpha.is_nan() || self.alpha <= 0.0 || self.alpha >= 1.0 {
            offending.push(format!("alpha: must lie in (0, 1), got {}", self.alpha));
        }
        match &self.regime {
            SimRegime::SimpleFreq { design } => {
                if let Err(e) = crate::simple_bayes::check_design(design) {
                    offending.push(format!("design: {e}"));
                }
            }
            SimRegime::SimpleBayes { design, prior } => {
                if let Err(e) = crate::simple_bayes::check_design(design) {
                    offending.push(format!("design: {e}"));
                }
                if let Err(e) = prior.check() {
                    offending.push(format!("prior: {e}"));
                }
            }
            SimRegime::HistoricalControl {
                layout,
                prior,
                use_design_prior,
            } => {
                if let Err(e) = layout.check() {
                    offending.push(format!("layout: {e}"));
                }
                if let Err(e) = prior.check() {
                    offending.push(format!("prior: {e}"));
                }
                if layout.delta.is_nan() || layout.delta <= 0.0 {
                    offending.push(format!(
                        "layout.delta: must be > 0 to evaluate the type II error, got {}",
                        layout.delta
                    ));
                }
                if *use_design_prior && prior.design_prior.is_none() {
                    offending
                        .push("prior.design_prior: required when use_design_prior".to_string());
                }
            }
            // Context invariants are enforced at construction.
            SimRegime::CompositeFreq { .. } | SimRegime::CompositeBayes { .. } => {}
        }
        if offending.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(format!(
                "invalid simulation plan: {}",
                offending.join("; ")
            )))
        }
    }

    fn threshold(&self, alpha: f64) -> f64 {
        match &self.regime {
            SimRegime::SimpleFreq { design } => design.frequentist_threshold(alpha),
            SimRegime::SimpleBayes { design, prior } => bayes_threshold_raw(design, prior, alpha),
            SimRegime::HistoricalControl { layout, prior, .. } => {
                hc_threshold_raw(layout, prior, alpha)
            }
            SimRegime::CompositeFreq { ctx } => ctx.threshold_freq(alpha),
            SimRegime::CompositeBayes { ctx } => ctx.threshold_bayes(alpha),
        }
    }
}

/// Empirical error rates with their binomial standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub empirical_t1e: f64,
    pub se_t1e: f64,
    pub empirical_t2e: f64,
    pub se_t2e: f64,
    /// Empirical success probability; present for composite regimes, where
    /// the replicate draws the effect from its prior.
    pub empirical_pos: Option<f64>,
    pub replications: u64,
    pub seed: u64,
}

/// One point of an α sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimSweepPoint {
    pub alpha: f64,
    pub result: SimResult,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    t1e: u64,
    t2e: u64,
    success: u64,
}

impl Tally {
    fn merge(a: Vec<Tally>, b: Vec<Tally>) -> Vec<Tally> {
        a.into_iter()
            .zip(b)
            .map(|(x, y)| Tally {
                t1e: x.t1e + y.t1e,
                t2e: x.t2e + y.t2e,
                success: x.success + y.success,
            })
            .collect()
    }
}

/// Runs the plan and reports empirical rates. Deterministic for a given
/// (seed, replications, regime, parameters), independent of thread count.
pub fn simulate(plan: &SimPlan) -> Result<SimResult> {
    plan.validate()?;
    let tally = run(plan, &[plan.alpha])?.pop().expect("one threshold");
    Ok(result_from(plan, tally))
}

/// Evaluates the plan at every α in `alpha_grid` with common random numbers:
/// the draws are shared and only the threshold moves.
pub fn sweep_simulate(plan: &SimPlan, alpha_grid: &[f64]) -> Result<Vec<SimSweepPoint>> {
    plan.validate()?;
    if alpha_grid.is_empty() {
        return Err(Error::Validation("alpha grid must be nonempty".to_string()));
    }
    for &alpha in alpha_grid {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Validation(format!(
                "grid alpha must lie in (0, 1), got {alpha}"
            )));
        }
    }
    let tallies = run(plan, alpha_grid)?;
    Ok(alpha_grid
        .iter()
        .zip(tallies)
        .map(|(&alpha, tally)| SimSweepPoint {
            alpha,
            result: result_from(plan, tally),
        })
        .collect())
}

fn result_from(plan: &SimPlan, tally: Tally) -> SimResult {
    let r = plan.replications as f64;
    let rate = |count: u64| count as f64 / r;
    let se = |p: f64| (p * (1.0 - p) / r).sqrt();
    let (t1e, t2e) = (rate(tally.t1e), rate(tally.t2e));
    let pos = match plan.regime {
        SimRegime::CompositeFreq { .. } | SimRegime::CompositeBayes { .. } => {
            Some(rate(tally.success))
        }
        _ => None,
    };
    SimResult {
        empirical_t1e: t1e,
        se_t1e: se(t1e),
        empirical_t2e: t2e,
        se_t2e: se(t2e),
        empirical_pos: pos,
        replications: plan.replications,
        seed: plan.seed,
    }
}

fn run(plan: &SimPlan, alphas: &[f64]) -> Result<Vec<Tally>> {
    let thresholds: Vec<f64> = alphas.iter().map(|&a| plan.threshold(a)).collect();
    let chunks = plan.replications.div_ceil(REPS_PER_CHUNK);
    let tallies = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * REPS_PER_CHUNK;
            let end = (start + REPS_PER_CHUNK).min(plan.replications);
            tally_chunk(plan, &thresholds, start..end)
        })
        .reduce(|| vec![Tally::default(); thresholds.len()], Tally::merge);
    Ok(tallies)
}

fn tally_chunk(plan: &SimPlan, thresholds: &[f64], reps: std::ops::Range<u64>) -> Vec<Tally> {
    let mut acc = vec![Tally::default(); thresholds.len()];
    let seed = plan.seed;
    match &plan.regime {
        SimRegime::SimpleFreq { design } | SimRegime::SimpleBayes { design, .. } => {
            // The null and alternative statistics share the replicate's
            // noise draw; only the mean shifts.
            let sd = design.estimate_sd();
            let shift = design.delta0;
            for rep in reps {
                let noise = sd * normal01(seed, rep * DRAW_SLOTS);
                score_two_hypotheses(&mut acc, thresholds, noise, noise + shift);
            }
        }
        SimRegime::HistoricalControl {
            layout,
            prior,
            use_design_prior,
        } => {
            let pool = prior.n0 + layout.n_placebo;
            let placebo_weight = layout.n_placebo / pool;
            let sd_placebo = layout.sigma / layout.n_placebo.sqrt();
            let sd_active = layout.sigma / layout.n_active.sqrt();
            for rep in reps {
                let base = rep * DRAW_SLOTS;
                let pi = if *use_design_prior {
                    let dp = prior.design_prior.expect("validated");
                    dp.pi00 + normal01(seed, base) * layout.sigma / dp.n00.sqrt()
                } else {
                    prior.pi_true
                };
                let placebo_mean = pi + normal01(seed, base + 1) * sd_placebo;
                let active_mean = pi + normal01(seed, base + 2) * sd_active;
                let stat = active_mean - placebo_weight * placebo_mean;
                score_two_hypotheses(&mut acc, thresholds, stat, stat + layout.delta);
            }
        }
        SimRegime::CompositeFreq { ctx } | SimRegime::CompositeBayes { ctx } => {
            let design = ctx.design();
            let prior = ctx.prior();
            let prior_sd = (2.0 * design.sigma * design.sigma / prior.n0).sqrt();
            let estimate_sd = design.estimate_sd();
            for rep in reps {
                let base = rep * DRAW_SLOTS;
                let effect = prior.delta0 + prior_sd * normal01(seed, base);
                let estimate = effect + estimate_sd * normal01(seed, base + 1);
                for (tally, &t) in acc.iter_mut().zip(thresholds) {
                    let reject = estimate > t;
                    if reject {
                        tally.success += 1;
                        if effect <= 0.0 {
                            tally.t1e += 1;
                        }
                    } else if effect > 0.0 {
                        tally.t2e += 1;
                    }
                }
            }
        }
    }
    acc
}

#[inline]
fn score_two_hypotheses(acc: &mut [Tally], thresholds: &[f64], null_stat: f64, alt_stat: f64) {
    for (tally, &t) in acc.iter_mut().zip(thresholds) {
        if null_stat > t {
            tally.t1e += 1;
        }
        if alt_stat <= t {
            tally.t2e += 1;
        }
    }
}
