//! Optimal decision criteria for two-arm normal-outcome trials under a
//! cost-weighted trade-off between type I and type II errors.
//!
//! Given a design, a cost ratio ω between the two error types, and optionally
//! prior information on the treatment effect or the control mean, the crate
//! computes the decision-criterion parameter α (with the resulting error
//! rates and their weighted sum Ψ) that minimizes expected error cost, under
//! four regimes: simple point hypotheses and composite directional
//! hypotheses, each with a frequentist or a credible-bound decision rule, and
//! additionally the historical-control setting with an informative prior on
//! the placebo mean.
//!
//! Closed forms are used wherever they exist; a deterministic Monte Carlo
//! oracle ([`mc_oracle`]) cross-checks every analytic error rate.
//!
//! ```
//! use errbalance_core::composite::{optimal_composite_freq, pos};
//! use errbalance_core::simple_freq::optimal_simple_freq;
//! use errbalance_core::{CompositeContext, DesignParams, EffectPrior};
//!
//! // 64 patients per arm, effect 4 at SD 8, and a type I error costing
//! // three times a type II error.
//! let design = DesignParams::new(64.0, 4.0, 8.0)?;
//! let simple = optimal_simple_freq(design.noncentrality(), 3.0)?;
//! assert!((simple.alpha - 0.0357).abs() < 5e-4);
//!
//! // Averaging over an effect prior worth 2 patients per arm moves the
//! // optimal criterion far from the 0.025 convention.
//! let ctx = CompositeContext::new(design, EffectPrior::new(4.0, 2.0)?)?;
//! let composite = optimal_composite_freq(&ctx, 3.0)?;
//! assert!((composite.alpha - 0.2754).abs() < 5e-4);
//! assert!((pos(&ctx, 0.025)? - 0.5601).abs() < 5e-4);
//! # Ok::<(), errbalance_core::Error>(())
//! ```

pub mod composite;
pub mod cost_models;
mod error;
pub mod historical_control;
pub mod mc_oracle;
pub mod numerics;
mod report;
pub mod simple_bayes;
pub mod simple_freq;

pub use error::{Error, Result};
pub use report::{ErrorReport, OptimumResult, Regime};

pub use composite::{CompositeContext, PosDecomposition};
pub use cost_models::{CostSpec, IsakovOptimum, IsakovSpec};
pub use historical_control::{DesignPrior, PlaceboPrior, TwoArmLayout};
pub use mc_oracle::{SimPlan, SimRegime, SimResult, SimSweepPoint};
pub use simple_bayes::EffectPrior;
pub use simple_freq::{DesignParams, PsiBoundSizing, SampleSize, TrialEffect};
