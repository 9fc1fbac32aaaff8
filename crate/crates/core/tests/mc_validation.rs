//! Monte Carlo agreement checks: every analytic error probability is held to
//! a 3.29-standard-error band around its simulated counterpart (99.9%
//! coverage), with fixed seeds for reproducibility. Moment and decomposition
//! checks use an independent Box-Muller sampler rather than the package
//! generator.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use errbalance_core::composite::{
    ave_t1e_bayes, ave_t1e_freq, ave_t2e_bayes, ave_t2e_freq, pos, pos_decomposition,
};
use errbalance_core::historical_control::{hc_t1e, hc_t2e, hc_unconditional_errors};
use errbalance_core::mc_oracle::{simulate, sweep_simulate, SimPlan, SimRegime};
use errbalance_core::numerics::norm_quantile;
use errbalance_core::simple_bayes::{t1e_bayes, t2e_bayes};
use errbalance_core::simple_freq::psi;
use errbalance_core::{CompositeContext, DesignParams, EffectPrior, PlaceboPrior, TwoArmLayout};

const REPS: u64 = 1_000_000;

fn reference_design() -> DesignParams {
    DesignParams::new(64.0, 4.0, 8.0).unwrap()
}

fn reference_prior() -> EffectPrior {
    EffectPrior::new(4.0, 2.0).unwrap()
}

fn reference_ctx() -> CompositeContext {
    CompositeContext::new(reference_design(), reference_prior()).unwrap()
}

fn assert_band(label: &str, empirical: f64, se: f64, analytic: f64) {
    let slack = 3.29 * se;
    assert!(
        (empirical - analytic).abs() <= slack,
        "{label}: empirical {empirical} vs analytic {analytic} (band {slack})"
    );
}

#[test]
fn simple_bayes_error_rates_within_bands() {
    let design = reference_design();
    let prior = reference_prior();
    let alpha = 0.0313;
    let plan = SimPlan {
        regime: SimRegime::SimpleBayes { design, prior },
        alpha,
        replications: REPS,
        seed: 101,
    };
    let r = simulate(&plan).unwrap();
    assert_band(
        "simple-bayes T1E",
        r.empirical_t1e,
        r.se_t1e,
        t1e_bayes(&design, &prior, alpha).unwrap(),
    );
    assert_band(
        "simple-bayes T2E",
        r.empirical_t2e,
        r.se_t2e,
        t2e_bayes(&design, &prior, alpha).unwrap(),
    );
}

#[test]
fn historical_error_rates_within_bands() {
    let layout = TwoArmLayout::new(64.0, 64.0, 8.0, 4.0).unwrap();
    // Disagreeing history exercises the drift term.
    let prior = PlaceboPrior::new(5.5, 10.0, 5.0).unwrap();
    let alpha = 0.025;
    let plan = SimPlan {
        regime: SimRegime::HistoricalControl {
            layout,
            prior,
            use_design_prior: false,
        },
        alpha,
        replications: REPS,
        seed: 102,
    };
    let r = simulate(&plan).unwrap();
    assert_band(
        "historical T1E",
        r.empirical_t1e,
        r.se_t1e,
        hc_t1e(&layout, &prior, alpha).unwrap(),
    );
    assert_band(
        "historical T2E",
        r.empirical_t2e,
        r.se_t2e,
        hc_t2e(&layout, &prior, alpha).unwrap(),
    );
}

#[test]
fn historical_unconditional_errors_within_bands() {
    let layout = TwoArmLayout::new(64.0, 64.0, 8.0, 4.0).unwrap();
    let prior = PlaceboPrior::new(5.5, 10.0, 5.0)
        .unwrap()
        .with_design_prior(5.2, 25.0)
        .unwrap();
    let alpha = 0.05;
    let plan = SimPlan {
        regime: SimRegime::HistoricalControl {
            layout,
            prior,
            use_design_prior: true,
        },
        alpha,
        replications: REPS,
        seed: 103,
    };
    let r = simulate(&plan).unwrap();
    let (t1e, t2e) = hc_unconditional_errors(&layout, &prior, alpha).unwrap();
    assert_band(
        "historical unconditional T1E",
        r.empirical_t1e,
        r.se_t1e,
        t1e,
    );
    assert_band(
        "historical unconditional T2E",
        r.empirical_t2e,
        r.se_t2e,
        t2e,
    );
}

#[test]
fn composite_freq_rates_within_bands() {
    let ctx = reference_ctx();
    let alpha = 0.025;
    let plan = SimPlan {
        regime: SimRegime::CompositeFreq { ctx },
        alpha,
        replications: REPS,
        seed: 104,
    };
    let r = simulate(&plan).unwrap();
    assert_band(
        "composite-freq Ave(T1E)",
        r.empirical_t1e,
        r.se_t1e,
        ave_t1e_freq(&ctx, alpha).unwrap(),
    );
    assert_band(
        "composite-freq Ave(T2E)",
        r.empirical_t2e,
        r.se_t2e,
        ave_t2e_freq(&ctx, alpha).unwrap(),
    );
    let pos_hat = r.empirical_pos.unwrap();
    let pos_se = (pos_hat * (1.0 - pos_hat) / REPS as f64).sqrt();
    assert_band(
        "composite-freq PoS",
        pos_hat,
        pos_se,
        pos(&ctx, alpha).unwrap(),
    );
}

#[test]
fn composite_bayes_rates_within_bands() {
    let ctx = reference_ctx();
    let alpha = 0.025;
    let plan = SimPlan {
        regime: SimRegime::CompositeBayes { ctx },
        alpha,
        replications: REPS,
        seed: 105,
    };
    let r = simulate(&plan).unwrap();
    assert_band(
        "composite-bayes Ave(T1E)",
        r.empirical_t1e,
        r.se_t1e,
        ave_t1e_bayes(&ctx, alpha).unwrap(),
    );
    assert_band(
        "composite-bayes Ave(T2E)",
        r.empirical_t2e,
        r.se_t2e,
        ave_t2e_bayes(&ctx, alpha).unwrap(),
    );
}

// Independent sampler for the bespoke checks below.
fn gaussian(rng: &mut StdRng) -> f64 {
    let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

#[test]
fn historical_statistic_moments_match_sampling_distribution() {
    let layout = TwoArmLayout::new(80.0, 50.0, 8.0, 4.0).unwrap();
    let prior = PlaceboPrior::new(5.5, 10.0, 5.0).unwrap();
    let pool = prior.n0 + layout.n_placebo;
    let expected_mean = prior.n0 * prior.pi_true / pool + layout.delta;
    let expected_var =
        layout.sigma * layout.sigma * (1.0 / layout.n_active + layout.n_placebo / (pool * pool));

    let mut rng = StdRng::seed_from_u64(106);
    let reps = 1_000_000usize;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..reps {
        let placebo = prior.pi_true + gaussian(&mut rng) * layout.sigma / layout.n_placebo.sqrt();
        let active = prior.pi_true
            + layout.delta
            + gaussian(&mut rng) * layout.sigma / layout.n_active.sqrt();
        let stat = active - layout.n_placebo * placebo / pool;
        sum += stat;
        sum_sq += stat * stat;
    }
    let mean = sum / reps as f64;
    let var = sum_sq / reps as f64 - mean * mean;
    let se_mean = expected_var.sqrt() / (reps as f64).sqrt();
    let se_var = expected_var * (2.0 / (reps as f64 - 1.0)).sqrt();
    assert!((mean - expected_mean).abs() <= 4.0 * se_mean, "mean {mean}");
    assert!((var - expected_var).abs() <= 4.0 * se_var, "var {var}");
}

#[test]
fn pos_decomposition_matches_joint_draws() {
    let ctx = reference_ctx();
    let alpha = 0.025;
    let mcid = 4.0;
    let d = pos_decomposition(&ctx, alpha, mcid).unwrap();

    let design = reference_design();
    let prior = reference_prior();
    let prior_sd = (2.0 * design.sigma * design.sigma / prior.n0).sqrt();
    let estimate_sd = (2.0 * design.sigma * design.sigma / design.n1).sqrt();
    let threshold = estimate_sd * norm_quantile(0.975).unwrap();

    let mut rng = StdRng::seed_from_u64(107);
    let reps = 1_000_000usize;
    let (mut a, mut b, mut c) = (0u64, 0u64, 0u64);
    for _ in 0..reps {
        let effect = prior.delta0 + prior_sd * gaussian(&mut rng);
        let estimate = effect + estimate_sd * gaussian(&mut rng);
        if estimate > threshold {
            if effect > mcid {
                a += 1;
            } else if effect > 0.0 {
                b += 1;
            } else {
                c += 1;
            }
        }
    }
    let r = reps as f64;
    for (label, count, analytic) in [
        ("A", a, d.relevant),
        ("B", b, d.marginal),
        ("C", c, d.null_region),
    ] {
        let p_hat = count as f64 / r;
        let se = (p_hat * (1.0 - p_hat) / r).sqrt();
        assert_band(label, p_hat, se, analytic);
    }
}

#[test]
fn empirical_psi_curve_attains_minimum_near_analytic_optimum() {
    let design = reference_design();
    let theta = design.noncentrality();
    let omega = 3.0;
    let plan = SimPlan {
        regime: SimRegime::SimpleFreq { design },
        alpha: 0.05,
        replications: REPS,
        seed: 108,
    };
    let step = 0.005;
    let grid: Vec<f64> = (1..=20).map(|i| i as f64 * step).collect();
    let points = sweep_simulate(&plan, &grid).unwrap();
    let empirical_argmin = points
        .iter()
        .map(|p| (omega * p.result.empirical_t1e + p.result.empirical_t2e) / (omega + 1.0))
        .enumerate()
        .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
        .unwrap()
        .0;
    let analytic_argmin = grid
        .iter()
        .map(|&a| psi(a, theta, omega).unwrap())
        .enumerate()
        .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
        .unwrap()
        .0;
    assert!(
        empirical_argmin.abs_diff(analytic_argmin) <= 1,
        "empirical argmin {} vs analytic {} (alpha {} vs {})",
        empirical_argmin,
        analytic_argmin,
        grid[empirical_argmin],
        grid[analytic_argmin]
    );
}
