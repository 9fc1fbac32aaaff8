//! Subcommand executors. Each resolves its parameter subset, calls the
//! library, and assembles a [`Report`] or a CSV sheet; all numbers pass
//! through untouched.

use serde_json::{Map, Value};

use errbalance_core::composite::{
    ave_t1e_bayes, ave_t1e_freq, ave_t2e_bayes, ave_t2e_freq, optimal_composite_bayes,
    optimal_composite_freq, pos, pos_bayes, pos_decomposition, prior_prob_effective,
};
use errbalance_core::cost_models::{
    isakov_optimize, omega_from_costspec, omega_from_weights, CostSpec, IsakovSpec,
};
use errbalance_core::historical_control::{
    hc_optimal_alpha, hc_t1e, hc_t2e, hc_unconditional_errors,
};
use errbalance_core::mc_oracle::{simulate, sweep_simulate, SimPlan, SimRegime};
use errbalance_core::simple_bayes::{
    bayes_threshold, calibrate_alpha, optimal_simple_bayes, t1e_bayes, t2e_bayes,
};
use errbalance_core::simple_freq::{
    beta_from_alpha, optimal_simple_freq, sample_size, size_for_psi_bound,
};
use errbalance_core::{
    CompositeContext, DesignParams, EffectPrior, ErrorReport, OptimumResult, PlaceboPrior,
    TrialEffect, TwoArmLayout,
};

use crate::render::{num, Report, Sheet};
use crate::{CliError, FormatArg, Params, RegimeArg, RuleArg};

pub fn run(name: &str, params: &Params) -> Result<String, CliError> {
    match name {
        "optimize" => render_scalar(params, run_optimize(params)?),
        "errors" => render_scalar(params, run_errors(params)?),
        "size" => render_scalar(params, run_size(params)?),
        "size-psi" => render_scalar(params, run_size_psi(params)?),
        "pos" => render_scalar(params, run_pos(params)?),
        "omega" => render_scalar(params, run_omega(params)?),
        "calibrate" => render_scalar(params, run_calibrate(params)?),
        "isakov" => render_scalar(params, run_isakov(params)?),
        "sweep" => run_sweep(params),
        "simulate" => run_simulate(params),
        _ => unreachable!("unknown subcommand {name}"),
    }
}

fn render_scalar(params: &Params, report: Report) -> Result<String, CliError> {
    Ok(match params.format.unwrap_or(FormatArg::Table) {
        FormatArg::Table => report.to_table(),
        FormatArg::Json => report.to_json(),
        FormatArg::Csv => report.to_csv(),
    })
}

fn require_csv(params: &Params) -> Result<(), CliError> {
    match params.format {
        None | Some(FormatArg::Csv) => Ok(()),
        Some(_) => Err(CliError::Usage(
            "grid sweeps emit CSV; drop --format or pass --format csv".to_string(),
        )),
    }
}

// ---------------------------------------------------------------------------
// Parameter resolution

fn require_regime(params: &Params) -> Result<RegimeArg, CliError> {
    params
        .regime
        .ok_or_else(|| CliError::Usage("missing required parameter --regime".to_string()))
}

fn design_from(params: &Params) -> Result<DesignParams, CliError> {
    let n1 = params.require("n1", params.n1)?;
    let delta0 = params.require("delta0", params.delta0)?;
    let sigma = params.require("sigma", params.sigma)?;
    Ok(DesignParams::new(n1, delta0, sigma)?)
}

fn effect_prior_from(params: &Params) -> Result<EffectPrior, CliError> {
    let delta0 = params.require("delta0", params.delta0)?;
    let n0 = params.require("n0", params.n0)?;
    Ok(EffectPrior::new(delta0, n0)?)
}

fn composite_ctx_from(params: &Params) -> Result<CompositeContext, CliError> {
    Ok(CompositeContext::new(
        design_from(params)?,
        effect_prior_from(params)?,
    )?)
}

fn layout_from(params: &Params) -> Result<TwoArmLayout, CliError> {
    let n_active = params.require("n-active", params.n_active)?;
    let n_placebo = params.require("n-placebo", params.n_placebo)?;
    let sigma = params.require("sigma", params.sigma)?;
    let delta = params.require("delta", params.delta)?;
    Ok(TwoArmLayout::new(n_active, n_placebo, sigma, delta)?)
}

fn placebo_prior_from(params: &Params) -> Result<PlaceboPrior, CliError> {
    let pi0 = params.require("pi0", params.pi0)?;
    let n0 = params.require("n0", params.n0)?;
    let pi_true = params.require("pi-true", params.pi_true)?;
    let mut prior = PlaceboPrior::new(pi0, n0, pi_true)?;
    match (params.pi00, params.n00) {
        (Some(pi00), Some(n00)) => prior = prior.with_design_prior(pi00, n00)?,
        (None, None) => {}
        _ => {
            return Err(CliError::Usage(
                "--pi00 and --n00 must be given together".to_string(),
            ))
        }
    }
    Ok(prior)
}

fn echo_design(inputs: &mut Map<String, Value>, design: &DesignParams) {
    inputs.insert("n1".into(), num(design.n1));
    inputs.insert("delta0".into(), num(design.delta0));
    inputs.insert("sigma".into(), num(design.sigma));
}

fn echo_placebo(inputs: &mut Map<String, Value>, layout: &TwoArmLayout, prior: &PlaceboPrior) {
    inputs.insert("n_active".into(), num(layout.n_active));
    inputs.insert("n_placebo".into(), num(layout.n_placebo));
    inputs.insert("sigma".into(), num(layout.sigma));
    inputs.insert("delta".into(), num(layout.delta));
    inputs.insert("pi0".into(), num(prior.pi0));
    inputs.insert("n0".into(), num(prior.n0));
    inputs.insert("pi_true".into(), num(prior.pi_true));
    if let Some(dp) = prior.design_prior {
        inputs.insert("pi00".into(), num(dp.pi00));
        inputs.insert("n00".into(), num(dp.n00));
    }
}

fn echo_regime_inputs(params: &Params, regime: RegimeArg) -> Result<Map<String, Value>, CliError> {
    let mut inputs = Map::new();
    inputs.insert("regime".into(), Value::from(regime.as_str()));
    match regime {
        RegimeArg::SimpleFreq => echo_design(&mut inputs, &design_from(params)?),
        RegimeArg::SimpleBayes | RegimeArg::CompositeFreq | RegimeArg::CompositeBayes => {
            echo_design(&mut inputs, &design_from(params)?);
            inputs.insert("n0".into(), num(params.require("n0", params.n0)?));
        }
        RegimeArg::HistoricalControl => echo_placebo(
            &mut inputs,
            &layout_from(params)?,
            &placebo_prior_from(params)?,
        ),
    }
    Ok(inputs)
}

fn optimum_outputs(opt: &OptimumResult) -> Vec<(&'static str, Value)> {
    vec![
        ("regime", Value::from(opt.regime.as_str())),
        ("alpha", num(opt.alpha)),
        ("t1e", num(opt.t1e)),
        ("t2e", num(opt.t2e)),
        ("psi", num(opt.psi)),
        ("omega", num(opt.omega)),
    ]
}

// ---------------------------------------------------------------------------
// Subcommands

fn run_optimize(params: &Params) -> Result<Report, CliError> {
    let regime = require_regime(params)?;
    let omega = params.require("omega", params.omega)?;
    if params.unconditional {
        return Err(CliError::Usage(
            "the optimal criterion is defined for conditional errors; \
             use `errors --unconditional` for design-prior averaged rates"
                .to_string(),
        ));
    }
    let opt = match regime {
        RegimeArg::SimpleFreq => optimal_simple_freq(design_from(params)?.noncentrality(), omega)?,
        RegimeArg::SimpleBayes => {
            optimal_simple_bayes(&design_from(params)?, &effect_prior_from(params)?, omega)?
        }
        RegimeArg::CompositeFreq => optimal_composite_freq(&composite_ctx_from(params)?, omega)?,
        RegimeArg::CompositeBayes => optimal_composite_bayes(&composite_ctx_from(params)?, omega)?,
        RegimeArg::HistoricalControl => {
            hc_optimal_alpha(&layout_from(params)?, &placebo_prior_from(params)?, omega)?
        }
    };
    let mut inputs = echo_regime_inputs(params, regime)?;
    inputs.insert("omega".into(), num(omega));
    Ok(Report {
        subcommand: "optimize",
        inputs,
        outputs: optimum_outputs(&opt),
    })
}

fn error_report_at(
    params: &Params,
    regime: RegimeArg,
    alpha: f64,
    omega: f64,
) -> Result<ErrorReport, CliError> {
    let report = match regime {
        RegimeArg::SimpleFreq => {
            let theta = design_from(params)?.noncentrality();
            ErrorReport::from_rates(alpha, alpha, beta_from_alpha(alpha, theta)?, omega)
        }
        RegimeArg::SimpleBayes => {
            let design = design_from(params)?;
            let prior = effect_prior_from(params)?;
            ErrorReport::from_rates(
                alpha,
                t1e_bayes(&design, &prior, alpha)?,
                t2e_bayes(&design, &prior, alpha)?,
                omega,
            )
        }
        RegimeArg::CompositeFreq => {
            let ctx = composite_ctx_from(params)?;
            ErrorReport::from_rates(
                alpha,
                ave_t1e_freq(&ctx, alpha)?,
                ave_t2e_freq(&ctx, alpha)?,
                omega,
            )
        }
        RegimeArg::CompositeBayes => {
            let ctx = composite_ctx_from(params)?;
            ErrorReport::from_rates(
                alpha,
                ave_t1e_bayes(&ctx, alpha)?,
                ave_t2e_bayes(&ctx, alpha)?,
                omega,
            )
        }
        RegimeArg::HistoricalControl => {
            let layout = layout_from(params)?;
            let prior = placebo_prior_from(params)?;
            let (t1e, t2e) = if params.unconditional {
                hc_unconditional_errors(&layout, &prior, alpha)?
            } else {
                (
                    hc_t1e(&layout, &prior, alpha)?,
                    hc_t2e(&layout, &prior, alpha)?,
                )
            };
            ErrorReport::from_rates(alpha, t1e, t2e, omega)
        }
    };
    Ok(report)
}

fn run_errors(params: &Params) -> Result<Report, CliError> {
    let regime = require_regime(params)?;
    let alpha = params.require("alpha", params.alpha)?;
    let omega = params.require("omega", params.omega)?;
    let report = error_report_at(params, regime, alpha, omega)?;
    let mut inputs = echo_regime_inputs(params, regime)?;
    inputs.insert("alpha".into(), num(alpha));
    inputs.insert("omega".into(), num(omega));
    if params.unconditional {
        inputs.insert("unconditional".into(), Value::from(true));
    }
    Ok(Report {
        subcommand: "errors",
        inputs,
        outputs: vec![
            ("alpha", num(report.alpha)),
            ("t1e", num(report.t1e)),
            ("t2e", num(report.t2e)),
            ("psi", num(report.psi)),
            ("omega", num(report.omega)),
        ],
    })
}

fn run_size(params: &Params) -> Result<Report, CliError> {
    let delta0 = params.require("delta0", params.delta0)?;
    let sigma = params.require("sigma", params.sigma)?;
    let alpha = params.require("alpha", params.alpha)?;
    let beta = params.require("beta", params.beta)?;
    let size = sample_size(delta0, sigma, alpha, beta)?;
    let mut inputs = Map::new();
    inputs.insert("delta0".into(), num(delta0));
    inputs.insert("sigma".into(), num(sigma));
    inputs.insert("alpha".into(), num(alpha));
    inputs.insert("beta".into(), num(beta));
    Ok(Report {
        subcommand: "size",
        inputs,
        outputs: vec![
            ("n1_fractional", num(size.fractional)),
            ("n1", Value::from(size.rounded)),
        ],
    })
}

fn run_size_psi(params: &Params) -> Result<Report, CliError> {
    let psi0 = params.require("psi0", params.psi0)?;
    let omega = params.require("omega", params.omega)?;
    let delta0 = params.require("delta0", params.delta0)?;
    let sigma = params.require("sigma", params.sigma)?;
    let sizing = size_for_psi_bound(psi0, omega, delta0, sigma)?;
    let mut inputs = Map::new();
    inputs.insert("psi0".into(), num(psi0));
    inputs.insert("omega".into(), num(omega));
    inputs.insert("delta0".into(), num(delta0));
    inputs.insert("sigma".into(), num(sigma));
    Ok(Report {
        subcommand: "size-psi",
        inputs,
        outputs: vec![
            ("theta2", num(sizing.theta_sq)),
            ("n1_fractional", num(sizing.n1_fractional)),
            ("n1", Value::from(sizing.n1)),
            ("alpha", num(sizing.alpha)),
            ("beta", num(sizing.beta)),
            ("psi", num(sizing.psi)),
        ],
    })
}

fn run_pos(params: &Params) -> Result<Report, CliError> {
    let ctx = composite_ctx_from(params)?;
    let alpha = params.require("alpha", params.alpha)?;
    let rule = params.rule.unwrap_or(RuleArg::Freq);
    let pos_value = match rule {
        RuleArg::Freq => pos(&ctx, alpha)?,
        RuleArg::Bayes => pos_bayes(&ctx, alpha)?,
    };
    let mut inputs = echo_regime_inputs(
        params,
        match rule {
            RuleArg::Freq => RegimeArg::CompositeFreq,
            RuleArg::Bayes => RegimeArg::CompositeBayes,
        },
    )?;
    inputs.remove("regime");
    inputs.insert(
        "rule".into(),
        Value::from(match rule {
            RuleArg::Freq => "freq",
            RuleArg::Bayes => "bayes",
        }),
    );
    inputs.insert("alpha".into(), num(alpha));
    let mut outputs = vec![
        ("pos", num(pos_value)),
        ("prior_prob_effective", num(prior_prob_effective(&ctx))),
    ];
    if let Some(mcid) = params.delta_mcid {
        if rule == RuleArg::Bayes {
            return Err(CliError::Usage(
                "the success decomposition is defined for the frequentist rule; drop --rule bayes"
                    .to_string(),
            ));
        }
        let d = pos_decomposition(&ctx, alpha, mcid)?;
        inputs.insert("delta_mcid".into(), num(mcid));
        outputs.push(("pos_a", num(d.relevant)));
        outputs.push(("pos_b", num(d.marginal)));
        outputs.push(("pos_c", num(d.null_region)));
    }
    Ok(Report {
        subcommand: "pos",
        inputs,
        outputs,
    })
}

fn run_calibrate(params: &Params) -> Result<Report, CliError> {
    let design = design_from(params)?;
    let prior = effect_prior_from(params)?;
    let epsilon = params.require("epsilon", params.epsilon)?;
    let alpha = calibrate_alpha(&prior, &design, epsilon)?;
    let threshold = bayes_threshold(&design, &prior, alpha)?;
    let mut inputs = Map::new();
    echo_design(&mut inputs, &design);
    inputs.insert("n0".into(), num(prior.n0));
    inputs.insert("epsilon".into(), num(epsilon));
    Ok(Report {
        subcommand: "calibrate",
        inputs,
        outputs: vec![("alpha", num(alpha)), ("threshold", num(threshold))],
    })
}

fn run_omega(params: &Params) -> Result<Report, CliError> {
    let weights = (params.w1, params.w2);
    let costs = (params.cost_t1e, params.cost_t2e, params.p_effective);
    let mut inputs = Map::new();
    let omega = match (weights, costs) {
        ((Some(w1), Some(w2)), (None, None, None)) => {
            inputs.insert("w1".into(), num(w1));
            inputs.insert("w2".into(), num(w2));
            omega_from_weights(w1, w2)?
        }
        ((None, None), (Some(c1), Some(c2), Some(p))) => {
            inputs.insert("cost_t1e".into(), num(c1));
            inputs.insert("cost_t2e".into(), num(c2));
            inputs.insert("p_effective".into(), num(p));
            omega_from_costspec(&CostSpec::new(c1, c2, p)?)?
        }
        _ => {
            return Err(CliError::Usage(
                "pass either --w1/--w2 or --cost-t1e/--cost-t2e/--p-effective".to_string(),
            ))
        }
    };
    Ok(Report {
        subcommand: "omega",
        inputs,
        outputs: vec![("omega", num(omega))],
    })
}

fn run_isakov(params: &Params) -> Result<Report, CliError> {
    let cost_t1e = params.require("cost-t1e", params.cost_t1e)?;
    let cost_t2e = params.require("cost-t2e", params.cost_t2e)?;
    let population = params.require("population", params.population)?;
    let delay_fraction = params.require("delay-fraction", params.delay_fraction)?;
    let power_floor = params.require("power-floor", params.power_floor)?;
    let delta0 = params.require("delta0", params.delta0)?;
    let sigma = params.require("sigma", params.sigma)?;
    let n_min = params
        .n_min
        .ok_or_else(|| CliError::Usage("missing required parameter --n-min".to_string()))?;
    let n_max = params
        .n_max
        .ok_or_else(|| CliError::Usage("missing required parameter --n-max".to_string()))?;

    let mut spec = IsakovSpec::new(cost_t1e, cost_t2e, population, delay_fraction, power_floor)?;
    let mut inputs = Map::new();
    inputs.insert("cost_t1e".into(), num(cost_t1e));
    inputs.insert("cost_t2e".into(), num(cost_t2e));
    inputs.insert("population".into(), num(population));
    inputs.insert("delay_fraction".into(), num(delay_fraction));
    inputs.insert("power_floor".into(), num(power_floor));
    inputs.insert("delta0".into(), num(delta0));
    inputs.insert("sigma".into(), num(sigma));
    inputs.insert("n_min".into(), Value::from(n_min));
    inputs.insert("n_max".into(), Value::from(n_max));
    if let Some(p0) = params.p0 {
        spec = spec.fold_hypothesis_priors(p0, 1.0 - p0)?;
        inputs.insert("p0".into(), num(p0));
    }
    let effect = TrialEffect::new(delta0, sigma)?;
    let opt = isakov_optimize(&spec, &effect, n_min..=n_max)?;
    Ok(Report {
        subcommand: "isakov",
        inputs,
        outputs: vec![
            ("alpha", num(opt.alpha)),
            ("n", Value::from(opt.n)),
            ("cost", num(opt.cost)),
            ("power", num(opt.power)),
        ],
    })
}

fn parse_grid(spec: &str, name: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "--{name} must be start:stop:step, got {spec:?}"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("--{name}: {p:?} is not a number")))
        })
        .collect::<Result<_, _>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0 && stop >= start) {
        return Err(CliError::Usage(format!(
            "--{name} requires stop >= start and step > 0, got {spec:?}"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| start + i as f64 * step).collect())
}

fn run_sweep(params: &Params) -> Result<String, CliError> {
    require_csv(params)?;
    let omega = params.require("omega", params.omega)?;
    if let Some(spec) = &params.theta2_grid {
        // Optimal operating characteristics as a function of theta^2.
        let grid = parse_grid(spec, "theta2-grid")?;
        let mut sheet = Sheet::new("theta2,alpha,beta,psi");
        for &theta_sq in &grid {
            let opt = optimal_simple_freq(theta_sq.sqrt(), omega)?;
            sheet.push(&[theta_sq, opt.alpha, opt.t2e, opt.psi]);
        }
        return Ok(sheet.finish());
    }
    let regime = require_regime(params)?;
    let spec = params
        .grid
        .as_deref()
        .ok_or_else(|| CliError::Usage("missing required parameter --grid".to_string()))?;
    let grid = parse_grid(spec, "grid")?;
    let mut sheet = Sheet::new("alpha,t1e,t2e,psi");
    for &alpha in &grid {
        let report = error_report_at(params, regime, alpha, omega)?;
        sheet.push(&[alpha, report.t1e, report.t2e, report.psi]);
    }
    Ok(sheet.finish())
}

fn sim_regime_from(params: &Params, regime: RegimeArg) -> Result<SimRegime, CliError> {
    Ok(match regime {
        RegimeArg::SimpleFreq => SimRegime::SimpleFreq {
            design: design_from(params)?,
        },
        RegimeArg::SimpleBayes => SimRegime::SimpleBayes {
            design: design_from(params)?,
            prior: effect_prior_from(params)?,
        },
        RegimeArg::CompositeFreq => SimRegime::CompositeFreq {
            ctx: composite_ctx_from(params)?,
        },
        RegimeArg::CompositeBayes => SimRegime::CompositeBayes {
            ctx: composite_ctx_from(params)?,
        },
        RegimeArg::HistoricalControl => SimRegime::HistoricalControl {
            layout: layout_from(params)?,
            prior: placebo_prior_from(params)?,
            use_design_prior: params.use_design_prior,
        },
    })
}

fn run_simulate(params: &Params) -> Result<String, CliError> {
    let regime = require_regime(params)?;
    let alpha = params.require("alpha", params.alpha)?;
    let replications = params.replications.unwrap_or(1_000_000);
    let seed = params.seed_or_env()?;
    let plan = SimPlan {
        regime: sim_regime_from(params, regime)?,
        alpha,
        replications,
        seed,
    };

    if let Some(spec) = &params.grid {
        require_csv(params)?;
        let grid = parse_grid(spec, "grid")?;
        let points = sweep_simulate(&plan, &grid)?;
        let mut sheet = Sheet::new("alpha,t1e,se_t1e,t2e,se_t2e,pos");
        for point in points {
            let r = point.result;
            sheet.push_with_optional(
                &[
                    point.alpha,
                    r.empirical_t1e,
                    r.se_t1e,
                    r.empirical_t2e,
                    r.se_t2e,
                ],
                r.empirical_pos,
            );
        }
        return Ok(sheet.finish());
    }

    let result = simulate(&plan)?;
    let mut inputs = echo_regime_inputs(params, regime)?;
    inputs.insert("alpha".into(), num(alpha));
    inputs.insert("replications".into(), Value::from(replications));
    inputs.insert("seed".into(), Value::from(seed));
    if params.use_design_prior {
        inputs.insert("use_design_prior".into(), Value::from(true));
    }
    let mut outputs = vec![
        ("empirical_t1e", num(result.empirical_t1e)),
        ("se_t1e", num(result.se_t1e)),
        ("empirical_t2e", num(result.empirical_t2e)),
        ("se_t2e", num(result.se_t2e)),
    ];
    if let Some(p) = result.empirical_pos {
        outputs.push(("empirical_pos", num(p)));
    }
    outputs.push(("replications", Value::from(result.replications)));
    outputs.push(("seed", Value::from(result.seed)));
    Ok(match params.format.unwrap_or(FormatArg::Table) {
        FormatArg::Table => Report {
            subcommand: "simulate",
            inputs,
            outputs,
        }
        .to_table(),
        FormatArg::Json => Report {
            subcommand: "simulate",
            inputs,
            outputs,
        }
        .to_json(),
        FormatArg::Csv => Report {
            subcommand: "simulate",
            inputs,
            outputs,
        }
        .to_csv(),
    })
}
