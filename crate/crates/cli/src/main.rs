//! Command-line surface for the error trade-off library: single-point error
//! evaluation, optimal decision criteria, sample sizing, cost models,
//! analytic sweeps for curve data, and Monte Carlo simulation.
//!
//! Every parameter can come from flags or from a JSON config file
//! (`--config`); flags win. Exit codes: 0 success, 1 infeasible or
//! non-convergent, 2 usage or validation errors.

mod commands;
mod render;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use errbalance_core::Error as CoreError;

#[derive(Parser)]
#[command(
    name = "errbalance",
    version,
    about = "Cost-weighted type I/II error trade-off analysis for two-arm normal trials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal decision criterion (and its error rates) for a regime
    Optimize(Params),
    /// Error rates and weighted sum at a given decision criterion
    Errors(Params),
    /// Per-arm sample size for target error rates
    Size(Params),
    /// Sample size controlling the optimal weighted error sum
    SizePsi(Params),
    /// Probability of success and its decomposition
    Pos(Params),
    /// Cost ratio from weights or a cost specification
    Omega(Params),
    /// Criterion alpha holding the prior-informed type I error at epsilon/2
    Calibrate(Params),
    /// Joint (alpha, n) expected-cost minimization
    Isakov(Params),
    /// Analytic curve data over an alpha or theta-squared grid (CSV)
    Sweep(Params),
    /// Monte Carlo simulation of a regime's decision rule
    Simulate(Params),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Optimize(_) => "optimize",
            Command::Errors(_) => "errors",
            Command::Size(_) => "size",
            Command::SizePsi(_) => "size-psi",
            Command::Pos(_) => "pos",
            Command::Omega(_) => "omega",
            Command::Calibrate(_) => "calibrate",
            Command::Isakov(_) => "isakov",
            Command::Sweep(_) => "sweep",
            Command::Simulate(_) => "simulate",
        }
    }

    fn params(&self) -> &Params {
        match self {
            Command::Optimize(p)
            | Command::Errors(p)
            | Command::Size(p)
            | Command::SizePsi(p)
            | Command::Pos(p)
            | Command::Omega(p)
            | Command::Calibrate(p)
            | Command::Isakov(p)
            | Command::Sweep(p)
            | Command::Simulate(p) => p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    SimpleFreq,
    SimpleBayes,
    HistoricalControl,
    CompositeFreq,
    CompositeBayes,
}

impl RegimeArg {
    fn as_str(&self) -> &'static str {
        match self {
            RegimeArg::SimpleFreq => "simple-freq",
            RegimeArg::SimpleBayes => "simple-bayes",
            RegimeArg::HistoricalControl => "historical-control",
            RegimeArg::CompositeFreq => "composite-freq",
            RegimeArg::CompositeBayes => "composite-bayes",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "simple-freq" => Some(RegimeArg::SimpleFreq),
            "simple-bayes" => Some(RegimeArg::SimpleBayes),
            "historical-control" | "historical" => Some(RegimeArg::HistoricalControl),
            "composite-freq" => Some(RegimeArg::CompositeFreq),
            "composite-bayes" => Some(RegimeArg::CompositeBayes),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Freq,
    Bayes,
}

/// The full flag set; each subcommand validates the subset it needs, so a
/// single JSON config file can drive any of them.
#[derive(Args, Debug, Clone, Default)]
pub struct Params {
    /// JSON file providing defaults for any flag below (flags override it)
    #[arg(long, global = false)]
    pub config: Option<PathBuf>,

    /// Decision regime
    #[arg(long, value_enum)]
    pub regime: Option<RegimeArg>,

    /// Per-arm sample size n1
    #[arg(long)]
    pub n1: Option<f64>,
    /// Effect size delta0 (outcome units)
    #[arg(long)]
    pub delta0: Option<f64>,
    /// Known outcome standard deviation
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Prior effective per-arm sample size n0
    #[arg(long)]
    pub n0: Option<f64>,

    /// Cost ratio of a type I to a type II error
    #[arg(long)]
    pub omega: Option<f64>,
    /// Decision-criterion parameter alpha
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Type II error rate beta
    #[arg(long)]
    pub beta: Option<f64>,
    /// Bound on the optimal weighted error sum
    #[arg(long)]
    pub psi0: Option<f64>,
    /// Minimal clinically important difference
    #[arg(long)]
    pub delta_mcid: Option<f64>,
    /// Decision rule for `pos` (freq or bayes)
    #[arg(long, value_enum)]
    pub rule: Option<RuleArg>,
    /// Nominal two-sided type I error rate for `calibrate`
    #[arg(long)]
    pub epsilon: Option<f64>,

    /// Active-arm size (historical-control regime)
    #[arg(long)]
    pub n_active: Option<f64>,
    /// Placebo-arm size (historical-control regime)
    #[arg(long)]
    pub n_placebo: Option<f64>,
    /// Effect size at which the type II error is evaluated (historical)
    #[arg(long)]
    pub delta: Option<f64>,
    /// Historical placebo mean
    #[arg(long)]
    pub pi0: Option<f64>,
    /// Assumed true placebo mean
    #[arg(long)]
    pub pi_true: Option<f64>,
    /// Design-prior mean for the placebo mean
    #[arg(long)]
    pub pi00: Option<f64>,
    /// Design-prior effective sample size
    #[arg(long)]
    pub n00: Option<f64>,
    /// Evaluate unconditional (design-prior averaged) errors
    #[arg(long)]
    pub unconditional: bool,

    /// Explicit error weights for `omega`
    #[arg(long)]
    pub w1: Option<f64>,
    #[arg(long)]
    pub w2: Option<f64>,
    /// Cost of a type I error
    #[arg(long)]
    pub cost_t1e: Option<f64>,
    /// Cost of a type II error
    #[arg(long)]
    pub cost_t2e: Option<f64>,
    /// Prior probability the drug is effective
    #[arg(long)]
    pub p_effective: Option<f64>,

    /// Target population size (isakov)
    #[arg(long)]
    pub population: Option<f64>,
    /// Delay fraction per enrolled patient (isakov)
    #[arg(long)]
    pub delay_fraction: Option<f64>,
    /// Minimum acceptable power at the per-n optimum (isakov)
    #[arg(long)]
    pub power_floor: Option<f64>,
    /// Null-hypothesis prior probability (isakov; p1 = 1 - p0)
    #[arg(long)]
    pub p0: Option<f64>,
    /// Smallest per-arm size to search
    #[arg(long)]
    pub n_min: Option<u32>,
    /// Largest per-arm size to search
    #[arg(long)]
    pub n_max: Option<u32>,

    /// Alpha grid start:stop:step (sweep, simulate)
    #[arg(long)]
    pub grid: Option<String>,
    /// Theta-squared grid lo:hi:step (sweep)
    #[arg(long)]
    pub theta2_grid: Option<String>,

    /// Replicate count for simulation
    #[arg(long)]
    pub replications: Option<u64>,
    /// RNG seed (default: ERRBALANCE_SEED env var, else 0)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Draw the placebo mean from the design prior each replicate
    #[arg(long)]
    pub use_design_prior: bool,

    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Write the rendered output to a file instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// CLI failure split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: bad flags, unparseable values, domain violations.
    Usage(String),
    /// Exit 1: infeasible problems and convergence failures.
    Failure(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Domain(_) | CoreError::Validation(_) => CliError::Usage(e.to_string()),
            CoreError::Bracket(_) | CoreError::Convergence(_) | CoreError::Infeasible(_) => {
                CliError::Failure(e.to_string())
            }
        }
    }
}

impl Params {
    /// Fills unset flags from the JSON config file, if one was given.
    fn apply_config(&mut self) -> Result<(), CliError> {
        let Some(path) = &self.config else {
            return Ok(());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid JSON in {}: {e}", path.display())))?;
        let obj = value
            .as_object()
            .ok_or_else(|| CliError::Usage("config must be a JSON object".to_string()))?;

        fn take_f64(
            obj: &serde_json::Map<String, serde_json::Value>,
            key: &str,
            slot: &mut Option<f64>,
        ) -> Result<(), CliError> {
            if slot.is_none() {
                if let Some(v) = obj.get(key) {
                    *slot = Some(v.as_f64().ok_or_else(|| {
                        CliError::Usage(format!("config key {key} must be a number"))
                    })?);
                }
            }
            Ok(())
        }
        fn take_u64(
            obj: &serde_json::Map<String, serde_json::Value>,
            key: &str,
            slot: &mut Option<u64>,
        ) -> Result<(), CliError> {
            if slot.is_none() {
                if let Some(v) = obj.get(key) {
                    *slot = Some(v.as_u64().ok_or_else(|| {
                        CliError::Usage(format!("config key {key} must be a nonnegative integer"))
                    })?);
                }
            }
            Ok(())
        }

        for (key, slot) in [
            ("n1", &mut self.n1),
            ("delta0", &mut self.delta0),
            ("sigma", &mut self.sigma),
            ("n0", &mut self.n0),
            ("omega", &mut self.omega),
            ("alpha", &mut self.alpha),
            ("beta", &mut self.beta),
            ("psi0", &mut self.psi0),
            ("delta_mcid", &mut self.delta_mcid),
            ("epsilon", &mut self.epsilon),
            ("n_active", &mut self.n_active),
            ("n_placebo", &mut self.n_placebo),
            ("delta", &mut self.delta),
            ("pi0", &mut self.pi0),
            ("pi_true", &mut self.pi_true),
            ("pi00", &mut self.pi00),
            ("n00", &mut self.n00),
            ("w1", &mut self.w1),
            ("w2", &mut self.w2),
            ("cost_t1e", &mut self.cost_t1e),
            ("cost_t2e", &mut self.cost_t2e),
            ("p_effective", &mut self.p_effective),
            ("population", &mut self.population),
            ("delay_fraction", &mut self.delay_fraction),
            ("power_floor", &mut self.power_floor),
            ("p0", &mut self.p0),
        ] {
            take_f64(obj, key, slot)?;
        }
        for (key, slot) in [
            ("replications", &mut self.replications),
            ("seed", &mut self.seed),
        ] {
            take_u64(obj, key, slot)?;
        }
        if self.n_min.is_none() {
            if let Some(v) = obj.get("n_min").and_then(|v| v.as_u64()) {
                self.n_min = Some(v as u32);
            }
        }
        if self.n_max.is_none() {
            if let Some(v) = obj.get("n_max").and_then(|v| v.as_u64()) {
                self.n_max = Some(v as u32);
            }
        }
        if self.regime.is_none() {
            if let Some(v) = obj.get("regime") {
                let s = v
                    .as_str()
                    .ok_or_else(|| CliError::Usage("config key regime must be a string".into()))?;
                self.regime = Some(RegimeArg::parse(s).ok_or_else(|| {
                    CliError::Usage(format!("config key regime has unknown value {s}"))
                })?);
            }
        }
        if self.rule.is_none() {
            if let Some(v) = obj.get("rule") {
                self.rule = Some(match v.as_str() {
                    Some("freq") => RuleArg::Freq,
                    Some("bayes") => RuleArg::Bayes,
                    _ => {
                        return Err(CliError::Usage(
                            "config key rule must be \"freq\" or \"bayes\"".to_string(),
                        ))
                    }
                });
            }
        }
        if self.format.is_none() {
            if let Some(v) = obj.get("format") {
                self.format = Some(match v.as_str() {
                    Some("table") => FormatArg::Table,
                    Some("json") => FormatArg::Json,
                    Some("csv") => FormatArg::Csv,
                    _ => {
                        return Err(CliError::Usage(
                            "config key format must be table, json or csv".to_string(),
                        ))
                    }
                });
            }
        }
        if self.output.is_none() {
            if let Some(v) = obj.get("output") {
                let s = v
                    .as_str()
                    .ok_or_else(|| CliError::Usage("config key output must be a string".into()))?;
                self.output = Some(PathBuf::from(s));
            }
        }
        for (key, slot) in [
            ("grid", &mut self.grid),
            ("theta2_grid", &mut self.theta2_grid),
        ] {
            if slot.is_none() {
                if let Some(v) = obj.get(key) {
                    *slot = Some(
                        v.as_str()
                            .ok_or_else(|| {
                                CliError::Usage(format!("config key {key} must be a string"))
                            })?
                            .to_string(),
                    );
                }
            }
        }
        if !self.unconditional {
            if let Some(v) = obj.get("unconditional").and_then(|v| v.as_bool()) {
                self.unconditional = v;
            }
        }
        if !self.use_design_prior {
            if let Some(v) = obj.get("use_design_prior").and_then(|v| v.as_bool()) {
                self.use_design_prior = v;
            }
        }
        Ok(())
    }

    pub fn require(&self, name: &str, value: Option<f64>) -> Result<f64, CliError> {
        value.ok_or_else(|| CliError::Usage(format!("missing required parameter --{name}")))
    }

    pub fn seed_or_env(&self) -> Result<u64, CliError> {
        if let Some(seed) = self.seed {
            return Ok(seed);
        }
        match std::env::var("ERRBALANCE_SEED") {
            Ok(text) => text.parse::<u64>().map_err(|_| {
                CliError::Usage(format!("ERRBALANCE_SEED must be a u64, got {text:?}"))
            }),
            Err(_) => Ok(0),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let name = cli.command.name();
    let mut params = cli.command.params().clone();

    let outcome = params
        .apply_config()
        .and_then(|()| commands::run(name, &params));
    match outcome {
        Ok(rendered) => {
            if let Some(path) = &params.output {
                if let Err(e) = std::fs::write(path, rendered) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    std::process::exit(1);
                }
            } else {
                print!("{rendered}");
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
    }
}
