//! Result records produced by the per-regime evaluation and optimization
//! routines.

use serde::{Deserialize, Serialize};

/// The five decision regimes covered by the package.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    SimpleFreq,
    SimpleBayes,
    HistoricalControl,
    CompositeFreq,
    CompositeBayes,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::SimpleFreq => "simple-freq",
            Regime::SimpleBayes => "simple-bayes",
            Regime::HistoricalControl => "historical-control",
            Regime::CompositeFreq => "composite-freq",
            Regime::CompositeBayes => "composite-bayes",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Error rates of one regime evaluated at one decision-criterion value α.
///
/// `t1e` is the regime's type I quantity (equal to `alpha` itself in the
/// simple frequentist regime, a transformed probability elsewhere) and
/// `t2e` the matching type II quantity, so that
/// `psi == (omega * t1e + t2e) / (omega + 1)` always holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    /// Decision-criterion parameter the rates were evaluated at.
    pub alpha: f64,
    /// Type I error quantity (rate or prior-averaged rate).
    pub t1e: f64,
    /// Type II error quantity (rate or prior-averaged rate).
    pub t2e: f64,
    /// Cost-weighted sum of errors.
    pub psi: f64,
    /// Cost ratio of a type I to a type II error.
    pub omega: f64,
}

/// An optimal decision criterion together with the error rates it attains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimumResult {
    pub regime: Regime,
    /// Minimizing decision-criterion parameter α*.
    pub alpha: f64,
    /// Type I quantity attained at α*.
    pub t1e: f64,
    /// Type II quantity attained at α*.
    pub t2e: f64,
    /// Minimum cost-weighted sum of errors.
    pub psi: f64,
    pub omega: f64,
}

impl ErrorReport {
    /// Assembles the report for a regime's error pair at one α.
    pub fn from_rates(alpha: f64, t1e: f64, t2e: f64, omega: f64) -> ErrorReport {
        ErrorReport {
            alpha,
            t1e,
            t2e,
            psi: (omega * t1e + t2e) / (omega + 1.0),
            omega,
        }
    }
}

impl OptimumResult {
    pub fn report(&self) -> ErrorReport {
        ErrorReport {
            alpha: self.alpha,
            t1e: self.t1e,
            t2e: self.t2e,
            psi: self.psi,
            omega: self.omega,
        }
    }
}
