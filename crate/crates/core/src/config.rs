//! Numerical tolerances and entropy-logarithm configuration.
//!
//! Every validation threshold used across the crate lives in [`Tolerances`]
//! so that a single record controls what "Hermitian", "positive", and
//! "unit trace" mean numerically. The defaults are tuned for double
//! precision and operator dimensions up to 16.

use std::fmt;
use std::str::FromStr;

/// Central collection of numerical thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Maximum entrywise |M - M†| for a matrix to count as Hermitian.
    pub hermiticity: f64,
    /// Entrywise bound for eigendecomposition reconstruction V Λ V† = M
    /// and for unitarity V†V = I.
    pub reconstruction: f64,
    /// Eigenvalues at or below this value are treated as exactly zero when
    /// taking logarithms (the 0 log 0 = 0 convention for entropies).
    pub support: f64,
    /// Most negative eigenvalue a positive-semidefinite matrix may show.
    pub positivity: f64,
    /// Maximum |Tr M - 1| for a density matrix.
    pub unit_trace: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-10,
            reconstruction: 1e-10,
            support: 1e-12,
            positivity: 1e-10,
            unit_trace: 1e-10,
        }
    }
}

/// Logarithm base for entropy-like quantities.
///
/// Entropies and mutual information scale by a constant under a change of
/// base; sign-based analyses are unaffected. The thermodynamic identities
/// mix entropies with β-weighted energies and are only consistent in the
/// natural base, so that module fixes [`LogBase::Natural`] internally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    /// Natural logarithm (nats).
    #[default]
    Natural,
    /// Base-2 logarithm (bits).
    Two,
}

impl LogBase {
    /// ln(x) or log2(x).
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }

    /// Factor converting a natural-log quantity into this base.
    pub fn from_nats(self) -> f64 {
        match self {
            LogBase::Natural => 1.0,
            LogBase::Two => std::f64::consts::LOG2_E,
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogBase::Natural => write!(f, "natural"),
            LogBase::Two => write!(f, "two"),
        }
    }
}

impl FromStr for LogBase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "natural" | "e" | "ln" => Ok(LogBase::Natural),
            "two" | "2" | "log2" => Ok(LogBase::Two),
            other => Err(format!("unknown log base `{other}` (expected `natural` or `two`)")),
        }
    }
}
