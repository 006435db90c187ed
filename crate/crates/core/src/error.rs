use serde::Serialize;
use thiserror::Error;

/// Structural regimes in which the closed-form lower-boundary construction
/// does not apply as-is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeKind {
    /// `P1 < T1`: user 1 never carries a public layer on the lower part.
    BelowT1,
    /// `P2 <= T2`: the stationary point for user 1 never drops below 1.
    BelowT2,
    /// No `mu1 = mu2` crossing in `(T2, P2]`.
    NoCrossing,
    /// `P1(1-b) >= P2(1-a)`: the sum-rate front is governed by receiver 2.
    ReceiverTwoBinding,
}

impl RegimeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeKind::BelowT1 => "below_t1",
            RegimeKind::BelowT2 => "below_t2",
            RegimeKind::NoCrossing => "no_crossing",
            RegimeKind::ReceiverTwoBinding => "receiver_two_binding",
        }
    }
}

/// Machine-readable description of a regime violation, echoed by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub kind: RegimeKind,
    pub detail: String,
    pub p1: f64,
    pub p2: f64,
    pub t1: f64,
    pub t2: f64,
}

impl std::fmt::Display for RegimeReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} (p1={}, p2={}, t1={}, t2={})",
            self.kind.as_str(),
            self.detail,
            self.p1,
            self.p2,
            self.t1,
            self.t2
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GicError {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    Validation {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{name} = {value} outside valid interval [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("regime error: {0}")]
    Regime(RegimeReport),
    #[error("no convergence in {context} after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        context: &'static str,
        iterations: usize,
        residual: f64,
    },
}

impl GicError {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            GicError::Validation { .. } | GicError::Domain(_) | GicError::OutOfRange { .. } => 2,
            GicError::Regime(_) => 3,
            GicError::NonConvergence { .. } => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GicError::Validation { .. } => "validation",
            GicError::Domain(_) => "domain",
            GicError::OutOfRange { .. } => "range",
            GicError::Regime(_) => "regime",
            GicError::NonConvergence { .. } => "non_convergence",
        }
    }
}

pub type Result<T, E = GicError> = std::result::Result<T, E>;
