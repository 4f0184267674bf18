use core::fmt;

/// Errors raised by the simulation core.
#[derive(Debug, Clone, PartialEq)]
pub enum SimError {
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    NegativeDistance(f64),
    /// `k_opt` does not produce a usable ID modulus for the network size.
    InvalidClusterTarget {
        k_opt: u32,
        n_total: u32,
    },
    /// A round was requested on a network with no alive node.
    NetworkDead,
    EmptyAggregate,
    /// Series passed to one aggregate disagree on protocol.
    MixedAggregate,
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::InvalidParameter { name, reason } => write!(f, "invalid `{name}`: {reason}"),
            SimError::NegativeDistance(d) => write!(f, "distance must be non-negative, got {d}"),
            SimError::InvalidClusterTarget { k_opt, n_total } => write!(
                f,
                "invalid `k_opt` = {k_opt}: must satisfy 1 <= k_opt < n_total = {n_total}"
            ),
            SimError::NetworkDead => f.write_str("no alive node left to run a round"),
            SimError::EmptyAggregate => f.write_str("cannot aggregate an empty list of runs"),
            SimError::MixedAggregate => f.write_str("runs in one aggregate must share the protocol"),
        }
    }
}

impl core::error::Error for SimError {}
