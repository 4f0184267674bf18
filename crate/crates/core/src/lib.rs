//! Deterministic round-based simulator for cluster-hierarchy routing in
//! wireless sensor networks.
//!
//! Three head-selection strategies share one radio energy model and one
//! round engine: classic LEACH, LPCH (location-aware permanent cluster heads
//! seeded by a LEACH draw per region) and UDLPCH (the same rotation seeded
//! by node ID multiples). The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod aggregate;
pub mod engine;
pub mod error;
pub mod network;
pub mod protocols;
pub mod radio;

pub use aggregate::{aggregate, AggregateSeries, MeanRound};
pub use engine::{simulate, simulate_traced, NetworkState, RoundRecord, RunSeries, SimConfig, TraceEvent, TraceSink};
pub use error::SimError;
pub use network::{FieldConfig, NodeId, NodeState, Point, Region, Role, SplitAxis};
pub use protocols::{ProtocolConfig, StrategyKind};
pub use radio::{default_params, RadioParams};
