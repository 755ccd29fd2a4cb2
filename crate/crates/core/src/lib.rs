//! Statevector simulation and circuit compilation for coined quantum walks
//! on `2^n`-node rings under neutral-atom native gate sets.

pub mod circuit;
pub mod cli;
pub mod config;
pub mod error;
pub mod gates;
pub mod metrics;
pub mod noise;
pub mod oracle;
pub mod report;
pub mod simulation;
pub mod state;

pub use circuit::{Circuit, GateApplication, GateKind, MovePolicy, NativeGateSet, Op, WalkSpec};
pub use error::{Error, Result};
pub use gates::{GateMatrix, IdealGate, ParamKind};
pub use metrics::{CompositeReport, FidelitySet, ToleranceReport};
pub use noise::{DampingConvention, NoiseParams};
pub use simulation::{run_ideal, run_ideal_dense_oracle, run_noisy, RunResult, StepRecord};
pub use state::{ProbabilityTable, StateVector};
