//! Simulation and topology evolution of dynamical complex networks.
//!
//! A [`NetworkSystem`] couples per-node vector fields along the edges of a
//! [`Topology`]. The [`supervisor`] rewires the topology by simulated
//! annealing to minimise a [`PerformanceMeasure`], evaluated on the topology
//! alone (for example the Laplacian [`eigenratio`]) or on a trajectory from
//! the [`integrator`].

pub mod dynamics;
pub mod error;
pub mod graph;
pub mod integrator;
pub mod measures;
pub mod mutation;
pub mod netio;
pub mod supervisor;

pub use dynamics::{EdgeCoupling, NetworkSystem, NodeDynamics};
pub use error::{Error, Result};
pub use graph::{Edge, Girth, SpectrumResult, Topology};
pub use integrator::{integrate, rkf45_step, FnField, SolverConfig, Trajectory, VectorField};
pub use measures::{eigenratio, std_analysis, sync_error, AnalysisRecord, PerformanceMeasure};
pub use mutation::{MutationOperator, MutationProposal};
pub use supervisor::{sa_run, EvolutionResult, HaltReason, IterationRecord, SaParams};

/// Random stream used throughout; seeded streams are reproducible across
/// platforms.
pub type SimRng = rand_chacha::ChaCha8Rng;
