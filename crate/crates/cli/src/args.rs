use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "dynnet", version, about = "Simulate and evolve dynamical complex networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evolve a network topology with the simulated-annealing supervisor.
    Evolve(EvolveArgs),
    /// Integrate the network dynamics once and report the synchronization error.
    Simulate(SimulateArgs),
    /// Print the performance measure and structural measures of a graph.
    Measure(MeasureArgs),
    /// Write a generated graph as GraphML or GML.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphKind {
    Ring,
    Complete,
}

/// Where the initial topology comes from.
#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    /// GraphML (.graphml/.xml) or GML file; otherwise a generated graph is used.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Generator family.
    #[arg(long, value_enum, default_value_t = GraphKind::Ring)]
    pub kind: GraphKind,
    #[arg(long, default_value_t = 100)]
    pub nodes: usize,
    /// Ring-lattice degree (even).
    #[arg(long, default_value_t = 4)]
    pub degree: usize,
}

#[derive(Args, Debug, Clone)]
pub struct DynamicsArgs {
    /// Node dynamics name [default: Rossler3, or the file's default].
    #[arg(long)]
    pub node_dyn: Option<String>,
    /// Node parameters, space or comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub node_params: Option<String>,
    /// Edge coupling name [default: Diffuse3XZOnly, or the file's default].
    #[arg(long)]
    pub edge_dyn: Option<String>,
    /// Global coupling strength σ [default: 0.5, or the file's default].
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    /// Integration time.
    #[arg(long, default_value_t = 100.0)]
    pub length: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub eps_abs: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub eps_rel: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub init_step: f64,
    /// Step-size floor; 0 disables the check.
    #[arg(long, default_value_t = 0.0)]
    pub min_step: f64,
    /// Use init_step for every step without error control.
    #[arg(long)]
    pub fixed_step: bool,
    #[arg(long, default_value_t = 0.1)]
    pub sample_interval: f64,
    /// Initial state: m values (used for every node) or N·m values. Random in
    /// [-1, 1] when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub init_cond: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct MeasureChoice {
    /// Performance measure (eigenratio, sync_error).
    #[arg(long, default_value = "eigenratio")]
    pub measure: String,
    /// Transient fraction dropped by sync_error.
    #[arg(long, default_value_t = 0.5)]
    pub discard_fraction: f64,
}

#[derive(Args, Debug, Clone)]
pub struct SeedArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Seed from the wall clock instead of --seed.
    #[arg(long)]
    pub seed_from_time: bool,
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub measure: MeasureChoice,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Moves sampled for the initial temperature [default: node count].
    #[arg(long)]
    pub initial_trials: Option<usize>,
    /// Fixed initial temperature instead of the sampled estimate.
    #[arg(long)]
    pub initial_temp: Option<f64>,
    #[arg(long, default_value_t = 0.9)]
    pub temp_reduce: f64,
    #[arg(long, default_value_t = 5000)]
    pub main_trials: usize,
    #[arg(long, default_value_t = 500)]
    pub accept_trials: usize,
    #[arg(long, default_value_t = 5)]
    pub accept_runs_no_change: usize,
    #[arg(long, default_value_t = 1e-7)]
    pub min_temp: f64,
    #[arg(long, default_value_t = 500_000)]
    pub max_iterations: usize,
    /// Mutation operator (rewire, rewire_endpoint).
    #[arg(long, default_value = "rewire")]
    pub mutation: String,
    /// Moves per mutation proposal.
    #[arg(long, default_value_t = 1)]
    pub rewire_count: usize,
    /// Analysis record and progress line every N trials.
    #[arg(long, default_value_t = 100)]
    pub log_every: usize,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Suppress progress lines on standard error.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[arg(long, default_value_t = 0.5)]
    pub discard_fraction: f64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub measure: MeasureChoice,
    #[command(flatten)]
    pub seed: SeedArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Graphml,
    Gml,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = GraphKind::Ring)]
    pub kind: GraphKind,
    #[arg(long, default_value_t = 100)]
    pub nodes: usize,
    #[arg(long, default_value_t = 4)]
    pub degree: usize,
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
    /// Output format [default: from the output extension, else graphml].
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long, short)]
    pub output: PathBuf,
}
