//! Simulated-annealing supervisor.
//!
//! The run is a sequence of epochs at constant temperature. An epoch holds at
//! most `main_trials` trials and ends early once `accept_trials` moves were
//! accepted; the temperature is then multiplied by `temp_reduce`. The run
//! halts when the temperature drops below `min_temp`, after `max_iterations`
//! trials, after `accept_runs_no_change` consecutive epochs without a single
//! accepted move (the system is frozen), or when an entire epoch produced no
//! valid move.

use std::fmt;

use rand::{Rng, RngCore};

use crate::dynamics::NetworkSystem;
use crate::error::{Error, Result};
use crate::graph::Topology;
use crate::integrator::{integrate, SolverConfig};
use crate::measures::{std_analysis, AnalysisRecord, PerformanceMeasure};
use crate::mutation::{apply, revert, MutationOperator};

/// Probability with which an average worsening move is accepted at `T0`.
pub const INITIAL_ACCEPT_PROBABILITY: f64 = 0.8;

pub const DEFAULT_LOG_EVERY: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialTemperature {
    /// Estimate `T0` from `initial_trials` sampled moves.
    Basic,
    Fixed(f64),
}

pub struct SaParams {
    /// Moves sampled when estimating `T0`.
    pub initial_trials: usize,
    pub temp_reduce: f64,
    /// Trial cap per epoch.
    pub main_trials: usize,
    /// Acceptances that end an epoch early.
    pub accept_trials: usize,
    /// Consecutive epochs without any accepted move that halt the run.
    pub accept_runs_no_change: usize,
    pub min_temp: f64,
    /// Total trial budget.
    pub max_iterations: usize,
    pub initial_temperature: InitialTemperature,
    pub measure: Box<dyn PerformanceMeasure>,
    pub mutation: Box<dyn MutationOperator>,
    /// Used only when the measure needs dynamics.
    pub solver: SolverConfig,
    /// Stacked initial state; drawn from `[-1, 1]` once per run when absent.
    pub init_cond: Option<Vec<f64>>,
    /// Attach an [`AnalysisRecord`] every `log_every` trials.
    pub log_every: usize,
}

impl SaParams {
    /// Defaults of the reference synchronizability experiment for a system of
    /// `node_count` nodes.
    pub fn new(
        node_count: usize,
        measure: Box<dyn PerformanceMeasure>,
        mutation: Box<dyn MutationOperator>,
    ) -> Self {
        SaParams {
            initial_trials: node_count,
            temp_reduce: 0.9,
            main_trials: 5000,
            accept_trials: 500,
            accept_runs_no_change: 5,
            min_temp: 1e-7,
            max_iterations: 500_000,
            initial_temperature: InitialTemperature::Basic,
            measure,
            mutation,
            solver: SolverConfig::default(),
            init_cond: None,
            log_every: DEFAULT_LOG_EVERY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(format!("annealing: {msg}")));
        if self.initial_trials == 0 && self.initial_temperature == InitialTemperature::Basic {
            return bad("initial_trials must be positive");
        }
        if !(self.temp_reduce > 0.0 && self.temp_reduce < 1.0) {
            return bad("temp_reduce must lie in (0, 1)");
        }
        if self.main_trials == 0 || self.accept_trials == 0 || self.accept_runs_no_change == 0 {
            return bad("main_trials, accept_trials and accept_runs_no_change must be positive");
        }
        if !(self.min_temp > 0.0) {
            return bad("min_temp must be positive");
        }
        if let InitialTemperature::Fixed(t) = self.initial_temperature {
            if !(t > 0.0 && t.is_finite()) {
                return bad("fixed initial temperature must be positive");
            }
        }
        if self.log_every == 0 {
            return bad("log_every must be positive");
        }
        if self.measure.needs_dynamics() {
            self.solver.validate()?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub temperature: f64,
    pub q_current: f64,
    pub q_best: f64,
    pub accepted: bool,
    pub analysis: Option<AnalysisRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HaltReason {
    MinTemp,
    MaxIterations,
    NoChange,
    NoValidMoves,
}

impl fmt::Display for HaltReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HaltReason::MinTemp => "min_temp",
            HaltReason::MaxIterations => "max_iterations",
            HaltReason::NoChange => "no_change",
            HaltReason::NoValidMoves => "no_valid_moves",
        })
    }
}

#[derive(Clone, Debug)]
pub struct EvolutionResult {
    pub initial_q: f64,
    pub initial_temperature: Option<f64>,
    pub final_topology: Topology,
    pub best_topology: Topology,
    pub best_q: f64,
    pub log: Vec<IterationRecord>,
    pub epochs: usize,
    pub halt_reason: HaltReason,
}

/// Metropolis rule: always accept improvements, accept a worsening `ΔQ` with
/// probability `exp(−ΔQ/T)`, never accept `ΔQ = +∞` or NaN.
pub fn metropolis_accept(delta_q: f64, temperature: f64, rng: &mut dyn RngCore) -> bool {
    if delta_q <= 0.0 {
        return true;
    }
    if !delta_q.is_finite() {
        return false;
    }
    rng.random::<f64>() < (-delta_q / temperature).exp()
}

/// Measure evaluation with the run's fixed solver settings and initial state.
struct Evaluator<'a> {
    measure: &'a dyn PerformanceMeasure,
    solver: &'a SolverConfig,
    init_cond: Option<Vec<f64>>,
}

impl<'a> Evaluator<'a> {
    fn new(sys: &NetworkSystem, params: &'a SaParams, rng: &mut dyn RngCore) -> Result<Self> {
        let init_cond = if params.measure.needs_dynamics() {
            let len = sys.state_len();
            match &params.init_cond {
                Some(x) if x.len() != len => {
                    return Err(Error::Config(format!(
                        "initial condition has {} components, system needs {len}",
                        x.len()
                    )))
                }
                Some(x) => Some(x.clone()),
                None => Some((0..len).map(|_| rng.random_range(-1.0..=1.0)).collect()),
            }
        } else {
            None
        };
        Ok(Evaluator {
            measure: params.measure.as_ref(),
            solver: &params.solver,
            init_cond,
        })
    }

    /// `Q` of the current system; a diverging or stiff simulation scores `+∞`.
    fn evaluate(&self, sys: &NetworkSystem) -> Result<f64> {
        match &self.init_cond {
            None => self.measure.evaluate(sys.topology(), None),
            Some(x0) => match integrate(&sys.field(), x0, self.solver) {
                Ok(traj) => self.measure.evaluate(sys.topology(), Some(&traj)),
                Err(Error::Divergence { .. } | Error::Stiffness { .. }) => Ok(f64::INFINITY),
                Err(e) => Err(e),
            },
        }
    }
}

fn estimate_temperature(
    sys: &mut NetworkSystem,
    params: &SaParams,
    eval: &Evaluator<'_>,
    q_start: f64,
    rng: &mut dyn RngCore,
) -> Result<f64> {
    let mut worsening = Vec::new();
    let mut largest = 0.0f64;
    let mut valid = 0usize;
    for _ in 0..params.initial_trials {
        let proposal = match params.mutation.propose(sys.topology(), rng) {
            Ok(p) => p,
            Err(Error::NoValidMove(_)) => continue,
            Err(e) => return Err(e),
        };
        valid += 1;
        apply(sys.topology_mut(), &proposal)?;
        let q = eval.evaluate(sys);
        revert(sys.topology_mut(), &proposal)?;
        let delta = q? - q_start;
        // Disconnecting moves carry no scale information.
        if delta.is_finite() {
            largest = largest.max(delta.abs());
            if delta > 0.0 {
                worsening.push(delta);
            }
        }
    }
    if valid == 0 {
        return Err(Error::NoValidMove(
            "no valid move while estimating the initial temperature".into(),
        ));
    }
    if worsening.is_empty() {
        return Ok(largest.max(params.min_temp * 10.0));
    }
    let mean = worsening.iter().sum::<f64>() / worsening.len() as f64;
    Ok(mean / (1.0 / INITIAL_ACCEPT_PROBABILITY).ln())
}

/// Initial temperature from `initial_trials` sampled moves around a system
/// whose current measure is `q_start`.
///
/// `T0` is the mean worsening `ΔQ` divided by `ln(1/0.8)`, so that an average
/// uphill move starts out accepted with probability 0.8. When no sampled move
/// worsens `Q`, `T0 = max(max |ΔQ|, 10·min_temp)`. Moves producing `+∞` are
/// ignored. Each sampled move is applied, evaluated once, and reverted.
pub fn initial_temperature(
    sys: &NetworkSystem,
    params: &SaParams,
    q_start: f64,
    rng: &mut dyn RngCore,
) -> Result<f64> {
    let eval = Evaluator::new(sys, params, rng)?;
    estimate_temperature(&mut sys.clone(), params, &eval, q_start, rng)
}

pub fn sa_run(sys: &NetworkSystem, params: &SaParams, rng: &mut dyn RngCore) -> Result<EvolutionResult> {
    sa_run_with_observer(sys, params, rng, &mut |_| {})
}

/// Runs the annealing loop, passing every trial record to `observer` as it is
/// produced.
pub fn sa_run_with_observer(
    sys: &NetworkSystem,
    params: &SaParams,
    rng: &mut dyn RngCore,
    observer: &mut dyn FnMut(&IterationRecord),
) -> Result<EvolutionResult> {
    params.validate()?;
    let mut sys = sys.clone();
    let eval = Evaluator::new(&sys, params, rng)?;
    let initial_q = eval.evaluate(&sys)?;

    let mut result = EvolutionResult {
        initial_q,
        initial_temperature: None,
        final_topology: sys.topology().clone(),
        best_topology: sys.topology().clone(),
        best_q: initial_q,
        log: Vec::new(),
        epochs: 0,
        halt_reason: HaltReason::MaxIterations,
    };
    if params.max_iterations == 0 {
        return Ok(result);
    }
    if !initial_q.is_finite() {
        return Err(Error::Config(format!(
            "initial performance measure must be finite, got {initial_q}"
        )));
    }

    let mut temperature = match params.initial_temperature {
        InitialTemperature::Fixed(t) => t,
        InitialTemperature::Basic => {
            match estimate_temperature(&mut sys, params, &eval, initial_q, rng) {
                Ok(t) => t,
                Err(Error::NoValidMove(_)) => {
                    result.halt_reason = HaltReason::NoValidMoves;
                    return Ok(result);
                }
                Err(e) => return Err(e),
            }
        }
    };
    result.initial_temperature = Some(temperature);

    let mut q_current = initial_q;
    let mut stale_epochs = 0usize;
    let mut trials = 0usize;
    let halt_reason = 'run: loop {
        if temperature < params.min_temp {
            break HaltReason::MinTemp;
        }
        let mut accepted_in_epoch = 0usize;
        let mut valid_in_epoch = 0usize;
        for _ in 0..params.main_trials {
            if trials >= params.max_iterations {
                break 'run HaltReason::MaxIterations;
            }
            let mut accepted = false;
            match params.mutation.propose(sys.topology(), rng) {
                Ok(proposal) => {
                    valid_in_epoch += 1;
                    apply(sys.topology_mut(), &proposal)?;
                    let q_new = eval.evaluate(&sys)?;
                    if metropolis_accept(q_new - q_current, temperature, rng) {
                        accepted = true;
                        accepted_in_epoch += 1;
                        q_current = q_new;
                        if q_new < result.best_q {
                            result.best_q = q_new;
                            result.best_topology = sys.topology().clone();
                        }
                    } else {
                        revert(sys.topology_mut(), &proposal)?;
                    }
                }
                Err(Error::NoValidMove(_)) => {}
                Err(e) => return Err(e),
            }
            let record = IterationRecord {
                iteration: trials,
                temperature,
                q_current,
                q_best: result.best_q,
                accepted,
                analysis: trials.is_multiple_of(params.log_every).then(|| std_analysis(sys.topology())),
            };
            observer(&record);
            result.log.push(record);
            trials += 1;
            if accepted_in_epoch >= params.accept_trials {
                break;
            }
        }
        result.epochs += 1;
        if valid_in_epoch == 0 {
            break HaltReason::NoValidMoves;
        }
        if accepted_in_epoch > 0 {
            stale_epochs = 0;
        } else {
            stale_epochs += 1;
            if stale_epochs >= params.accept_runs_no_change {
                break HaltReason::NoChange;
            }
        }
        temperature *= params.temp_reduce;
    };

    result.halt_reason = halt_reason;
    result.final_topology = sys.topology().clone();
    Ok(result)
}
