use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use dynnet::dynamics::{EdgeCoupling, NodeDynamics};
use dynnet::graph::{complete_graph, ring_lattice};
use dynnet::measures::{measure_by_name, std_analysis, sync_error};
use dynnet::mutation::mutation_by_name;
use dynnet::netio::{self, DynNetDocument, DynSpec};
use dynnet::supervisor::{sa_run_with_observer, InitialTemperature, IterationRecord, SaParams};
use dynnet::{integrate, NetworkSystem, SimRng, SolverConfig, Topology};
use rand::{Rng, SeedableRng};

use crate::args::{
    DynamicsArgs, EvolveArgs, GenerateArgs, GraphArgs, GraphKind, MeasureArgs, OutputFormat, SeedArgs,
    SimulateArgs, SolverArgs,
};
use crate::CliError;

type CliResult<T> = Result<T, CliError>;

fn config(e: dynnet::Error) -> CliError {
    CliError::Config(e.to_string())
}

fn runtime(e: dynnet::Error) -> CliError {
    CliError::Runtime(e.to_string())
}

fn rng_from(seed: &SeedArgs) -> SimRng {
    let value = if seed.seed_from_time {
        let nanos = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0);
        eprintln!("seed={nanos}");
        nanos
    } else {
        seed.seed
    };
    SimRng::seed_from_u64(value)
}

fn parse_list(text: &str, flag: &str) -> CliResult<Vec<f64>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Config(format!("{flag}: '{s}' is not a finite number")))
        })
        .collect()
}

fn generated(kind: GraphKind, nodes: usize, degree: usize) -> CliResult<Topology> {
    match kind {
        GraphKind::Ring => ring_lattice(nodes, degree).map_err(config),
        GraphKind::Complete => Ok(complete_graph(nodes)),
    }
}

fn is_graphml(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref(),
        Some("graphml" | "xml")
    )
}

/// Applies dynamics flags on top of `doc`'s defaults.
fn apply_dynamics_flags(doc: &mut DynNetDocument, flags: &DynamicsArgs) -> CliResult<()> {
    if let Some(name) = &flags.node_dyn {
        if *name != doc.node_dyn.name {
            let defaults = NodeDynamics::lookup(name, None).map(|d| d.params().to_vec()).unwrap_or_default();
            doc.node_dyn = DynSpec::new(name.clone(), defaults);
        }
    }
    if let Some(text) = &flags.node_params {
        doc.node_dyn.params = parse_list(text, "--node-params")?;
    }
    if let Some(name) = &flags.edge_dyn {
        if *name != doc.edge_dyn.name {
            let defaults = EdgeCoupling::lookup(name, None).map(|d| d.params().to_vec()).unwrap_or_default();
            doc.edge_dyn = DynSpec::new(name.clone(), defaults);
        }
    }
    if let Some(sigma) = flags.sigma {
        doc.edge_dyn.params = vec![sigma];
    }
    Ok(())
}

fn default_document(topology: Topology) -> DynNetDocument {
    DynNetDocument::new(
        topology,
        DynSpec::new("Rossler3", dynnet::dynamics::ROSSLER_DEFAULT_PARAMS.to_vec()),
        DynSpec::new("Diffuse3XZOnly", vec![dynnet::dynamics::DEFAULT_COUPLING_STRENGTH]),
    )
}

fn load_document(graph: &GraphArgs, flags: &DynamicsArgs) -> CliResult<(DynNetDocument, NetworkSystem)> {
    let mut doc = match &graph.graph {
        Some(path) if is_graphml(path) => netio::read_graphml(path).map_err(config)?,
        Some(path) => default_document(netio::read_gml(path).map_err(config)?),
        None => default_document(generated(graph.kind, graph.nodes, graph.degree)?),
    };
    apply_dynamics_flags(&mut doc, flags)?;
    let sys = doc.to_system().map_err(config)?;
    Ok((doc, sys))
}

fn solver_config(args: &SolverArgs) -> CliResult<SolverConfig> {
    let cfg = SolverConfig {
        length: args.length,
        eps_abs: args.eps_abs,
        eps_rel: args.eps_rel,
        init_step: args.init_step,
        min_step: args.min_step,
        fixed_step: args.fixed_step,
        sample_interval: args.sample_interval,
    };
    cfg.validate().map_err(config)?;
    Ok(cfg)
}

/// `--init-cond` expanded to the stacked state, if given.
fn explicit_init_cond(args: &SolverArgs, sys: &NetworkSystem) -> CliResult<Option<Vec<f64>>> {
    let Some(text) = &args.init_cond else {
        return Ok(None);
    };
    let values = parse_list(text, "--init-cond")?;
    let (m, len) = (sys.dim(), sys.state_len());
    if values.len() == len {
        Ok(Some(values))
    } else if values.len() == m {
        Ok(Some(values.iter().copied().cycle().take(len).collect()))
    } else {
        Err(CliError::Config(format!(
            "--init-cond needs {m} or {len} values, got {}",
            values.len()
        )))
    }
}

fn init_cond(args: &SolverArgs, sys: &NetworkSystem, rng: &mut SimRng) -> CliResult<Vec<f64>> {
    Ok(match explicit_init_cond(args, sys)? {
        Some(x) => x,
        None => (0..sys.state_len()).map(|_| rng.random_range(-1.0..=1.0)).collect(),
    })
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))
}

fn print_analysis(topology: &Topology) {
    let a = std_analysis(topology);
    match a.diameter {
        Some(d) => println!("diameter={d}"),
        None => println!("diameter=undefined"),
    }
    println!("clustering={}", a.clustering);
    println!("girth={}", a.girth);
}

fn with_topology(doc: &DynNetDocument, topology: &Topology) -> DynNetDocument {
    let mut out = doc.clone();
    out.topology = topology.clone();
    out.edge_overrides.retain(|e, _| topology.has_edge(*e));
    out
}

pub fn evolve(args: &EvolveArgs) -> CliResult<()> {
    let (doc, sys) = load_document(&args.graph, &args.dynamics)?;
    let measure = measure_by_name(&args.measure.measure, args.measure.discard_fraction).map_err(config)?;
    let mutation = mutation_by_name(&args.mutation, args.rewire_count).map_err(config)?;
    let mut params = SaParams::new(sys.topology().node_count(), measure, mutation);
    if let Some(n) = args.initial_trials {
        params.initial_trials = n;
    }
    if let Some(t) = args.initial_temp {
        params.initial_temperature = InitialTemperature::Fixed(t);
    }
    params.temp_reduce = args.temp_reduce;
    params.main_trials = args.main_trials;
    params.accept_trials = args.accept_trials;
    params.accept_runs_no_change = args.accept_runs_no_change;
    params.min_temp = args.min_temp;
    params.max_iterations = args.max_iterations;
    params.solver = solver_config(&args.solver)?;
    params.init_cond = explicit_init_cond(&args.solver, &sys)?;
    params.log_every = args.log_every;
    params.validate().map_err(config)?;

    ensure_dir(&args.out_dir)?;
    let mut rng = rng_from(&args.seed);
    let log_every = args.log_every;
    let quiet = args.quiet;
    let mut progress = |r: &IterationRecord| {
        if !quiet && r.iteration.is_multiple_of(log_every) {
            eprintln!(
                "iter={} T={} Q={} best={} acc={}",
                r.iteration,
                r.temperature,
                r.q_current,
                r.q_best,
                u8::from(r.accepted)
            );
        }
    };
    let result = sa_run_with_observer(&sys, &params, &mut rng, &mut progress).map_err(|e| match e {
        dynnet::Error::Config(_) => config(e),
        other => runtime(other),
    })?;

    netio::write_log_csv(&result.log, args.out_dir.join("evolution.csv")).map_err(runtime)?;
    netio::write_graphml(&with_topology(&doc, &result.final_topology), args.out_dir.join("final.graphml"))
        .map_err(runtime)?;
    netio::write_graphml(&with_topology(&doc, &result.best_topology), args.out_dir.join("best.graphml"))
        .map_err(runtime)?;

    println!("nodes={}", result.final_topology.node_count());
    println!("edges={}", result.final_topology.edge_count());
    println!("initial_Q={}", result.initial_q);
    println!("best_Q={}", result.best_q);
    println!("trials={}", result.log.len());
    println!("epochs={}", result.epochs);
    println!("halt_reason={}", result.halt_reason);
    Ok(())
}

pub fn simulate(args: &SimulateArgs) -> CliResult<()> {
    let (_, sys) = load_document(&args.graph, &args.dynamics)?;
    let cfg = solver_config(&args.solver)?;
    if !(0.0..1.0).contains(&args.discard_fraction) {
        return Err(CliError::Config("--discard-fraction must lie in [0, 1)".into()));
    }
    let mut rng = rng_from(&args.seed);
    let x0 = init_cond(&args.solver, &sys, &mut rng)?;
    let traj = integrate(&sys.field(), &x0, &cfg).map_err(runtime)?;
    ensure_dir(&args.out_dir)?;
    let n = sys.topology().node_count();
    netio::write_trajectory_csv(&traj, n, args.out_dir.join("trajectory.csv")).map_err(runtime)?;
    let err = sync_error(&traj, n, args.discard_fraction).map_err(runtime)?;
    println!("samples={}", traj.len());
    println!("sync_error={err}");
    Ok(())
}

pub fn measure(args: &MeasureArgs) -> CliResult<()> {
    let (_, sys) = load_document(&args.graph, &args.dynamics)?;
    let measure = measure_by_name(&args.measure.measure, args.measure.discard_fraction).map_err(config)?;
    let q = if measure.needs_dynamics() {
        let cfg = solver_config(&args.solver)?;
        let mut rng = rng_from(&args.seed);
        let x0 = init_cond(&args.solver, &sys, &mut rng)?;
        let traj = integrate(&sys.field(), &x0, &cfg).map_err(runtime)?;
        measure.evaluate(sys.topology(), Some(&traj))
    } else {
        measure.evaluate(sys.topology(), None)
    }
    .map_err(runtime)?;
    println!("measure={}", measure.name());
    println!("Q={q}");
    print_analysis(sys.topology());
    Ok(())
}

pub fn generate(args: &GenerateArgs) -> CliResult<()> {
    let topology = generated(args.kind, args.nodes, args.degree)?;
    let format = args.format.unwrap_or_else(|| {
        match args.output.extension().and_then(|e| e.to_str()) {
            Some("gml") | Some("txt") => OutputFormat::Gml,
            _ => OutputFormat::Graphml,
        }
    });
    if let Some(parent) = args.output.parent().filter(|p| !p.as_os_str().is_empty()) {
        ensure_dir(parent)?;
    }
    match format {
        OutputFormat::Gml => netio::write_gml(&topology, &args.output).map_err(runtime)?,
        OutputFormat::Graphml => {
            let mut doc = default_document(topology);
            apply_dynamics_flags(&mut doc, &args.dynamics)?;
            doc.to_system().map_err(config)?;
            netio::write_graphml(&doc, &args.output).map_err(runtime)?;
        }
    }
    println!("wrote {}", args.output.display());
    Ok(())
}
