use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dynnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynnet"))
        .args(args)
        .output()
        .expect("failed to launch dynnet")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn value<'a>(text: &'a str, key: &str) -> &'a str {
    let prefix = format!("{key}=");
    text.lines()
        .find_map(|l| l.strip_prefix(prefix.as_str()))
        .unwrap_or_else(|| panic!("no {key} in output:\n{text}"))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn edges_in_graphml(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().matches("<edge ").count()
}

#[test]
fn evolve_keeps_node_and_edge_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dynnet(&[
        "evolve", "--nodes", "100", "--degree", "4", "--measure", "eigenratio", "--seed", "42",
        "--max-iterations", "300", "--quiet", "--out-dir", p(dir.path()),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(value(&text, "nodes"), "100");
    assert_eq!(value(&text, "edges"), "200");
    assert!(value(&text, "initial_Q").parse::<f64>().is_ok());
    assert_eq!(edges_in_graphml(&dir.path().join("final.graphml")), 200);
    assert_eq!(edges_in_graphml(&dir.path().join("best.graphml")), 200);
    let log = fs::read_to_string(dir.path().join("evolution.csv")).unwrap();
    assert_eq!(log.lines().count(), 301);
}

#[test]
fn zero_iterations_writes_the_initial_topology() {
    let dir = tempfile::tempdir().unwrap();
    let init = dir.path().join("init.graphml");
    assert!(dynnet(&["generate", "--nodes", "30", "-o", p(&init)]).status.success());
    let out = dynnet(&[
        "evolve", "--graph", p(&init), "--max-iterations", "0", "--out-dir", p(dir.path()),
    ]);
    assert!(out.status.success());
    assert_eq!(value(&stdout(&out), "halt_reason"), "max_iterations");
    let before = fs::read_to_string(&init).unwrap();
    assert_eq!(fs::read_to_string(dir.path().join("final.graphml")).unwrap(), before);
    assert_eq!(fs::read_to_string(dir.path().join("best.graphml")).unwrap(), before);
}

#[test]
fn unknown_measure_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dynnet(&["evolve", "--measure", "nosuch", "--out-dir", p(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("eigenratio") && err.contains("sync_error"), "{err}");
    assert!(!dir.path().join("evolution.csv").exists());
}

#[test]
fn bad_flag_values_exit_one() {
    for args in [
        &["evolve", "--temp-reduce", "1.5"][..],
        &["simulate", "--length", "-1"][..],
        &["simulate", "--kind", "complete", "--nodes", "2", "--init-cond", "1 2"][..],
        &["measure", "--node-dyn", "Lorenz"][..],
        &["evolve", "--mutation", "shuffle"][..],
    ] {
        let out = dynnet(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn single_node_trajectory_has_three_state_columns() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("one.gml");
    fs::write(&graph, "graph [ node [ id 0 ] ]").unwrap();
    let out = dynnet(&["simulate", "--graph", p(&graph), "--length", "100", "--out-dir", p(dir.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let traj = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let mut lines = traj.lines();
    assert_eq!(lines.next().unwrap(), "t,x_0_0,x_0_1,x_0_2");
    assert!(lines.all(|l| l.split(',').count() == 4));
}

#[test]
fn identical_states_stay_synchronized() {
    let dir = tempfile::tempdir().unwrap();
    let out = dynnet(&[
        "simulate", "--kind", "complete", "--nodes", "2", "--init-cond", "0.5 -0.3 0.1",
        "--out-dir", p(dir.path()),
    ]);
    assert!(out.status.success());
    let err: f64 = value(&stdout(&out), "sync_error").parse().unwrap();
    assert!(err < 1e-9, "{err}");
}

#[test]
fn fixed_step_sample_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = dynnet(&[
        "simulate", "--kind", "complete", "--nodes", "2", "--fixed-step", "--init-step", "0.01",
        "--sample-interval", "0.01", "--length", "100", "--out-dir", p(dir.path()),
    ]);
    assert!(out.status.success());
    assert_eq!(value(&stdout(&out), "samples"), "10001");
    let traj = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert_eq!(traj.lines().count(), 10002);
}

#[test]
fn generated_ring_has_known_structure() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["ring.graphml", "ring.gml"] {
        let path = dir.path().join(name);
        assert!(dynnet(&["generate", "--kind", "ring", "--nodes", "100", "--degree", "4", "-o", p(&path)])
            .status
            .success());
        let out = dynnet(&["measure", "--graph", p(&path)]);
        assert!(out.status.success());
        let text = stdout(&out);
        assert_eq!(value(&text, "diameter"), "25");
        assert_eq!(value(&text, "clustering").parse::<f64>().unwrap(), 0.5);
        assert_eq!(value(&text, "girth"), "3");
    }
}

#[test]
fn complete_graph_eigenratio_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k4.gml");
    fs::write(
        &path,
        "graph [\n  node [ id 1 ]\n  node [ id 2 ]\n  node [ id 3 ]\n  node [ id 4 ]\n  \
         edge [ source 1 target 2 ]\n  edge [ source 1 target 3 ]\n  edge [ source 1 target 4 ]\n  \
         edge [ source 2 target 3 ]\n  edge [ source 2 target 4 ]\n  edge [ source 3 target 4 ]\n]\n",
    )
    .unwrap();
    let out = dynnet(&["measure", "--graph", p(&path)]);
    assert!(out.status.success());
    let q: f64 = value(&stdout(&out), "Q").parse().unwrap();
    assert!((q - 1.0).abs() < 1e-12, "{q}");
}

#[test]
fn odd_degree_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("odd.graphml");
    let out = dynnet(&["generate", "--nodes", "20", "--degree", "3", "-o", p(&path)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!path.exists());
}

#[test]
fn same_seed_gives_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let run = |dir: &Path| {
        let out = dynnet(&[
            "evolve", "--nodes", "30", "--max-iterations", "500", "--seed", "9", "--quiet",
            "--out-dir", p(dir),
        ]);
        assert!(out.status.success());
    };
    run(a.path());
    run(b.path());
    for file in ["evolution.csv", "final.graphml", "best.graphml"] {
        assert_eq!(
            fs::read(a.path().join(file)).unwrap(),
            fs::read(b.path().join(file)).unwrap(),
            "{file}"
        );
    }
}

#[test]
fn sync_error_measure_runs_through_the_cli() {
    let out = dynnet(&[
        "measure", "--kind", "ring", "--nodes", "6", "--measure", "sync_error", "--length", "10",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let q: f64 = value(&stdout(&out), "Q").parse().unwrap();
    assert!(q.is_finite() && q >= 0.0);
}

#[test]
fn help_exits_zero() {
    assert!(dynnet(&["--help"]).status.success());
    assert_eq!(dynnet(&["frobnicate"]).status.code(), Some(1));
}
