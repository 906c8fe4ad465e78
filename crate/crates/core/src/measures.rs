//! Performance measures (lower is better) and the standard analysis record.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{self, Girth, Topology};
use crate::integrator::Trajectory;

/// λ₂ below this counts as a disconnected graph.
pub const CONNECTIVITY_TOL: f64 = 1e-9;

pub const DEFAULT_DISCARD_FRACTION: f64 = 0.5;

/// Names accepted by [`measure_by_name`].
pub const MEASURE_NAMES: [&str; 2] = ["eigenratio", "sync_error"];

/// Objective `Q` minimised by a supervisor.
pub trait PerformanceMeasure: Send + Sync {
    fn name(&self) -> &str;

    /// Whether [`evaluate`](Self::evaluate) needs a simulated trajectory.
    fn needs_dynamics(&self) -> bool;

    /// `Q` for a topology and, when required, its trajectory. `+∞` is a valid
    /// result and marks a configuration that must never be accepted.
    fn evaluate(&self, topology: &Topology, trajectory: Option<&Trajectory>) -> Result<f64>;
}

/// `λ_N / λ₂` of the graph Laplacian, `+∞` when disconnected.
pub fn eigenratio(g: &Topology) -> Result<f64> {
    let spectrum = graph::laplacian_spectrum(g)?;
    let l2 = spectrum.lambda_2();
    if l2 < CONNECTIVITY_TOL {
        return Ok(f64::INFINITY);
    }
    Ok(spectrum.lambda_max() / l2)
}

/// Time-averaged mean distance of node states from the node-mean state.
///
/// Samples before `discard_fraction` of the time span are dropped as
/// transient.
pub fn sync_error(traj: &Trajectory, node_count: usize, discard_fraction: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&discard_fraction) {
        return Err(Error::Config(format!(
            "discard fraction must lie in [0, 1), got {discard_fraction}"
        )));
    }
    if node_count == 0 || !traj.dim().is_multiple_of(node_count) {
        return Err(Error::Config(format!(
            "trajectory of dimension {} does not split into {node_count} nodes",
            traj.dim()
        )));
    }
    let times = traj.times();
    let (Some(&first), Some(&last)) = (times.first(), times.last()) else {
        return Err(Error::Domain("empty trajectory".into()));
    };
    let start = first + discard_fraction * (last - first);
    let m = traj.dim() / node_count;
    let mut mean = vec![0.0; m];
    let mut total = 0.0;
    let mut count = 0usize;
    for (k, &t) in times.iter().enumerate() {
        if t < start {
            continue;
        }
        let state = traj.state(k);
        mean.fill(0.0);
        for node in state.chunks_exact(m) {
            for (acc, v) in mean.iter_mut().zip(node) {
                *acc += v;
            }
        }
        mean.iter_mut().for_each(|v| *v /= node_count as f64);
        let spread: f64 = state
            .chunks_exact(m)
            .map(|node| {
                node.iter()
                    .zip(&mean)
                    .map(|(v, c)| (v - c) * (v - c))
                    .sum::<f64>()
                    .sqrt()
            })
            .sum();
        total += spread / node_count as f64;
        count += 1;
    }
    if count == 0 {
        return Err(Error::Domain("no samples left after discarding the transient".into()));
    }
    Ok(total / count as f64)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Eigenratio;

impl PerformanceMeasure for Eigenratio {
    fn name(&self) -> &str {
        "eigenratio"
    }

    fn needs_dynamics(&self) -> bool {
        false
    }

    fn evaluate(&self, topology: &Topology, _trajectory: Option<&Trajectory>) -> Result<f64> {
        eigenratio(topology)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SyncError {
    pub discard_fraction: f64,
}

impl Default for SyncError {
    fn default() -> Self {
        SyncError {
            discard_fraction: DEFAULT_DISCARD_FRACTION,
        }
    }
}

impl PerformanceMeasure for SyncError {
    fn name(&self) -> &str {
        "sync_error"
    }

    fn needs_dynamics(&self) -> bool {
        true
    }

    fn evaluate(&self, topology: &Topology, trajectory: Option<&Trajectory>) -> Result<f64> {
        let traj = trajectory
            .ok_or_else(|| Error::Config("sync_error needs a simulated trajectory".into()))?;
        sync_error(traj, topology.node_count(), self.discard_fraction)
    }
}

/// Looks up a registered measure.
pub fn measure_by_name(name: &str, discard_fraction: f64) -> Result<Box<dyn PerformanceMeasure>> {
    match name {
        "eigenratio" => Ok(Box::new(Eigenratio)),
        "sync_error" => {
            if !(0.0..1.0).contains(&discard_fraction) {
                return Err(Error::Config(format!(
                    "discard fraction must lie in [0, 1), got {discard_fraction}"
                )));
            }
            Ok(Box::new(SyncError { discard_fraction }))
        }
        other => Err(Error::Config(format!(
            "unknown measure '{other}' (registered: {})",
            MEASURE_NAMES.join(", ")
        ))),
    }
}

/// Structural measures logged during evolution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalysisRecord {
    /// `None` for disconnected graphs.
    pub diameter: Option<usize>,
    pub clustering: f64,
    pub girth: Girth,
}

pub fn std_analysis(g: &Topology) -> AnalysisRecord {
    AnalysisRecord {
        diameter: graph::diameter(g).ok(),
        clustering: graph::avg_clustering(g),
        girth: graph::girth(g),
    }
}

impl fmt::Display for AnalysisRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.diameter {
            Some(d) => write!(f, "diameter={d}")?,
            None => write!(f, "diameter=undefined")?,
        }
        write!(f, " clustering={} girth={}", self.clustering, self.girth)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle_graph, path_graph, ring_lattice};

    #[test]
    fn eigenratio_examples() {
        assert!((eigenratio(&complete_graph(4)).unwrap() - 1.0).abs() < 1e-12);
        assert!((eigenratio(&path_graph(3)).unwrap() - 3.0).abs() < 1e-12);
        // Circulant spectrum: λ_j = 4 − 2cos(2πj/10) − 2cos(4πj/10).
        let lam: Vec<f64> = (1..10)
            .map(|j| {
                let th = 2.0 * std::f64::consts::PI * j as f64 / 10.0;
                4.0 - 2.0 * th.cos() - 2.0 * (2.0 * th).cos()
            })
            .collect();
        let want = lam.iter().cloned().fold(f64::MIN, f64::max) / lam.iter().cloned().fold(f64::MAX, f64::min);
        let got = eigenratio(&ring_lattice(10, 4).unwrap()).unwrap();
        assert!((got - want).abs() < 1e-9);
        assert!((got - 3.536).abs() < 1e-3);
    }

    #[test]
    fn disconnected_is_infinite() {
        let g = Topology::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(eigenratio(&g).unwrap(), f64::INFINITY);
    }

    fn constant_traj(values: &[f64], samples: usize) -> Trajectory {
        let mut t = Trajectory::new(values.len());
        for k in 0..samples {
            t.push(k as f64, values).unwrap();
        }
        t
    }

    #[test]
    fn sync_error_examples() {
        assert_eq!(sync_error(&constant_traj(&[1.5, 1.5, 1.5], 5), 3, 0.5).unwrap(), 0.0);
        assert!((sync_error(&constant_traj(&[0.0, 2.0], 5), 2, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(sync_error(&constant_traj(&[3.0, -1.0], 4), 1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn sync_error_discards_transient() {
        let mut t = Trajectory::new(2);
        t.push(0.0, &[0.0, 10.0]).unwrap();
        t.push(1.0, &[0.0, 10.0]).unwrap();
        t.push(2.0, &[1.0, 1.0]).unwrap();
        t.push(3.0, &[1.0, 1.0]).unwrap();
        // Window starts at t = 1.5.
        assert_eq!(sync_error(&t, 2, 0.5).unwrap(), 0.0);
        assert!((sync_error(&t, 2, 0.0).unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn sync_error_errors() {
        assert!(matches!(sync_error(&Trajectory::new(2), 2, 0.5), Err(Error::Domain(_))));
        assert!(sync_error(&constant_traj(&[0.0, 1.0, 2.0], 2), 2, 0.5).is_err());
        assert!(sync_error(&constant_traj(&[0.0, 1.0], 2), 2, 1.0).is_err());
    }

    #[test]
    fn registry() {
        assert!(!measure_by_name("eigenratio", 0.5).unwrap().needs_dynamics());
        assert!(measure_by_name("sync_error", 0.5).unwrap().needs_dynamics());
        let err = measure_by_name("nosuch", 0.5).err().unwrap().to_string();
        assert!(err.contains("eigenratio") && err.contains("sync_error"));
        assert!(SyncError::default().evaluate(&complete_graph(2), None).is_err());
    }

    #[test]
    fn eigenratio_measure_ignores_trajectory() {
        let g = cycle_graph(6);
        let junk = constant_traj(&[1.0], 1);
        assert_eq!(
            Eigenratio.evaluate(&g, Some(&junk)).unwrap(),
            Eigenratio.evaluate(&g, None).unwrap()
        );
    }

    #[test]
    fn analysis_records() {
        let r = std_analysis(&ring_lattice(100, 4).unwrap());
        assert_eq!((r.diameter, r.girth), (Some(25), Girth::Cycle(3)));
        assert!((r.clustering - 0.5).abs() < 1e-15);
        assert_eq!(std_analysis(&complete_graph(4)), AnalysisRecord { diameter: Some(1), clustering: 1.0, girth: Girth::Cycle(3) });
        assert_eq!(std_analysis(&cycle_graph(5)), AnalysisRecord { diameter: Some(2), clustering: 0.0, girth: Girth::Cycle(5) });
        let split = std_analysis(&Topology::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap());
        assert_eq!(split.diameter, None);
        assert_eq!(split.girth, Girth::Cycle(3));
        assert!((split.clustering - 0.5).abs() < 1e-15);
    }
}
