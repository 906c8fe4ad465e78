use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::integrator::Trajectory;
use crate::supervisor::IterationRecord;

pub const LOG_HEADER: &str = "iteration,temperature,Q_current,Q_best,accepted,diameter,clustering,girth";

/// Evolution log, one row per trial. Analysis columns are empty on rows
/// without an analysis sample.
pub fn write_log_csv(log: &[IterationRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, log_csv(log)).map_err(|e| Error::io(path, e))
}

pub(crate) fn log_csv(log: &[IterationRecord]) -> String {
    let mut out = String::with_capacity(64 * (log.len() + 1));
    out.push_str(LOG_HEADER);
    out.push('\n');
    for r in log {
        let _ = write!(
            out,
            "{},{},{},{},{}",
            r.iteration,
            r.temperature,
            r.q_current,
            r.q_best,
            u8::from(r.accepted)
        );
        match &r.analysis {
            Some(a) => {
                let diameter = a.diameter.map_or_else(|| "undefined".to_string(), |d| d.to_string());
                let _ = write!(out, ",{diameter},{},{}", a.clustering, a.girth);
            }
            None => out.push_str(",,,"),
        }
        out.push('\n');
    }
    out
}

/// Trajectory table with columns `t,x_<node>_<component>…`.
pub fn write_trajectory_csv(traj: &Trajectory, node_count: usize, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if node_count == 0 || !traj.dim().is_multiple_of(node_count) {
        return Err(Error::Config(format!(
            "trajectory of dimension {} does not split into {node_count} nodes",
            traj.dim()
        )));
    }
    let m = traj.dim() / node_count;
    let mut out = String::from("t");
    for i in 0..node_count {
        for c in 0..m {
            let _ = write!(out, ",x_{i}_{c}");
        }
    }
    out.push('\n');
    for (k, t) in traj.times().iter().enumerate() {
        let _ = write!(out, "{t}");
        for v in traj.state(k) {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}
