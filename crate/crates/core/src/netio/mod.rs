//! File formats: GML topologies, GraphML dynamical networks, CSV logs.

mod csv;
mod gml;
mod graphml;

pub use self::csv::{write_log_csv, write_trajectory_csv, LOG_HEADER};
pub use self::gml::{parse_gml, read_gml, to_gml, write_gml};
pub use self::graphml::{
    parse_graphml, read_graphml, to_graphml, write_graphml, DynNetDocument, DynOverride, DynSpec,
};

/// Formats a float as the shortest string that parses back to the same value.
pub(crate) fn format_f64(v: f64) -> String {
    format!("{v:?}")
}
