//! File ingestion and command implementations behind the `vproximity` binary.

pub mod commands;
pub mod graph_file;
pub mod output;

pub use commands::{CliError, Format, Outcome, RunConfig, Selector};
pub use graph_file::{parse_graph, serialize_graph, ParseError};
