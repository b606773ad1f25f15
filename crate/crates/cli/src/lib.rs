//! State files, generators, reproduction cases and the `qgauge` command line
//! on top of `qgauge-core`.

pub mod cli;
pub mod generate;
pub mod report;
pub mod repro;
pub mod state_io;

pub use state_io::{parse_state, read_state, to_toml, write_state, Kind, State, StateFile, StateIoError};
