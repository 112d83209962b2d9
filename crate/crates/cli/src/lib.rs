//! Parameter sweeps over Ps state, incident energy, screening and ejection
//! angle, with CSV/JSON output for `psbar-xsec`.

pub mod config;
pub mod grid;
pub mod output;
pub mod run;

pub use config::{ConfigError, Format, Mode, RunConfig};
pub use output::{emit, gnuplot_script, parse_csv, write_csv, write_json, EmitError, CSV_HEADER};
pub use run::{grid_points, run, GridPoint, Record, RunError, Status};
