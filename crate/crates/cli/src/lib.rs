//! Sweeps, CSV and SVG emission, figure reproduction and oracle checks on
//! top of `ctsim-core`.

pub mod csv;
mod error;
pub mod figure;
pub mod plot;
pub mod sweep;
pub mod verify;

pub use csv::{emit_csv, format_number, to_csv_string, CSV_HEADER};
pub use error::{CliError, CliResult};
pub use figure::{reproduce_figure, FigureId};
pub use plot::{emit_plot, Quantity};
pub use sweep::{parse_angle, run_sweep, CurveRecord, RGrid, SweepConfig};
pub use verify::{run_verify, CheckOutcome};
