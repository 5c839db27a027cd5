//! Configuration parsing and the bit-exact output formats: CSV observable
//! series, binary field snapshots, JSON run summaries, and quick-look SVG
//! charts.

pub mod config;
pub mod snapshot;
pub mod summary;
pub mod svg;
pub mod timeseries;

pub use config::{load_config, parse_config, ConfigError, ExperimentKind, InitialSpec, RunConfig};
pub use snapshot::{read_snapshot, snapshot_len, write_snapshot, SnapshotError};
pub use summary::{FileEntry, RunSummary};
pub use svg::{render_svg_timeseries, PlotError};
pub use timeseries::{
    read_timeseries_csv, timeseries_to_csv, write_timeseries_csv, TimeseriesError, CSV_HEADER,
};
