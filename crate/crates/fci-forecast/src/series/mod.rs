//! Time-series tables, windowing, temporal splits, scaling and trend removal.
//!
//! A [`SeriesFrame`] is an hourly multivariate table whose columns are
//! partitioned into forecast targets, past covariates (only observed after the
//! fact) and future covariates (known ahead of time, e.g. planned schedules).
//! Everything downstream — window extraction, date splits, normalization and
//! the moving-average trend decomposition — operates on this one type.

mod detrend;
mod frame;
mod scale;
mod split;
mod window;

pub use detrend::{detrend, detrend_frame, DetrendedFrame, TrendDecomposition};
pub use frame::{load_csv, CsvSchema, SeriesFrame};
pub use scale::{Normalizer, ScaleMethod};
pub use split::{split_by_date, DateRange, SplitIndices};
pub use window::{daily_origins, make_windows, window_count, ForecastWindow};

use thiserror::Error;

/// Errors raised by ingestion, windowing and splitting.
#[derive(Debug, Error)]
pub enum SeriesError {
    /// Missing, duplicated or out-of-order timestamp.
    #[error("timestamp gap at row {row}: expected {expected}, found {found}")]
    Gap {
        row: usize,
        expected: String,
        found: String,
    },
    /// A cell failed to parse as a number or instant.
    #[error("cannot parse {value:?} at row {row}, column {column:?}")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },
    /// Header/column layout does not match the schema.
    #[error("schema error: {0}")]
    Schema(String),
    /// Too few rows for the requested operation.
    #[error("insufficient data: need at least {required} rows, got {actual}")]
    InsufficientData { required: usize, actual: usize },
    /// Split ranges overlap or are out of temporal order.
    #[error("split ranges invalid: {0}")]
    SplitOrder(String),
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, SeriesError>;
