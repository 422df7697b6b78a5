use std::fs;
use std::path::Path;

use chrono::{NaiveDateTime, TimeDelta};
use ndarray::Array2;

use super::{Result, SeriesError};

/// Timestamped multivariate table split into target, past-covariate and
/// future-covariate channel groups. Rows are hourly with no gaps.
#[derive(Debug, Clone)]
pub struct SeriesFrame {
    timestamps: Vec<NaiveDateTime>,
    targets: Array2<f64>,
    past_covariates: Array2<f64>,
    future_covariates: Array2<f64>,
    target_names: Vec<String>,
    past_names: Vec<String>,
    future_names: Vec<String>,
}

impl SeriesFrame {
    /// Builds a frame and validates its invariants: strictly increasing hourly
    /// timestamps, equal row counts and at least one target channel.
    pub fn new(
        timestamps: Vec<NaiveDateTime>,
        targets: Array2<f64>,
        past_covariates: Array2<f64>,
        future_covariates: Array2<f64>,
        target_names: Vec<String>,
        past_names: Vec<String>,
        future_names: Vec<String>,
    ) -> Result<Self> {
        let t = timestamps.len();
        if targets.ncols() == 0 {
            return Err(SeriesError::Schema("at least one target channel is required".into()));
        }
        for (label, m) in [
            ("targets", &targets),
            ("past covariates", &past_covariates),
            ("future covariates", &future_covariates),
        ] {
            if m.nrows() != t {
                return Err(SeriesError::Schema(format!(
                    "{label} has {} rows but there are {t} timestamps",
                    m.nrows()
                )));
            }
        }
        if targets.ncols() != target_names.len()
            || past_covariates.ncols() != past_names.len()
            || future_covariates.ncols() != future_names.len()
        {
            return Err(SeriesError::Schema("channel name count does not match matrix width".into()));
        }
        for row in 1..t {
            let expected = timestamps[row - 1] + TimeDelta::hours(1);
            if timestamps[row] != expected {
                return Err(SeriesError::Gap {
                    row,
                    expected: expected.to_string(),
                    found: timestamps[row].to_string(),
                });
            }
        }
        Ok(Self {
            timestamps,
            targets,
            past_covariates,
            future_covariates,
            target_names,
            past_names,
            future_names,
        })
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    pub fn timestamps(&self) -> &[NaiveDateTime] {
        &self.timestamps
    }

    pub fn targets(&self) -> &Array2<f64> {
        &self.targets
    }

    pub fn past_covariates(&self) -> &Array2<f64> {
        &self.past_covariates
    }

    pub fn future_covariates(&self) -> &Array2<f64> {
        &self.future_covariates
    }

    pub fn target_names(&self) -> &[String] {
        &self.target_names
    }

    pub fn past_names(&self) -> &[String] {
        &self.past_names
    }

    pub fn future_names(&self) -> &[String] {
        &self.future_names
    }

    /// Number of target channels (D_t).
    pub fn n_targets(&self) -> usize {
        self.targets.ncols()
    }

    /// Number of past-covariate channels.
    pub fn n_past(&self) -> usize {
        self.past_covariates.ncols()
    }

    /// Number of future-covariate channels.
    pub fn n_future(&self) -> usize {
        self.future_covariates.ncols()
    }

    /// Contiguous sub-frame over `rows` (half-open).
    pub fn subframe(&self, rows: std::ops::Range<usize>) -> SeriesFrame {
        SeriesFrame {
            timestamps: self.timestamps[rows.clone()].to_vec(),
            targets: self.targets.slice(ndarray::s![rows.clone(), ..]).to_owned(),
            past_covariates: self.past_covariates.slice(ndarray::s![rows.clone(), ..]).to_owned(),
            future_covariates: self.future_covariates.slice(ndarray::s![rows, ..]).to_owned(),
            target_names: self.target_names.clone(),
            past_names: self.past_names.clone(),
            future_names: self.future_names.clone(),
        }
    }

    pub(crate) fn targets_mut(&mut self) -> &mut Array2<f64> {
        &mut self.targets
    }

    pub(crate) fn past_covariates_mut(&mut self) -> &mut Array2<f64> {
        &mut self.past_covariates
    }

    pub(crate) fn future_covariates_mut(&mut self) -> &mut Array2<f64> {
        &mut self.future_covariates
    }

    /// Serializes the frame in the prefixed CSV format understood by
    /// [`load_csv`]: ISO timestamps, `target:`/`past:`/`future:` headers.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("timestamp");
        for n in &self.target_names {
            out.push_str(&format!(",target:{n}"));
        }
        for n in &self.past_names {
            out.push_str(&format!(",past:{n}"));
        }
        for n in &self.future_names {
            out.push_str(&format!(",future:{n}"));
        }
        out.push('\n');
        for row in 0..self.len() {
            out.push_str(&self.timestamps[row].format("%Y-%m-%dT%H:%M:%S").to_string());
            for c in 0..self.targets.ncols() {
                out.push_str(&format!(",{}", fmt_cell(self.targets[(row, c)])));
            }
            for c in 0..self.past_covariates.ncols() {
                out.push_str(&format!(",{}", fmt_cell(self.past_covariates[(row, c)])));
            }
            for c in 0..self.future_covariates.ncols() {
                out.push_str(&format!(",{}", fmt_cell(self.future_covariates[(row, c)])));
            }
            out.push('\n');
        }
        out
    }
}

fn fmt_cell(v: f64) -> String {
    // Shortest representation that round-trips through f64 parsing.
    let mut s = format!("{v}");
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

/// How CSV columns map onto the three channel groups.
#[derive(Debug, Clone)]
pub enum CsvSchema {
    /// Header convention: column 1 `timestamp`, the rest prefixed with
    /// `target:`, `past:` or `future:`.
    Prefixed,
    /// Explicit mapping for external files with arbitrary headers.
    Explicit {
        timestamp: String,
        targets: Vec<String>,
        past: Vec<String>,
        future: Vec<String>,
    },
}

enum ColumnRole {
    Timestamp,
    Target(usize),
    Past(usize),
    Future(usize),
    Ignored,
}

/// Reads a CSV file into a validated [`SeriesFrame`].
///
/// Accepts `YYYY-MM-DDTHH:MM:SS` and `YYYY-MM-DD HH:MM:SS` timestamps.
/// Duplicate or missing hours fail with [`SeriesError::Gap`], non-numeric
/// cells with [`SeriesError::Parse`], unknown headers with
/// [`SeriesError::Schema`].
pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<SeriesFrame> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| SeriesError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_csv(&text, schema)
}

/// [`load_csv`] over an in-memory string.
pub fn parse_csv(text: &str, schema: &CsvSchema) -> Result<SeriesFrame> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| SeriesError::Schema("empty file".into()))?;
    let headers: Vec<&str> = header.split(',').map(str::trim).collect();

    let mut target_names = Vec::new();
    let mut past_names = Vec::new();
    let mut future_names = Vec::new();
    let mut roles = Vec::with_capacity(headers.len());
    let mut ts_col = None;

    match schema {
        CsvSchema::Prefixed => {
            for (idx, h) in headers.iter().enumerate() {
                if idx == 0 {
                    if *h != "timestamp" {
                        return Err(SeriesError::Schema(format!(
                            "first column must be \"timestamp\", found {h:?}"
                        )));
                    }
                    ts_col = Some(0);
                    roles.push(ColumnRole::Timestamp);
                } else if let Some(name) = h.strip_prefix("target:") {
                    roles.push(ColumnRole::Target(target_names.len()));
                    target_names.push(name.to_string());
                } else if let Some(name) = h.strip_prefix("past:") {
                    roles.push(ColumnRole::Past(past_names.len()));
                    past_names.push(name.to_string());
                } else if let Some(name) = h.strip_prefix("future:") {
                    roles.push(ColumnRole::Future(future_names.len()));
                    future_names.push(name.to_string());
                } else {
                    return Err(SeriesError::Schema(format!(
                        "unknown column prefix in header {h:?} (expected target:/past:/future:)"
                    )));
                }
            }
        }
        CsvSchema::Explicit {
            timestamp,
            targets,
            past,
            future,
        } => {
            for h in headers.iter() {
                if *h == timestamp {
                    ts_col = Some(roles.len());
                    roles.push(ColumnRole::Timestamp);
                } else if let Some(i) = targets.iter().position(|n| n == h) {
                    roles.push(ColumnRole::Target(i));
                } else if let Some(i) = past.iter().position(|n| n == h) {
                    roles.push(ColumnRole::Past(i));
                } else if let Some(i) = future.iter().position(|n| n == h) {
                    roles.push(ColumnRole::Future(i));
                } else {
                    roles.push(ColumnRole::Ignored);
                }
            }
            for (group, names) in [("target", targets), ("past", past), ("future", future)] {
                for n in names {
                    if !headers.contains(&n.as_str()) {
                        return Err(SeriesError::Schema(format!(
                            "{group} column {n:?} not present in header"
                        )));
                    }
                }
            }
            target_names = targets.clone();
            past_names = past.clone();
            future_names = future.clone();
        }
    }
    if ts_col.is_none() {
        return Err(SeriesError::Schema("timestamp column not found".into()));
    }
    if target_names.is_empty() {
        return Err(SeriesError::Schema("schema defines no target columns".into()));
    }

    let mut timestamps = Vec::new();
    let mut tgt_rows: Vec<f64> = Vec::new();
    let mut past_rows: Vec<f64> = Vec::new();
    let mut fut_rows: Vec<f64> = Vec::new();
    let (dt, dp, df) = (target_names.len(), past_names.len(), future_names.len());

    for (line_idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let row = line_idx; // 1-based data row == line index since header is line 0
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != roles.len() {
            return Err(SeriesError::Schema(format!(
                "row {row} has {} cells, header has {}",
                cells.len(),
                roles.len()
            )));
        }
        let mut tgt = vec![0.0; dt];
        let mut pst = vec![0.0; dp];
        let mut fut = vec![0.0; df];
        for (cell, role) in cells.iter().zip(&roles) {
            match role {
                ColumnRole::Timestamp => {
                    let ts = parse_instant(cell).ok_or_else(|| SeriesError::Parse {
                        row,
                        column: "timestamp".into(),
                        value: (*cell).to_string(),
                    })?;
                    timestamps.push(ts);
                }
                ColumnRole::Target(i) => tgt[*i] = parse_num(cell, row, &target_names[*i])?,
                ColumnRole::Past(i) => pst[*i] = parse_num(cell, row, &past_names[*i])?,
                ColumnRole::Future(i) => fut[*i] = parse_num(cell, row, &future_names[*i])?,
                ColumnRole::Ignored => {}
            }
        }
        tgt_rows.extend(tgt);
        past_rows.extend(pst);
        fut_rows.extend(fut);
    }

    let t = timestamps.len();
    let targets = Array2::from_shape_vec((t, dt), tgt_rows).expect("row-major target buffer");
    let past = Array2::from_shape_vec((t, dp), past_rows).expect("row-major past buffer");
    let future = Array2::from_shape_vec((t, df), fut_rows).expect("row-major future buffer");
    SeriesFrame::new(timestamps, targets, past, future, target_names, past_names, future_names)
}

fn parse_num(cell: &str, row: usize, column: &str) -> Result<f64> {
    cell.parse::<f64>().map_err(|_| SeriesError::Parse {
        row,
        column: column.to_string(),
        value: cell.to_string(),
    })
}

fn parse_instant(cell: &str) -> Option<NaiveDateTime> {
    NaiveDateTime::parse_from_str(cell, "%Y-%m-%dT%H:%M:%S")
        .or_else(|_| NaiveDateTime::parse_from_str(cell, "%Y-%m-%d %H:%M:%S"))
        .or_else(|_| NaiveDateTime::parse_from_str(cell, "%Y-%m-%dT%H:%M"))
        .or_else(|_| NaiveDateTime::parse_from_str(cell, "%Y-%m-%d %H:%M"))
        .ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefixed_schema_maps_channels() {
        let csv = "timestamp,target:load,future:gtkm\n\
                   2024-01-01T00:00:00,1.0,10\n\
                   2024-01-01T01:00:00,2.0,11\n\
                   2024-01-01T02:00:00,3.0,12\n";
        let frame = parse_csv(csv, &CsvSchema::Prefixed).unwrap();
        assert_eq!(frame.len(), 3);
        assert_eq!(frame.n_targets(), 1);
        assert_eq!(frame.n_past(), 0);
        assert_eq!(frame.n_future(), 1);
        assert_eq!(frame.targets()[(2, 0)], 3.0);
        assert_eq!(frame.future_covariates()[(0, 0)], 10.0);
    }

    #[test]
    fn duplicate_timestamp_is_gap_error() {
        let csv = "timestamp,target:load\n\
                   2024-01-01T00:00:00,1\n\
                   2024-01-01T00:00:00,2\n";
        match parse_csv(csv, &CsvSchema::Prefixed) {
            Err(SeriesError::Gap { row, .. }) => assert_eq!(row, 1),
            other => panic!("expected Gap, got {other:?}"),
        }
    }

    #[test]
    fn missing_hour_is_gap_error() {
        let csv = "timestamp,target:load\n\
                   2024-01-01T00:00:00,1\n\
                   2024-01-01T02:00:00,2\n";
        assert!(matches!(parse_csv(csv, &CsvSchema::Prefixed), Err(SeriesError::Gap { .. })));
    }

    #[test]
    fn non_numeric_cell_reports_row_and_column() {
        let csv = "timestamp,target:load\n\
                   2024-01-01T00:00:00,1\n\
                   2024-01-01T01:00:00,oops\n";
        match parse_csv(csv, &CsvSchema::Prefixed) {
            Err(SeriesError::Parse { row, column, value }) => {
                assert_eq!(row, 2);
                assert_eq!(column, "load");
                assert_eq!(value, "oops");
            }
            other => panic!("expected Parse, got {other:?}"),
        }
    }

    #[test]
    fn unknown_prefix_is_schema_error() {
        let csv = "timestamp,load\n2024-01-01T00:00:00,1\n";
        assert!(matches!(parse_csv(csv, &CsvSchema::Prefixed), Err(SeriesError::Schema(_))));
    }

    #[test]
    fn explicit_schema_with_space_timestamps() {
        let csv = "date,HUFL,OT\n\
                   2016-07-01 00:00:00,5.8,30.5\n\
                   2016-07-01 01:00:00,5.7,27.8\n";
        let schema = CsvSchema::Explicit {
            timestamp: "date".into(),
            targets: vec!["OT".into()],
            past: vec!["HUFL".into()],
            future: vec![],
        };
        let frame = parse_csv(csv, &schema).unwrap();
        assert_eq!(frame.n_targets(), 1);
        assert_eq!(frame.n_past(), 1);
        assert_eq!(frame.targets()[(1, 0)], 27.8);
        assert_eq!(frame.past_covariates()[(0, 0)], 5.8);
    }

    #[test]
    fn csv_round_trip() {
        let csv = "timestamp,target:load,past:temp,future:gtkm\n\
                   2024-01-01T00:00:00,1.5,-3.25,10.0\n\
                   2024-01-01T01:00:00,2.0,4.0,11.5\n";
        let frame = parse_csv(csv, &CsvSchema::Prefixed).unwrap();
        let again = parse_csv(&frame.to_csv(), &CsvSchema::Prefixed).unwrap();
        assert_eq!(frame.targets(), again.targets());
        assert_eq!(frame.past_covariates(), again.past_covariates());
        assert_eq!(frame.timestamps(), again.timestamps());
    }
}
