use chrono::NaiveDate;

use super::{Result, SeriesError, SeriesFrame};

/// Inclusive date range (whole days).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DateRange {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl DateRange {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Self {
        Self { start, end }
    }
}

impl std::fmt::Display for DateRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Half-open row ranges of the train/validation/test partitions within the
/// original frame. Keeping indices (rather than detached copies) lets
/// evaluation windows reach back across a partition boundary for their input
/// history without ever mixing target rows between partitions.
#[derive(Debug, Clone)]
pub struct SplitIndices {
    pub train: std::ops::Range<usize>,
    pub val: std::ops::Range<usize>,
    pub tests: Vec<std::ops::Range<usize>>,
}

impl SplitIndices {
    pub fn train_frame(&self, frame: &SeriesFrame) -> SeriesFrame {
        frame.subframe(self.train.clone())
    }

    pub fn val_frame(&self, frame: &SeriesFrame) -> SeriesFrame {
        frame.subframe(self.val.clone())
    }

    pub fn test_frames(&self, frame: &SeriesFrame) -> Vec<SeriesFrame> {
        self.tests.iter().map(|r| frame.subframe(r.clone())).collect()
    }
}

/// Partitions the frame rows by inclusive date ranges.
///
/// Train must precede validation, which must precede every test range, so
/// that evaluation indices are always later than anything trained on. Test
/// ranges may overlap each other (a large test period can encompass a smaller
/// one); each is evaluated independently.
pub fn split_by_date(
    frame: &SeriesFrame,
    train: DateRange,
    val: DateRange,
    tests: &[DateRange],
) -> Result<SplitIndices> {
    for (label, r) in [("train", &train), ("val", &val)] {
        if r.start > r.end {
            return Err(SeriesError::SplitOrder(format!("{label} range {r} is reversed")));
        }
    }
    if val.start <= train.end {
        return Err(SeriesError::SplitOrder(format!(
            "validation range {val} must start after the training range {train} ends"
        )));
    }
    if tests.is_empty() {
        return Err(SeriesError::SplitOrder("at least one test range is required".into()));
    }
    for t in tests {
        if t.start > t.end {
            return Err(SeriesError::SplitOrder(format!("test range {t} is reversed")));
        }
        if t.start <= val.end {
            return Err(SeriesError::SplitOrder(format!(
                "test range {t} must start after the validation range {val} ends"
            )));
        }
    }

    let train_rows = rows_for(frame, train)?;
    let val_rows = rows_for(frame, val)?;
    let test_rows = tests
        .iter()
        .map(|r| rows_for(frame, *r))
        .collect::<Result<Vec<_>>>()?;
    Ok(SplitIndices {
        train: train_rows,
        val: val_rows,
        tests: test_rows,
    })
}

fn rows_for(frame: &SeriesFrame, range: DateRange) -> Result<std::ops::Range<usize>> {
    let ts = frame.timestamps();
    let start = ts.partition_point(|t| t.date() < range.start);
    let end = ts.partition_point(|t| t.date() <= range.end);
    if start == end {
        return Err(SeriesError::SplitOrder(format!(
            "range {range} selects no rows (frame spans {}..{})",
            ts.first().map(|t| t.to_string()).unwrap_or_default(),
            ts.last().map(|t| t.to_string()).unwrap_or_default(),
        )));
    }
    Ok(start..end)
}
