//! Loader for the Elec2 electricity-price stream.
//!
//! Expected layout: CSV, one instance per row, in temporal order, with an
//! optional header row. Nine columns:
//!
//! ```text
//! date,day,period,nswprice,nswdemand,vicprice,vicdemand,transfer,class
//! ```
//!
//! The first eight are numeric features, the last is `UP` or `DOWN`
//! (case-insensitive; `1`/`0` also accepted). This is the layout of the
//! widely mirrored `elecNormNew.csv`. Any feature column with values outside
//! `[0, 1]` is min-max scaled into it; already normalized columns are left
//! untouched. Rows are never reordered.

use std::fs::File;
use std::path::Path;

use super::LabeledInstance;
use crate::error::{Error, Result};

pub const ELEC2_FEATURES: usize = 8;
pub const ELEC2_ROWS: usize = 45_312;

#[derive(Debug, Clone)]
pub struct Elec2Data {
    pub instances: Vec<LabeledInstance>,
    /// Non-fatal problems, e.g. an unexpected row count.
    pub warnings: Vec<String>,
}

pub fn load_elec2(path: impl AsRef<Path>) -> Result<Elec2Data> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::Data {
        path: path.to_path_buf(),
        message: format!("cannot open Elec2 file: {e}"),
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let mut instances = Vec::new();
    let mut header_line = None;
    let mut last_line = 0;
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.position().map_or(idx + 1, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(idx + 1, |p| p.line() as usize);
        last_line = line;
        if idx == 0 && looks_like_header(&record) {
            header_line = Some(line);
            continue;
        }
        instances.push(parse_row(&record).map_err(|message| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        })?);
    }

    if instances.is_empty() {
        return Err(match header_line {
            Some(h) => Error::Parse {
                path: path.to_path_buf(),
                line: h + 1,
                message: "expected data rows after the header".into(),
            },
            None if last_line == 0 => Error::Data {
                path: path.to_path_buf(),
                message: "file is empty".into(),
            },
            None => Error::Data {
                path: path.to_path_buf(),
                message: "no data rows".into(),
            },
        });
    }

    let mut warnings = Vec::new();
    if instances.len() != ELEC2_ROWS {
        warnings.push(format!(
            "{}: read {} instances, expected {ELEC2_ROWS}",
            path.display(),
            instances.len()
        ));
    }
    normalize_columns(&mut instances);
    Ok(Elec2Data {
        instances,
        warnings,
    })
}

fn looks_like_header(record: &csv::StringRecord) -> bool {
    record
        .get(0)
        .is_some_and(|first| first.parse::<f64>().is_err())
}

fn parse_row(record: &csv::StringRecord) -> std::result::Result<LabeledInstance, String> {
    if record.len() != ELEC2_FEATURES + 1 {
        return Err(format!(
            "expected {} columns, found {}",
            ELEC2_FEATURES + 1,
            record.len()
        ));
    }
    let features = record
        .iter()
        .take(ELEC2_FEATURES)
        .enumerate()
        .map(|(col, field)| {
            field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("column {}: '{field}' is not a number", col + 1))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let class = &record[ELEC2_FEATURES];
    let label = if class.eq_ignore_ascii_case("up") || class == "1" {
        1
    } else if class.eq_ignore_ascii_case("down") || class == "0" {
        0
    } else {
        return Err(format!("class '{class}' is neither UP nor DOWN"));
    };
    Ok(LabeledInstance::new(features, label))
}

fn normalize_columns(instances: &mut [LabeledInstance]) {
    for col in 0..ELEC2_FEATURES {
        let (lo, hi) = instances
            .iter()
            .map(|i| i.features[col])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
        if lo >= 0.0 && hi <= 1.0 {
            continue;
        }
        let span = hi - lo;
        for inst in instances.iter_mut() {
            let v = &mut inst.features[col];
            *v = if span > 0.0 { (*v - lo) / span } else { 0.0 };
        }
    }
}
