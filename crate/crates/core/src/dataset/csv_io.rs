use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use super::{Dataset, Instance, LabelId};
use crate::error::{Error, Result};

/// Which CSV column holds the class label.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum LabelColumn {
    #[default]
    Last,
    /// Zero-based column index.
    Index(usize),
    /// Header name; implies the file has a header row.
    Name(String),
}

impl FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "last" => Self::Last,
            _ => match s.parse::<usize>() {
                Ok(i) => Self::Index(i),
                Err(_) => Self::Name(s.to_string()),
            },
        })
    }
}

impl fmt::Display for LabelColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Last => f.write_str("last"),
            Self::Index(i) => write!(f, "{i}"),
            Self::Name(n) => f.write_str(n),
        }
    }
}

fn parse_finite(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Loads a comma-separated file. The dataset is named after the file stem.
pub fn load_csv(path: impl AsRef<Path>, label_column: &LabelColumn) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    read_csv(file, name, label_column)
}

/// Parses CSV from any reader.
///
/// A header row is assumed when the label column is addressed by name, or
/// when the first row's label cell is non-numeric and at least one of its
/// feature cells fails to parse.
pub fn read_csv<R: Read>(
    reader: R,
    name: impl Into<String>,
    label_column: &LabelColumn,
) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();

    let first = match records.next() {
        Some(r) => r?,
        None => return Err(Error::EmptyData),
    };
    let width = first.len();
    if width < 2 {
        return Err(Error::ColumnCount {
            row: 1,
            expected: 2,
            found: width,
        });
    }
    let label_idx = match label_column {
        LabelColumn::Last => width - 1,
        LabelColumn::Index(i) if *i < width => *i,
        LabelColumn::Index(i) => return Err(Error::UnknownColumn(i.to_string())),
        LabelColumn::Name(n) => first
            .iter()
            .position(|c| c == n)
            .ok_or_else(|| Error::UnknownColumn(n.clone()))?,
    };
    let has_header = match label_column {
        LabelColumn::Name(_) => true,
        _ => {
            parse_finite(&first[label_idx]).is_none()
                && first
                    .iter()
                    .enumerate()
                    .any(|(j, c)| j != label_idx && parse_finite(c).is_none())
        }
    };
    let column_names: Vec<String> = if has_header {
        first.iter().map(str::to_string).collect()
    } else {
        (0..width)
            .map(|j| {
                if j == label_idx {
                    "label".into()
                } else {
                    format!("x{j}")
                }
            })
            .collect()
    };
    let feature_names: Vec<String> = column_names
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != label_idx)
        .map(|(_, n)| n.clone())
        .collect();

    let mut label_names: Vec<String> = Vec::new();
    let mut instances = Vec::new();
    let data_rows = std::iter::once(Ok(first))
        .filter(|_| !has_header)
        .chain(records);
    for (offset, record) in data_rows.enumerate() {
        let record = record?;
        // 1-based line number in the file.
        let row = offset + 1 + usize::from(has_header);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != width {
            return Err(Error::ColumnCount {
                row,
                expected: width,
                found: record.len(),
            });
        }
        let mut values = Vec::with_capacity(width - 1);
        for (j, cell) in record.iter().enumerate() {
            if j == label_idx {
                continue;
            }
            let v = parse_finite(cell).ok_or_else(|| Error::BadCell {
                row,
                column: column_names[j].clone(),
                value: cell.to_string(),
            })?;
            values.push(v);
        }
        let label = &record[label_idx];
        let lid = match label_names.iter().position(|n| n == label) {
            Some(i) => i,
            None => {
                label_names.push(label.to_string());
                label_names.len() - 1
            }
        };
        instances.push(Instance::new(instances.len(), values, LabelId(lid as u32)));
    }
    if instances.is_empty() {
        return Err(Error::EmptyData);
    }
    Dataset::new(name, feature_names, label_names, instances)
}

/// Writes `ds` with a header row and the label in the last column.
///
/// Values are printed with 17 significant digits, which round-trips every
/// finite `f64` exactly.
pub fn write_csv<W: Write>(ds: &Dataset, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = ds.feature_names().iter().map(String::as_str).collect();
    header.push("label");
    w.write_record(&header)?;
    for inst in ds.instances() {
        let mut row: Vec<String> = inst.values.iter().map(|v| format!("{v:.16e}")).collect();
        row.push(ds.label_name(inst.label).to_string());
        w.write_record(&row)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: "<writer>".into(),
        source,
    })?;
    Ok(())
}
