//! CSV ingestion: numeric datasets with per-cell missingness tracking and
//! pairwise-complete extraction for the analysis routines.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Options for [`load_csv`].
#[derive(Debug, Clone)]
pub struct CsvOptions {
    pub delimiter: u8,
    pub has_header: bool,
    /// Tokens treated as missing values.
    pub na_tokens: HashSet<String>,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            delimiter: b',',
            has_header: true,
            na_tokens: ["NA", ""].iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// A named collection of equal-length numeric columns with missing cells
/// tracked as `None`.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub labels: Vec<String>,
    pub columns: Vec<Vec<Option<f64>>>,
    pub provenance: String,
}

/// Aligned complete cases of two columns.
#[derive(Debug, Clone)]
pub struct PairedSample {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Rows dropped because either side was missing.
    pub dropped: usize,
}

impl Dataset {
    pub fn n_rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| Error::Shape(format!("no column named '{name}'")))
    }

    /// Complete cases of the two named columns, in row order.
    pub fn pairwise_complete(&self, col_a: &str, col_b: &str) -> Result<PairedSample> {
        let a = self.column_index(col_a)?;
        let b = self.column_index(col_b)?;
        let mut x = Vec::new();
        let mut y = Vec::new();
        let mut dropped = 0;
        for i in 0..self.n_rows() {
            match (self.columns[a][i], self.columns[b][i]) {
                (Some(xi), Some(yi)) => {
                    x.push(xi);
                    y.push(yi);
                }
                _ => dropped += 1,
            }
        }
        if x.len() < 5 {
            return Err(Error::InsufficientData(format!(
                "only {} complete pairs of ({col_a}, {col_b}); need at least 5",
                x.len()
            )));
        }
        Ok(PairedSample { x, y, dropped })
    }

    /// Rows complete across all the named columns, as column vectors.
    /// Used by matrix-valued analyses that need a rectangular input.
    pub fn complete_columns(&self, names: &[String]) -> Result<Vec<Vec<f64>>> {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| self.column_index(n))
            .collect::<Result<_>>()?;
        let mut out = vec![Vec::new(); idx.len()];
        for row in 0..self.n_rows() {
            if idx.iter().all(|&j| self.columns[j][row].is_some()) {
                for (k, &j) in idx.iter().enumerate() {
                    out[k].push(self.columns[j][row].unwrap());
                }
            }
        }
        Ok(out)
    }

    /// Serializes the numeric columns back to RFC-4180-style CSV.
    pub fn to_csv_string(&self) -> String {
        let mut s = String::new();
        s.push_str(&self.labels.join(","));
        s.push('\n');
        for row in 0..self.n_rows() {
            for (j, col) in self.columns.iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                match col[row] {
                    Some(v) => {
                        let _ = write!(s, "{v}");
                    }
                    None => s.push_str("NA"),
                }
            }
            s.push('\n');
        }
        s
    }
}

/// Loads a CSV file into a [`Dataset`]. Non-numeric columns (such as row
/// labels) are dropped; non-numeric tokens inside an otherwise numeric
/// column are an error unless listed in `na_tokens`.
pub fn load_csv(path: &Path, options: &CsvOptions) -> Result<Dataset> {
    let data = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ds = parse_csv(&data, &name, options)?;
    if ds.n_rows() == 0 {
        return Err(Error::Parse {
            line: 1,
            message: "file contains no data rows".into(),
        });
    }
    Ok(ds)
}

fn parse_csv(data: &str, name: &str, options: &CsvOptions) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(options.has_header)
        .flexible(false)
        .from_reader(data.as_bytes());

    let labels: Vec<String> = if options.has_header {
        reader
            .headers()
            .map_err(csv_error)?
            .iter()
            .map(|s| s.trim().to_string())
            .collect()
    } else {
        Vec::new()
    };

    let mut raw_rows: Vec<Vec<String>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        raw_rows.push(record.iter().map(|s| s.trim().to_string()).collect());
    }

    let width = raw_rows
        .first()
        .map(Vec::len)
        .or(Some(labels.len()))
        .unwrap();
    let labels = if options.has_header {
        labels
    } else {
        (0..width).map(|i| format!("col{}", i + 1)).collect()
    };

    // classify each column: numeric (possibly with NAs) or non-numeric
    let mut keep = Vec::new();
    for j in 0..width {
        let mut numeric = true;
        let mut any_value = false;
        for row in &raw_rows {
            let cell = &row[j];
            if options.na_tokens.contains(cell) {
                continue;
            }
            if cell.parse::<f64>().is_ok() {
                any_value = true;
            } else {
                numeric = false;
                break;
            }
        }
        if numeric && !any_value {
            return Err(Error::Parse {
                line: 1,
                message: format!("column '{}' has no non-missing values", labels[j]),
            });
        }
        if numeric {
            keep.push(j);
        }
    }
    if keep.is_empty() {
        return Err(Error::Parse {
            line: 1,
            message: "no numeric columns found".into(),
        });
    }

    let header_offset = if options.has_header { 1 } else { 0 };
    let mut columns: Vec<Vec<Option<f64>>> = vec![Vec::with_capacity(raw_rows.len()); keep.len()];
    for (r, row) in raw_rows.iter().enumerate() {
        for (k, &j) in keep.iter().enumerate() {
            let cell = &row[j];
            if options.na_tokens.contains(cell) {
                columns[k].push(None);
            } else {
                let v = cell.parse::<f64>().map_err(|_| Error::Parse {
                    line: r + 1 + header_offset,
                    message: format!("non-numeric value '{}' in column '{}'", cell, labels[j]),
                })?;
                columns[k].push(Some(v));
            }
        }
    }

    Ok(Dataset {
        name: name.to_string(),
        labels: keep.iter().map(|&j| labels[j].clone()).collect(),
        columns,
        provenance: format!("loaded from CSV ({name})"),
    })
}

fn csv_error(e: csv::Error) -> Error {
    let line = match e.kind() {
        csv::ErrorKind::UnequalLengths { pos, .. } => {
            pos.as_ref().map(|p| p.line() as usize).unwrap_or(0)
        }
        _ => e.position().map(|p| p.line() as usize).unwrap_or(0),
    };
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(data: &str) -> Result<Dataset> {
        parse_csv(data, "test", &CsvOptions::default())
    }

    #[test]
    fn loads_bundled_mtcars() {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/mtcars.csv");
        let ds = load_csv(&path, &CsvOptions::default()).unwrap();
        assert_eq!(ds.n_rows(), 32);
        // the model-name column is non-numeric and dropped
        assert_eq!(ds.labels.len(), 11);
        let pair = ds.pairwise_complete("mpg", "hp").unwrap();
        assert_eq!(pair.x.len(), 32);
        assert_eq!(pair.dropped, 0);
    }

    #[test]
    fn na_tokens_are_masked() {
        let ds = parse("a,b\n1,2\nNA,4\n5,\n7,8\n9,10\n11,12\n13,14\n").unwrap();
        assert_eq!(ds.n_rows(), 7);
        assert_eq!(ds.columns[0][1], None);
        assert_eq!(ds.columns[1][2], None);
        let pair = ds.pairwise_complete("a", "b").unwrap();
        assert_eq!(pair.x.len(), 5);
        assert_eq!(pair.dropped, 2);
    }

    #[test]
    fn ragged_row_reports_line() {
        let err = parse("a,b\n1,2\n3\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert!(line >= 2, "line = {line}"),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn non_numeric_cell_in_numeric_column_is_dropped_column() {
        // a fully non-numeric column is dropped rather than an error
        let ds = parse("name,v\nfoo,1\nbar,2\nbaz,3\nqux,4\nquux,5\n").unwrap();
        assert_eq!(ds.labels, vec!["v"]);
    }

    #[test]
    fn too_few_complete_pairs() {
        let ds = parse("a,b\n1,NA\n2,NA\nNA,3\n4,5\n6,7\n8,9\n").unwrap();
        let err = ds.pairwise_complete("a", "b").unwrap_err();
        assert!(matches!(err, Error::InsufficientData(_)));
    }

    #[test]
    fn roundtrip_preserves_values() {
        let src = "a,b\n1.5,2\nNA,4.25\n5,6\n7,8\n9,10\n";
        let ds = parse(src).unwrap();
        let back = parse(&ds.to_csv_string()).unwrap();
        assert_eq!(ds.labels, back.labels);
        assert_eq!(ds.columns, back.columns);
    }

    #[test]
    fn column_order_does_not_matter() {
        let d1 = parse("a,b\n1,10\n2,20\n3,30\n4,40\n5,50\n").unwrap();
        let d2 = parse("b,a\n10,1\n20,2\n30,3\n40,4\n50,5\n").unwrap();
        let p1 = d1.pairwise_complete("a", "b").unwrap();
        let p2 = d2.pairwise_complete("a", "b").unwrap();
        assert_eq!(p1.x, p2.x);
        assert_eq!(p1.y, p2.y);
    }
}
