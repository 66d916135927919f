//! Immutable point tables and CSV ingestion.
//!
//! Features are stored row-major as `f64`. Labels are kept as opaque
//! strings and only ever compared for equality.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// `n` points of common dimension `m`, addressed by 0-based index.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    dim: usize,
    coords: Vec<f64>,
}

impl Dataset {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.first().map(Vec::len).ok_or(Error::EmptyInput)?;
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::BadDimension);
        }
        Self::from_flat(dim, rows.into_iter().flatten().collect())
    }

    /// Builds a dataset from a row-major buffer of `n * dim` values.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.len() % dim != 0 {
            return Err(Error::BadDimension);
        }
        if coords.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(pos) = coords.iter().position(|v| !v.is_finite()) {
            return Err(Error::BadCell {
                row: (pos / dim + 1) as u64,
                column: pos % dim,
                value: coords[pos].to_string(),
            });
        }
        Ok(Self { dim, coords })
    }

    /// One-dimensional dataset, handy for fixtures.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        Self::from_flat(1, values.to_vec())
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Plain Euclidean distance between two points.
    #[inline]
    pub fn euclidean(&self, i: usize, j: usize) -> f64 {
        squared_distance(self.point(i), self.point(j)).sqrt()
    }

    /// Writes the feature table as CSV without header or labels.
    ///
    /// Values use Rust's shortest round-trip formatting, so reading the
    /// output back reproduces every coordinate exactly.
    pub fn write_csv<W: Write>(&self, mut out: W, delimiter: u8) -> Result<()> {
        let sep = delimiter as char;
        for p in self.points() {
            let mut line = String::new();
            for (c, v) in p.iter().enumerate() {
                if c > 0 {
                    line.push(sep);
                }
                line.push_str(&v.to_string());
            }
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    // Four independent accumulators let the compiler vectorize the loop.
    let mut acc = [0.0f64; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for k in 0..4 {
            let d = x[k] - y[k];
            acc[k] += d * d;
        }
    }
    let tail: f64 = ra.iter().zip(rb).map(|(x, y)| (x - y) * (x - y)).sum();
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// A dataset with optional ground-truth class tokens.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub dataset: Dataset,
    pub labels: Option<Vec<String>>,
}

impl LabeledDataset {
    pub fn distinct_labels(&self) -> usize {
        let mut seen: Vec<&str> = self
            .labels
            .iter()
            .flatten()
            .map(String::as_str)
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Index(usize),
    /// Resolved against the header row; requires `has_header`.
    Name(String),
}

impl std::str::FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.to_string()),
        })
    }
}

#[derive(Debug, Clone)]
pub struct CsvOptions {
    pub delimiter: u8,
    pub has_header: bool,
    pub label_column: Option<LabelColumn>,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            delimiter: b',',
            has_header: false,
            label_column: None,
        }
    }
}

pub fn load_csv<P: AsRef<Path>>(path: P, options: &CsvOptions) -> Result<LabeledDataset> {
    read_csv(File::open(path)?, options)
}

pub fn read_csv<R: Read>(reader: R, options: &CsvOptions) -> Result<LabeledDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(options.has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let label_idx = match &options.label_column {
        None => None,
        Some(LabelColumn::Index(i)) => Some(*i),
        Some(LabelColumn::Name(name)) => {
            if !options.has_header {
                return Err(Error::MissingLabelColumn(name.clone()));
            }
            let headers = rdr.headers()?;
            Some(
                headers
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::MissingLabelColumn(name.clone()))?,
            )
        }
    };

    let mut width = None;
    let mut coords = Vec::new();
    let mut labels = label_idx.map(|_| Vec::new());
    for record in rdr.records() {
        let record = record?;
        let row = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::RaggedRow {
                row,
                expected,
                found: record.len(),
            });
        }
        if let Some(li) = label_idx {
            if li >= expected {
                return Err(Error::MissingLabelColumn(li.to_string()));
            }
        }
        for (column, cell) in record.iter().enumerate() {
            if Some(column) == label_idx {
                if let Some(l) = labels.as_mut() {
                    l.push(cell.to_string());
                }
                continue;
            }
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => coords.push(v),
                _ => {
                    return Err(Error::BadCell {
                        row,
                        column,
                        value: cell.to_string(),
                    })
                }
            }
        }
    }

    let width = width.ok_or(Error::EmptyInput)?;
    let dim = width - usize::from(label_idx.is_some());
    if dim == 0 {
        return Err(Error::BadDimension);
    }
    Ok(LabeledDataset {
        dataset: Dataset::from_flat(dim, coords)?,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, options: &CsvOptions) -> Result<LabeledDataset> {
        read_csv(text.as_bytes(), options)
    }

    #[test]
    fn single_column_no_header() {
        let ds = parse("0\n1\n3", &CsvOptions::default()).unwrap();
        assert_eq!(ds.dataset.len(), 3);
        assert_eq!(ds.dataset.dim(), 1);
        assert_eq!(ds.dataset.point(2), &[3.0]);
        assert!(ds.labels.is_none());
    }

    #[test]
    fn ragged_row_reports_line() {
        match parse("1,2\n3", &CsvOptions::default()) {
            Err(Error::RaggedRow { row, expected, found }) => {
                assert_eq!((row, expected, found), (2, 2, 1));
            }
            other => panic!("expected ragged-row error, got {other:?}"),
        }
    }

    #[test]
    fn non_numeric_cell() {
        match parse("1,2\n3,x\n", &CsvOptions::default()) {
            Err(Error::BadCell { row, column, .. }) => assert_eq!((row, column), (2, 1)),
            other => panic!("expected bad-cell error, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_rejected() {
        assert!(matches!(
            parse("1,NaN\n", &CsvOptions::default()),
            Err(Error::BadCell { .. })
        ));
        assert!(matches!(
            parse("inf\n", &CsvOptions::default()),
            Err(Error::BadCell { .. })
        ));
    }

    #[test]
    fn empty_file() {
        assert!(matches!(
            parse("", &CsvOptions::default()),
            Err(Error::EmptyInput)
        ));
        let header_only = CsvOptions {
            has_header: true,
            ..Default::default()
        };
        assert!(matches!(parse("a,b\n", &header_only), Err(Error::EmptyInput)));
    }

    #[test]
    fn label_column_by_index_keeps_feature_order() {
        let opts = CsvOptions {
            label_column: Some(LabelColumn::Index(1)),
            ..Default::default()
        };
        let ds = parse("1,a,2\n3,b,4\n", &opts).unwrap();
        assert_eq!(ds.dataset.dim(), 2);
        assert_eq!(ds.dataset.point(0), &[1.0, 2.0]);
        assert_eq!(ds.dataset.point(1), &[3.0, 4.0]);
        assert_eq!(ds.labels.unwrap(), vec!["a", "b"]);
    }

    #[test]
    fn label_column_by_name() {
        let opts = CsvOptions {
            delimiter: b';',
            has_header: true,
            label_column: Some(LabelColumn::Name("class".into())),
        };
        let ds = parse("x;class;y\n1;007;2\n", &opts).unwrap();
        // Labels stay verbatim, no numeric coercion.
        assert_eq!(ds.labels.unwrap(), vec!["007"]);
        assert_eq!(ds.dataset.point(0), &[1.0, 2.0]);

        let missing = CsvOptions {
            label_column: Some(LabelColumn::Name("nope".into())),
            ..opts
        };
        assert!(matches!(
            parse("x;class\n1;a\n", &missing),
            Err(Error::MissingLabelColumn(_))
        ));
    }

    #[test]
    fn duplicates_are_allowed() {
        let ds = parse("1,1\n1,1\n", &CsvOptions::default()).unwrap();
        assert_eq!(ds.dataset.len(), 2);
    }

    #[test]
    fn label_column_parse() {
        assert_eq!("4".parse::<LabelColumn>().unwrap(), LabelColumn::Index(4));
        assert_eq!(
            "class".parse::<LabelColumn>().unwrap(),
            LabelColumn::Name("class".into())
        );
    }

    #[test]
    fn rejects_ragged_constructor_input() {
        assert!(Dataset::new(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(Dataset::new(vec![]).is_err());
        assert!(Dataset::new(vec![vec![]]).is_err());
    }
}
