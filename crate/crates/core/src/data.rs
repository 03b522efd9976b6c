//! Datasets, projections, class partitions and their CSV / JSON formats.
//!
//! Dataset CSV: header `f0,...,f{d-1},label`, one point per row. Labels may be
//! arbitrary strings and are remapped to dense ids in order of first
//! appearance. Projection CSV: header `x,y[,z][,label]`; a label column is
//! accepted and ignored. Coordinates are written with 17 significant digits
//! so that save/load round-trips are lossless.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::hash::Hash;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Matrix, Result, Scalar};

/// Assignment of every point index to exactly one class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl Partition {
    /// Dense remap of arbitrary labels, preserving first-appearance order.
    pub fn from_labels<L: Eq + Hash + Clone>(labels: &[L]) -> Self {
        let mut ids: HashMap<L, usize> = HashMap::new();
        let mut class_of = Vec::with_capacity(labels.len());
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            let next = ids.len();
            let id = *ids.entry(l.clone()).or_insert(next);
            if id == classes.len() {
                classes.push(Vec::new());
            }
            classes[id].push(i);
            class_of.push(id);
        }
        Self { class_of, classes }
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    /// Number of classes.
    pub fn m(&self) -> usize {
        self.classes.len()
    }

    #[inline]
    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.class_of
    }

    /// Member indices of each class, ascending.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

/// Free-function form of [`Partition::from_labels`].
pub fn partition_from_labels<L: Eq + Hash + Clone>(labels: &[L]) -> Partition {
    Partition::from_labels(labels)
}

/// High-dimensional points with one class label per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<F> {
    points: Matrix<F>,
    partition: Partition,
    label_names: Vec<String>,
}

impl<F: Scalar> Dataset<F> {
    /// Validates and wraps points and labels. Labels are remapped to dense ids.
    pub fn new<L: Eq + Hash + Clone + ToString>(points: Matrix<F>, labels: &[L]) -> Result<Self> {
        if points.rows() < 3 {
            return Err(Error::Invalid(format!(
                "dataset needs at least 3 points, got {}",
                points.rows()
            )));
        }
        if points.cols() < 1 {
            return Err(Error::Invalid("dataset needs at least one feature".into()));
        }
        if labels.len() != points.rows() {
            return Err(Error::Dimension(format!(
                "{} labels for {} points",
                labels.len(),
                points.rows()
            )));
        }
        if let Some((row, column)) = points.first_non_finite() {
            return Err(Error::NonFinite { row, column });
        }
        let partition = Partition::from_labels(labels);
        let mut label_names = vec![String::new(); partition.m()];
        for (l, &c) in labels.iter().zip(partition.labels()) {
            if label_names[c].is_empty() {
                label_names[c] = l.to_string();
            }
        }
        Ok(Self {
            points,
            partition,
            label_names,
        })
    }

    pub fn points(&self) -> &Matrix<F> {
        &self.points
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Dense class ids, one per row.
    pub fn labels(&self) -> &[usize] {
        self.partition.labels()
    }

    /// Original label text for each dense class id.
    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn n(&self) -> usize {
        self.points.rows()
    }

    pub fn d(&self) -> usize {
        self.points.cols()
    }

    pub fn m(&self) -> usize {
        self.partition.m()
    }

    pub fn cast<G: Scalar>(&self) -> Dataset<G> {
        Dataset {
            points: self.points.cast(),
            partition: self.partition.clone(),
            label_names: self.label_names.clone(),
        }
    }

    /// The dataset's own coordinates viewed as a projection.
    pub fn as_projection(&self) -> Projection<F> {
        Projection {
            points: self.points.clone(),
        }
    }

    /// Rows `idx`, in order, with labels carried along.
    pub fn subset(&self, idx: &[usize]) -> Result<Self> {
        let labels: Vec<&str> = idx
            .iter()
            .map(|&i| self.label_names[self.partition.class_of(i)].as_str())
            .collect();
        Dataset::new(self.points.select_rows(idx), &labels)
    }
}

/// Low-dimensional coordinates aligned row-for-row with a [`Dataset`].
#[derive(Debug, Clone, PartialEq)]
pub struct Projection<F> {
    points: Matrix<F>,
}

impl<F: Scalar> Projection<F> {
    pub fn new(points: Matrix<F>) -> Result<Self> {
        if points.cols() < 1 {
            return Err(Error::Invalid(
                "projection needs at least one column".into(),
            ));
        }
        if let Some((row, column)) = points.first_non_finite() {
            return Err(Error::NonFinite { row, column });
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &Matrix<F> {
        &self.points
    }

    pub fn into_points(self) -> Matrix<F> {
        self.points
    }

    pub fn n(&self) -> usize {
        self.points.rows()
    }

    /// Target dimension.
    pub fn t(&self) -> usize {
        self.points.cols()
    }

    /// Checks that this projection has one row per dataset point.
    pub fn check_aligned(&self, dataset: &Dataset<F>) -> Result<()> {
        check_aligned(dataset.n(), self.n())
    }

    pub fn cast<G: Scalar>(&self) -> Projection<G> {
        Projection {
            points: self.points.cast(),
        }
    }
}

pub(crate) fn check_aligned(dataset: usize, projection: usize) -> Result<()> {
    if dataset != projection {
        return Err(Error::Alignment {
            dataset,
            projection,
        });
    }
    Ok(())
}

/// Output record of one metric evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricResult {
    pub metric: String,
    pub value: f64,
    pub params: BTreeMap<String, serde_json::Value>,
    pub elapsed_seconds: f64,
}

impl MetricResult {
    pub fn new(metric: impl Into<String>, value: f64) -> Self {
        Self {
            metric: metric.into(),
            value,
            params: BTreeMap::new(),
            elapsed_seconds: 0.0,
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("MetricResult serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }
}

pub(crate) fn fmt_coord<F: Scalar>(v: F) -> String {
    format!("{:.16e}", v.as_f64())
}

fn open(path: &Path) -> Result<String> {
    let mut s = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut s))
        .map_err(|e| Error::io(path, e))?;
    Ok(s)
}

struct RawTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn read_table(text: &str) -> Result<RawTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .iter()
        .map(str::to_string)
        .collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(Error::Parse {
            line: 1,
            message: "missing header".into(),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        if rec.len() != header.len() {
            return Err(Error::Ragged {
                line,
                expected: header.len(),
                found: rec.len(),
            });
        }
        rows.push(rec.iter().map(str::to_string).collect());
    }
    Ok(RawTable { header, rows })
}

fn parse_coord<F: Scalar>(s: &str, row: usize, column: usize) -> Result<F> {
    let v: f64 = s.parse().map_err(|_| Error::Parse {
        line: row + 2,
        message: format!("column {column}: `{s}` is not a number"),
    })?;
    if !v.is_finite() {
        return Err(Error::NonFinite { row, column });
    }
    Ok(F::of(v))
}

/// Reads a labeled dataset CSV.
pub fn load_dataset<F: Scalar>(path: impl AsRef<Path>) -> Result<Dataset<F>> {
    parse_dataset(&open(path.as_ref())?)
}

pub fn parse_dataset<F: Scalar>(text: &str) -> Result<Dataset<F>> {
    let table = read_table(text)?;
    let label_col = table
        .header
        .iter()
        .position(|h| h == "label")
        .ok_or(Error::MissingLabel)?;
    if label_col + 1 != table.header.len() {
        return Err(Error::Parse {
            line: 1,
            message: "`label` must be the final column".into(),
        });
    }
    let d = label_col;
    let mut data = Vec::with_capacity(table.rows.len() * d);
    let mut labels = Vec::with_capacity(table.rows.len());
    for (r, row) in table.rows.iter().enumerate() {
        for (c, cell) in row[..d].iter().enumerate() {
            data.push(parse_coord(cell, r, c)?);
        }
        labels.push(row[d].clone());
    }
    Dataset::new(Matrix::new(table.rows.len(), d, data)?, &labels)
}

pub fn save_dataset<F: Scalar>(ds: &Dataset<F>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(format_dataset(ds).as_bytes())
        .map_err(|e| Error::io(path, e))
}

pub fn format_dataset<F: Scalar>(ds: &Dataset<F>) -> String {
    let mut header: Vec<String> = (0..ds.d()).map(|c| format!("f{c}")).collect();
    header.push("label".into());
    let labels: Vec<&str> = ds
        .labels()
        .iter()
        .map(|&c| ds.label_names()[c].as_str())
        .collect();
    write_table(&header, ds.points(), Some(&labels))
}

fn write_table<F: Scalar>(
    header: &[String],
    points: &Matrix<F>,
    labels: Option<&[&str]>,
) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for (i, row) in points.iter_rows().enumerate() {
        let mut rec: Vec<String> = row.iter().map(|&v| fmt_coord(v)).collect();
        if let Some(l) = labels {
            rec.push(l[i].to_string());
        }
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

fn projection_header(t: usize) -> Vec<String> {
    if t <= 3 {
        ["x", "y", "z"][..t].iter().map(|s| s.to_string()).collect()
    } else {
        (0..t).map(|c| format!("p{c}")).collect()
    }
}

/// Reads a projection CSV. Any `label` column is ignored.
pub fn load_projection<F: Scalar>(path: impl AsRef<Path>) -> Result<Projection<F>> {
    parse_projection(&open(path.as_ref())?)
}

/// Reads a projection CSV and checks it against the dataset's row count.
pub fn load_projection_for<F: Scalar>(
    path: impl AsRef<Path>,
    dataset: &Dataset<F>,
) -> Result<Projection<F>> {
    let p = load_projection(path)?;
    p.check_aligned(dataset)?;
    Ok(p)
}

pub fn parse_projection<F: Scalar>(text: &str) -> Result<Projection<F>> {
    let table = read_table(text)?;
    let coord_cols: Vec<usize> = (0..table.header.len())
        .filter(|&c| table.header[c] != "label")
        .collect();
    let mut data = Vec::with_capacity(table.rows.len() * coord_cols.len());
    for (r, row) in table.rows.iter().enumerate() {
        for (c, &col) in coord_cols.iter().enumerate() {
            data.push(parse_coord(&row[col], r, c)?);
        }
    }
    Projection::new(Matrix::new(table.rows.len(), coord_cols.len(), data)?)
}

pub fn format_projection<F: Scalar>(p: &Projection<F>, labels: Option<&[&str]>) -> String {
    let mut header = projection_header(p.t());
    if labels.is_some() {
        header.push("label".into());
    }
    write_table(&header, p.points(), labels)
}

/// Writes a projection CSV; with a dataset, its labels are appended as a
/// `label` column.
pub fn save_projection<F: Scalar>(
    p: &Projection<F>,
    dataset: Option<&Dataset<F>>,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let labels: Option<Vec<&str>> = dataset.map(|ds| {
        ds.labels()
            .iter()
            .map(|&c| ds.label_names()[c].as_str())
            .collect()
    });
    if let Some(ds) = dataset {
        p.check_aligned(ds)?;
    }
    let body = format_projection(p, labels.as_deref());
    std::fs::write(path, body).map_err(|e| Error::io(path, e))
}

/// Reads a single-column `label` CSV (e.g. a clustering of a projection).
pub fn load_labels(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    let table = read_table(&open(path.as_ref())?)?;
    let col = table
        .header
        .iter()
        .position(|h| h == "label")
        .ok_or(Error::MissingLabel)?;
    let raw: Vec<&str> = table.rows.iter().map(|r| r[col].as_str()).collect();
    Ok(Partition::from_labels(&raw).labels().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_string_labels_densely() {
        let csv = "f0,f1,label\n0,0,a\n1,0,a\n0,1,b\n1,1,b\n";
        let ds: Dataset<f64> = parse_dataset(csv).unwrap();
        assert_eq!((ds.n(), ds.d(), ds.m()), (4, 2, 2));
        assert_eq!(ds.labels(), &[0, 0, 1, 1]);
        assert_eq!(ds.label_names(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn crlf_is_accepted() {
        let csv = "f0,label\r\n0.5,x\r\n1.5,y\r\n2.5,x\r\n";
        let ds: Dataset<f64> = parse_dataset(csv).unwrap();
        assert_eq!(ds.points().as_slice(), &[0.5, 1.5, 2.5]);
    }

    #[test]
    fn nan_is_rejected() {
        let csv = "f0,f1,label\n0,0,a\n1,NaN,a\n0,1,b\n";
        assert!(matches!(
            parse_dataset::<f64>(csv),
            Err(Error::NonFinite { row: 1, column: 1 })
        ));
    }

    #[test]
    fn malformed_and_ragged_rows_are_rejected() {
        let bad = "f0,f1,label\n0,zero,a\n1,1,a\n0,1,b\n";
        assert!(matches!(
            parse_dataset::<f64>(bad),
            Err(Error::Parse { .. })
        ));
        let ragged = "f0,f1,label\n0,0,a\n1,a\n0,1,b\n";
        assert!(matches!(
            parse_dataset::<f64>(ragged),
            Err(Error::Ragged { line: 3, .. })
        ));
    }

    #[test]
    fn missing_label_column() {
        let csv = "f0,f1\n0,0\n1,1\n2,2\n";
        assert!(matches!(
            parse_dataset::<f64>(csv),
            Err(Error::MissingLabel)
        ));
    }

    #[test]
    fn too_few_points() {
        let csv = "f0,label\n0,a\n1,b\n";
        assert!(matches!(parse_dataset::<f64>(csv), Err(Error::Invalid(_))));
    }

    #[test]
    fn partition_examples() {
        let p = Partition::from_labels(&[0, 0, 1, 1, 1]);
        assert_eq!(p.classes(), &[vec![0, 1], vec![2, 3, 4]]);
        assert_eq!(p.m(), 2);
        let p = Partition::from_labels(&[7, 7, 7]);
        assert_eq!(p.m(), 1);
        let p = Partition::from_labels(&[5, 2, 5]);
        assert_eq!(p.labels(), &[0, 1, 0]);
        assert_eq!(p.m(), 2);
    }

    #[test]
    fn projection_csv_header_and_label_column() {
        let m = Matrix::from_rows(&[[0.0, 1.0], [2.0, 3.0], [4.0, 5.0]]).unwrap();
        let p = Projection::new(m).unwrap();
        let text = format_projection(&p, Some(&["a", "b", "a"]));
        assert!(text.starts_with("x,y,label\n"));
        let back: Projection<f64> = parse_projection(&text).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn misaligned_projection_is_rejected() {
        let ds: Dataset<f64> = parse_dataset("f0,label\n0,a\n1,b\n2,b\n").unwrap();
        let p: Projection<f64> = parse_projection("x,y\n0,0\n1,1\n").unwrap();
        assert!(matches!(
            p.check_aligned(&ds),
            Err(Error::Alignment {
                dataset: 3,
                projection: 2
            })
        ));
    }

    #[test]
    fn metric_result_json_shape() {
        let r = MetricResult::new("cadi", 0.25).with_param("seed", 7);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["metric"], "cadi");
        assert_eq!(v["value"], 0.25);
        assert_eq!(v["params"]["seed"], 7);
        assert!(v["elapsed_seconds"].is_number());
        assert_eq!(MetricResult::from_json(&r.to_json()).unwrap(), r);
    }
}
