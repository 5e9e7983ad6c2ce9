use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::Path;

use crate::error::{CliError, Result};

pub const COLUMNS: [&str; 8] = [
    "experiment",
    "algorithm",
    "n",
    "rep",
    "wall_ns",
    "result",
    "cells_touched",
    "space_cells",
];

/// One benchmark or verification observation; one CSV row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub experiment: String,
    pub algorithm: String,
    pub n: usize,
    pub rep: u32,
    /// Empty for rows that are not timed (verification, derived metrics, skips).
    pub wall_ns: Option<u64>,
    pub result: Outcome,
    pub cells_touched: u64,
    pub space_cells: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Value(u64),
    Skipped(String),
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Outcome::Value(v) => write!(f, "{v}"),
            Outcome::Skipped(reason) => write!(f, "skipped: {reason}"),
        }
    }
}

impl BenchRecord {
    pub fn new(experiment: &str, algorithm: impl Into<String>, n: usize, rep: u32) -> Self {
        Self {
            experiment: experiment.to_owned(),
            algorithm: algorithm.into(),
            n,
            rep,
            wall_ns: None,
            result: Outcome::Value(0),
            cells_touched: 0,
            space_cells: 0,
        }
    }

    pub fn timed(mut self, wall_ns: u64) -> Self {
        self.wall_ns = Some(wall_ns);
        self
    }

    pub fn value(mut self, v: u64) -> Self {
        self.result = Outcome::Value(v);
        self
    }

    pub fn skipped(mut self, reason: impl Into<String>) -> Self {
        self.result = Outcome::Skipped(reason.into());
        self
    }

    pub fn cells(mut self, touched: u64, space: u64) -> Self {
        self.cells_touched = touched;
        self.space_cells = space;
        self
    }

    fn fields(&self) -> [String; 8] {
        [
            self.experiment.clone(),
            self.algorithm.clone(),
            self.n.to_string(),
            self.rep.to_string(),
            self.wall_ns.map(|w| w.to_string()).unwrap_or_default(),
            self.result.to_string(),
            self.cells_touched.to_string(),
            self.space_cells.to_string(),
        ]
    }

    fn from_fields(row: &csv::StringRecord) -> Result<Self> {
        let bad = |what: &str| CliError::Config(format!("malformed {what} in row {row:?}"));
        let get = |i: usize| row.get(i).ok_or_else(|| bad(COLUMNS[i]));
        let parse_u64 = |i: usize| get(i)?.parse::<u64>().map_err(|_| bad(COLUMNS[i]));
        let wall = get(4)?;
        let result = get(5)?;
        Ok(Self {
            experiment: get(0)?.to_owned(),
            algorithm: get(1)?.to_owned(),
            n: get(2)?.parse().map_err(|_| bad("n"))?,
            rep: get(3)?.parse().map_err(|_| bad("rep"))?,
            wall_ns: if wall.is_empty() {
                None
            } else {
                Some(wall.parse().map_err(|_| bad("wall_ns"))?)
            },
            result: match result.strip_prefix("skipped: ") {
                Some(reason) => Outcome::Skipped(reason.to_owned()),
                None => Outcome::Value(result.parse().map_err(|_| bad("result"))?),
            },
            cells_touched: parse_u64(6)?,
            space_cells: parse_u64(7)?,
        })
    }
}

/// Writes rows with a header line first.
pub fn write_records<W: Write>(out: W, records: &[BenchRecord], header: bool) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    if header {
        w.write_record(COLUMNS)?;
    }
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Appends rows to `path`, writing the header only when the file is new or empty.
pub fn append_records(path: &Path, records: &[BenchRecord]) -> Result<()> {
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let empty = file.metadata()?.len() == 0;
    write_records(file, records, empty)
}

/// Writes to `path` when given (appending), otherwise to stdout.
pub fn emit(path: Option<&Path>, records: &[BenchRecord]) -> Result<()> {
    match path {
        Some(p) => append_records(p, records),
        None => write_records(io::stdout().lock(), records, true),
    }
}

pub fn read_records<R: io::Read>(input: R) -> Result<Vec<BenchRecord>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = reader.headers()?.clone();
    if header.iter().ne(COLUMNS.iter().copied()) {
        return Err(CliError::Config(format!(
            "unexpected CSV header {header:?}, expected {}",
            COLUMNS.join(",")
        )));
    }
    reader
        .records()
        .map(|row| BenchRecord::from_fields(&row?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<BenchRecord> {
        vec![
            BenchRecord::new("linear-vs-quadratic", "lattice", 64, 0)
                .timed(1234)
                .value(7)
                .cells(60, 12167),
            BenchRecord::new("linear-vs-quadratic", "lattice", 4096, 1).skipped("allocation failed"),
            BenchRecord::new("verify", "schedule-completeness", 257, 0).value(257),
        ]
    }

    #[test]
    fn header_and_rows() {
        let mut buf = Vec::new();
        write_records(&mut buf, &sample(), true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "experiment,algorithm,n,rep,wall_ns,result,cells_touched,space_cells");
        assert_eq!(lines[1], "linear-vs-quadratic,lattice,64,0,1234,7,60,12167");
        assert_eq!(lines[2], "linear-vs-quadratic,lattice,4096,1,,skipped: allocation failed,0,0");
        assert_eq!(lines[3], "verify,schedule-completeness,257,0,,257,0,0");
        assert_eq!(read_records(text.as_bytes()).unwrap(), sample());
    }

    #[test]
    fn append_writes_header_once() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rows.csv");
        append_records(&path, &sample()[..1]).unwrap();
        append_records(&path, &sample()[1..]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("experiment,")).count(), 1);
        assert_eq!(read_records(text.as_bytes()).unwrap(), sample());
    }

    #[test]
    fn wrong_header_rejected() {
        let err = read_records("a,b\n1,2\n".as_bytes()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
