use std::fs::{File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::numeric::{Decimal, HPInterval};

/// First line of every CSV file.
pub const SCHEMA_LINE: &str = "# robin-forge v1 schema";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

/// One output cell. Decimals expand to a value column and a `_pm` bound
/// column.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(u64),
    Text(String),
    Interval(HPInterval),
    Empty,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<HPInterval> for Cell {
    fn from(v: HPInterval) -> Self {
        Cell::Interval(v)
    }
}

impl From<&HPInterval> for Cell {
    fn from(v: &HPInterval) -> Self {
        Cell::Interval(v.clone())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Column kinds, fixed per table so that empty cells still occupy their
/// value and bound slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Plain,
    Decimal,
}

pub struct Column {
    pub name: &'static str,
    pub kind: Kind,
}

pub const fn plain(name: &'static str) -> Column {
    Column {
        name,
        kind: Kind::Plain,
    }
}

pub const fn decimal(name: &'static str) -> Column {
    Column {
        name,
        kind: Kind::Decimal,
    }
}

enum Target {
    Stdout(io::Stdout),
    File(BufWriter<File>),
}

/// Row writer that tracks how many bytes it has produced, so a checkpoint
/// can record where to resume.
pub struct TableWriter {
    target: Target,
    format: Format,
    columns: &'static [Column],
    written: u64,
}

impl TableWriter {
    /// Fresh output with the schema header.
    pub fn create(
        path: Option<&Path>,
        format: Format,
        columns: &'static [Column],
    ) -> io::Result<Self> {
        let target = match path {
            Some(p) => Target::File(BufWriter::new(File::create(p)?)),
            None => Target::Stdout(io::stdout()),
        };
        let mut w = TableWriter {
            target,
            format,
            columns,
            written: 0,
        };
        w.header()?;
        Ok(w)
    }

    /// Continue a file at byte `offset`. Falls back to a fresh file when the
    /// existing one is shorter than the offset; on stdout only new rows are
    /// written.
    pub fn resume(
        path: Option<&Path>,
        format: Format,
        columns: &'static [Column],
        offset: u64,
    ) -> io::Result<Self> {
        let Some(p) = path else {
            return Ok(TableWriter {
                target: Target::Stdout(io::stdout()),
                format,
                columns,
                written: offset,
            });
        };
        let existing = std::fs::metadata(p).map(|m| m.len()).unwrap_or(0);
        if existing < offset {
            return TableWriter::create(path, format, columns);
        }
        let file = OpenOptions::new().write(true).open(p)?;
        file.set_len(offset)?;
        let file = OpenOptions::new().append(true).open(p)?;
        Ok(TableWriter {
            target: Target::File(BufWriter::new(file)),
            format,
            columns,
            written: offset,
        })
    }

    pub fn written(&self) -> u64 {
        self.written
    }

    fn raw(&mut self, s: &str) -> io::Result<()> {
        match &mut self.target {
            Target::Stdout(o) => o.write_all(s.as_bytes())?,
            Target::File(f) => f.write_all(s.as_bytes())?,
        }
        self.written += s.len() as u64;
        Ok(())
    }

    fn header(&mut self) -> io::Result<()> {
        if self.format == Format::Jsonl {
            return Ok(());
        }
        let mut names = Vec::new();
        for c in self.columns {
            names.push(c.name.to_string());
            if c.kind == Kind::Decimal {
                names.push(format!("{}_pm", c.name));
            }
        }
        let line = format!("{SCHEMA_LINE}\n{}\n", names.join(","));
        self.raw(&line)
    }

    pub fn row(&mut self, cells: Vec<Cell>) -> io::Result<()> {
        assert_eq!(cells.len(), self.columns.len(), "row width");
        let line = match self.format {
            Format::Csv => self.csv_line(cells),
            Format::Jsonl => self.json_line(cells),
        };
        self.raw(&line)
    }

    fn csv_line(&self, cells: Vec<Cell>) -> String {
        let mut parts = Vec::new();
        for (col, cell) in self.columns.iter().zip(cells) {
            match (col.kind, cell) {
                (Kind::Decimal, Cell::Interval(x)) => {
                    let d = Decimal::from_interval(&x);
                    parts.push(d.value);
                    parts.push(d.bound);
                }
                (Kind::Decimal, _) => {
                    parts.push(String::new());
                    parts.push(String::new());
                }
                (Kind::Plain, Cell::Int(v)) => parts.push(v.to_string()),
                (Kind::Plain, Cell::Text(t)) => parts.push(t),
                (Kind::Plain, _) => parts.push(String::new()),
            }
        }
        format!("{}\n", parts.join(","))
    }

    fn json_line(&self, cells: Vec<Cell>) -> String {
        let quote = |s: &str| serde_json::to_string(s).expect("string serialises");
        let mut parts = Vec::new();
        for (col, cell) in self.columns.iter().zip(cells) {
            let key = quote(col.name);
            match cell {
                Cell::Interval(x) => {
                    let d = Decimal::from_interval(&x);
                    parts.push(format!("{key}:{}", quote(&d.value)));
                    parts.push(format!(
                        "{}:{}",
                        quote(&format!("{}_pm", col.name)),
                        quote(&d.bound)
                    ));
                }
                Cell::Int(v) => parts.push(format!("{key}:{v}")),
                Cell::Text(t) => parts.push(format!("{key}:{}", quote(&t))),
                Cell::Empty => {
                    parts.push(format!("{key}:null"));
                    if col.kind == Kind::Decimal {
                        parts.push(format!("{}:null", quote(&format!("{}_pm", col.name))));
                    }
                }
            }
        }
        format!("{{{}}}\n", parts.join(","))
    }

    pub fn flush(&mut self) -> io::Result<()> {
        match &mut self.target {
            Target::Stdout(o) => o.flush(),
            Target::File(f) => f.flush(),
        }
    }
}
