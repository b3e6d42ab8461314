//! File formats and report serialization.
//!
//! Distance matrices are CSV with N rows of N decimal fields; weights files
//! carry one decimal per line; graph files use `u v length` lines (a single
//! token declares an isolated node). Every float the toolkit writes uses 17
//! significant digits so values round-trip bit-exactly.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mmspace::{DiscreteMMSpace, EdgeList};

/// 17 significant digits, scientific notation. Enough to reconstruct the
/// exact f64 on parse.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Read a square CSV distance matrix.
pub fn read_distance_matrix(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)?;
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let mut row = Vec::with_capacity(record.len());
        for field in record.iter() {
            row.push(parse_number(field, line + 1)?);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Read a weights file: one decimal per line, blank lines skipped.
pub fn read_weights(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (line, raw) in text.lines().enumerate() {
        let token = raw.trim();
        if token.is_empty() {
            continue;
        }
        out.push(parse_number(token, line + 1)?);
    }
    Ok(out)
}

/// Read an edge-list file. Lines hold `u v length`; a line with a single
/// token declares an isolated node; `#` starts a comment.
pub fn read_edge_list(path: &Path) -> Result<EdgeList> {
    let text = fs::read_to_string(path)?;
    let mut graph = EdgeList::default();
    for (line, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [node] => graph.isolated.push((*node).to_string()),
            [u, v, length] => {
                let length = parse_number(length, line + 1)?;
                graph.edges.push(((*u).to_string(), (*v).to_string(), length));
            }
            _ => return Err(Error::MalformedEdgeLine { line: line + 1 }),
        }
    }
    Ok(graph)
}

/// Read a label-keyed weights file: `label weight` per line.
pub fn read_label_weights(path: &Path) -> Result<Vec<(String, f64)>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (line, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [label, weight] => out.push(((*label).to_string(), parse_number(weight, line + 1)?)),
            _ => return Err(Error::MalformedEdgeLine { line: line + 1 }),
        }
    }
    Ok(out)
}

fn parse_number(token: &str, line: usize) -> Result<f64> {
    token.parse::<f64>().map_err(|_| Error::ParseNumber {
        line,
        token: token.to_string(),
    })
}

/// Write the full N x N matrix of a space as CSV.
pub fn write_distance_matrix(path: &Path, space: &DiscreteMMSpace) -> Result<()> {
    let n = space.n_points();
    let mut out = String::new();
    for i in 0..n {
        for j in 0..n {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", fmt_f64(space.distance(i, j)));
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Write the weights of a space, one per line.
pub fn write_weights(path: &Path, space: &DiscreteMMSpace) -> Result<()> {
    let mut out = String::new();
    for &w in space.weights() {
        let _ = writeln!(out, "{}", fmt_f64(w));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Serialize any report to pretty JSON with fixed key order and all floats
/// at 17 significant digits. Non-finite values become `null`.
pub fn to_json(value: &impl Serialize) -> String {
    let mut buf = Vec::new();
    let mut serializer =
        serde_json::Serializer::with_formatter(&mut buf, SigDigitFormatter::new());
    value
        .serialize(&mut serializer)
        .expect("report serialization cannot fail");
    String::from_utf8(buf).expect("serializer emits UTF-8")
}

/// Pretty JSON formatter that pins float formatting to 17 significant
/// digits.
struct SigDigitFormatter {
    pretty: serde_json::ser::PrettyFormatter<'static>,
}

impl SigDigitFormatter {
    fn new() -> Self {
        SigDigitFormatter {
            pretty: serde_json::ser::PrettyFormatter::new(),
        }
    }
}

impl serde_json::ser::Formatter for SigDigitFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.pretty.begin_array(writer)
    }

    fn end_array<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.pretty.end_array(writer)
    }

    fn begin_array_value<W>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.pretty.begin_array_value(writer, first)
    }

    fn end_array_value<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.pretty.end_array_value(writer)
    }

    fn begin_object<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.pretty.begin_object(writer)
    }

    fn end_object<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.pretty.end_object(writer)
    }

    fn begin_object_key<W>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.pretty.begin_object_key(writer, first)
    }

    fn end_object_key<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.pretty.end_object_key(writer)
    }

    fn begin_object_value<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.pretty.begin_object_value(writer)
    }

    fn end_object_value<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.pretty.end_object_value(writer)
    }
}
