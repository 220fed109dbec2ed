//! CSV ingestion: two numeric columns picked by header name or 0-based
//! index, plus an optional text column used for grouping.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, Trim};

use crate::error::{CliError, CliResult};

/// Two numeric columns read from a file.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub x_name: String,
    pub y_name: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub group: Option<Vec<String>>,
}

/// Splits `"a,b"` into two column selectors.
pub fn parse_cols(spec: &str) -> CliResult<(String, String)> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] if !a.is_empty() && !b.is_empty() => Ok((a.to_string(), b.to_string())),
        _ => Err(CliError::Config(format!(
            "--cols expects two columns separated by a comma, got '{spec}'"
        ))),
    }
}

fn is_index(token: &str) -> bool {
    !token.is_empty() && token.bytes().all(|b| b.is_ascii_digit())
}

fn resolve(token: &str, header: Option<&StringRecord>, width: usize) -> CliResult<usize> {
    if let Some(h) = header {
        if let Some(i) = h.iter().position(|f| f == token) {
            return Ok(i);
        }
    }
    if is_index(token) {
        let i: usize = token.parse().map_err(|_| CliError::Config(format!("bad column index '{token}'")))?;
        if i < width {
            return Ok(i);
        }
        return Err(CliError::Config(format!(
            "column index {i} out of range: the file has {width} columns"
        )));
    }
    Err(CliError::Config(match header {
        Some(h) => format!(
            "column '{token}' not found; available: {}",
            h.iter().collect::<Vec<_>>().join(", ")
        ),
        None => format!("column '{token}' given by name but the file has no header row"),
    }))
}

fn line_of(record: &StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

fn csv_error(e: csv::Error) -> CliError {
    match e.position() {
        Some(p) => CliError::Parse(format!("line {}: {e}", p.line())),
        None => CliError::Parse(e.to_string()),
    }
}

/// Reads the selected columns.
///
/// The first row is a header when a column is selected by name, or when its
/// fields in the selected positions are not numbers.
pub fn read_table<R: Read>(
    reader: R,
    cols: &(String, String),
    group: Option<&str>,
) -> CliResult<Table> {
    let mut rdr = ReaderBuilder::new()
        .has_headers(false)
        .trim(Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();
    let first = match records.next() {
        Some(r) => r.map_err(csv_error)?,
        None => return Err(CliError::Parse("input has no rows".into())),
    };
    let width = first.len();
    let named = !is_index(&cols.0) || !is_index(&cols.1) || group.is_some_and(|g| !is_index(g));
    let header_present = named || {
        let xi = resolve(&cols.0, None, width)?;
        let yi = resolve(&cols.1, None, width)?;
        first[xi].parse::<f64>().is_err() || first[yi].parse::<f64>().is_err()
    };
    let header = header_present.then(|| first.clone());
    let xi = resolve(&cols.0, header.as_ref(), width)?;
    let yi = resolve(&cols.1, header.as_ref(), width)?;
    let gi = group.map(|g| resolve(g, header.as_ref(), width)).transpose()?;
    let name = |i: usize| header.as_ref().map_or_else(|| i.to_string(), |h| h[i].to_string());

    let mut table = Table {
        x_name: name(xi),
        y_name: name(yi),
        x: Vec::new(),
        y: Vec::new(),
        group: gi.map(|_| Vec::new()),
    };
    let rest = records.map(|r| r.map_err(csv_error));
    let rows = (!header_present).then_some(Ok(first)).into_iter().chain(rest);
    for row in rows {
        let row = row?;
        let number = |i: usize| -> CliResult<f64> {
            let cell = &row[i];
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(CliError::Parse(format!(
                    "line {}: column '{}' holds '{cell}', which is not a finite number",
                    line_of(&row),
                    name(i)
                ))),
            }
        };
        table.x.push(number(xi)?);
        table.y.push(number(yi)?);
        if let (Some(g), Some(groups)) = (gi, table.group.as_mut()) {
            groups.push(row[g].to_string());
        }
    }
    if table.x.is_empty() {
        return Err(CliError::Parse("input has a header but no data rows".into()));
    }
    Ok(table)
}

pub fn read_table_path(path: &Path, cols: &(String, String), group: Option<&str>) -> CliResult<Table> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    read_table(file, cols, group)
}

/// Writes two columns with a header, the layout [`read_table`] reads back.
pub fn write_pairs<W: std::io::Write>(out: W, names: (&str, &str), x: &[f64], y: &[f64]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([names.0, names.1])?;
    for (a, b) in x.iter().zip(y) {
        // `{:?}` prints the shortest string that parses back to the same f64
        w.write_record([format!("{a:?}"), format!("{b:?}")])?;
    }
    w.flush()?;
    Ok(())
}
