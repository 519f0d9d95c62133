use std::fs;
use std::path::Path;

use crate::error::{CliError, CliResult};

/// Wide histogram table: bin centres from the header, one labelled frequency row per observation.
#[derive(Debug, Clone)]
pub struct Histograms {
    pub midpoints: Vec<f64>,
    pub ids: Vec<String>,
    pub freqs: Vec<Vec<f64>>,
}

fn parse_num(path: &Path, s: &str, what: &str) -> CliResult<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CliError::input(path, format!("{what} '{s}' is not a number")))
}

fn open(path: &Path) -> CliResult<csv::Reader<fs::File>> {
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(file))
}

fn records(path: &Path) -> CliResult<Vec<csv::StringRecord>> {
    open(path)?
        .records()
        .map(|r| {
            r.map_err(|e| match e.into_kind() {
                csv::ErrorKind::Io(io) => CliError::io(path, io),
                other => CliError::input(path, format!("malformed CSV: {other:?}")),
            })
        })
        .collect()
}

pub fn read_histograms(path: &Path) -> CliResult<Histograms> {
    let recs = records(path)?;
    let (header, rows) = recs
        .split_first()
        .ok_or_else(|| CliError::input(path, "empty file"))?;
    if header.len() < 2 {
        return Err(CliError::input(
            path,
            "header needs an id column and at least one bin",
        ));
    }
    let midpoints = header
        .iter()
        .skip(1)
        .map(|s| parse_num(path, s, "bin centre"))
        .collect::<CliResult<Vec<_>>>()?;
    let mut ids = Vec::with_capacity(rows.len());
    let mut freqs = Vec::with_capacity(rows.len());
    for (line, r) in rows.iter().enumerate() {
        ids.push(r[0].trim().to_string());
        let values = r
            .iter()
            .skip(1)
            .map(|s| parse_num(path, s, &format!("frequency on data row {}", line + 1)))
            .collect::<CliResult<Vec<_>>>()?;
        freqs.push(values);
    }
    Ok(Histograms {
        midpoints,
        ids,
        freqs,
    })
}

/// Inner knots separated by commas or whitespace; `#` starts a comment.
pub fn read_knots(path: &Path) -> CliResult<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|t| !t.is_empty())
        .map(|t| parse_num(path, t, "knot"))
        .collect()
}

/// Curves read back from a CSV in either column (`x,…`) or row (`id,<x values>`) layout.
#[derive(Debug, Clone)]
pub struct Curves {
    pub xs: Vec<f64>,
    pub series: Vec<(String, Vec<f64>)>,
}

pub fn read_curves(path: &Path) -> CliResult<Curves> {
    let recs = records(path)?;
    let (header, rows) = recs
        .split_first()
        .ok_or_else(|| CliError::input(path, "empty file"))?;
    if header.len() < 2 {
        return Err(CliError::input(path, "need at least two columns"));
    }
    let cell = |r: &csv::StringRecord, i: usize| parse_num(path, &r[i], "value");
    if header[0].trim() == "x" {
        let xs = rows
            .iter()
            .map(|r| cell(r, 0))
            .collect::<CliResult<Vec<_>>>()?;
        let series = (1..header.len())
            .map(|c| {
                let ys = rows
                    .iter()
                    .map(|r| cell(r, c))
                    .collect::<CliResult<Vec<_>>>()?;
                Ok((header[c].to_string(), ys))
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Curves { xs, series })
    } else {
        let xs = header
            .iter()
            .skip(1)
            .map(|s| parse_num(path, s, "abscissa"))
            .collect::<CliResult<Vec<_>>>()?;
        let series = rows
            .iter()
            .map(|r| {
                let ys = (1..r.len())
                    .map(|c| cell(r, c))
                    .collect::<CliResult<Vec<_>>>()?;
                Ok((r[0].to_string(), ys))
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Curves { xs, series })
    }
}
