use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

/// Full-precision float formatting used in every CSV.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    w.write_record(header).map_err(|e| csv_io(path, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| csv_io(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn csv_io(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::input(path, format!("{other:?}")),
    }
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Curves as columns: `x, name_1, …`.
pub fn curve_columns(
    xs: &[f64],
    names: &[String],
    curves: &[Vec<f64>],
) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header = vec!["x".to_string()];
    header.extend(names.iter().cloned());
    let rows = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let mut r = vec![num(x)];
            r.extend(curves.iter().map(|c| num(c[i])));
            r
        })
        .collect();
    (header, rows)
}

/// Curves as rows: header `id, x_1, …`, one row per curve.
pub fn curve_rows(
    xs: &[f64],
    ids: &[String],
    curves: &[Vec<f64>],
) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header = vec!["id".to_string()];
    header.extend(xs.iter().map(|&x| num(x)));
    let rows = ids
        .iter()
        .zip(curves)
        .map(|(id, c)| {
            let mut r = vec![id.clone()];
            r.extend(c.iter().map(|&v| num(v)));
            r
        })
        .collect();
    (header, rows)
}

/// Run record written as `manifest.json`.
pub struct Manifest {
    command: &'static str,
    config: Map<String, Value>,
    defaults: Vec<&'static str>,
    results: Map<String, Value>,
    files: Vec<String>,
}

impl Manifest {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            config: Map::new(),
            defaults: Vec::new(),
            results: Map::new(),
            files: Vec::new(),
        }
    }

    /// Resolves an optional setting, recording whether the default was applied.
    pub fn setting<T: Serialize>(&mut self, name: &'static str, given: Option<T>, default: T) -> T {
        let value = match given {
            Some(v) => v,
            None => {
                self.defaults.push(name);
                default
            }
        };
        self.set(name, &value);
        value
    }

    pub fn set<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) {
        self.config.insert(name.to_string(), to_value(value));
    }

    pub fn result<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) {
        self.results.insert(name.to_string(), to_value(value));
    }

    pub fn file(&mut self, path: &Path) {
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned());
        self.files.push(name.unwrap_or_default());
    }

    pub fn write(mut self, dir: &Path) -> CliResult<PathBuf> {
        let path = dir.join("manifest.json");
        self.files.push("manifest.json".into());
        let mut root = Map::new();
        root.insert("command".into(), Value::from(self.command));
        root.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
        root.insert("config".into(), Value::Object(self.config));
        root.insert("defaults_applied".into(), to_value(&self.defaults));
        root.insert("results".into(), Value::Object(self.results));
        root.insert("files".into(), to_value(&self.files));
        let text =
            serde_json::to_string_pretty(&Value::Object(root)).expect("manifest is valid JSON");
        write_text(&path, &(text + "\n"))?;
        Ok(path)
    }
}

fn to_value<T: Serialize + ?Sized>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.0, -1.0 / 3.0, 1e-300, 6.02214076e23, std::f64::consts::PI] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn defaults_are_recorded() {
        let mut m = Manifest::new("test");
        assert_eq!(m.setting("alpha", None, 0.5), 0.5);
        assert_eq!(m.setting("grid", Some(11usize), 501), 11);
        assert_eq!(m.defaults, ["alpha"]);
        assert_eq!(m.config["grid"], 11);
    }
}
