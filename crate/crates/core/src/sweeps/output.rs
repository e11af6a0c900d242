//! Tabular output of a grid. CSV and JSON carry the same columns and the
//! same rounded values.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::sweeps::config::{Format, Mode, ParamSet, SweepConfig};
use crate::sweeps::PointResult;

const HUBBARD_COLUMNS: &[&str] = &["t_b", "t_f", "U_b", "U_bf", "U_updown"];
const LUTTINGER_COLUMNS: &[&str] = &["k_f", "v_f", "gamma", "v_b", "K_b", "g", "G"];
const GAUSSIAN_COLUMNS: &[&str] = &[
    "v_a", "v_A", "K_beta", "inv_K_gamma", "inv_K_eps", "inv_K_gammaeps", "lambda_c", "eta_c",
];
const SPINLESS_ALPHAS: &[&str] = &["alpha_CDW", "alpha_fPP", "alpha_BFP", "alpha_bP", "alpha_BB"];
const SPINFUL_ALPHAS: &[&str] = &[
    "alpha_SDW", "alpha_CDW", "alpha_WC", "alpha_SPP", "alpha_TPP", "g1perp", "K_sigma",
];
const TRAILING_COLUMNS: &[&str] = &["stability", "phase", "regime", "warnings", "message"];

/// Significant digits written for every numeric field.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rows plus the configuration that produced them. A single-point run has
/// no configuration and no axis columns.
#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub config: Option<SweepConfig>,
    pub mode: Mode,
    pub params: ParamSet,
    pub rows: Vec<PointResult>,
}

/// Rounds to [`SIGNIFICANT_DIGITS`]; the result is what gets serialized.
pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return String::new();
    }
    let r = round_significant(x);
    let mag = r.abs();
    if r != 0.0 && !(1e-4..1e15).contains(&mag) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// `<stem>.curves.csv` next to the main output.
pub fn curves_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.curves.csv"))
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Io { path: path.to_path_buf(), source: e.into() }
}

enum Cell {
    Number(Option<f64>),
    Text(String),
}

impl GridResult {
    pub fn new(config: SweepConfig, rows: Vec<PointResult>) -> Self {
        GridResult { mode: config.mode, params: config.fixed.clone(), config: Some(config), rows }
    }

    pub fn single(mode: Mode, params: ParamSet, row: PointResult) -> Self {
        GridResult { config: None, mode, params, rows: vec![row] }
    }

    pub fn is_spinful(&self) -> bool {
        match self.mode {
            Mode::EffectiveSpinful => true,
            Mode::EffectiveSpinless => false,
            Mode::Microscopic => self.params.get("spinful").is_some_and(|&s| s != 0.0),
        }
    }

    fn axis_names(&self) -> Vec<String> {
        self.config.as_ref().map(SweepConfig::axis_names).unwrap_or_default()
    }

    fn value_columns(&self) -> Vec<&'static str> {
        let alphas = if self.is_spinful() { SPINFUL_ALPHAS } else { SPINLESS_ALPHAS };
        [HUBBARD_COLUMNS, LUTTINGER_COLUMNS, GAUSSIAN_COLUMNS, alphas].concat()
    }

    /// Column names in output order.
    pub fn columns(&self) -> Vec<String> {
        let mut cols = self.axis_names();
        cols.extend(self.value_columns().iter().map(|c| c.to_string()));
        cols.extend(TRAILING_COLUMNS.iter().map(|c| c.to_string()));
        cols
    }

    pub fn has_errors(&self) -> bool {
        self.rows.iter().any(PointResult::is_error)
    }

    fn cells(&self, row: &PointResult) -> Vec<Cell> {
        let mut cells: Vec<Cell> = row.axes.iter().map(|(_, v)| Cell::Number(Some(*v))).collect();
        cells.extend(self.value_columns().iter().map(|c| Cell::Number(row.get(c))));
        cells.push(Cell::Text(row.stability.map(|s| s.code().to_string()).unwrap_or_default()));
        cells.push(Cell::Text(row.phase.clone()));
        cells.push(Cell::Number(row.regime.map(f64::from)));
        let warnings: Vec<&str> = row.warnings.iter().map(|w| w.code()).collect();
        cells.push(Cell::Text(warnings.join(";")));
        cells.push(Cell::Text(row.message.clone().unwrap_or_default()));
        cells
    }

    pub fn write_csv<W: Write>(&self, out: W, path: &Path) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(self.columns()).map_err(|e| csv_error(path, e))?;
        for row in &self.rows {
            let record = self.cells(row).into_iter().map(|c| match c {
                Cell::Number(v) => v.map(format_number).unwrap_or_default(),
                Cell::Text(s) => s,
            });
            w.write_record(record).map_err(|e| csv_error(path, e))?;
        }
        w.flush().map_err(io_error(path))
    }

    pub fn to_json(&self) -> Value {
        let columns = self.columns();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in columns.iter().zip(self.cells(row)) {
                    let v = match cell {
                        Cell::Number(Some(x)) if x.is_finite() => json!(round_significant(x)),
                        Cell::Number(_) => Value::Null,
                        Cell::Text(s) if s.is_empty() => Value::Null,
                        Cell::Text(s) => Value::String(s),
                    };
                    obj.insert(name.clone(), v);
                }
                Value::Object(obj)
            })
            .collect();
        let config = match &self.config {
            Some(c) => json!(c),
            None => json!({ "mode": self.mode, "params": self.params }),
        };
        json!({ "config": config, "columns": columns, "rows": rows })
    }

    pub fn write_json<W: Write>(&self, mut out: W, path: &Path) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json()).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e.into(),
        })?;
        out.write_all(b"\n").map_err(io_error(path))
    }

    pub fn write_to<W: Write>(&self, out: W, format: Format, path: &Path) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out, path),
            Format::Json => self.write_json(out, path),
        }
    }

    pub fn render(&self, format: Format) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf, format, Path::new("<memory>"))
            .expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("output is UTF-8")
    }

    /// Axis values and exponent columns only, for plotting.
    pub fn write_curves_to<W: Write>(&self, out: W, path: &Path) -> Result<()> {
        let alphas = if self.is_spinful() { &SPINFUL_ALPHAS[..5] } else { SPINLESS_ALPHAS };
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let mut header = self.axis_names();
        header.extend(alphas.iter().map(|a| a.to_string()));
        header.push("phase".into());
        w.write_record(&header).map_err(|e| csv_error(path, e))?;
        for row in &self.rows {
            let mut record: Vec<String> = row.axes.iter().map(|(_, v)| format_number(*v)).collect();
            record.extend(alphas.iter().map(|a| row.get(a).map(format_number).unwrap_or_default()));
            record.push(row.phase.clone());
            w.write_record(&record).map_err(|e| csv_error(path, e))?;
        }
        w.flush().map_err(io_error(path))
    }
}

/// Two-column `(x, y)` CSV, used for band and Wannier dumps.
pub fn write_two_column(path: &Path, header: [&str; 2], xs: &[f64], ys: &[f64]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(io_error(path))?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file);
    w.write_record(header).map_err(|e| csv_error(path, e))?;
    for (x, y) in xs.iter().zip(ys) {
        w.write_record([format_number(*x), format_number(*y)])
            .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(io_error(path))
}
