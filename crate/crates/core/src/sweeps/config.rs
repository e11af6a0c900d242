//! Sweep configuration: axes, fixed parameters, and the flat `key = value`
//! file format shared with the command line.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sweeps::presets::figure_preset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Microscopic,
    EffectiveSpinless,
    EffectiveSpinful,
}

const MICROSCOPIC_REQUIRED: &[&str] = &[
    "s_b_par", "s_b_perp", "s_f_par", "s_f_perp", "a_bb", "a_bf", "nu_b", "nu_f",
];
const MICROSCOPIC_OPTIONAL: &[&str] = &["a_ff", "spinful", "U_updown"];
const SPINLESS_REQUIRED: &[&str] = &["v_f", "v_b", "K_b", "G"];
const SPINFUL_REQUIRED: &[&str] = &["v_f", "v_b", "K_b", "G", "U_updown"];
/// Exactly one of these sets the boson-fermion coupling in effective modes.
const COUPLING_KEYS: &[&str] = &["g", "U_bf"];

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Microscopic => "microscopic",
            Mode::EffectiveSpinless => "effective-spinless",
            Mode::EffectiveSpinful => "effective-spinful",
        }
    }

    pub fn required_params(self) -> &'static [&'static str] {
        match self {
            Mode::Microscopic => MICROSCOPIC_REQUIRED,
            Mode::EffectiveSpinless => SPINLESS_REQUIRED,
            Mode::EffectiveSpinful => SPINFUL_REQUIRED,
        }
    }

    pub fn accepts(self, name: &str) -> bool {
        self.required_params().contains(&name)
            || match self {
                Mode::Microscopic => MICROSCOPIC_OPTIONAL.contains(&name),
                _ => COUPLING_KEYS.contains(&name),
            }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "microscopic" => Ok(Mode::Microscopic),
            "effective-spinless" => Ok(Mode::EffectiveSpinless),
            "effective-spinful" => Ok(Mode::EffectiveSpinful),
            other => Err(Error::Config(format!(
                "unknown mode `{other}` (expected microscopic, effective-spinless or effective-spinful)"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameter record of one evaluation point.
pub type ParamSet = BTreeMap<String, f64>;

/// Parses a number, also accepting multiples of pi (`pi`, `-0.8pi`, `0.8*pi`)
/// and `true`/`false` for flags.
pub fn parse_value(raw: &str) -> Result<f64> {
    let s = raw.trim();
    match s {
        "true" => return Ok(1.0),
        "false" => return Ok(0.0),
        _ => {}
    }
    let bad = || Error::Config(format!("cannot parse `{raw}` as a number"));
    if let Some(coef) = s.strip_suffix("pi") {
        let coef = coef.trim_end_matches('*').trim();
        let c = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| bad())?,
        };
        return Ok(c * std::f64::consts::PI);
    }
    let v = s.parse::<f64>().map_err(|_| bad())?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Linearly spaced axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(name: impl Into<String>, min: f64, max: f64, count: usize) -> Self {
        Axis { name: name.into(), min, max, count }
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.max } else { self.min + i as f64 * step })
            .collect()
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// `name:min:max:count`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [name, min, max, count] = parts[..] else {
            return Err(Error::Config(format!("axis `{s}` must look like name:min:max:count")));
        };
        let count = count
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("axis count `{count}` is not an integer")))?;
        Ok(Axis::new(name, parse_value(min)?, parse_value(max)?, count))
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.name, self.min, self.max, self.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown format `{other}` (expected csv or json)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputSpec {
    pub path: PathBuf,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub mode: Mode,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub fixed: ParamSet,
    pub output: Option<OutputSpec>,
    /// Also write a compact file of the exponent curves along the sweep.
    pub emit_curves: bool,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let axes: Vec<&Axis> = std::iter::once(&self.axis1).chain(&self.axis2).collect();
        for axis in &axes {
            if !self.mode.accepts(&axis.name) {
                return Err(Error::Config(format!(
                    "axis parameter `{}` is not valid in {} mode",
                    axis.name, self.mode
                )));
            }
            if axis.count < 2 {
                return Err(Error::Config(format!("axis `{}` needs at least 2 points", axis.name)));
            }
            if !(axis.min.is_finite() && axis.max.is_finite()) {
                return Err(Error::Config(format!("axis `{}` has a non-finite range", axis.name)));
            }
        }
        if let Some(a2) = &self.axis2 {
            if a2.name == self.axis1.name {
                return Err(Error::Config("axis1 and axis2 must differ".into()));
            }
        }
        for name in self.fixed.keys() {
            if !self.mode.accepts(name) {
                return Err(Error::Config(format!("parameter `{name}` is not valid in {} mode", self.mode)));
            }
        }
        let provided = |name: &str| self.fixed.contains_key(name) || axes.iter().any(|a| a.name == name);
        for name in self.mode.required_params() {
            if !provided(name) {
                return Err(Error::Config(format!("missing parameter `{name}` for {} mode", self.mode)));
            }
        }
        if self.mode != Mode::Microscopic && !COUPLING_KEYS.iter().any(|k| provided(k)) {
            return Err(Error::Config("one of `g` or `U_bf` must be given".into()));
        }
        if COUPLING_KEYS.iter().all(|k| provided(k)) {
            return Err(Error::Config("give only one of `g` and `U_bf`".into()));
        }
        Ok(())
    }

    /// Row-major parameter records, `axis2` varying fastest.
    pub fn points(&self) -> Vec<(Vec<(String, f64)>, ParamSet)> {
        let v1 = self.axis1.values();
        let v2 = self.axis2.as_ref().map(Axis::values);
        let mut out = Vec::with_capacity(v1.len() * v2.as_ref().map_or(1, Vec::len));
        for &x1 in &v1 {
            match (&self.axis2, &v2) {
                (Some(a2), Some(v2)) => {
                    for &x2 in v2 {
                        out.push(self.point(&[(self.axis1.name.clone(), x1), (a2.name.clone(), x2)]));
                    }
                }
                _ => out.push(self.point(&[(self.axis1.name.clone(), x1)])),
            }
        }
        out
    }

    fn point(&self, axes: &[(String, f64)]) -> (Vec<(String, f64)>, ParamSet) {
        let mut params = self.fixed.clone();
        for (k, v) in axes {
            params.insert(k.clone(), *v);
        }
        (axes.to_vec(), params)
    }

    pub fn axis_names(&self) -> Vec<String> {
        std::iter::once(&self.axis1)
            .chain(&self.axis2)
            .map(|a| a.name.clone())
            .collect()
    }

    /// Builds a configuration from ordered `key = value` pairs. A `preset`
    /// key seeds the configuration; all other keys override it in order.
    pub fn from_pairs(pairs: &[(String, String)]) -> Result<SweepConfig> {
        let mut builder = match pairs.iter().rev().find(|(k, _)| k == "preset") {
            Some((_, name)) => Builder::from(figure_preset(name)?),
            None => Builder::default(),
        };
        for (key, value) in pairs.iter().filter(|(k, _)| k != "preset") {
            builder.apply(key, value)?;
        }
        let config = builder.finish()?;
        config.validate()?;
        Ok(config)
    }
}

/// Splits the flat config text into `(key, value)` pairs, skipping blank
/// lines and `#` comments.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!("line {}: expected `key = value`", lineno + 1)));
        };
        pairs.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

#[derive(Default)]
struct Builder {
    mode: Option<Mode>,
    axis1: Option<Axis>,
    axis2: Option<Axis>,
    fixed: ParamSet,
    out: Option<PathBuf>,
    format: Option<Format>,
    emit_curves: bool,
}

impl From<SweepConfig> for Builder {
    fn from(c: SweepConfig) -> Self {
        Builder {
            mode: Some(c.mode),
            axis1: Some(c.axis1),
            axis2: c.axis2,
            fixed: c.fixed,
            out: c.output.as_ref().map(|o| o.path.clone()),
            format: c.output.map(|o| o.format),
            emit_curves: c.emit_curves,
        }
    }
}

impl Builder {
    fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "mode" => self.mode = Some(value.parse()?),
            "axis1" => self.axis1 = Some(value.parse()?),
            "axis2" => {
                self.axis2 = match value {
                    "" | "none" => None,
                    v => Some(v.parse()?),
                }
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = Some(value.parse()?),
            "emit_curves" => self.emit_curves = parse_value(value)? != 0.0,
            name => {
                self.fixed.insert(name.to_string(), parse_value(value)?);
            }
        }
        Ok(())
    }

    fn finish(mut self) -> Result<SweepConfig> {
        let mode = self.mode.ok_or_else(|| Error::Config("`mode` is required".into()))?;
        let axis1 = self.axis1.ok_or_else(|| Error::Config("`axis1` is required".into()))?;
        // An axis parameter must not also sit among the fixed values.
        for axis in std::iter::once(&axis1).chain(&self.axis2) {
            self.fixed.remove(&axis.name);
        }
        Ok(SweepConfig {
            mode,
            axis1,
            axis2: self.axis2,
            fixed: self.fixed,
            output: self.out.map(|path| OutputSpec {
                path,
                format: self.format.unwrap_or_default(),
            }),
            emit_curves: self.emit_curves,
        })
    }
}
