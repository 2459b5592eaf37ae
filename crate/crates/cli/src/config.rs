//! Run configuration: defaults, then a JSON config file, then command-line flags.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub samples: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_bits: 128,
            samples: 1024,
            tolerance: 1e-2,
            seed: 0,
            output_path: None,
            format: Format::Json,
        }
    }
}

/// Flag values; `None` means the flag was not given.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// JSON file with any of the fields below; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Working precision in bits (at least 64).
    #[arg(long, global = true)]
    pub precision_bits: Option<u32>,
    /// Quadrature grid size (a power of two).
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Tolerance for comparisons against reference values.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

fn read_file(path: &Path) -> Result<Value, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{} is not valid JSON: {e}", path.display()))
}

fn apply_file(cfg: &mut RunConfig, v: &Value) -> Result<(), String> {
    let obj = v.as_object().ok_or("config file must hold a JSON object")?;
    for (k, val) in obj {
        let bad = || format!("config field {k:?} has the wrong type");
        match k.as_str() {
            "precision_bits" => {
                cfg.precision_bits = val
                    .as_u64()
                    .and_then(|x| x.try_into().ok())
                    .ok_or_else(bad)?
            }
            "samples" => cfg.samples = val.as_u64().map(|x| x as usize).ok_or_else(bad)?,
            "tolerance" => cfg.tolerance = val.as_f64().ok_or_else(bad)?,
            "seed" => cfg.seed = val.as_u64().ok_or_else(bad)?,
            "output_path" | "out" => {
                cfg.output_path = Some(PathBuf::from(val.as_str().ok_or_else(bad)?))
            }
            "format" => {
                cfg.format =
                    Format::from_str(val.as_str().ok_or_else(bad)?, true).map_err(|_| bad())?;
            }
            _ => return Err(format!("unknown config field {k:?}")),
        }
    }
    Ok(())
}

impl RunConfig {
    pub fn resolve(o: &Overrides) -> Result<Self, String> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &o.config {
            apply_file(&mut cfg, &read_file(path)?)?;
        }
        if let Some(x) = o.precision_bits {
            cfg.precision_bits = x;
        }
        if let Some(x) = o.samples {
            cfg.samples = x;
        }
        if let Some(x) = o.tolerance {
            cfg.tolerance = x;
        }
        if let Some(x) = o.seed {
            cfg.seed = x;
        }
        if let Some(x) = &o.out {
            cfg.output_path = Some(x.clone());
        }
        if let Some(x) = o.format {
            cfg.format = x;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        if self.precision_bits < 64 {
            return Err(format!(
                "precision must be at least 64 bits, got {}",
                self.precision_bits
            ));
        }
        if !self.samples.is_power_of_two() {
            return Err(format!(
                "samples must be a power of two, got {}",
                self.samples
            ));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "precision_bits": self.precision_bits,
            "samples": self.samples,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "output_path": self.output_path.as_ref().map(|p| p.display().to_string()),
            "format": self.format.name(),
        })
    }
}
