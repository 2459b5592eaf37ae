//! `holonomy-cert`: recomputes denominator rates, growth integrals, bound quotients and
//! the exact oracles from the command line.

mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use holonomy_core::arith::{fmt_q, parse_q, Q};
use holonomy_core::certs::{certificate, CertOptions, CertPreset, Certificate, Verdict};
use holonomy_core::growth::{bc_double_integral, nevanlinna_t};
use holonomy_core::maps::{level_grid, preset_map, ContourPreset};
use holonomy_core::oracle::{concentration_mc, filtration_jumps, independence_rank, lacunary};
use holonomy_core::rates::{default_grid, tau_flat, tau_sharp, DenominatorScheme};
use holonomy_core::series::FormalSeries;
use holonomy_core::special::{named_series, pure_functions};
use holonomy_core::{Error, VERSION};

use config::{Format, Overrides, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "holonomy-cert",
    version,
    about = "Certificates for arithmetic holonomy bounds"
)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    /// Worker threads for quadrature and Monte Carlo.
    #[arg(long, global = true, env = "HOLONOMY_CERT_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact denominator rate τ = τ♭ + τ♯ of a scheme.
    Tau {
        /// A scheme JSON file, or the name of a built-in scheme.
        #[arg(long)]
        scheme: String,
        /// Grid step for the τ♯ cross-check, as a rational.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Nevanlinna characteristic and Bost–Charles integral of a contour preset.
    Integrals {
        contour: String,
        /// Inner radius for the characteristic T̂(r, φ); 1 gives the full integral.
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Bound quotient and verdict for a named preset, or `all`.
    Certificate { preset: String },
    /// Coefficients of a registered series.
    Series {
        name: String,
        #[arg(long, default_value_t = 20)]
        order: usize,
    },
    /// Vanishing-order jumps of a comma-separated family.
    Jumps {
        #[arg(long, value_delimiter = ',')]
        functions: Vec<String>,
        #[arg(long = "degree", short = 'D')]
        degree: usize,
        #[arg(long)]
        truncation: usize,
    },
    /// Linear independence over polynomials of bounded degree.
    Independence {
        #[arg(long, value_delimiter = ',')]
        functions: Vec<String>,
        #[arg(long)]
        cap: usize,
        #[arg(long)]
        truncation: usize,
    },
    /// `log|φ|` on a square grid over the disc.
    Contour {
        preset: String,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        #[arg(long, default_value_t = 0.999)]
        radius: f64,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        levels: Vec<f64>,
    },
    /// Monte Carlo tail of the discrepancy of uniform samples.
    Concentration {
        #[arg(long, default_value_t = 5000)]
        n: usize,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
    },
}

/// Outcome of a subcommand: the report body, an optional CSV rendering and the exit status.
struct Outcome {
    result: Value,
    csv: String,
    status: Status,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Pass = 0,
    Fail = 1,
    Usage = 2,
    Inconclusive = 3,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn status(&self) -> Status {
        match self {
            Failure::Usage(_) => Status::Usage,
            Failure::Core(e) => match root(e) {
                Error::Domain(_) | Error::Parse(_) => Status::Usage,
                _ => Status::Inconclusive,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(s) => write!(f, "{s}"),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

fn root(e: &Error) -> &Error {
    match e {
        Error::Stage { source, .. } => root(source),
        _ => e,
    }
}

fn load_scheme(arg: &str) -> Result<DenominatorScheme, Failure> {
    let path = std::path::Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {arg}: {e}")))?;
        let v: Value =
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{arg}: {e}")))?;
        return Ok(DenominatorScheme::from_json(&v)?);
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
    DenominatorScheme::named(stem).map_err(|_| {
        Failure::Usage(format!(
            "{arg} is neither a scheme file nor a built-in scheme ({})",
            DenominatorScheme::NAMES.join(", ")
        ))
    })
}

fn run_tau(scheme: &str, grid: Option<&str>) -> Result<Outcome, Failure> {
    let s = load_scheme(scheme)?;
    let step = match grid {
        Some(g) => parse_q(g)?,
        None => default_grid(),
    };
    let flat = tau_flat(&s);
    let sharp = tau_sharp(&s, &step)?;
    let total: Q = &flat + &sharp.value;
    let result = json!({
        "scheme": scheme,
        "m": s.m(),
        "tau_flat": fmt_q(&flat),
        "tau_sharp": fmt_q(&sharp.value),
        "tau": fmt_q(&total),
        "tau_f64": holonomy_core::arith::q_to_f64(&total),
        "argmin": fmt_q(&sharp.argmin),
        "minimizer": [fmt_q(&sharp.minimizer.0), fmt_q(&sharp.minimizer.1)],
        "grid_step": fmt_q(&step),
        "grid_value": fmt_q(&sharp.grid_value),
    });
    let csv = format!(
        "quantity,value\ntau_flat,{}\ntau_sharp,{}\ntau,{}\n",
        fmt_q(&flat),
        fmt_q(&sharp.value),
        fmt_q(&total)
    );
    Ok(Outcome {
        result,
        csv,
        status: Status::Pass,
    })
}

fn run_integrals(contour: &str, radius: f64, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let phi = preset_map(ContourPreset::parse(contour)?);
    let t = nevanlinna_t(&phi, cfg.samples * 16, &[])?;
    let bc = bc_double_integral(&phi, cfg.samples, radius)?;
    let mut csv = String::from("kind,value,samples,refinement_delta\n");
    for r in [&t, &bc] {
        csv.push_str(&format!(
            "{:?},{},{},{}\n",
            r.kind, r.value, r.samples, r.refinement_delta
        ));
    }
    let result = json!({
        "contour": contour,
        "nevanlinna": serde_json::to_value(&t).expect("serializable"),
        "bost_charles": serde_json::to_value(&bc).expect("serializable"),
    });
    let status = if t.refinement_delta <= cfg.tolerance && bc.refinement_delta <= cfg.tolerance {
        Status::Pass
    } else {
        Status::Inconclusive
    };
    Ok(Outcome {
        result,
        csv,
        status,
    })
}

fn cert_status(c: &Certificate) -> Status {
    match c.verdict {
        Verdict::Pass => Status::Pass,
        Verdict::Fail => Status::Fail,
        Verdict::Inconclusive => Status::Inconclusive,
    }
}

fn run_certificate(preset: &str, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let presets = if preset == "all" {
        CertPreset::ALL.to_vec()
    } else {
        vec![CertPreset::parse(preset)?]
    };
    let opts = CertOptions {
        samples: cfg.samples,
        line_samples: cfg.samples * 16,
    };
    let mut reports = Vec::new();
    let mut csv = String::from("name,m_target,quotient,delta,verdict,paper_value,paper_match\n");
    let mut status = Status::Pass;
    for p in presets {
        let c = certificate(p, opts)?;
        let paper_match = c
            .paper_value
            .map(|v| (c.quotient - v).abs() <= cfg.tolerance.max(c.tolerance));
        let mut v = c.to_json();
        v["paper_match"] = json!(paper_match);
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            c.name,
            c.m_target,
            c.quotient,
            c.delta,
            serde_json::to_value(c.verdict)
                .expect("serializable")
                .as_str()
                .unwrap_or(""),
            c.paper_value.map(|x| x.to_string()).unwrap_or_default(),
            paper_match.map(|x| x.to_string()).unwrap_or_default(),
        ));
        status = status.max(cert_status(&c));
        reports.push(v);
    }
    let result = if reports.len() == 1 {
        reports.pop().expect("one report")
    } else {
        Value::Array(reports)
    };
    Ok(Outcome {
        result,
        csv,
        status,
    })
}

fn series_csv(f: &FormalSeries) -> String {
    let mut s = String::from("n,coeff\n");
    for (n, c) in f.coeffs().iter().enumerate() {
        s.push_str(&format!("{n},{}\n", fmt_q(c)));
    }
    s
}

fn run_series(name: &str, order: usize) -> Result<Outcome, Failure> {
    let f = lookup(name, order)?;
    let result = json!({ "name": name, "order": f.order(), "coeffs": f.to_json() });
    Ok(Outcome {
        csv: series_csv(&f),
        result,
        status: Status::Pass,
    })
}

/// Elementary functions by name, then the pure functions `B1..B7`, then the series registry.
fn lookup(name: &str, order: usize) -> Result<FormalSeries, Failure> {
    let one = || FormalSeries::constant(Q::from_integer(1.into()), order, "x");
    Ok(match name {
        "1" => one(),
        "x" => FormalSeries::var(order, "x"),
        "log1m" => FormalSeries::neg_log1m(order, "x").neg(),
        "geom" => FormalSeries::geometric(order, "x"),
        "lacunary" => lacunary(order),
        _ if name.starts_with("binom:") => {
            FormalSeries::binomial_power(&parse_q(&name[6..])?, order, "x")
        }
        _ if name.len() == 2 && name.starts_with('B') && name.as_bytes()[1].is_ascii_digit() => {
            let k = (name.as_bytes()[1] - b'0') as usize;
            if !(1..=7).contains(&k) {
                return Err(Failure::Usage(format!(
                    "pure functions are B1..B7, got {name}"
                )));
            }
            pure_functions(order)?.b.swap_remove(k - 1)
        }
        _ => named_series(name, order)?,
    })
}

fn family(names: &[String], order: usize) -> Result<Vec<FormalSeries>, Failure> {
    if names.is_empty() {
        return Err(Failure::Usage("--functions needs at least one name".into()));
    }
    names.iter().map(|n| lookup(n.trim(), order)).collect()
}

fn run_jumps(names: &[String], d: usize, truncation: usize) -> Result<Outcome, Failure> {
    let fs = family(names, truncation)?;
    let j = filtration_jumps(&fs, d, truncation)?;
    let mut result = serde_json::to_value(&j).expect("serializable");
    result["functions"] = json!(names);
    let csv = std::iter::once("jump".to_string())
        .chain(j.jumps.iter().map(ToString::to_string))
        .collect::<Vec<_>>()
        .join("\n")
        + "\n";
    Ok(Outcome {
        result,
        csv,
        status: Status::Pass,
    })
}

fn run_independence(names: &[String], cap: usize, truncation: usize) -> Result<Outcome, Failure> {
    let fs = family(names, truncation)?;
    let r = independence_rank(&fs, cap, truncation)?;
    let mut result = r.to_json();
    result["functions"] = json!(names);
    let csv = format!(
        "quantity,value\nindependent,{}\ncolumns,{}\nrank_lower_bound,{}\n",
        r.independent, r.columns, r.rank_lower_bound
    );
    Ok(Outcome {
        result,
        csv,
        status: Status::Pass,
    })
}

fn run_contour(
    preset: &str,
    resolution: usize,
    radius: f64,
    levels: &[f64],
) -> Result<Outcome, Failure> {
    let phi = preset_map(ContourPreset::parse(preset)?);
    let g = level_grid(&phi, radius, resolution, levels)?;
    let result = serde_json::to_value(&g).expect("serializable");
    Ok(Outcome {
        csv: g.to_csv(),
        result,
        status: Status::Pass,
    })
}

fn run_concentration(
    n: usize,
    eps: f64,
    trials: usize,
    cfg: &RunConfig,
) -> Result<Outcome, Failure> {
    let r = concentration_mc(n, eps, trials, cfg.seed)?;
    let result = serde_json::to_value(&r).expect("serializable");
    let csv = format!(
        "quantity,value\nhits,{}\nempirical_prob,{}\nbound,{}\nmean_discrepancy,{}\n",
        r.hits, r.empirical_prob, r.bound, r.mean_discrepancy
    );
    Ok(Outcome {
        result,
        csv,
        status: if r.holds { Status::Pass } else { Status::Fail },
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Tau { .. } => "tau",
        Command::Integrals { .. } => "integrals",
        Command::Certificate { .. } => "certificate",
        Command::Series { .. } => "series",
        Command::Jumps { .. } => "jumps",
        Command::Independence { .. } => "independence",
        Command::Contour { .. } => "contour",
        Command::Concentration { .. } => "concentration",
    }
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, Failure> {
    match cmd {
        Command::Tau { scheme, grid } => run_tau(scheme, grid.as_deref()),
        Command::Integrals { contour, radius } => run_integrals(contour, *radius, cfg),
        Command::Certificate { preset } => run_certificate(preset, cfg),
        Command::Series { name, order } => run_series(name, *order),
        Command::Jumps {
            functions,
            degree,
            truncation,
        } => run_jumps(functions, *degree, *truncation),
        Command::Independence {
            functions,
            cap,
            truncation,
        } => run_independence(functions, *cap, *truncation),
        Command::Contour {
            preset,
            resolution,
            radius,
            levels,
        } => run_contour(preset, *resolution, *radius, levels),
        Command::Concentration { n, eps, trials } => run_concentration(*n, *eps, *trials, cfg),
    }
}

fn emit(text: &str, cfg: &RunConfig) -> Result<(), String> {
    match &cfg.output_path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display()))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("stdout: {e}")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let cfg = match RunConfig::resolve(&cli.overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(Status::Usage as u8);
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: thread count must be positive");
            return ExitCode::from(Status::Usage as u8);
        }
        // Fails only if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    let outcome = match dispatch(&cli.command, &cfg) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {f}");
            return ExitCode::from(f.status() as u8);
        }
    };
    let text = match cfg.format {
        Format::Csv => outcome.csv,
        Format::Json => {
            let report = json!({
                "command": command_name(&cli.command),
                "version": VERSION,
                "config": cfg.to_json(),
                "result": outcome.result,
            });
            serde_json::to_string_pretty(&report).expect("serializable") + "\n"
        }
    };
    if let Err(e) = emit(&text, &cfg) {
        eprintln!("error: {e}");
        return ExitCode::from(Status::Usage as u8);
    }
    ExitCode::from(outcome.status as u8)
}
