//! Command-line front end.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use opdiam_core::diamnorm::{
    cb_lower, diam_estimate, divergence_ratios, inequality_ledger, map_norm, sdiam_estimate, structure, Budget,
    DiamEstimate, EstimateSet, Quantity,
};
use opdiam_core::numrange::{
    centering_constants, numerical_diameter, numerical_radius_with, sample_range, spectral_diameter,
    DEFAULT_REFINE_ITERS,
};
use opdiam_core::superop::named_example;
use opdiam_core::{ComplexMatrix, Error, MapFlags, SuperOp, Tolerances};
use serde_json::{json, Map, Value};

use crate::json::{
    complex, matrix_value, parse_matrix, parse_superop, real, superop_value, to_pretty, vector, FormatError,
};
use crate::replicate::{self, SuiteConfig};

#[derive(Debug, Parser)]
#[command(
    name = "opdiam",
    version,
    about = "Numerical ranges, numerical diameters and the seminorms they induce on maps between matrix algebras"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: CliConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every command. Each can also be set through an
/// `OPDIAM_*` environment variable; a flag on the command line wins.
#[derive(Clone, Debug, Args)]
pub struct CliConfig {
    /// Seed for every randomized search.
    #[arg(long, global = true, env = "OPDIAM_SEED", default_value_t = 7)]
    pub seed: u64,
    /// Angles on [0, pi) for diameters, or samples on [0, 2 pi) for `range`.
    #[arg(long, global = true, env = "OPDIAM_GRID", default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..))]
    pub grid: u64,
    /// Random restarts per search.
    #[arg(long, global = true, env = "OPDIAM_RESTARTS", default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
    pub restarts: u64,
    /// Ascent steps per restart.
    #[arg(long, global = true, env = "OPDIAM_ITERS", default_value_t = 400, value_parser = clap::value_parser!(u64).range(1..))]
    pub iters: u64,
    /// Tolerance for structural checks and closed-form comparisons.
    #[arg(long, global = true, env = "OPDIAM_TOL", default_value_t = 1e-8, value_parser = positive_real)]
    pub tol: f64,
    /// Largest matrix size any command may build, amplifications included.
    #[arg(long, global = true, env = "OPDIAM_MAX_DIM", default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_dim: u64,
    /// Output format; `range` defaults to csv, everything else to json.
    #[arg(long, global = true, env = "OPDIAM_FORMAT", value_enum)]
    pub format: Option<Format>,
    /// Write the output here instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

fn positive_real(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(_) => Err("must be a positive finite number".into()),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the support function and boundary of the numerical range.
    Range {
        /// Matrix JSON file, or `-` for standard input.
        file: PathBuf,
    },
    /// Numerical diameter with its witness pair.
    Diam { file: PathBuf },
    /// Classify a map and estimate its norm and diameter seminorms.
    MapAnalyze {
        /// Map JSON file, or `-` for standard input.
        file: PathBuf,
        /// Amplification level for the cb quantities. Defaults to twice the
        /// larger dimension, capped by --max-dim.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        level: Option<u64>,
        /// Also write each witness as a matrix JSON file in this directory.
        #[arg(long, value_name = "DIR")]
        witness_dir: Option<PathBuf>,
    },
    /// Recompute the table of known values.
    Replicate {
        /// Glob over fact ids, e.g. `maps.corner.*`.
        #[arg(long)]
        filter: Option<String>,
        /// Include per-row runtimes (makes the output vary between runs).
        #[arg(long)]
        timings: bool,
    },
    /// Print a named example map as map JSON.
    Example {
        id: String,
        /// Matrix size for families of maps.
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("invalid filter: {0}")]
    Pattern(#[from] glob::PatternError),
}

impl CliError {
    /// 3 for resource limits, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::ResourceLimit { .. })
            | CliError::Format {
                source: FormatError::Core(Error::ResourceLimit { .. }),
                ..
            } => 3,
            _ => 2,
        }
    }
}

impl CliConfig {
    pub fn budget(&self) -> Budget {
        Budget {
            restarts: self.restarts as usize,
            iters: self.iters as usize,
            seed: self.seed,
            search_grid: Budget::default().search_grid.min(self.grid as usize),
            final_grid: self.grid as usize,
            max_dim: self.max_dim as usize,
        }
    }

    fn cap(&self, requested: usize) -> Result<(), Error> {
        if requested > self.max_dim as usize {
            return Err(Error::ResourceLimit {
                requested,
                max: self.max_dim as usize,
            });
        }
        Ok(())
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let io_err = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn load<T>(path: &Path, parse: fn(&str) -> Result<T, FormatError>) -> Result<T, CliError> {
    parse(&read_input(path)?).map_err(|source| CliError::Format {
        path: path.display().to_string(),
        source,
    })
}

/// Runs a parsed command line and returns its output.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Range { file } => {
            let e = load(file, parse_matrix)?;
            cfg.cap(e.rows().max(e.cols()))?;
            range(&e, cfg)
        }
        Command::Diam { file } => {
            let e = load(file, parse_matrix)?;
            cfg.cap(e.rows().max(e.cols()))?;
            diam(&e, cfg)
        }
        Command::MapAnalyze {
            file,
            level,
            witness_dir,
        } => {
            let phi = load(file, parse_superop)?;
            map_analyze(&phi, level.map(|l| l as usize), witness_dir.as_deref(), cfg)
        }
        Command::Replicate { filter, timings } => {
            let suite = SuiteConfig {
                budget: cfg.budget(),
                tol: cfg.tol,
            };
            let rows = replicate::run_suite(filter.as_deref(), &suite)?;
            Ok(match cfg.format.unwrap_or(Format::Json) {
                Format::Json => to_pretty(&replicate::to_json(&rows, *timings)),
                Format::Csv => replicate::to_csv(&rows, *timings),
                Format::Md => replicate::to_markdown(&rows, *timings),
            })
        }
        Command::Example { id, n } => {
            let phi = named_example(id, *n)?;
            cfg.cap(phi.dim_in().max(phi.dim_out()))?;
            Ok(to_pretty(&superop_value(&phi)))
        }
    }
}

/// Writes the output of [`execute`] to `--out` or standard output.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let text = execute(cli)?;
    match &cli.config.out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => io::stdout().write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn range(e: &ComplexMatrix, cfg: &CliConfig) -> Result<String, CliError> {
    let s = sample_range(e, cfg.grid as usize)?;
    Ok(match cfg.format.unwrap_or(Format::Csv) {
        Format::Json => to_pretty(&json!({
            "thetas": s.thetas,
            "support": s.support,
            "boundary": s.boundary.iter().map(|&z| complex(z)).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["theta", "support", "boundary_re", "boundary_im"])
                .expect("in-memory write");
            for k in 0..s.thetas.len() {
                let b = s.boundary[k];
                w.write_record([s.thetas[k], s.support[k], b.re, b.im].map(|x| x.to_string()))
                    .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        Format::Md => {
            let mut out = String::from("| theta | support | boundary_re | boundary_im |\n|---|---|---|---|\n");
            for k in 0..s.thetas.len() {
                let b = s.boundary[k];
                let _ = writeln!(out, "| {} | {} | {} | {} |", s.thetas[k], s.support[k], b.re, b.im);
            }
            out
        }
    })
}

fn diam(e: &ComplexMatrix, cfg: &CliConfig) -> Result<String, CliError> {
    let grid = cfg.grid as usize;
    let d = numerical_diameter(e, grid, DEFAULT_REFINE_ITERS)?;
    let radius = numerical_radius_with(e, grid)?;
    let spectral = match spectral_diameter(e) {
        Ok(x) => Some(x),
        Err(Error::NotNormal { .. }) => None,
        Err(other) => return Err(other.into()),
    };
    let c = centering_constants(e)?;
    Ok(match cfg.format.unwrap_or(Format::Json) {
        Format::Json => to_pretty(&json!({
            "value": real(d.value),
            "theta_star": real(d.theta_star),
            "witness_pair": [vector(&d.witness_pair.0), vector(&d.witness_pair.1)],
            "numerical_radius": real(radius),
            "spectral_diameter": spectral.map(real),
            "centering": {
                "k_re": real(c.k_re),
                "k_im": real(c.k_im),
                "c_jung": complex(c.c_jung()),
                "jung_radius": real(c.jung.radius),
            },
        })),
        Format::Csv => format!(
            "value,theta_star,numerical_radius\n{},{},{}\n",
            d.value, d.theta_star, radius
        ),
        Format::Md => format!(
            "| value | theta_star | numerical_radius |\n|---|---|---|\n| {} | {} | {} |\n",
            d.value, d.theta_star, radius
        ),
    })
}

fn flags_value(f: &MapFlags) -> Value {
    json!({
        "self_adjoint": f.self_adjoint,
        "unital": f.unital,
        "paraunital": f.paraunital.map(complex),
        "trace_scale": f.trace_scale.map(complex),
        "cp": f.cp,
        "positive_sampled": f.positive_sampled,
    })
}

/// Level used by `map-analyze` when none is given.
pub fn default_level(phi: &SuperOp, max_dim: usize) -> usize {
    let d = phi.dim_in().max(phi.dim_out());
    (2 * d).min(max_dim / d).max(1)
}

fn map_analyze(
    phi: &SuperOp,
    level: Option<usize>,
    witness_dir: Option<&Path>,
    cfg: &CliConfig,
) -> Result<String, CliError> {
    let d = phi.dim_in().max(phi.dim_out());
    cfg.cap(d)?;
    let budget = cfg.budget();
    let level = level.unwrap_or_else(|| default_level(phi, budget.max_dim));
    let flags = phi.classify_with(&Tolerances {
        atol: cfg.tol,
        ..Tolerances::default()
    });
    let mut set = EstimateSet::default();
    set.insert(map_norm(phi, &budget));
    set.insert(diam_estimate(phi, &budget));
    set.insert(sdiam_estimate(phi, &budget));
    for q in [Quantity::Cb, Quantity::Cbdiam, Quantity::Cbsdiam] {
        set.insert(cb_lower(phi, level, q, &budget)?);
    }
    if let Some(dir) = witness_dir {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.display().to_string(),
            source,
        })?;
    }
    let mut estimates = Vec::new();
    for est in set.iter() {
        let file = match (witness_dir, &est.witness) {
            (Some(dir), Some(w)) => {
                let path = dir.join(format!("{}.json", est.quantity));
                fs::write(&path, to_pretty(&matrix_value(w))).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                Some(path.display().to_string())
            }
            _ => None,
        };
        estimates.push((est, file));
    }
    let ledger = inequality_ledger(phi, &set);
    match cfg.format.unwrap_or(Format::Json) {
        Format::Json => {
            let s = structure(phi);
            let mut doc = Map::new();
            doc.insert("dim_in".into(), json!(phi.dim_in()));
            doc.insert("dim_out".into(), json!(phi.dim_out()));
            doc.insert("flags".into(), flags_value(&flags));
            doc.insert(
                "structure".into(),
                json!({
                    "scalar_functional": s.scalar_functional,
                    "jordan": s.jordan.map(|j| json!({"alpha": complex(j.alpha), "pure": j.pure})),
                    "corner": s.corner.map(|c| json!({"alpha": complex(c.alpha), "pure": c.pure})),
                }),
            );
            doc.insert("level".into(), json!(level));
            doc.insert(
                "estimates".into(),
                Value::Array(estimates.iter().map(|(e, f)| estimate_value(e, f.as_deref())).collect()),
            );
            doc.insert(
                "ledger".into(),
                Value::Array(
                    ledger
                        .iter()
                        .map(|r| json!({"relation": r.name, "lhs": real(r.lhs), "rhs": real(r.rhs), "status": r.status.as_str()}))
                        .collect(),
                ),
            );
            if flags.paraunital.is_none() {
                doc.insert(
                    "divergence".into(),
                    Value::Array(
                        divergence_ratios(phi, 8)
                            .iter()
                            .map(|&(t, r)| json!([real(t), real(r)]))
                            .collect(),
                    ),
                );
            }
            Ok(to_pretty(&Value::Object(doc)))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["quantity", "lower", "upper", "certificate", "level", "witness_file"])
                .expect("in-memory write");
            for (e, f) in &estimates {
                w.write_record([
                    e.quantity.to_string(),
                    e.lower.to_string(),
                    e.upper.to_string(),
                    e.certificate.to_string(),
                    e.level.to_string(),
                    f.clone().unwrap_or_default(),
                ])
                .expect("in-memory write");
            }
            Ok(String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8"))
        }
        Format::Md => {
            let mut out = String::from("| quantity | lower | upper | certificate | level |\n|---|---|---|---|---|\n");
            for (e, _) in &estimates {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} |",
                    e.quantity, e.lower, e.upper, e.certificate, e.level
                );
            }
            out.push_str("\n| relation | lhs | rhs | status |\n|---|---|---|---|\n");
            for r in &ledger {
                let _ = writeln!(out, "| {} | {} | {} | {} |", r.name, r.lhs, r.rhs, r.status.as_str());
            }
            Ok(out)
        }
    }
}

fn estimate_value(e: &DiamEstimate, file: Option<&str>) -> Value {
    json!({
        "quantity": e.quantity.as_str(),
        "lower": real(e.lower),
        "upper": real(e.upper),
        "certificate": e.certificate.as_str(),
        "level": e.level,
        "witness": e.witness.as_ref().map(matrix_value),
        "witness_file": file,
    })
}
