//! Batch command-line interface. [`run`] parses arguments, executes one
//! subcommand and returns the process exit code:
//! 0 success, 1 validation failure, 2 usage or input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use serde_json::{json, Value};

use crate::compiler::{cover_to_supergale, kraft_sum, supergale_to_cover, Antichain};
use crate::complexity::{cdim_point_estimate, cdim_via_gales, kr_profile, parse_estimator, CdimOptions};
use crate::cover::{validate_nice_axioms, NiceCoverDescriptor, PointRep};
use crate::dimension::{dim_search, gale_upper_bound, SetDescription};
use crate::error::{Error, Result};
use crate::exact::{parse_big_rational, parse_rat, precision_bits, Exponent, Rat, Surd};
use crate::gale::{evaluate_success, gale_equality_report, validate_supergale, Gale, SupergaleTable};

#[derive(Debug, Parser)]
#[command(name = "galedim", version, about = "Gales, covers and effective dimension on nice covers")]
pub struct Cli {
    /// Worker threads for parallel checks (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the nice-cover axioms exhaustively to a depth.
    ValidateCover {
        #[arg(long)]
        cover: NiceCoverDescriptor,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Check the supergale (or gale) condition of a gale file.
    ValidateGale {
        #[command(flatten)]
        gale: GaleArgs,
        /// Expected exponent; must match the file.
        #[arg(long)]
        s: Option<String>,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Relative tolerance; 0 for exact mode.
        #[arg(long, default_value = "0")]
        tol: String,
        /// Require equality (an s-gale) rather than the inequality.
        #[arg(long)]
        equality: bool,
    },
    /// Compile an antichain into the supergale d_k.
    Compile {
        #[arg(long)]
        cover: NiceCoverDescriptor,
        #[arg(long)]
        antichain: PathBuf,
        #[arg(long)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// Write the gale here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract the antichain where a gale exceeds 2^k times its capital.
    Extract {
        #[command(flatten)]
        gale: GaleArgs,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// Deepest level searched (default: one below the support).
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Kraft sum of an antichain.
    Kraft {
        #[arg(long)]
        cover: NiceCoverDescriptor,
        #[arg(long)]
        antichain: PathBuf,
        /// Exponent: a rational (`1/2`) or a log ratio (`log2/log3`).
        #[arg(long)]
        s: Exponent,
    },
    /// Dimension estimate of a set description.
    Dim {
        #[arg(long)]
        cover: NiceCoverDescriptor,
        #[arg(long)]
        set: PathBuf,
        #[arg(long, default_value_t = 40)]
        n: usize,
        /// Print a plain `n N_n estimate` table instead of the report.
        #[arg(long)]
        table: bool,
    },
    /// Run a gale along a point, or along sampled points of a set.
    Success {
        #[command(flatten)]
        gale: GaleArgs,
        #[arg(long, conflicts_with = "set")]
        point: Option<PointRep>,
        #[arg(long)]
        set: Option<PathBuf>,
        #[arg(long, default_value_t = 40)]
        depth: usize,
        /// Thresholds 2^k · capital, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        k: Vec<u32>,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// K_r profile of a point under an estimator.
    KrProfile {
        #[arg(long)]
        cover: NiceCoverDescriptor,
        #[arg(long)]
        point: PointRep,
        #[arg(long, default_value_t = 1)]
        r_min: usize,
        #[arg(long, default_value_t = 256)]
        r_max: usize,
        #[arg(long, default_value = "compressor:deflate")]
        estimator: String,
        #[arg(long, default_value = "1/2")]
        tail: String,
        #[arg(long)]
        table: bool,
    },
    /// Two-sided constructive-dimension estimate of a point.
    Cdim {
        #[arg(long)]
        cover: NiceCoverDescriptor,
        #[arg(long)]
        point: PointRep,
        #[arg(long, default_value_t = 1024)]
        depth: usize,
        #[arg(long, default_value = "compressor:deflate")]
        estimator: String,
        /// Grid spacing; the grid runs from one step to the ambient dimension.
        #[arg(long, default_value = "1/20")]
        step: String,
        #[arg(long, default_value_t = 16)]
        threshold_bits: u32,
    },
}

#[derive(Debug, Args)]
pub struct GaleArgs {
    /// Gale file (JSON, as written by `compile`).
    #[arg(long)]
    pub gale: PathBuf,
    /// Cover; optional when the gale file records it.
    #[arg(long)]
    pub cover: Option<NiceCoverDescriptor>,
}

impl GaleArgs {
    fn load(&self) -> Result<SupergaleTable> {
        SupergaleTable::load_json(&read(&self.gale)?, self.cover.as_ref()).map_err(|e| in_file(&self.gale, e))
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Io { .. } => e,
        other => Error::Parse(format!("{}: {other}", path.display())),
    }
}

/// Outcome of a subcommand: a report and whether it represents a failed check.
struct Outcome {
    body: String,
    failed: bool,
}

fn report<T: Serialize>(command: &str, payload: T, failed: bool) -> Outcome {
    let mut v = serde_json::to_value(payload).expect("reports serialize");
    if let Value::Object(map) = &mut v {
        map.insert("command".into(), json!(command));
        map.insert("precision_bits".into(), json!(precision_bits()));
    }
    Outcome { body: serde_json::to_string_pretty(&v).expect("json prints"), failed }
}

/// Run the CLI on `args` (including the program name), writing the report to
/// `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build();
    let result = match pool {
        Ok(pool) => pool.install(|| execute(cli.command)),
        Err(e) => Err(Error::Parse(format!("thread pool: {e}"))),
    };
    match result {
        Ok(outcome) => {
            let _ = writeln!(out, "{}", outcome.body);
            i32::from(outcome.failed)
        }
        Err(Error::Unvalidated(msg)) => {
            let _ = writeln!(err, "error: gale failed validation: {msg}");
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn execute(command: Command) -> Result<Outcome> {
    match command {
        Command::ValidateCover { cover, depth } => {
            if depth < 1 {
                return Err(Error::Parse("depth must be at least 1".into()));
            }
            let r = validate_nice_axioms(&cover, depth);
            let failed = !r.passed();
            Ok(report("validate-cover", json!({ "cover": cover.to_string(), "passed": !failed, "report": r }), failed))
        }
        Command::ValidateGale { gale, s, depth, tol, equality } => {
            let table = gale.load()?;
            if let Some(s) = s {
                let expected = parse_rat(&s)?;
                if expected != table.s() {
                    return Err(Error::Parse(format!(
                        "{}: file has s = {}, --s asked for {expected}",
                        gale.gale.display(),
                        table.s()
                    )));
                }
            }
            let tol = parse_big_rational(&tol)?;
            let r = if equality {
                gale_equality_report(&table, depth, &tol)?
            } else {
                validate_supergale(&table, depth, &tol)?
            };
            let failed = !r.passed();
            Ok(report("validate-gale", json!({ "passed": !failed, "report": r }), failed))
        }
        Command::Compile { cover, antichain, s, k, out } => {
            let target = Antichain::parse(&cover, &read(&antichain)?).map_err(|e| in_file(&antichain, e))?;
            let s = parse_rat(&s)?;
            let kraft = kraft_sum(&cover, &target, Exponent::Rational(s))?;
            let table = cover_to_supergale(&cover, &target, s, k)?;
            let text = table.to_json();
            let written = match &out {
                Some(path) => {
                    fs::write(path, &text).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
                    Value::String(path.display().to_string())
                }
                None => serde_json::from_str(&text)?,
            };
            Ok(report(
                "compile",
                json!({
                    "targets": target.len(),
                    "kraft": kraft.to_string(),
                    "kraft_approx": kraft.to_f64(),
                    "k": k,
                    "gale": written,
                }),
                false,
            ))
        }
        Command::Extract { gale, k, depth } => {
            let table = gale.load()?;
            let depth = depth.unwrap_or(table.support_depth() + 1);
            let ex = supergale_to_cover(&table, k, depth)?;
            let kraft = kraft_sum(table.cover(), &ex.antichain, Exponent::Rational(table.s()))?;
            let addrs: Vec<String> = ex.antichain.elements().map(ToString::to_string).collect();
            Ok(report(
                "extract",
                json!({
                    "antichain": addrs,
                    "kraft": kraft.to_string(),
                    "kraft_approx": kraft.to_f64(),
                    "candidates": ex.candidates,
                    "complete": ex.complete,
                    "depth": depth,
                }),
                false,
            ))
        }
        Command::Kraft { cover, antichain, s } => {
            let target = Antichain::parse(&cover, &read(&antichain)?).map_err(|e| in_file(&antichain, e))?;
            let sum = kraft_sum(&cover, &target, s)?;
            Ok(report(
                "kraft",
                json!({ "s": s.to_string(), "elements": target.len(), "kraft": sum.to_string(), "kraft_approx": sum.to_f64() }),
                false,
            ))
        }
        Command::Dim { cover, set, n, table } => {
            let desc = SetDescription::parse(&read(&set)?).map_err(|e| in_file(&set, e))?;
            let est = dim_search(&cover, &desc, n)?;
            if table {
                let log_radix = (cover.radix() as f64).log2();
                let mut body = String::from("n\tN_n\testimate\n");
                for (m, count) in &est.counts {
                    let c: f64 = count.parse().unwrap_or(f64::INFINITY);
                    let e = if *m == 0 || c == 0.0 { 0.0 } else { c.log2() / (*m as f64 * log_radix) };
                    body.push_str(&format!("{m}\t{count}\t{e:.9}\n"));
                }
                return Ok(Outcome { body: body.trim_end().to_string(), failed: false });
            }
            Ok(report("dim", est, false))
        }
        Command::Success { gale, point, set, depth, k, samples, seed } => {
            let table = gale.load()?;
            match (point, set) {
                (Some(point), None) => {
                    let capital = table.root_capital();
                    let thresholds: Vec<Surd> = k
                        .iter()
                        .map(|&k| capital.scale(&BigRational::from_integer(BigInt::one() << k as usize)))
                        .collect();
                    let trace = evaluate_success(&table, &point, depth, &thresholds)?;
                    let crossings: Vec<Value> = k
                        .iter()
                        .zip(&trace.crossings)
                        .map(|(k, (_, level))| json!({ "k": k, "first_level": level }))
                        .collect();
                    Ok(report(
                        "success",
                        json!({
                            "point": point.id(),
                            "depth": depth,
                            "root_capital": capital.to_string(),
                            "max": trace.max().to_string(),
                            "log2_values": trace.log2_values(),
                            "crossings": crossings,
                        }),
                        false,
                    ))
                }
                (None, Some(path)) => {
                    let desc = SetDescription::parse(&read(&path)?).map_err(|e| in_file(&path, e))?;
                    let r = gale_upper_bound(&table, &desc, samples, depth, &k, seed, 8)?;
                    Ok(report("success", r, false))
                }
                _ => Err(Error::Parse("success needs exactly one of --point or --set".into())),
            }
        }
        Command::KrProfile { cover, point, r_min, r_max, estimator, tail, table } => {
            let est = parse_estimator(&estimator)?;
            let profile = kr_profile(&cover, &point, r_min, r_max, est.as_ref())?;
            if table {
                return Ok(Outcome { body: profile.table().trim_end().to_string(), failed: false });
            }
            let estimate = cdim_point_estimate(&profile, parse_rat(&tail)?).ok();
            Ok(report("kr-profile", json!({ "profile": profile, "estimate": estimate }), false))
        }
        Command::Cdim { cover, point, depth, estimator, step, threshold_bits } => {
            let est = parse_estimator(&estimator)?;
            let step = parse_rat(&step)?;
            if step <= Rat::from_integer(0) {
                return Err(Error::Parse("--step must be positive".into()));
            }
            let top = Rat::from_integer(cover.ambient_dimension().round() as i64);
            let mut grid = Vec::new();
            let mut s = step;
            while s <= top {
                grid.push(s);
                s += step;
            }
            let options = CdimOptions { step: Some(step), threshold_bits, ..CdimOptions::default() };
            let r = cdim_via_gales(&cover, &point, &grid, depth, est.as_ref(), &options)?;
            Ok(report("cdim", r, false))
        }
    }
}
