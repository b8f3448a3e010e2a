//! Command-line front end for `corravg`.
//!
//! Exit codes: `0` success, `1` a checked inequality failed, `2` usage or input error.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use corravg::arith::{generate, load, write_function, FunctionKind, SampledFunction};
use corravg::bounds::{fit_exponent, gallagher_check, theorem_report, Variant, DEFAULT_THRESHOLD};
use corravg::correlation::deviation;
use corravg::scan::{fmt12, parse_grid, round12, scan, write_csv};
use corravg::selberg::WindowSums;
use corravg::spectral::{verify_identity, Identity};
use corravg::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "CORRAVG_THREADS";

#[derive(Debug, Parser)]
#[command(name = "corravg", version, about = "Correlation averages and Selberg integrals of balanced arithmetic functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a sampled function in `n,value` format.
    Gen(Common),
    /// Compute D_f, J_f or the modified J_f at one H.
    Compute {
        #[command(flatten)]
        common: Common,
        #[arg(long = "H")]
        cap_h: usize,
        #[arg(long, value_enum)]
        quantity: Quantity,
    },
    /// Compare a correlation average with its spectral main term.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long = "H")]
        cap_h: usize,
        /// One of I, II, III; all three when omitted.
        #[arg(long)]
        identity: Option<String>,
    },
    /// All quantities and checks over a grid of H.
    Scan {
        #[command(flatten)]
        common: Common,
        /// `geom:start:stop:count` or `list:a,b,c`.
        #[arg(long = "H-grid")]
        h_grid: String,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Band energy against the (modified) Selberg integral.
    Gallagher {
        #[command(flatten)]
        common: Common,
        #[arg(long = "H")]
        cap_h: usize,
        #[arg(long, default_value = "i")]
        variant: String,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
    },
    /// Finite-scale report for the bound linking two generations.
    Theorem {
        #[command(flatten)]
        common: Common,
        #[arg(long = "H")]
        cap_h: usize,
        #[arg(long, default_value = "i")]
        variant: String,
        #[arg(long = "A", allow_negative_numbers = true)]
        a_exp: f64,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// parity | liouville | moebius | rademacher | file:PATH
    #[arg(long)]
    function: String,
    #[arg(long = "N")]
    big_n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    json: bool,
    /// Write primary output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Quantity {
    Deviation,
    Selberg,
    Modified,
}

impl Common {
    fn load(&self) -> Result<SampledFunction, Error> {
        if let Some(path) = self.function.strip_prefix("file:") {
            let f = load(path)?;
            if let Some(n) = self.big_n {
                if n != f.big_n() {
                    return Err(Error::InvalidArgument(format!(
                        "--N {n} disagrees with file length 3*{}",
                        f.big_n()
                    )));
                }
            }
            return Ok(f);
        }
        let kind: FunctionKind = self.function.parse()?;
        let n = self
            .big_n
            .ok_or_else(|| Error::InvalidArgument("--N is required for generated functions".into()))?;
        generate(kind, n, self.seed)
    }

    fn meta(&self, f: &SampledFunction) -> Value {
        json!({
            "function": self.function,
            "N": f.big_n(),
            "seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
        })
    }

    fn sink<'a>(&self, stdout: &'a mut dyn Write) -> io::Result<Box<dyn Write + 'a>> {
        Ok(match &self.out {
            Some(path) => Box::new(io::BufWriter::new(File::create(path)?)),
            None => Box::new(stdout),
        })
    }
}

/// Rounds every float in a JSON tree to 12 significant digits.
fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().expect("f64 number"));
            serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

fn report<T: Serialize>(meta: Value, results: &[T]) -> Result<String, Error> {
    let results = serde_json::to_value(results).map_err(|e| Error::Io(e.to_string()))?;
    let doc = json!({ "meta": meta, "results": round_json(results) });
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// Caps the global worker pool from `CORRAVG_THREADS`, once per process.
fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|s| s.parse::<usize>().ok()) {
        // a second call in the same process fails harmlessly
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

enum Outcome {
    Ok,
    CheckFailed,
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_with(argv: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    configure_threads();
    match dispatch(cli.command, stdout, stderr) {
        Ok(Outcome::Ok) => EXIT_OK,
        Ok(Outcome::CheckFailed) => EXIT_CHECK_FAILED,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run(argv: &[String]) -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Outcome, Error> {
    match command {
        Command::Gen(common) => {
            let f = common.load()?;
            let mut out = common.sink(stdout)?;
            write_function(&f, &mut out)?;
            out.flush()?;
            Ok(Outcome::Ok)
        }
        Command::Compute { common, cap_h, quantity } => {
            let f = common.load()?;
            let value = match quantity {
                Quantity::Deviation => deviation(&f, cap_h)?,
                Quantity::Selberg => WindowSums::new(&f).selberg(cap_h)?,
                Quantity::Modified => WindowSums::new(&f).modified(cap_h)?,
            };
            let text = if common.json {
                report(common.meta(&f), &[json!({ "quantity": quantity, "H": cap_h, "value": value })])?
            } else {
                format!("{}\n", fmt12(value))
            };
            emit(&common, stdout, &text)?;
            Ok(Outcome::Ok)
        }
        Command::Verify { common, cap_h, identity } => {
            let f = common.load()?;
            let which: Vec<Identity> = match identity {
                Some(s) => vec![s.parse()?],
                None => Identity::ALL.to_vec(),
            };
            let reports = which
                .iter()
                .map(|&w| verify_identity(&f, cap_h, w))
                .collect::<Result<Vec<_>, _>>()?;
            let text = if common.json {
                report(common.meta(&f), &reports)?
            } else {
                reports
                    .iter()
                    .map(|r| {
                        format!(
                            "{:?}\tH={}\tlhs={}\tmain={}\tresidual={}\tbound={}\tratio={}\n",
                            r.which,
                            r.cap_h,
                            fmt12(r.lhs),
                            fmt12(r.main_term),
                            fmt12(r.residual),
                            fmt12(r.bound),
                            fmt12(r.ratio)
                        )
                    })
                    .collect()
            };
            emit(&common, stdout, &text)?;
            let failed: Vec<_> = reports.iter().filter(|r| !r.holds()).collect();
            for r in &failed {
                writeln!(stderr, "identity {:?} residual ratio {} exceeds 1", r.which, fmt12(r.ratio))?;
            }
            Ok(if failed.is_empty() { Outcome::Ok } else { Outcome::CheckFailed })
        }
        Command::Scan { common, h_grid, csv } => {
            let f = common.load()?;
            let grid = parse_grid(&h_grid)?;
            let rows = scan(&f, &grid)?;
            if let Some(path) = &csv {
                let file = File::create(path)?;
                write_csv(&rows, io::BufWriter::new(file))?;
            }
            if common.json {
                emit(&common, stdout, &report(common.meta(&f), &rows)?)?;
            } else if csv.is_none() || common.out.is_some() {
                let mut buf = Vec::new();
                write_csv(&rows, &mut buf)?;
                emit(&common, stdout, &String::from_utf8_lossy(&buf))?;
            }
            let points: Vec<_> = rows.iter().map(|r| (r.cap_h, r.selberg)).collect();
            match fit_exponent(&points, f.big_n()) {
                Ok(fit) => writeln!(
                    stderr,
                    "fitted A for J over the grid: {} ({} points, {} zero values skipped)",
                    fmt12(fit.a_exp),
                    fit.used,
                    fit.excluded
                )?,
                Err(e) => writeln!(stderr, "no exponent fit: {e}")?,
            }
            let failed = rows.iter().any(|r| r.identity_ratios.iter().any(|&q| q > 1.0));
            Ok(if failed { Outcome::CheckFailed } else { Outcome::Ok })
        }
        Command::Gallagher {
            common,
            cap_h,
            variant,
            threshold,
        } => {
            let f = common.load()?;
            let variant: Variant = variant.parse()?;
            let r = gallagher_check(&f, cap_h, variant, threshold)?;
            let text = if common.json {
                report(common.meta(&f), std::slice::from_ref(&r))?
            } else {
                format!(
                    "variant={}\th={}\tlhs={}\trhs_core={}\tratio={}\tthreshold={}\n",
                    r.variant,
                    r.h,
                    fmt12(r.lhs),
                    fmt12(r.rhs_core),
                    fmt12(r.ratio),
                    fmt12(r.threshold)
                )
            };
            emit(&common, stdout, &text)?;
            if r.within_threshold() {
                Ok(Outcome::Ok)
            } else {
                writeln!(stderr, "ratio {} exceeds threshold {}", fmt12(r.ratio), fmt12(r.threshold))?;
                Ok(Outcome::CheckFailed)
            }
        }
        Command::Theorem {
            common,
            cap_h,
            variant,
            a_exp,
        } => {
            let f = common.load()?;
            let variant: Variant = variant.parse()?;
            let r = theorem_report(&f, cap_h, variant, a_exp)?;
            let text = if common.json {
                report(common.meta(&f), std::slice::from_ref(&r))?
            } else {
                let p = &r.params;
                format!(
                    "variant={} A={} delta={} gamma={} H={} derived_length={}\n\
                     hypothesis: at H {} (ratio {}), at derived length {} (ratio {})\n\
                     observed={} bound={} conclusion_ratio={}\n",
                    p.variant,
                    fmt12(p.a_exp),
                    fmt12(p.delta),
                    fmt12(p.gamma),
                    p.cap_h,
                    p.derived_length,
                    fmt12(r.hypothesis_at_h),
                    fmt12(r.hypothesis_ratio_h),
                    fmt12(r.hypothesis_at_derived),
                    fmt12(r.hypothesis_ratio_derived),
                    fmt12(r.observed),
                    fmt12(r.bound),
                    fmt12(r.conclusion_ratio)
                )
            };
            emit(&common, stdout, &text)?;
            Ok(Outcome::Ok)
        }
    }
}

fn emit(common: &Common, stdout: &mut dyn Write, text: &str) -> Result<(), Error> {
    let mut out = common.sink(stdout)?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}
