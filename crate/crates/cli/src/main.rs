use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use painlax_core::cases::Registry;
use painlax_core::isomono::{derive, Derivation};
use painlax_core::numerics::{run_check, CheckKind, NumericOptions};
use painlax_core::report::Check;
use painlax_core::sampling::DEFAULT_SEED;
use painlax_core::suites;
use serde::Serialize;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "painlax", version, about = "Isomonodromic Lax pairs from multi-Poisson loop algebras")]
struct Cli {
    /// Directory of case files; falls back to the built-in cases when the
    /// default `./cases` is absent.
    #[arg(long, global = true)]
    cases_dir: Option<PathBuf>,
    /// Seed for randomized checks (overrides PAINLAX_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Propositions,
    Reduction,
    Cases,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Emit {
    Lax,
    Hamiltonian,
    Report,
    Ode,
}

#[derive(Clone, Copy, ValueEnum)]
enum NumericCheck {
    Spectral,
    Curvature,
    Commute,
    Gradient,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print its JSON report.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value = "sl2")]
        algebra: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include wall-clock time; the report is then no longer reproducible.
        #[arg(long)]
        timings: bool,
    },
    /// Derive a case and emit its Lax pair, Hamiltonians, scalar ODE or report.
    Derive {
        #[arg(long)]
        case: String,
        #[arg(long, value_enum, default_value = "report")]
        emit: Emit,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate a derived case and run one numeric check.
    Numeric {
        #[arg(long)]
        case: String,
        #[arg(long, value_enum)]
        check: NumericCheck,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long)]
        t1: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        /// Initial phase point, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x0: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    ListCases,
    ShowCase {
        id: String,
    },
}

enum Failure {
    Usage(String),
    Check,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure::Usage(e.to_string())
    }
}

fn seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("PAINLAX_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("PAINLAX_SEED is not an integer: {v}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn registry(dir: Option<&Path>) -> Result<Registry, Failure> {
    match dir {
        Some(d) => Ok(Registry::from_dir(d)?),
        None if Path::new("cases").is_dir() => Ok(Registry::from_dir(Path::new("cases"))?),
        None => Ok(Registry::builtin()),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct Environment {
    package: &'static str,
    version: &'static str,
    seed: u64,
    suite: String,
}

#[derive(Serialize)]
struct SuiteResult {
    schema_version: u32,
    suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    algebra: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    seed: u64,
    environment: Environment,
    pass: bool,
    checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<u128>,
}

fn verify(reg: &Registry, suite: Suite, algebra: &str, n: usize, seed: u64, timings: bool) -> Result<SuiteResult, Failure> {
    let name = match suite {
        Suite::Propositions => "propositions",
        Suite::Reduction => "reduction",
        Suite::Cases => "cases",
    };
    let start = Instant::now();
    let report = suites::run(reg, name, algebra, n, seed)?;
    let scoped = !matches!(suite, Suite::Cases);
    Ok(SuiteResult {
        schema_version: SCHEMA_VERSION,
        suite: name.into(),
        algebra: scoped.then(|| algebra.to_string()),
        n: scoped.then_some(n),
        seed,
        environment: Environment {
            package: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            seed,
            suite: name.into(),
        },
        pass: report.pass(),
        checks: report.checks,
        timing_ms: timings.then(|| start.elapsed().as_millis()),
    })
}

#[derive(Serialize)]
struct DeriveReport<'a> {
    schema_version: u32,
    case: &'a str,
    pass: bool,
    l: u32,
    times: Vec<String>,
    pairs: Vec<(String, String)>,
    conditions: &'a [painlax_core::isomono::ConditionReport],
    probes: &'a [painlax_core::isomono::ProbeReport],
    hamiltonians: &'a [painlax_core::isomono::DerivedHamiltonian],
    #[serde(skip_serializing_if = "Option::is_none")]
    golden: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<serde_json::Value>,
    odes: Vec<(String, String)>,
    checks: &'a [Check],
}

fn outcome<T: Serialize>(r: &Option<Result<T, String>>) -> Option<serde_json::Value> {
    r.as_ref().map(|r| match r {
        Ok(v) => serde_json::to_value(v).expect("reports serialize"),
        Err(e) => serde_json::json!({ "error": e }),
    })
}

fn ode_text(d: &Derivation) -> Vec<(String, String)> {
    d.odes
        .iter()
        .map(|(f, r)| {
            let t = match r {
                Ok(o) => format!("y{} = {}", "'".repeat(o.order), o.rhs.to_text()),
                Err(e) => format!("error: {e}"),
            };
            (f.clone(), t)
        })
        .collect()
}

fn render(d: &Derivation, what: Emit) -> String {
    let mut s = String::new();
    match what {
        Emit::Hamiltonian => {
            for h in &d.hamiltonians {
                writeln!(s, "{}", h.h.to_text()).unwrap();
            }
        }
        Emit::Ode => {
            for (f, t) in ode_text(d) {
                writeln!(s, "{f}: {t}").unwrap();
            }
        }
        Emit::Lax => {
            writeln!(s, "l = {}", d.pair.l).unwrap();
            for (c, e) in d.spec.coords.iter().zip(&d.pair.l_coords) {
                writeln!(s, "L.{c} = {}", e.to_text()).unwrap();
            }
            for f in &d.pair.flows {
                for (c, e) in d.spec.coords.iter().zip(&f.a) {
                    writeln!(s, "A[{}].{c} = {}", f.time, e.to_text()).unwrap();
                }
            }
        }
        Emit::Report => {
            s = json(&DeriveReport {
                schema_version: SCHEMA_VERSION,
                case: &d.case,
                pass: d.pass(),
                l: d.pair.l,
                times: d.times.iter().map(|t| t.to_string()).collect(),
                pairs: d.pairs.iter().map(|(q, p)| (q.to_string(), p.to_string())).collect(),
                conditions: &d.conditions,
                probes: &d.probes,
                hamiltonians: &d.hamiltonians,
                golden: outcome(&d.golden),
                weights: outcome(&d.weights),
                odes: ode_text(d),
                checks: &d.checks,
            })
        }
    }
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    let seed = seed(cli.seed)?;
    let reg = registry(cli.cases_dir.as_deref())?;
    match cli.command {
        Command::Verify { suite, algebra, n, out, timings } => {
            let r = verify(&reg, suite, &algebra, n, seed, timings)?;
            emit(out.as_deref(), &json(&r))?;
            if !r.pass {
                return Err(Failure::Check);
            }
        }
        Command::Derive { case, emit: what, out } => {
            let c = reg.get(&case)?;
            let d = derive(c, &reg)?;
            emit(out.as_deref(), &render(&d, what))?;
            if !d.pass() {
                for c in d.checks.iter().filter(|c| !c.pass) {
                    eprintln!("check failed: {} ({})", c.name, c.detail.as_deref().unwrap_or(""));
                }
                return Err(Failure::Check);
            }
        }
        Command::Numeric { case, check, t0, t1, tol, x0, out } => {
            let c = reg.get(&case)?;
            let d = derive(c, &reg)?;
            let kind = match check {
                NumericCheck::Spectral => CheckKind::Spectral,
                NumericCheck::Curvature => CheckKind::Curvature,
                NumericCheck::Commute => CheckKind::Commute,
                NumericCheck::Gradient => CheckKind::Gradient,
            };
            let opts = NumericOptions { t0, t1, tol, x0, seed, ..NumericOptions::default() };
            let r = run_check(&d, c, kind, &opts)?;
            #[derive(Serialize)]
            struct Versioned<'a> {
                schema_version: u32,
                #[serde(flatten)]
                report: &'a painlax_core::numerics::NumericReport,
            }
            emit(out.as_deref(), &json(&Versioned { schema_version: SCHEMA_VERSION, report: &r }))?;
            if !r.pass {
                return Err(Failure::Check);
            }
        }
        Command::ListCases => {
            let mut s = String::new();
            for c in &reg.cases {
                writeln!(s, "{}\t{}", c.id, c.title).unwrap();
            }
            emit(None, &s)?;
        }
        Command::ShowCase { id } => emit(None, &json(reg.get(&id)?))?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
