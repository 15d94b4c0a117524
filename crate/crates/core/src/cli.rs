//! The `nia-overapprox` command line: `relax`, `check`, `run` and `report`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::harness::{
    compute_vbs, newly_solved_by, run_suite, scatter_csv, summarize, summary_csv, CampaignReport,
    Encoding, SolverSpec, SuiteConfig, Summary,
};
use crate::lia::{lia_overapproximate, LiaConfig, PairScope};
use crate::nra::{nra_overapproximate, NraConfig};
use crate::oracle::{check, Bounds, CheckReport, SearchConfig, DEFAULT_BUDGET};
use crate::smtlib::parse_script;

#[derive(Debug, Parser)]
#[command(
    name = "nia-overapprox",
    version,
    about = "Overapproximate NIA problems by LIA and NRA ones"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Write the LIA or NRA overapproximation of an SMT-LIB2 file.
    Relax(RelaxArgs),
    /// Search a box of integer assignments for a model.
    Check(CheckArgs),
    /// Run solvers on a benchmark suite in several encodings.
    Run(RunArgs),
    /// Compute solved counts, virtual best solver, newly solved and tightness.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Lia,
    Nra,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScopeArg {
    Assert,
    Script,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct RelaxArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Bound ufrac by 1 - 1/y instead of 1 (nra).
    #[arg(long)]
    tight_frac: bool,
    /// Maximum number of product pairs axiomatized together (lia).
    #[arg(long)]
    pair_cap: Option<usize>,
    /// Pair products of the same assertion only, or of the whole script (lia).
    #[arg(long, value_enum)]
    pair_scope: Option<ScopeArg>,
    /// Keep inequalities as they are (nra).
    #[arg(long)]
    no_relax_ineq: bool,
    /// Print relaxed strict atoms without the outer negation (nra).
    #[arg(long)]
    appendix_form: bool,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    input: PathBuf,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// `LO:HI` for all variables or `NAME=LO:HI` for one; repeatable.
    #[arg(long = "bound", allow_hyphen_values = true, default_value = "-4:4")]
    bounds: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Include the wall time in the report.
    #[arg(long)]
    timing: bool,
    input: PathBuf,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// `NAME=COMMAND`; `{file}` in COMMAND is replaced by the benchmark path.
    #[arg(long = "solver", required = true)]
    solvers: Vec<String>,
    #[arg(long, default_value_t = crate::harness::DEFAULT_TIMEOUT)]
    timeout: f64,
    /// Address-space limit per solver process in bytes; 0 disables it.
    #[arg(long, default_value_t = crate::harness::DEFAULT_MEMORY_LIMIT)]
    mem: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    suite: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "nia,lia,nra")]
    encodings: Vec<String>,
    #[arg(long)]
    results: PathBuf,
    /// Directory for the generated encodings; defaults to RESULTS with `.d` appended.
    #[arg(long)]
    work_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(long)]
    results: PathBuf,
    #[arg(long)]
    vbs: bool,
    #[arg(long)]
    newly_solved: bool,
    #[arg(long)]
    tightness: bool,
    /// Write per-benchmark best times (unsolved at the time limit) to this CSV file.
    #[arg(long)]
    scatter: Option<PathBuf>,
    /// Time limit used for unsolved benchmarks in the scatter data.
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

/// Exit code for an error: 1 input, 2 unsupported, 3 internal invariant.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnsupportedFeature(_) | Error::UnsupportedLogic(_) => 2,
        Error::Invariant(_) => 3,
        _ => 1,
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn with_path(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { .. } | Error::Sort { .. } => {
            Error::Script(format!("{}:{e}", path.display()))
        }
        other => other,
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

fn relax(a: RelaxArgs, out: &mut dyn Write) -> Result<()> {
    let lia_only = a.pair_cap.is_some() || a.pair_scope.is_some();
    let nra_only = a.tight_frac || a.no_relax_ineq || a.appendix_form;
    match a.mode {
        ModeArg::Lia if nra_only => {
            return Err(usage(
                "--tight-frac, --no-relax-ineq and --appendix-form need --mode nra",
            ))
        }
        ModeArg::Nra if lia_only => {
            return Err(usage("--pair-cap and --pair-scope need --mode lia"))
        }
        _ => {}
    }
    let script = parse_script(&read(&a.input)?).map_err(|e| with_path(&a.input, e))?;
    let result = match a.mode {
        ModeArg::Lia => {
            let mut cfg = LiaConfig::default();
            if let Some(n) = a.pair_cap {
                cfg.pair_cap = n;
            }
            if let Some(s) = a.pair_scope {
                cfg.pair_scope = match s {
                    ScopeArg::Assert => PairScope::SameAssertion,
                    ScopeArg::Script => PairScope::WholeScript,
                };
            }
            lia_overapproximate(&script, &cfg)?
        }
        ModeArg::Nra => nra_overapproximate(
            &script,
            &NraConfig {
                tight_frac: a.tight_frac,
                relax_inequalities: !a.no_relax_ineq,
                appendix_form: a.appendix_form,
                ..NraConfig::default()
            },
        )?,
    };
    let text = result.render();
    match a.output {
        Some(p) => fs::write(&p, text).map_err(|e| Error::io(&p, e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn parse_range(s: &str) -> Option<(i64, i64)> {
    let (lo, hi) = s.split_once(':')?;
    Some((lo.trim().parse().ok()?, hi.trim().parse().ok()?))
}

fn parse_bounds(specs: &[String]) -> Result<Bounds> {
    let mut bounds = Bounds::default();
    for spec in specs {
        let bad = || usage(format!("bound `{spec}` is not LO:HI or NAME=LO:HI"));
        match spec.split_once('=') {
            Some((name, range)) => {
                let (lo, hi) = parse_range(range).ok_or_else(bad)?;
                bounds = bounds.with(name.trim(), lo, hi);
            }
            None => bounds.default = parse_range(spec).ok_or_else(bad)?,
        }
    }
    Ok(bounds)
}

fn check_cmd(a: CheckArgs, out: &mut dyn Write) -> Result<()> {
    let bounds = parse_bounds(&a.bounds)?;
    let script = parse_script(&read(&a.input)?).map_err(|e| with_path(&a.input, e))?;
    let cfg = SearchConfig {
        budget: a.budget,
        workers: a.jobs.max(1),
    };
    let (report, secs) = check(&script, &bounds, &cfg)?;
    let json = CheckReport::from_search(&report, a.timing.then_some(secs));
    writeln!(out, "{}", serde_json::to_string(&json)?).map_err(|e| Error::io("<stdout>", e))
}

fn table_json(s: &Summary) -> Value {
    json!({
        "benchmarks": s.benchmarks,
        "solvers": s.solvers,
        "virtual_best_solver": s.vbs,
    })
}

fn run_cmd(a: RunArgs, out: &mut dyn Write) -> Result<()> {
    if a.timeout <= 0.0 {
        return Err(usage("--timeout must be positive"));
    }
    let solvers = a
        .solvers
        .iter()
        .map(|s| {
            let mut spec = SolverSpec::parse(s)?;
            spec.timeout = a.timeout;
            spec.memory_limit = (a.mem > 0).then_some(a.mem);
            Ok(spec)
        })
        .collect::<Result<Vec<_>>>()?;
    let encodings = a
        .encodings
        .iter()
        .map(|e| Encoding::parse(e).ok_or_else(|| usage(format!("unknown encoding `{e}`"))))
        .collect::<Result<Vec<_>>>()?;
    let work_dir = a.work_dir.unwrap_or_else(|| {
        let mut p = a.results.clone().into_os_string();
        p.push(".d");
        PathBuf::from(p)
    });
    let report = run_suite(&SuiteConfig {
        suite: a.suite,
        work_dir,
        encodings,
        solvers,
        jobs: a.jobs,
        results: a.results,
        lia: LiaConfig::default(),
        nra: NraConfig::default(),
    })?;
    let s = summarize(&report);
    writeln!(out, "{}", serde_json::to_string_pretty(&table_json(&s))?)
        .map_err(|e| Error::io("<stdout>", e))
}

fn csv_section(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Invariant(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn report_cmd(a: ReportArgs, out: &mut dyn Write) -> Result<()> {
    let report = CampaignReport::load(&a.results)?;
    let s = summarize(&report);
    let all = !(a.vbs || a.newly_solved || a.tightness);
    let encodings = report.encodings();
    let overs: Vec<Encoding> = encodings
        .iter()
        .copied()
        .filter(|e| *e != Encoding::Nia)
        .collect();
    let text = match a.format {
        Format::Json => {
            let Value::Object(mut obj) = table_json(&s) else {
                unreachable!()
            };
            if all || a.vbs {
                let vbs: Map<String, Value> = encodings
                    .iter()
                    .map(|&e| (e.name().to_string(), json!(compute_vbs(&report, e))))
                    .collect();
                obj.insert("vbs".into(), Value::Object(vbs));
            }
            if all || a.newly_solved {
                obj.insert("newly_solved".into(), json!(s.newly_solved));
                obj.insert("newly_solved_any".into(), json!(s.newly_solved_any));
                let by: Map<String, Value> = report
                    .solvers()
                    .into_iter()
                    .map(|solver| {
                        let per: Map<String, Value> = overs
                            .iter()
                            .map(|&e| {
                                let set = newly_solved_by(&report, Encoding::Nia, e, solver);
                                (e.name().to_string(), json!(set))
                            })
                            .collect();
                        (solver.to_string(), Value::Object(per))
                    })
                    .collect();
                obj.insert("newly_solved_by".into(), Value::Object(by));
            }
            if all || a.tightness {
                obj.insert("tightness".into(), json!(s.tightness));
            }
            serde_json::to_string_pretty(&Value::Object(obj))? + "\n"
        }
        Format::Csv => {
            let mut sections = vec![summary_csv(&s)?];
            if all || a.vbs {
                let mut rows = Vec::new();
                for &e in &encodings {
                    for r in compute_vbs(&report, e) {
                        rows.push(vec![
                            r.benchmark,
                            e.name().to_string(),
                            r.best_time.map(|t| t.to_string()).unwrap_or_default(),
                            r.solver.unwrap_or_default(),
                        ]);
                    }
                }
                sections.push(csv_section(
                    &["benchmark", "encoding", "best_time", "solver"],
                    rows,
                )?);
            }
            if all || a.newly_solved {
                let rows = s
                    .newly_solved
                    .iter()
                    .flat_map(|(e, bs)| {
                        bs.iter()
                            .map(move |b| vec![e.name().to_string(), b.clone()])
                    })
                    .collect();
                sections.push(csv_section(&["encoding", "newly_solved"], rows)?);
            }
            if all || a.tightness {
                let rows = s
                    .tightness
                    .iter()
                    .map(|(e, t)| {
                        vec![
                            e.name().to_string(),
                            t.base_unsat.to_string(),
                            t.still_unsat.to_string(),
                            t.unsat_to_sat.to_string(),
                            t.unsat_to_unsolved.to_string(),
                        ]
                    })
                    .collect();
                sections.push(csv_section(
                    &[
                        "encoding",
                        "base_unsat",
                        "still_unsat",
                        "unsat_to_sat",
                        "unsat_to_unsolved",
                    ],
                    rows,
                )?);
            }
            sections.join("\n")
        }
    };
    if let Some(p) = &a.scatter {
        fs::write(p, scatter_csv(&report, a.timeout)?).map_err(|e| Error::io(p, e))?;
    }
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Cmd::Relax(a) => relax(a, out),
        Cmd::Check(a) => check_cmd(a, out),
        Cmd::Run(a) => run_cmd(a, out),
        Cmd::Report(a) => report_cmd(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.to_string().replace('\n', " "));
            exit_code(&e)
        }
    }
}

pub fn main() -> i32 {
    run(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
