use std::collections::{BTreeSet, VecDeque};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{mpsc, Mutex};
use std::thread;

use super::report::CampaignReport;
use super::runner::{run_solver, Encoding, SolverOutcome, SolverSpec, Status};
use crate::error::{Error, Result};
use crate::lia::{lia_overapproximate, LiaConfig};
use crate::nra::{nra_overapproximate, NraConfig};
use crate::smtlib::parse_script;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Directory of original NIA benchmarks (`*.smt2`, searched recursively).
    pub suite: PathBuf,
    /// Where generated LIA and NRA files go.
    pub work_dir: PathBuf,
    pub encodings: Vec<Encoding>,
    pub solvers: Vec<SolverSpec>,
    pub jobs: usize,
    /// Line-delimited JSON store; existing records are kept and not rerun.
    pub results: PathBuf,
    pub lia: LiaConfig,
    pub nra: NraConfig,
}

/// Benchmark ids (paths relative to `suite`, `/`-separated) and their files, sorted.
pub fn discover(suite: &Path) -> Result<Vec<(String, PathBuf)>> {
    let mut out = Vec::new();
    let mut dirs = vec![suite.to_path_buf()];
    while let Some(dir) = dirs.pop() {
        for entry in fs::read_dir(&dir).map_err(|e| Error::io(&dir, e))? {
            let path = entry.map_err(|e| Error::io(&dir, e))?.path();
            if path.is_dir() {
                dirs.push(path);
            } else if path.extension().is_some_and(|e| e == "smt2") {
                let rel = path.strip_prefix(suite).unwrap_or(&path);
                let id: Vec<String> = rel
                    .components()
                    .map(|c| c.as_os_str().to_string_lossy().into_owned())
                    .collect();
                out.push((id.join("/"), path));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Writes the overapproximation of `original` for `enc` below `work_dir`.
fn encode(
    original: &Path,
    id: &str,
    enc: Encoding,
    cfg: &SuiteConfig,
) -> std::result::Result<PathBuf, String> {
    if enc == Encoding::Nia {
        return Ok(original.to_path_buf());
    }
    let target = cfg.work_dir.join(enc.name().to_lowercase()).join(id);
    let text = fs::read_to_string(original).map_err(|e| format!("{}: {e}", original.display()))?;
    let script = parse_script(&text).map_err(|e| e.to_string())?;
    let over = match enc {
        Encoding::Lia => lia_overapproximate(&script, &cfg.lia),
        _ => nra_overapproximate(&script, &cfg.nra),
    }
    .map_err(|e| e.to_string())?;
    let rendered = over.render();
    if fs::read_to_string(&target).ok().as_deref() != Some(rendered.as_str()) {
        if let Some(dir) = target.parent() {
            fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        }
        fs::write(&target, rendered).map_err(|e| format!("{}: {e}", target.display()))?;
    }
    Ok(target)
}

struct Job<'a> {
    benchmark: String,
    encoding: Encoding,
    file: PathBuf,
    solvers: Vec<&'a SolverSpec>,
}

fn load_existing(path: &Path) -> Result<CampaignReport> {
    match fs::read_to_string(path) {
        Ok(text) => CampaignReport::parse_jsonl(&text),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(CampaignReport::default()),
        Err(e) => Err(Error::io(path, e)),
    }
}

fn write_atomically(path: &Path, text: &str) -> Result<()> {
    let tmp = path.with_extension("jsonl.tmp");
    fs::write(&tmp, text).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Runs every solver on every benchmark in every encoding, skipping outcomes
/// already in the results file. Each outcome is appended as soon as it is known;
/// at the end the file is rewritten in (benchmark, encoding, solver) order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<CampaignReport> {
    let existing = load_existing(&cfg.results)?;
    let done: BTreeSet<(String, Encoding, String)> = existing
        .outcomes()
        .iter()
        .map(|o| (o.benchmark.clone(), o.encoding, o.solver.clone()))
        .collect();
    if let Some(dir) = cfg.results.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    // drop a torn final line before appending
    write_atomically(&cfg.results, &existing.to_jsonl())?;

    let mut immediate = Vec::new();
    let mut jobs = VecDeque::new();
    for (id, path) in discover(&cfg.suite)? {
        for &enc in &cfg.encodings {
            let pending: Vec<&SolverSpec> = cfg
                .solvers
                .iter()
                .filter(|s| !done.contains(&(id.clone(), enc, s.name.clone())))
                .collect();
            if pending.is_empty() {
                continue;
            }
            match encode(&path, &id, enc, cfg) {
                Ok(file) => jobs.push_back(Job {
                    benchmark: id.clone(),
                    encoding: enc,
                    file,
                    solvers: pending,
                }),
                Err(detail) => immediate.extend(pending.into_iter().map(|s| SolverOutcome {
                    benchmark: id.clone(),
                    encoding: enc,
                    solver: s.name.clone(),
                    status: Status::Error,
                    wall_time: 0.0,
                    detail: Some(format!("encoding failed: {detail}")),
                })),
            }
        }
    }
    let tasks: VecDeque<(usize, usize)> = jobs
        .iter()
        .enumerate()
        .flat_map(|(j, job)| (0..job.solvers.len()).map(move |s| (j, s)))
        .collect();
    let jobs: Vec<Job> = jobs.into();
    let queue = Mutex::new(tasks);

    let mut file = fs::OpenOptions::new()
        .append(true)
        .open(&cfg.results)
        .map_err(|e| Error::io(&cfg.results, e))?;
    let mut outcomes = existing.outcomes().to_vec();
    let mut append = |o: SolverOutcome| -> Result<()> {
        let line = serde_json::to_string(&o)? + "\n";
        file.write_all(line.as_bytes())
            .and_then(|_| file.flush())
            .map_err(|e| Error::io(&cfg.results, e))?;
        outcomes.push(o);
        Ok(())
    };
    for o in immediate {
        append(o)?;
    }

    let (tx, rx) = mpsc::channel();
    thread::scope(|scope| -> Result<()> {
        for _ in 0..cfg.jobs.max(1) {
            let tx = tx.clone();
            let (queue, jobs) = (&queue, &jobs);
            scope.spawn(move || loop {
                let Some((j, s)) = queue.lock().expect("queue lock").pop_front() else {
                    break;
                };
                let job = &jobs[j];
                let outcome = run_solver(job.solvers[s], &job.file, &job.benchmark, job.encoding);
                if tx.send(outcome).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for o in rx {
            append(o)?;
        }
        Ok(())
    })?;

    let report = CampaignReport::from_outcomes(outcomes);
    write_atomically(&cfg.results, &report.to_jsonl())?;
    Ok(report)
}
