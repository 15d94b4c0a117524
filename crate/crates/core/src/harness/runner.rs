use std::io::Read;
use std::os::unix::process::CommandExt;
use std::path::Path;
use std::process::{Child, Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default per-run time limit in seconds.
pub const DEFAULT_TIMEOUT: f64 = 300.0;
/// Default address-space limit: 16 GiB.
pub const DEFAULT_MEMORY_LIMIT: u64 = 16 << 30;

const GRACE_FRACTION: f64 = 0.05;
const POLL: Duration = Duration::from_millis(2);
const STDERR_EXCERPT: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Encoding {
    #[serde(rename = "NIA")]
    Nia,
    #[serde(rename = "LIA")]
    Lia,
    #[serde(rename = "NRA")]
    Nra,
}

impl Encoding {
    pub const ALL: [Encoding; 3] = [Encoding::Nia, Encoding::Lia, Encoding::Nra];

    pub fn name(self) -> &'static str {
        match self {
            Encoding::Nia => "NIA",
            Encoding::Lia => "LIA",
            Encoding::Nra => "NRA",
        }
    }

    pub fn parse(s: &str) -> Option<Encoding> {
        Encoding::ALL
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Sat,
    Unsat,
    Unknown,
    Timeout,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOutcome {
    pub benchmark: String,
    pub encoding: Encoding,
    pub solver: String,
    pub status: Status,
    pub wall_time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl SolverOutcome {
    pub fn key(&self) -> (&str, Encoding, &str) {
        (&self.benchmark, self.encoding, &self.solver)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverSpec {
    pub name: String,
    /// Program and arguments; `{file}` is replaced by the benchmark path, which
    /// is appended when no argument mentions it.
    pub command: Vec<String>,
    pub timeout: f64,
    pub memory_limit: Option<u64>,
}

impl SolverSpec {
    pub fn new(name: impl Into<String>, command: &str) -> Result<SolverSpec> {
        let command: Vec<String> = command.split_whitespace().map(String::from).collect();
        if command.is_empty() {
            return Err(Error::Usage("empty solver command".into()));
        }
        Ok(SolverSpec {
            name: name.into(),
            command,
            timeout: DEFAULT_TIMEOUT,
            memory_limit: Some(DEFAULT_MEMORY_LIMIT),
        })
    }

    /// Parses `NAME=CMD`.
    pub fn parse(spec: &str) -> Result<SolverSpec> {
        match spec.split_once('=') {
            Some((name, cmd)) if !name.trim().is_empty() => SolverSpec::new(name.trim(), cmd),
            _ => Err(Error::Usage(format!(
                "solver spec `{spec}` is not NAME=CMD"
            ))),
        }
    }

    pub fn argv(&self, file: &Path) -> Vec<String> {
        let file = file.display().to_string();
        let mut argv: Vec<String> = self
            .command
            .iter()
            .map(|a| a.replace("{file}", &file))
            .collect();
        if !self.command.iter().any(|a| a.contains("{file}")) {
            argv.push(file);
        }
        argv
    }
}

/// Result of one solver process.
#[derive(Clone, Debug, PartialEq)]
pub struct Execution {
    pub status: Status,
    pub wall_time: f64,
    pub detail: Option<String>,
}

/// The first line of `stdout` that is exactly `sat`, `unsat` or `unknown`.
pub fn parse_verdict(stdout: &str) -> Option<Status> {
    stdout.lines().find_map(|l| match l.trim() {
        "sat" => Some(Status::Sat),
        "unsat" => Some(Status::Unsat),
        "unknown" => Some(Status::Unknown),
        _ => None,
    })
}

fn reader<R: Read + Send + 'static>(r: Option<R>) -> thread::JoinHandle<String> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        if let Some(mut r) = r {
            let _ = r.read_to_end(&mut buf);
        }
        String::from_utf8_lossy(&buf).into_owned()
    })
}

fn signal_group(child: &Child, sig: libc::c_int) {
    // the child leads its own process group
    unsafe {
        libc::kill(-(child.id() as libc::pid_t), sig);
    }
}

fn excerpt(s: &str) -> String {
    let s = s.trim();
    let mut end = s.len().min(STDERR_EXCERPT);
    while !s.is_char_boundary(end) {
        end -= 1;
    }
    s[..end].replace('\n', " | ")
}

/// Runs the solver on `file` with a wall-clock limit and a best-effort memory limit.
pub fn execute(spec: &SolverSpec, file: &Path) -> Execution {
    let argv = spec.argv(file);
    let mut cmd = Command::new(&argv[0]);
    cmd.args(&argv[1..])
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .process_group(0);
    if let Some(limit) = spec.memory_limit {
        let rl = libc::rlimit {
            rlim_cur: limit as libc::rlim_t,
            rlim_max: limit as libc::rlim_t,
        };
        unsafe {
            cmd.pre_exec(move || {
                // failure leaves the process unlimited
                libc::setrlimit(libc::RLIMIT_AS, &rl);
                Ok(())
            });
        }
    }
    let start = Instant::now();
    let mut child = match cmd.spawn() {
        Ok(c) => c,
        Err(e) => {
            return Execution {
                status: Status::Error,
                wall_time: 0.0,
                detail: Some(format!("cannot start `{}`: {e}", argv[0])),
            }
        }
    };
    let out = reader(child.stdout.take());
    let err = reader(child.stderr.take());
    let limit = Duration::from_secs_f64(spec.timeout);
    let grace = Duration::from_secs_f64(spec.timeout * GRACE_FRACTION);
    let mut timed_out = false;
    let mut terminated_at = None;
    let exit = loop {
        match child.try_wait() {
            Ok(Some(status)) => break Some(status),
            Ok(None) => {}
            Err(_) => break None,
        }
        let elapsed = start.elapsed();
        if elapsed >= limit && terminated_at.is_none() {
            timed_out = true;
            signal_group(&child, libc::SIGTERM);
            terminated_at = Some(elapsed);
        }
        if terminated_at.is_some_and(|t| elapsed >= t + grace) {
            signal_group(&child, libc::SIGKILL);
            let _ = child.kill();
            break child.wait().ok();
        }
        thread::sleep(POLL);
    };
    let elapsed = start.elapsed().as_secs_f64();
    // descendants may keep the pipes open after the leader exits
    signal_group(&child, libc::SIGKILL);
    let stdout = out.join().unwrap_or_default();
    let stderr = err.join().unwrap_or_default();
    let timed_out = timed_out || elapsed >= spec.timeout;
    let verdict = parse_verdict(&stdout);
    if timed_out {
        return Execution {
            status: Status::Timeout,
            wall_time: elapsed
                .min(spec.timeout * (1.0 + GRACE_FRACTION))
                .max(spec.timeout),
            detail: None,
        };
    }
    match verdict {
        Some(status) => Execution {
            status,
            wall_time: elapsed,
            detail: None,
        },
        None => Execution {
            status: Status::Error,
            wall_time: elapsed,
            detail: Some(format!(
                "{}; stderr: {}",
                match exit.and_then(|s| s.code()) {
                    Some(c) => format!("exit code {c}"),
                    None => "killed by signal".to_string(),
                },
                excerpt(&stderr)
            )),
        },
    }
}

pub fn run_solver(
    spec: &SolverSpec,
    file: &Path,
    benchmark: &str,
    encoding: Encoding,
) -> SolverOutcome {
    let e = execute(spec, file);
    SolverOutcome {
        benchmark: benchmark.to_string(),
        encoding,
        solver: spec.name.clone(),
        status: e.status,
        wall_time: e.wall_time,
        detail: e.detail,
    }
}
