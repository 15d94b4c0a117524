//! Runs a solver over a generated suite in all three encodings.
//!
//! cargo run --example run_campaign [SOLVER COMMAND]
//!
//! Without arguments uses `z3` when it is on the path, otherwise a shell stub
//! that answers `unknown`.

use std::fs;

use nia_overapprox::harness::{run_suite, summarize, Encoding, SolverSpec, SuiteConfig};
use nia_overapprox::{LiaConfig, NraConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile_dir()?;
    let suite = dir.join("suite");
    fs::create_dir_all(&suite)?;
    for k in 2..6 {
        fs::write(
            suite.join(format!("square{k}.smt2")),
            format!(
                "(set-logic QF_NIA)(declare-fun x () Int)(declare-fun y () Int)\
                 (assert (= (* x x) (+ (* {k} y y) 1)))(assert (> (div x {k}) y))(assert (> y 0))(check-sat)\n"
            ),
        )?;
    }
    fs::write(
        suite.join("swap.smt2"),
        include_str!("../fixtures/token_swap.smt2"),
    )?;

    let command = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let command = if !command.is_empty() {
        command
    } else if std::process::Command::new("z3")
        .arg("--version")
        .output()
        .is_ok()
    {
        "z3".to_string()
    } else {
        let stub = dir.join("stub.sh");
        fs::write(&stub, "#!/bin/sh\necho unknown\n")?;
        format!("sh {}", stub.display())
    };
    let mut solver = SolverSpec::new("solver", &command)?;
    solver.timeout = 10.0;

    let results = dir.join("results.jsonl");
    let report = run_suite(&SuiteConfig {
        suite,
        work_dir: dir.join("work"),
        encodings: Encoding::ALL.to_vec(),
        solvers: vec![solver],
        jobs: 4,
        results: results.clone(),
        lia: LiaConfig::default(),
        nra: NraConfig::default(),
    })?;
    for o in report.outcomes() {
        println!(
            "{:<14} {:<4} {:<8?} {:.3}s",
            o.benchmark,
            o.encoding.name(),
            o.status,
            o.wall_time
        );
    }
    let s = summarize(&report);
    println!("solved per encoding: {:?}", s.vbs.solved);
    println!("results in {}", results.display());
    Ok(())
}

fn tempfile_dir() -> std::io::Result<std::path::PathBuf> {
    let dir = std::env::temp_dir().join(format!("nia-overapprox-campaign-{}", std::process::id()));
    fs::create_dir_all(&dir)?;
    Ok(dir)
}
