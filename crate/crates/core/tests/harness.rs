use std::fs;
use std::path::{Path, PathBuf};

use nia_overapprox::harness::{
    run_suite, solved, CampaignReport, Encoding, SolverSpec, Status, SuiteConfig,
};
use nia_overapprox::nra::NraConfig;
use nia_overapprox::LiaConfig;

const SMALL: &str = "(set-logic QF_NIA)(declare-fun x () Int)(assert (= (* x x) 2))(check-sat)\n";
const DIVS: &str =
    "(set-logic QF_NIA)(declare-fun x () Int)(assert (> (div x 2) x))(assert (> x 0))(check-sat)\n";

fn script(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, format!("#!/bin/sh\n{body}\n")).unwrap();
    p
}

fn spec(name: &str, file: &Path, timeout: f64) -> SolverSpec {
    let mut s = SolverSpec::new(name, &format!("sh {}", file.display())).unwrap();
    s.timeout = timeout;
    s
}

fn setup(dir: &Path) -> PathBuf {
    let suite = dir.join("suite");
    fs::create_dir_all(suite.join("nested")).unwrap();
    fs::write(suite.join("small.smt2"), SMALL).unwrap();
    fs::write(suite.join("nested/divs.smt2"), DIVS).unwrap();
    fs::write(suite.join("notes.txt"), "not a benchmark").unwrap();
    suite
}

fn config(dir: &Path, solvers: Vec<SolverSpec>, encodings: Vec<Encoding>) -> SuiteConfig {
    SuiteConfig {
        suite: setup(dir),
        work_dir: dir.join("work"),
        encodings,
        solvers,
        jobs: 2,
        results: dir.join("results.jsonl"),
        lia: LiaConfig::default(),
        nra: NraConfig::default(),
    }
}

fn statuses(r: &CampaignReport) -> Vec<(String, Encoding, String, Status)> {
    r.outcomes()
        .iter()
        .map(|o| (o.benchmark.clone(), o.encoding, o.solver.clone(), o.status))
        .collect()
}

#[test]
fn every_benchmark_encoding_and_solver_gets_one_outcome() {
    let dir = tempfile::tempdir().unwrap();
    let s = script(
        dir.path(),
        "s.sh",
        r#"if grep -q ufrac "$1"; then echo unsat; else echo sat; fi"#,
    );
    let cfg = config(
        dir.path(),
        vec![spec("fake", &s, 10.0)],
        vec![Encoding::Nia, Encoding::Nra],
    );
    let r = run_suite(&cfg).unwrap();
    let got = statuses(&r);
    let want = [
        ("nested/divs.smt2", Encoding::Nia, Status::Sat),
        ("nested/divs.smt2", Encoding::Nra, Status::Unsat),
        ("small.smt2", Encoding::Nia, Status::Sat),
        ("small.smt2", Encoding::Nra, Status::Sat),
    ];
    assert_eq!(got.len(), 4, "{got:?}");
    for ((b, e, _, st), (wb, we, wst)) in got.iter().zip(want) {
        assert_eq!((b.as_str(), *e, *st), (wb, we, wst));
    }
    assert!(dir.path().join("work/nra/nested/divs.smt2").exists());
    let stored = CampaignReport::load(&cfg.results).unwrap();
    assert_eq!(statuses(&stored), got);
}

#[test]
fn a_torn_results_file_is_resumed() {
    let dir = tempfile::tempdir().unwrap();
    let s = script(
        dir.path(),
        "s.sh",
        r#"if grep -q umul "$1"; then echo unsat; else echo unknown; fi"#,
    );
    let cfg = config(
        dir.path(),
        vec![spec("a", &s, 10.0), spec("b", &s, 10.0)],
        vec![Encoding::Nia, Encoding::Lia],
    );
    let first = statuses(&run_suite(&cfg).unwrap());
    assert_eq!(first.len(), 8);
    let text = fs::read_to_string(&cfg.results).unwrap();
    let keep: Vec<&str> = text.lines().take(5).collect();
    let torn = format!(
        "{}\n{}",
        keep.join("\n"),
        &text.lines().nth(5).unwrap()[..20]
    );
    fs::write(&cfg.results, torn).unwrap();
    let second = statuses(&run_suite(&cfg).unwrap());
    assert_eq!(first, second);
    assert_eq!(fs::read_to_string(&cfg.results).unwrap().lines().count(), 8);
}

#[test]
fn unknown_answers_solve_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let s = script(dir.path(), "s.sh", "echo unknown");
    let cfg = config(
        dir.path(),
        vec![spec("u", &s, 10.0)],
        Encoding::ALL.to_vec(),
    );
    let r = run_suite(&cfg).unwrap();
    assert_eq!(r.outcomes().len(), 6);
    assert!(r.outcomes().iter().all(|o| o.status == Status::Unknown));
    for e in Encoding::ALL {
        assert!(solved(&r, e, None).is_empty());
    }
}

#[test]
fn slow_and_broken_solvers_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let slow = script(dir.path(), "slow.sh", "sleep 30; echo unsat");
    let broken = script(dir.path(), "broken.sh", "echo oops >&2; exit 3");
    let cfg = config(
        dir.path(),
        vec![spec("slow", &slow, 0.5), spec("broken", &broken, 10.0)],
        vec![Encoding::Nia],
    );
    let r = run_suite(&cfg).unwrap();
    for o in r.outcomes() {
        match o.solver.as_str() {
            "slow" => {
                assert_eq!(o.status, Status::Timeout);
                assert!(o.wall_time >= 0.5 && o.wall_time < 5.0, "{o:?}");
            }
            _ => {
                assert_eq!(o.status, Status::Error);
                assert!(o.detail.as_deref().unwrap_or("").contains("oops"), "{o:?}");
            }
        }
    }
}

#[test]
fn unencodable_benchmarks_become_error_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let s = script(dir.path(), "s.sh", "echo sat");
    let cfg = config(dir.path(), vec![spec("s", &s, 10.0)], vec![Encoding::Nra]);
    fs::write(
        cfg.suite.join("abs.smt2"),
        "(set-logic QF_NIA)(declare-fun x () Int)(assert (> (abs x) 1))",
    )
    .unwrap();
    let r = run_suite(&cfg).unwrap();
    let o = r
        .outcomes()
        .iter()
        .find(|o| o.benchmark == "abs.smt2")
        .unwrap();
    assert_eq!(o.status, Status::Error);
    assert!(
        o.detail.as_deref().unwrap().contains("unsupported"),
        "{o:?}"
    );
}
