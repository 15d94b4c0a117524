//! Solved counts, virtual best solver and tightness for a results file.
//!
//! cargo run --example metrics_report [RESULTS.jsonl]

use std::path::PathBuf;

use nia_overapprox::harness::{summarize, CampaignReport, Encoding};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/fixtures/qf_uf_campaign.jsonl"
            ))
        });
    let report = CampaignReport::load(&path)?;
    let s = summarize(&report);
    println!("{} benchmarks", s.benchmarks);
    println!("{:<22}{:>6}{:>10}{:>10}", "solver", "NIA", "LIA", "NRA");
    for row in s.solvers.iter().chain([&s.vbs]) {
        let cell = |e: Encoding| match (row.solved.get(&e), row.new.get(&e)) {
            (Some(n), Some(new)) => format!("{n} ({new})"),
            (Some(n), None) => n.to_string(),
            _ => "-".into(),
        };
        println!(
            "{:<22}{:>6}{:>10}{:>10}",
            row.solver,
            cell(Encoding::Nia),
            cell(Encoding::Lia),
            cell(Encoding::Nra)
        );
    }
    println!("newly solved by either: {}", s.newly_solved_any);
    for (e, t) in &s.tightness {
        println!(
            "{}: of {} NIA-unsat, {} stay unsat, {} turn sat, {} unsolved",
            e.name(),
            t.base_unsat,
            t.still_unsat,
            t.unsat_to_sat,
            t.unsat_to_unsolved
        );
    }
    Ok(())
}
