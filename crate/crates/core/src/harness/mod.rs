//! Running external solvers on benchmark suites, and the campaign metrics:
//! virtual best solver, newly solved problems and tightness.
//!
//! A benchmark counts as solved only when it is proved unsat. A sat answer on an
//! overapproximation is inconclusive and counts against tightness.

mod report;
mod runner;
mod suite;

pub use report::{
    compute_vbs, newly_solved, newly_solved_by, scatter_csv, solved, summarize, summary_csv,
    tightness_report, CampaignReport, SolverRow, Summary, Tightness, VbsRow,
};
pub use runner::{
    execute, parse_verdict, run_solver, Encoding, Execution, SolverOutcome, SolverSpec, Status,
    DEFAULT_MEMORY_LIMIT, DEFAULT_TIMEOUT,
};
pub use suite::{discover, run_suite, SuiteConfig};
