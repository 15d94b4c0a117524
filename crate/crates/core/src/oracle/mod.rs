//! Bounded brute-force satisfiability and exact term evaluation.
//!
//! This is the ground truth the transformations are tested against: integer
//! `div`/`mod` follow SMT-LIB (remainder in `[0, |m|)`), reals are exact
//! rationals, and the fresh symbols of the overapproximations get their intended
//! integer meanings through an [`Interpretation`].

mod eval;
mod search;
mod value;

pub use eval::{Assignment, Builtin, EvalError, Evaluator, Interpretation};
pub use search::{
    brute_force_sat, check, check_model_lifting, Bounds, CheckReport, LiftingReport, SatResult,
    SearchConfig, SearchReport, Violation, DEFAULT_BUDGET,
};
pub use value::{euclid_div, euclid_mod, Value};
