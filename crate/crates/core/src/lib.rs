//! LIA and NRA overapproximations of quantifier-free non-linear integer
//! arithmetic, with a bounded brute-force oracle and a solver harness.
//!
//! Unsatisfiability of either overapproximation implies unsatisfiability of the
//! original problem; a sat answer says nothing.

pub mod cli;
pub mod error;
pub mod harness;
pub mod lia;
pub mod nra;
pub mod oracle;
pub mod overapprox;
pub mod smtlib;

pub use error::{Error, Result};
pub use lia::{lia_overapproximate, LiaConfig};
pub use nra::{nra_overapproximate, NraConfig};
pub use overapprox::{Mode, Overapproximation};
