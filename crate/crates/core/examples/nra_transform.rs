//! The NRA overapproximation of the token-swap example, in both printed forms.
//!
//! cargo run --example nra_transform [--tight]

use nia_overapprox::nra::{nra_overapproximate, NraConfig};
use nia_overapprox::smtlib::parse_script;

fn main() {
    let tight = std::env::args().any(|a| a == "--tight");
    let script = parse_script(include_str!("../fixtures/token_swap.smt2")).unwrap();
    for appendix_form in [false, true] {
        let cfg = NraConfig {
            tight_frac: tight,
            appendix_form,
            ..NraConfig::default()
        };
        let o = nra_overapproximate(&script, &cfg).unwrap();
        print!("{}", o.render());
        println!();
    }
}
