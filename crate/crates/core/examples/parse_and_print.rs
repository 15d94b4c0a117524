//! Parses an SMT-LIB2 script, prints it back and lists what it declares.
//!
//! cargo run --example parse_and_print [FILE]

use nia_overapprox::smtlib::{parse_script, print_script};

const DEFAULT: &str = "(set-logic QF_NIA)
(declare-fun x () Int)
(declare-fun y () Int)
; ranges
(assert (and (<= 0 x) (<= x 10)))
(assert (let ((p (* x y))) (> (mod p 7) (div x 2))))
(check-sat)";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEFAULT.to_string(),
    };
    let script = parse_script(&text)?;
    println!("logic: {}", script.logic().unwrap_or("none"));
    for (name, sort) in script.constants() {
        println!("constant {name}: {}", sort.name());
    }
    println!("{} assertions\n", script.assertions().count());
    print!("{}", print_script(&script));
    Ok(())
}
