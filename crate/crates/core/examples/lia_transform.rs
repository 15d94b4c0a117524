//! The LIA overapproximation of a small nonlinear problem, with per-category
//! instance counts for a few configurations.

use nia_overapprox::lia::{lia_overapproximate, AxiomCategory, LiaConfig, PairScope};
use nia_overapprox::smtlib::parse_script;

const SOURCE: &str = "(set-logic QF_NIA)
(declare-fun a () Int)
(declare-fun b () Int)
(declare-fun c () Int)
(assert (> a 0))
(assert (= (* a b) (+ (* a c) 3)))
(assert (< (div b a) (mod c 4)))
(assert (= (mod (* a b) 115792089237316195423570985008687907853269984665640564039457584007913129639936) 5))
(check-sat)";

fn main() {
    let script = parse_script(SOURCE).unwrap();
    let full = lia_overapproximate(&script, &LiaConfig::default()).unwrap();
    print!("{}", full.render());

    println!("\ninstances per configuration:");
    let configs = [
        ("default", LiaConfig::default()),
        (
            "pairs within one assertion",
            LiaConfig {
                pair_scope: PairScope::SameAssertion,
                ..LiaConfig::default()
            },
        ),
        (
            "no pairs",
            LiaConfig {
                pair_cap: 0,
                ..LiaConfig::default()
            },
        ),
        (
            "arith only",
            LiaConfig {
                enabled: [AxiomCategory::Arith].into(),
                ..LiaConfig::default()
            },
        ),
    ];
    for (label, cfg) in configs {
        let o = lia_overapproximate(&script, &cfg).unwrap();
        println!("  {label:<28} {:?}", o.counts);
    }
}
