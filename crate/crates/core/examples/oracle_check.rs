//! Brute-force search in a box, and a check that integer models of the original
//! survive both overapproximations.

use nia_overapprox::oracle::{
    brute_force_sat, check_model_lifting, Bounds, Interpretation, SatResult, SearchConfig,
};
use nia_overapprox::smtlib::parse_script;
use nia_overapprox::{lia_overapproximate, nra_overapproximate, LiaConfig, NraConfig};

const SOURCE: &str = "(set-logic QF_NIA)
(declare-fun x () Int)
(declare-fun y () Int)
(assert (distinct y 0))
(assert (= (+ (* x y) (mod x y)) (div 12 y)))
(check-sat)";

fn main() {
    let script = parse_script(SOURCE).unwrap();
    let bounds = Bounds::uniform(-6, 6);
    let cfg = SearchConfig {
        workers: 4,
        ..SearchConfig::default()
    };
    let r = brute_force_sat(&script, &bounds, &Interpretation::new(), &cfg).unwrap();
    match &r.result {
        SatResult::Sat(m) => println!("first model: {m:?}"),
        other => println!("{other:?}"),
    }
    println!("{} assignments evaluated", r.assignments_evaluated);

    for over in [
        lia_overapproximate(&script, &LiaConfig::default()).unwrap(),
        nra_overapproximate(&script, &NraConfig::default()).unwrap(),
    ] {
        let lifting = over.lifting();
        let report = check_model_lifting(&script, &over.script, &lifting, &bounds, &cfg).unwrap();
        println!(
            "{:?}: {} models lifted, {} violations",
            over.mode,
            report.models,
            report.violations.len()
        );
    }
}
