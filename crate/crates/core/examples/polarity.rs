//! Shows the polarity of every subterm of a formula.

use nia_overapprox::smtlib::{parse_script, parse_term, polarity_map, subterm_at, term_to_string};

fn main() {
    let decls = parse_script(
        "(declare-const a Bool)(declare-const b Bool)(declare-const x Int)(declare-const y Int)",
    )
    .unwrap();
    for text in [
        "(not (=> a b))",
        "(and a (not (< x y)))",
        "(=> (>= x y) (ite a (< x 0) b))",
        "(= a (<= x y))",
    ] {
        let f = parse_term(text, &decls).unwrap();
        println!("{text}");
        for (pos, pol) in polarity_map(&f) {
            let sub = subterm_at(&f, &pos).unwrap();
            let pos = if pos.is_root() {
                "root".to_string()
            } else {
                pos.to_string()
            };
            println!("  {pos:>6} {:>2}  {}", pol.value(), term_to_string(sub));
        }
    }
}
