mod common;

use common::checks;
use nia_overapprox::nra::NraConfig;
use nia_overapprox::oracle::{check_model_lifting, Bounds, SearchConfig};
use nia_overapprox::smtlib::{parse_script, Command, CoreOp, Head, Script, Term, TermKind};
use nia_overapprox::{lia_overapproximate, nra_overapproximate, LiaConfig};

#[test]
fn transformations_keep_every_model() {
    let stats = checks::soundness(7, 60).unwrap();
    assert_eq!(stats.scripts, 60);
    assert!(stats.sat_originals > 10, "{stats:?}");
}

#[test]
fn lia_axioms_have_no_counterexamples() {
    let counts = checks::lia_axiom_validity().unwrap();
    assert!(counts.values().all(|&n| n > 0), "{counts:?}");
}

#[test]
fn nra_axioms_hold_under_the_lifting() {
    assert!(checks::nra_axiom_validity().unwrap() > 75_000);
}

#[test]
fn polarity_agrees_with_reference() {
    let stats = checks::polarity(11, 300, 60).unwrap();
    assert!(stats.semantic_checks > 100, "{stats:?}");
    checks::polarity_examples().unwrap();
}

#[test]
fn lia_products_of_the_same_terms_are_shared() {
    let s = parse_script(
        "(set-logic QF_NIA)(declare-const x Int)(declare-const y Int)\
         (assert (<= (- 4) x))(assert (<= x 4))(assert (<= (- 4) y))(assert (<= y 4))\
         (assert (= (* x y) 4))",
    )
    .unwrap();
    let o = lia_overapproximate(&s, &LiaConfig::default()).unwrap();
    let r = check_model_lifting(
        &s,
        &o.script,
        &o.lifting(),
        &Bounds::default(),
        &SearchConfig::default(),
    )
    .unwrap();
    // (1,4) (2,2) (4,1) and the negated pairs
    assert_eq!(r.models, 6);
    assert!(r.is_sound());
}

/// Drops the `- ufrac` correction from every rewritten division.
fn drop_frac(t: &Term) -> Term {
    t.map_bottom_up(&mut |t| match &t.kind {
        TermKind::Apply(Head::Core(CoreOp::Sub), args)
            if args.len() == 2
                && matches!(
                    &args[0].kind,
                    TermKind::Apply(Head::Core(CoreOp::RealDiv), _)
                )
                && matches!(&args[1].kind, TermKind::Apply(Head::Fun(f), _) if f == "ufrac") =>
        {
            args[0].clone()
        }
        _ => t,
    })
}

#[test]
fn lifting_check_catches_a_broken_transformer() {
    let s = parse_script(
        "(set-logic QF_NIA)(declare-const x Int)(declare-const y Int)\
         (assert (> y 0))(assert (= x (div 7 y)))",
    )
    .unwrap();
    let o = nra_overapproximate(&s, &NraConfig::default()).unwrap();
    let bounds = Bounds::default();
    let cfg = SearchConfig::default();
    let good = check_model_lifting(&s, &o.script, &o.lifting(), &bounds, &cfg).unwrap();
    assert!(good.is_sound(), "{good:?}");
    // y = 2, 3, 4; y = 1 puts x = 7 outside the box
    assert_eq!(good.models, 3, "{good:?}");
    let broken: Vec<Command> = o
        .script
        .commands()
        .iter()
        .map(|c| match c {
            Command::Assert(t) => Command::Assert(drop_frac(t)),
            other => other.clone(),
        })
        .collect();
    let broken = Script::new(broken).unwrap();
    let bad = check_model_lifting(&s, &broken, &o.lifting(), &bounds, &cfg).unwrap();
    // none of 7/2, 7/3 and 7/4 is exact
    assert_eq!(bad.violations.len(), 3);
    assert_eq!(bad.violations[0].assertion_index, 1);
}
