//! Property checks shared by the integration tests and the acceptance runner.

use std::collections::BTreeMap;

use nia_overapprox::lia::{
    collect_nonlinear, instantiate_lia_axioms, replace_nonlinear_lia, AxiomCategory, LiaConfig,
};
use nia_overapprox::nra::NraConfig;
use nia_overapprox::oracle::{
    brute_force_sat, check_model_lifting, euclid_mod, Bounds, Builtin, Evaluator, Interpretation,
    SatResult, SearchConfig, Value,
};
use nia_overapprox::smtlib::{
    parse_script, parse_term, polarity_at, polarity_map, print_script, term_to_string, Command,
    CoreOp, Polarity, Position, Script, Sort, Term,
};
use nia_overapprox::{lia_overapproximate, nra_overapproximate};
use num_bigint::BigInt;
use num_rational::BigRational;

use super::{all_paths, random_bool_formula, random_nia_script, reference_polarity, replace_at};
use super::{rng, BOOL_DECLS};

#[derive(Debug, Default)]
pub struct SoundnessStats {
    pub scripts: usize,
    pub sat_originals: usize,
    pub lifted_models: u64,
    pub inconclusive: u64,
}

/// Transforms `count` random scripts both ways and checks that every in-box model
/// lifts, and that an overapproximation without in-box models under the lifting
/// never comes from an original that has one.
pub fn soundness(seed: u64, count: usize) -> Result<SoundnessStats, String> {
    let mut r = rng(seed);
    let bounds = Bounds::uniform(-4, 4);
    let cfg = SearchConfig::default();
    let plain = Interpretation::new();
    let mut stats = SoundnessStats::default();
    for i in 0..count {
        let text = random_nia_script(&mut r);
        let original = parse_script(&text).map_err(|e| format!("script {i}: {e}\n{text}"))?;
        let orig = brute_force_sat(&original, &bounds, &plain, &cfg).map_err(|e| e.to_string())?;
        let original_sat = matches!(orig.result, SatResult::Sat(_));
        stats.scripts += 1;
        stats.sat_originals += usize::from(original_sat);
        let transforms = [
            ("lia", lia_overapproximate(&original, &LiaConfig::default())),
            ("nra", nra_overapproximate(&original, &NraConfig::default())),
        ];
        for (mode, over) in transforms {
            let over = over.map_err(|e| format!("script {i} ({mode}): {e}\n{text}"))?;
            let lifting = over.lifting();
            let report = check_model_lifting(&original, &over.script, &lifting, &bounds, &cfg)
                .map_err(|e| e.to_string())?;
            if let Some(v) = report.violations.first() {
                return Err(format!(
                    "script {i} ({mode}): model {:?} violates assertion {} `{}`\n{text}\n{}",
                    v.model,
                    v.assertion_index,
                    v.assertion,
                    print_script(&over.script)
                ));
            }
            stats.lifted_models += report.models;
            stats.inconclusive += report.inconclusive;
            let lifted = brute_force_sat(&over.script, &bounds, &lifting, &cfg)
                .map_err(|e| e.to_string())?;
            if original_sat && lifted.result == SatResult::UnsatWithinBounds {
                return Err(format!(
                    "script {i} ({mode}): original has an in-box model, overapproximation has none\n{text}"
                ));
            }
        }
    }
    Ok(stats)
}

/// A script exercising every LIA axiom category: constant and variable products,
/// constant and variable divisors, zero dividends and wraparound modulo 16.
pub const LIA_AXIOM_SOURCE: &str = "(set-logic QF_NIA)\
    (declare-const a Int)(declare-const b Int)(declare-const c Int)\
    (assert (> (+ (* a b) (* b a) (* a a) (* 3 a) (* b (- 2)) (* c b) (* a c) (* 1 c) (* 0 b)) 0))\
    (assert (> (+ (div a b) (mod a b) (div a 3) (mod a (- 3)) (div b 1) (mod c 1) (div 0 b) (mod 0 c) (div a 0) (mod 5 (- 2))) 0))\
    (assert (= (mod (* a b) 16) (mod (* (mod a 16) c) 16)))";

/// Checks every LIA axiom instance of [`LIA_AXIOM_SOURCE`] for integer
/// counterexamples on `[-4, 4]`, with modulus 16 standing in for the word size.
/// Returns the number of instances per category.
pub fn lia_axiom_validity() -> Result<BTreeMap<&'static str, usize>, String> {
    let script = parse_script(LIA_AXIOM_SOURCE).map_err(|e| e.to_string())?;
    let cfg = LiaConfig {
        wrap_modulus: BigInt::from(16),
        ..LiaConfig::default()
    };
    let occs = collect_nonlinear(&script).map_err(|e| e.to_string())?;
    let rewrite = replace_nonlinear_lia(&script).map_err(|e| e.to_string())?;
    let syms = &rewrite.symbols;
    let interp = Interpretation::new()
        .with(&syms.umul, Builtin::Mul)
        .with(&syms.udiv, Builtin::Div)
        .with(&syms.umod, Builtin::Mod);
    let mut counts: BTreeMap<&'static str, usize> =
        AxiomCategory::ALL.iter().map(|c| (c.name(), 0)).collect();
    let mut decls: Vec<Command> = ["a", "b", "c"]
        .map(|n| Command::DeclareConst {
            name: n.into(),
            sort: Sort::Int,
        })
        .to_vec();
    for f in [&syms.umul, &syms.udiv, &syms.umod] {
        decls.push(Command::DeclareFun {
            name: f.clone(),
            args: vec![Sort::Int, Sort::Int],
            ret: Sort::Int,
        });
    }
    for inst in instantiate_lia_axioms(&rewrite, &occs, &cfg) {
        *counts.get_mut(inst.category.name()).unwrap() += 1;
        let mut commands = decls.clone();
        commands.push(Command::Assert(Term::not(inst.formula.clone())));
        let s = Script::new(commands).map_err(|e| e.to_string())?;
        let r = brute_force_sat(
            &s,
            &Bounds::uniform(-4, 4),
            &interp,
            &SearchConfig::default(),
        )
        .map_err(|e| e.to_string())?;
        if let SatResult::Sat(m) = r.result {
            return Err(format!(
                "{} instance `{}` fails at {m:?}",
                inst.category.name(),
                term_to_string(&inst.formula)
            ));
        }
    }
    if let Some((c, _)) = counts.iter().find(|(_, &n)| n == 0) {
        return Err(format!("no instance of category {c}"));
    }
    Ok(counts)
}

fn real(n: i64) -> Term {
    Term::real(BigRational::from_integer(n.into()))
}

/// Evaluates the NRA axiom definitions (both `axfb` variants), and the `umod`
/// definition, at every integer argument tuple in `[-8, 8]` with a nonzero
/// divisor, under the lifted `ufrac` interpretation. Returns the number of
/// evaluated instances.
pub fn nra_axiom_validity() -> Result<usize, String> {
    let source = parse_script(
        "(set-logic QF_NIA)(declare-const x Int)(declare-const y Int)\
         (assert (= (mod (* x y) y) (div x y)))",
    )
    .map_err(|e| e.to_string())?;
    let mut evaluated = 0;
    for tight in [false, true] {
        let cfg = NraConfig {
            tight_frac: tight,
            ..NraConfig::default()
        };
        let over = nra_overapproximate(&source, &cfg).map_err(|e| e.to_string())?;
        let name = |b: &str| over.name_of(b).map(str::to_string).ok_or(format!("no {b}"));
        let (axfb, axfz, axia, umod) = (name("axfb")?, name("axfz")?, name("axia")?, name("umod")?);
        let interp = over.lifting();
        let ev = Evaluator::new(&over.script, &interp);
        let holds = |f: &str, args: &[i64]| -> Result<bool, String> {
            let t = Term::fun(f, args.iter().map(|&n| real(n)).collect(), Sort::Bool);
            ev.eval_bool(&t, &Default::default())
                .map_err(|e| format!("{f}{args:?}: {e:?}"))
        };
        let range = -8i64..=8;
        for x in range.clone() {
            if !holds(&axia, &[x])? {
                return Err(format!("axia({x}) fails"));
            }
            evaluated += 1;
            for y in range.clone().filter(|&y| y != 0) {
                if !holds(&axfb, &[x, y])? {
                    return Err(format!("axfb({x}, {y}) fails (tight: {tight})"));
                }
                let m = Term::fun(&umod, vec![real(x), real(y)], Sort::Real);
                let got = ev
                    .eval(&m, &Default::default())
                    .map_err(|e| format!("{e:?}"))?;
                let want = euclid_mod(&x.into(), &y.into()).unwrap();
                if got != Value::Int(want.clone()) {
                    return Err(format!("umod({x}, {y}) = {got}, expected {want}"));
                }
                evaluated += 2;
                if tight {
                    continue;
                }
                for z in range.clone() {
                    for w in range.clone() {
                        if !holds(&axfz, &[x, y, z, w])? {
                            return Err(format!("axfz({x}, {y}, {z}, {w}) fails"));
                        }
                        evaluated += 1;
                    }
                }
            }
        }
    }
    Ok(evaluated)
}

#[derive(Debug, Default)]
pub struct PolarityStats {
    pub formulas: usize,
    pub positions: usize,
    pub semantic_checks: usize,
}

fn bool_script(extra: &str) -> Script {
    parse_script(&format!("{BOOL_DECLS}{extra}")).unwrap()
}

/// Compares `polarity_map` and `polarity_at` with the path-product reference on
/// `count` random formulas; on the first `semantic` of them also checks that
/// weakening a positive (strengthening a negative) subformula weakens the formula.
pub fn polarity(seed: u64, count: usize, semantic: usize) -> Result<PolarityStats, String> {
    let mut r = rng(seed);
    let decls = bool_script("(declare-const q Bool)");
    let q = Term::symbol("q", Sort::Bool);
    let bounds = Bounds::uniform(0, 1);
    let mut stats = PolarityStats::default();
    for i in 0..count {
        let text = random_bool_formula(&mut r, 6);
        let f = parse_term(&text, &decls).map_err(|e| format!("{text}: {e}"))?;
        let map = polarity_map(&f);
        let paths = all_paths(&f);
        if map.len() != paths.len() {
            return Err(format!(
                "{text}: map has {} positions, expected {}",
                map.len(),
                paths.len()
            ));
        }
        for path in &paths {
            let pos = Position(path.clone());
            let want = reference_polarity(&f, path);
            let at = polarity_at(&f, &pos).map_err(|e| e.to_string())?;
            if map[&pos].value() != want || at.value() != want {
                return Err(format!(
                    "{text} at {pos}: map {:?}, at {at:?}, reference {want}",
                    map[&pos]
                ));
            }
            stats.positions += 1;
            if i >= semantic || at == Polarity::Zero {
                continue;
            }
            let sub = nia_overapprox::smtlib::subterm_at(&f, &pos).unwrap();
            if !sub.is_bool() {
                continue;
            }
            let changed = match at {
                Polarity::Positive => Term::or(vec![sub.clone(), q.clone()]),
                _ => Term::and(vec![sub.clone(), q.clone()]),
            };
            let g = replace_at(&f, path, changed);
            let mut commands = decls.commands().to_vec();
            commands.push(Command::Assert(Term::and(vec![f.clone(), Term::not(g)])));
            let s = Script::new(commands).unwrap();
            let res = brute_force_sat(
                &s,
                &bounds,
                &Interpretation::new(),
                &SearchConfig::default(),
            )
            .map_err(|e| e.to_string())?;
            if res.result != SatResult::UnsatWithinBounds {
                return Err(format!(
                    "{text} at {pos}: changing a {at:?} subformula is not monotone"
                ));
            }
            stats.semantic_checks += 1;
        }
        stats.formulas += 1;
    }
    Ok(stats)
}

/// The three worked polarity examples and the running-example position.
pub fn polarity_examples() -> Result<(), String> {
    let s = bool_script("(declare-const f1 Bool)(declare-const f2 Bool)");
    let cases = [
        ("(not (=> f1 f2))", "1.1", Polarity::Positive),
        ("(= f1 f2)", "2", Polarity::Zero),
        ("(and f1 (not f2))", "2.1", Polarity::Negative),
    ];
    for (f, pos, want) in cases {
        let t = parse_term(f, &s).map_err(|e| e.to_string())?;
        let got = polarity_at(&t, &pos.parse().unwrap()).map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!("{f} at {pos}: {got:?}, expected {want:?}"));
        }
    }
    let swap = parse_script(include_str!("../../fixtures/token_swap.smt2")).unwrap();
    let last = swap.assertions().last().unwrap();
    let p = polarity_at(last, &"1".parse().unwrap()).map_err(|e| e.to_string())?;
    if p != Polarity::Negative || term_to_string(last.children()[0]) != "(>= wm1 wm2)" {
        return Err(format!("running example: {p:?}"));
    }
    let atom = Term::binary(
        CoreOp::Lt,
        Term::symbol("a", Sort::Int),
        Term::symbol("b", Sort::Int),
    );
    if polarity_map(&atom)[&Position::root()] != Polarity::Positive {
        return Err("atom map".into());
    }
    Ok(())
}
