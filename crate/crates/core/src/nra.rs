//! Non-linear real arithmetic overapproximation.
//!
//! Integers are lifted to reals, `div` is rewritten through the fractional-part
//! function `ufrac`, `mod` through a defined `umod`, the fresh functions are
//! constrained by ground axiom instances, and inequalities are strengthened by one
//! unit where polarity allows, which keeps every integer model.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::lia::{check_logic, normalize};
use crate::oracle::Builtin;
use crate::overapprox::{assemble, FreshSymbol, Mode, Overapproximation};
use crate::smtlib::{
    child_polarity, fresh_name, term_to_string, update_logic, used_names, Command, Constructor,
    CoreOp, DatatypeDecl, Head, Polarity, Script, Sort, TargetTheory, Term, TermKind,
    DEFAULT_LET_GROWTH_FACTOR,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NraConfig {
    /// Bound `ufrac(x, y)` by `1 - 1/y` (and `-1 - 1/y`) instead of 1 (and -1).
    pub tight_frac: bool,
    pub relax_inequalities: bool,
    pub axfz_cap: usize,
    /// Print relaxed strict atoms as `(>= (- t 1.0) s)` instead of `(not (< (- t 1.0) s))`.
    pub appendix_form: bool,
    pub let_growth_factor: usize,
}

impl Default for NraConfig {
    fn default() -> NraConfig {
        NraConfig {
            tight_frac: false,
            relax_inequalities: true,
            axfz_cap: 10_000,
            appendix_form: false,
            let_growth_factor: DEFAULT_LET_GROWTH_FACTOR,
        }
    }
}

/// A `ufrac(numerator, denominator)` term created by the div/mod rewrite.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FracTerm {
    pub numerator: Term,
    pub denominator: Term,
}

/// Names of the fresh symbols of the NRA encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NraSymbols {
    pub ufrac: String,
    pub umod: String,
    pub axfb: String,
    pub axfz: String,
    pub axia: String,
}

impl NraSymbols {
    pub fn for_script(script: &Script) -> NraSymbols {
        let mut taken = used_names(script);
        let mut f = |b| fresh_name(b, &mut taken);
        NraSymbols {
            ufrac: f("ufrac"),
            umod: f("umod"),
            axfb: f("axfb"),
            axfz: f("axfz"),
            axia: f("axia"),
        }
    }

    fn ufrac(&self, x: Term, y: Term) -> Term {
        Term::fun(&self.ufrac, vec![x, y], Sort::Real)
    }
}

fn real(n: i64) -> Term {
    Term::real(BigRational::from_integer(BigInt::from(n)))
}

fn lift_sort(s: &Sort) -> Sort {
    match s {
        Sort::Int => Sort::Real,
        other => other.clone(),
    }
}

fn lift_term(t: &Term) -> Result<Term> {
    let mut unsupported = None;
    let lifted = t.map_bottom_up(&mut |t| {
        let sort = lift_sort(&t.sort);
        match t.kind {
            TermKind::Numeral(n) if t.sort == Sort::Int => {
                Term::new(TermKind::Decimal(BigRational::from_integer(n)), Sort::Real)
            }
            TermKind::Apply(Head::Core(op), args) => {
                if matches!(
                    op,
                    CoreOp::Abs | CoreOp::ToReal | CoreOp::ToInt | CoreOp::IsInt
                ) {
                    unsupported.get_or_insert(op.name());
                }
                Term::new(TermKind::Apply(Head::Core(op), args), sort)
            }
            kind => Term::new(kind, sort),
        }
    });
    match unsupported {
        Some(op) => Err(Error::UnsupportedFeature(format!(
            "`{op}` in the NRA overapproximation"
        ))),
        None => Ok(lifted),
    }
}

/// Changes every Int sort to Real and every integer literal to a real literal.
///
/// `div` and `mod` are kept (with Real-sorted arguments) for [`rewrite_div_mod_nra`].
pub fn lift_to_real(script: &Script) -> Result<Script> {
    let commands = script
        .commands()
        .iter()
        .map(|c| {
            Ok(match c {
                Command::DeclareConst { name, sort } => Command::DeclareConst {
                    name: name.clone(),
                    sort: lift_sort(sort),
                },
                Command::DeclareFun { name, args, ret } => Command::DeclareFun {
                    name: name.clone(),
                    args: args.iter().map(lift_sort).collect(),
                    ret: lift_sort(ret),
                },
                Command::DefineFun {
                    name,
                    params,
                    ret,
                    body,
                } => Command::DefineFun {
                    name: name.clone(),
                    params: params
                        .iter()
                        .map(|(n, s)| (n.clone(), lift_sort(s)))
                        .collect(),
                    ret: lift_sort(ret),
                    body: lift_term(body)?,
                },
                Command::DeclareDatatypes(decls) => Command::DeclareDatatypes(
                    decls
                        .iter()
                        .map(|d| DatatypeDecl {
                            name: d.name.clone(),
                            constructors: d
                                .constructors
                                .iter()
                                .map(|c| Constructor {
                                    name: c.name.clone(),
                                    fields: c
                                        .fields
                                        .iter()
                                        .map(|(n, s)| (n.clone(), lift_sort(s)))
                                        .collect(),
                                })
                                .collect(),
                        })
                        .collect(),
                ),
                Command::Assert(t) => Command::Assert(lift_term(t)?),
                other => other.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Script::new(commands)
}

/// Result of the div/mod rewrite: the script `f1`, its frac terms in order of
/// first occurrence, and whether `umod` occurs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NraRewrite {
    pub f1: Script,
    pub fracs: Vec<FracTerm>,
    pub uses_umod: bool,
    pub symbols: NraSymbols,
}

fn rewrite_term(t: &Term, syms: &NraSymbols, fracs: &mut Vec<FracTerm>, umod: &mut bool) -> Term {
    t.map_bottom_up(&mut |t| match &t.kind {
        TermKind::Apply(Head::Core(op @ (CoreOp::IntDiv | CoreOp::Mod)), args)
            if args.len() == 2 =>
        {
            let (x, y) = (args[0].clone(), args[1].clone());
            let frac = FracTerm {
                numerator: x.clone(),
                denominator: y.clone(),
            };
            if !fracs.contains(&frac) {
                fracs.push(frac);
            }
            if *op == CoreOp::Mod {
                *umod = true;
                Term::fun(&syms.umod, vec![x, y], Sort::Real)
            } else {
                let quotient = Term::binary(CoreOp::RealDiv, x.clone(), y.clone());
                Term::binary(CoreOp::Sub, quotient, syms.ufrac(x, y))
            }
        }
        _ => t,
    })
}

fn rewrite_lifted(script: &Script, symbols: NraSymbols) -> Result<NraRewrite> {
    let mut fracs = Vec::new();
    let mut uses_umod = false;
    let mut commands = Vec::new();
    for c in script.commands() {
        commands.push(match c {
            Command::Assert(t) => {
                Command::Assert(rewrite_term(t, &symbols, &mut fracs, &mut uses_umod))
            }
            Command::DefineFun {
                name,
                params,
                ret,
                body,
            } => {
                // frac terms over the parameters are not ground, so no instances for them
                let mut local = Vec::new();
                Command::DefineFun {
                    name: name.clone(),
                    params: params.clone(),
                    ret: ret.clone(),
                    body: rewrite_term(body, &symbols, &mut local, &mut uses_umod),
                }
            }
            other => other.clone(),
        });
    }
    Ok(NraRewrite {
        f1: Script::new(commands)?,
        fracs,
        uses_umod,
        symbols,
    })
}

/// Rewrites `(div t s)` to `(- (/ t s) (ufrac t s))` and `(mod t s)` to `(umod t s)`
/// in a lifted script (lets expanded). The fresh symbols are not declared here.
pub fn rewrite_div_mod_nra(lifted: &Script) -> Result<NraRewrite> {
    rewrite_lifted(lifted, NraSymbols::for_script(lifted))
}

/// The definition of `umod` by cases on the position of `x` relative to `y`.
pub fn emit_umod_definition(syms: &NraSymbols) -> Command {
    let x = Term::symbol("x", Sort::Real);
    let y = Term::symbol("y", Sort::Real);
    let le = |a: &Term, b: &Term| Term::binary(CoreOp::Le, a.clone(), b.clone());
    let lt = |a: &Term, b: &Term| Term::binary(CoreOp::Lt, a.clone(), b.clone());
    let two_y = Term::binary(CoreOp::Mul, real(2), y.clone());
    let minus_y = Term::core(CoreOp::Sub, vec![y.clone()]);
    let body = Term::ite(
        Term::and(vec![le(&real(0), &x), lt(&x, &y)]),
        x.clone(),
        Term::ite(
            Term::and(vec![le(&y, &x), lt(&x, &two_y)]),
            Term::binary(CoreOp::Sub, x.clone(), y.clone()),
            Term::ite(
                Term::and(vec![le(&minus_y, &x), lt(&x, &real(0))]),
                Term::binary(CoreOp::Add, x.clone(), y.clone()),
                Term::binary(CoreOp::Mul, y.clone(), syms.ufrac(x.clone(), y.clone())),
            ),
        ),
    );
    Command::DefineFun {
        name: syms.umod.clone(),
        params: vec![("x".into(), Sort::Real), ("y".into(), Sort::Real)],
        ret: Sort::Real,
        body,
    }
}

fn axfb_definition(syms: &NraSymbols, tight: bool) -> Command {
    let x = Term::symbol("x", Sort::Real);
    let y = Term::symbol("y", Sort::Real);
    let f = syms.ufrac(x, y.clone());
    let bin = Term::binary;
    let (upper, lower) = if tight {
        let inv = bin(CoreOp::RealDiv, real(1), y.clone());
        (
            bin(
                CoreOp::Le,
                f.clone(),
                bin(CoreOp::Sub, real(1), inv.clone()),
            ),
            bin(CoreOp::Ge, f.clone(), bin(CoreOp::Sub, real(-1), inv)),
        )
    } else {
        (
            bin(CoreOp::Lt, f.clone(), real(1)),
            bin(CoreOp::Gt, f.clone(), real(-1)),
        )
    };
    let body = Term::and(vec![
        Term::implies(
            bin(CoreOp::Gt, y.clone(), real(0)),
            Term::and(vec![bin(CoreOp::Le, real(0), f.clone()), upper]),
        ),
        Term::implies(
            bin(CoreOp::Lt, y, real(0)),
            Term::and(vec![bin(CoreOp::Ge, real(0), f), lower]),
        ),
    ]);
    Command::DefineFun {
        name: syms.axfb.clone(),
        params: vec![("x".into(), Sort::Real), ("y".into(), Sort::Real)],
        ret: Sort::Bool,
        body,
    }
}

fn axfz_definition(syms: &NraSymbols) -> Command {
    let v = |n: &str| Term::symbol(n, Sort::Real);
    let body = Term::implies(
        Term::and(vec![
            Term::eq(v("x"), Term::binary(CoreOp::Mul, v("z"), v("w"))),
            Term::or(vec![Term::eq(v("y"), v("z")), Term::eq(v("y"), v("w"))]),
        ]),
        Term::eq(syms.ufrac(v("x"), v("y")), real(0)),
    );
    Command::DefineFun {
        name: syms.axfz.clone(),
        params: ["x", "y", "z", "w"]
            .map(|n| (n.to_string(), Sort::Real))
            .to_vec(),
        ret: Sort::Bool,
        body,
    }
}

fn axia_definition(syms: &NraSymbols) -> Command {
    let x = Term::symbol("x", Sort::Real);
    Command::DefineFun {
        name: syms.axia.clone(),
        params: vec![("x".into(), Sort::Real)],
        ret: Sort::Bool,
        body: Term::or(vec![
            Term::binary(CoreOp::Le, x.clone(), real(-1)),
            Term::eq(x.clone(), real(0)),
            Term::binary(CoreOp::Ge, x, real(1)),
        ]),
    }
}

/// Distinct binary products in the assertions of `f1`, innermost first.
pub fn multiplications(f1: &Script) -> Vec<(Term, Term)> {
    let mut out: Vec<(Term, Term)> = Vec::new();
    for t in f1.assertions() {
        postorder(t, &mut |t| {
            if let TermKind::Apply(Head::Core(CoreOp::Mul), args) = &t.kind {
                if let [a, b] = args.as_slice() {
                    let key = (a.clone(), b.clone());
                    if !out.contains(&key) {
                        out.push(key);
                    }
                }
            }
        });
    }
    out
}

fn postorder<'a>(t: &'a Term, f: &mut impl FnMut(&'a Term)) {
    for c in t.children() {
        postorder(c, f);
    }
    f(t)
}

/// The axiom instances asserted by the NRA overapproximation, grouped by kind.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NraAxioms {
    pub axfb: Vec<Term>,
    pub axfz: Vec<Term>,
    pub axia: Vec<Term>,
}

/// Instances of the fractional-part bounds and zero axioms for every frac term,
/// and of the integrality axiom for every variable in `int_vars`.
pub fn instantiate_nra_axioms(
    rewrite: &NraRewrite,
    int_vars: &[String],
    cfg: &NraConfig,
) -> NraAxioms {
    let syms = &rewrite.symbols;
    let bool_app = |f: &str, args: Vec<Term>| Term::fun(f, args, Sort::Bool);
    let muls = multiplications(&rewrite.f1);
    let mut axioms = NraAxioms::default();
    for frac in &rewrite.fracs {
        let (x, y) = (frac.numerator.clone(), frac.denominator.clone());
        axioms
            .axfb
            .push(bool_app(&syms.axfb, vec![x.clone(), y.clone()]));
        for (z, w) in &muls {
            if axioms.axfz.len() >= cfg.axfz_cap {
                break;
            }
            axioms.axfz.push(bool_app(
                &syms.axfz,
                vec![x.clone(), y.clone(), z.clone(), w.clone()],
            ));
        }
    }
    for v in int_vars {
        axioms
            .axia
            .push(bool_app(&syms.axia, vec![Term::symbol(v, Sort::Real)]));
    }
    axioms
}

fn rebuild(t: &Term, children: Vec<Term>) -> Term {
    let mut it = children.into_iter();
    let kind = match &t.kind {
        TermKind::Apply(h, _) => TermKind::Apply(h.clone(), it.collect()),
        TermKind::Ite(..) => {
            let (c, a, b) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
            TermKind::Ite(Box::new(c), Box::new(a), Box::new(b))
        }
        TermKind::Let(bindings, _) => TermKind::Let(
            bindings
                .iter()
                .map(|(n, _)| n.clone())
                .zip(it.by_ref())
                .collect(),
            Box::new(it.next().unwrap()),
        ),
        other => other.clone(),
    };
    Term::new(kind, t.sort.clone())
}

fn relax_atom(t: &Term, pol: Polarity, appendix: bool) -> Option<Term> {
    let TermKind::Apply(Head::Core(op), args) = &t.kind else {
        return None;
    };
    let [a, b] = args.as_slice() else {
        return None;
    };
    if a.sort != Sort::Real {
        return None;
    }
    let minus_one = || Term::binary(CoreOp::Sub, a.clone(), real(1));
    let plus_one = || Term::binary(CoreOp::Add, a.clone(), real(1));
    Some(match (op, pol) {
        // a > b  ~>  not (a <= b)  ~>  not (a - 1 < b)
        (CoreOp::Gt, Polarity::Positive) if appendix => {
            Term::binary(CoreOp::Ge, minus_one(), b.clone())
        }
        (CoreOp::Gt, Polarity::Positive) => {
            Term::not(Term::binary(CoreOp::Lt, minus_one(), b.clone()))
        }
        (CoreOp::Lt, Polarity::Positive) if appendix => {
            Term::binary(CoreOp::Le, plus_one(), b.clone())
        }
        (CoreOp::Lt, Polarity::Positive) => {
            Term::not(Term::binary(CoreOp::Gt, plus_one(), b.clone()))
        }
        (CoreOp::Le, Polarity::Negative) => Term::binary(CoreOp::Lt, minus_one(), b.clone()),
        (CoreOp::Ge, Polarity::Negative) => Term::binary(CoreOp::Gt, plus_one(), b.clone()),
        _ => return None,
    })
}

fn relax_term(t: &Term, pol: Polarity, appendix: bool) -> Term {
    if let Some(r) = relax_atom(t, pol, appendix) {
        return r;
    }
    if pol == Polarity::Zero || !t.is_bool() {
        return t.clone();
    }
    let children = t
        .children()
        .into_iter()
        .enumerate()
        .map(|(i, c)| relax_term(c, child_polarity(t, pol, i), appendix))
        .collect();
    rebuild(t, children)
}

/// Strengthens the strict inequalities at positive and the non-strict ones at
/// negative polarity in the assertions of `f1`. Binary comparisons only.
pub fn relax_inequalities(f1: &Script, cfg: &NraConfig) -> Result<Script> {
    if !cfg.relax_inequalities {
        return Ok(f1.clone());
    }
    let commands = f1
        .commands()
        .iter()
        .map(|c| match c {
            Command::Assert(t) => {
                Command::Assert(relax_term(t, Polarity::Positive, cfg.appendix_form))
            }
            other => other.clone(),
        })
        .collect();
    Script::new(commands)
}

/// Fails if the script still contains Int sorts, `div` or `mod`.
pub fn check_nra_output(script: &Script) -> Result<()> {
    let int_sorted = |s: &Sort| *s == Sort::Int;
    let mut bad: Option<String> = None;
    for cmd in script.commands() {
        let decl_int = match cmd {
            Command::DeclareConst { sort, .. } => int_sorted(sort),
            Command::DeclareFun { args, ret, .. } => args.iter().chain([ret]).any(int_sorted),
            Command::DefineFun { params, ret, .. } => {
                params.iter().map(|(_, s)| s).chain([ret]).any(int_sorted)
            }
            Command::DeclareDatatypes(d) => d
                .iter()
                .flat_map(|d| &d.constructors)
                .flat_map(|c| &c.fields)
                .any(|(_, s)| int_sorted(s)),
            _ => false,
        };
        if decl_int {
            bad.get_or_insert_with(|| crate::smtlib::command_to_string(cmd));
        }
        if let Command::Assert(t) | Command::DefineFun { body: t, .. } = cmd {
            t.visit(&mut |t| {
                let int_op = matches!(
                    t.kind,
                    TermKind::Apply(Head::Core(CoreOp::IntDiv | CoreOp::Mod), _)
                );
                if bad.is_none() && (int_op || t.sort == Sort::Int) {
                    bad = Some(term_to_string(t));
                }
            });
        }
    }
    if let Some(l) = script.logic() {
        if !l.ends_with("NRA") {
            bad.get_or_insert_with(|| format!("logic {l}"));
        }
    }
    match bad {
        Some(b) => Err(Error::Invariant(format!(
            "integer residue in NRA output: {b}"
        ))),
        None => Ok(()),
    }
}

/// Builds the complete NRA overapproximation of an NIA script.
pub fn nra_overapproximate(script: &Script, cfg: &NraConfig) -> Result<Overapproximation> {
    check_logic(script)?;
    let normalized = normalize(script, cfg.let_growth_factor)?;
    let int_vars: Vec<String> = normalized
        .constants()
        .into_iter()
        .filter(|(_, s)| *s == Sort::Int)
        .map(|(n, _)| n)
        .collect();
    let lifted = lift_to_real(&normalized)?;
    let rewrite = rewrite_lifted(&lifted, NraSymbols::for_script(script))?;
    let axioms = instantiate_nra_axioms(&rewrite, &int_vars, cfg);
    let relaxed = relax_inequalities(&rewrite.f1, cfg)?;
    let syms = &rewrite.symbols;

    let has_frac_axioms = !axioms.axfb.is_empty();
    let defines_ufrac = relaxed
        .commands()
        .iter()
        .any(|c| matches!(c, Command::Assert(t) | Command::DefineFun { body: t, .. } if t.mentions(&syms.ufrac)));
    let uses_ufrac = defines_ufrac || rewrite.uses_umod || has_frac_axioms;

    let mut names = Vec::new();
    let mut decls = Vec::new();
    if uses_ufrac {
        names.push(syms.ufrac.clone());
        decls.push(Command::DeclareFun {
            name: syms.ufrac.clone(),
            args: vec![Sort::Real, Sort::Real],
            ret: Sort::Real,
        });
    }
    if rewrite.uses_umod {
        names.push(syms.umod.clone());
        decls.push(emit_umod_definition(syms));
    }
    if has_frac_axioms {
        names.push(syms.axfb.clone());
        decls.push(axfb_definition(syms, cfg.tight_frac));
    }
    if !axioms.axfz.is_empty() {
        names.push(syms.axfz.clone());
        decls.push(axfz_definition(syms));
    }
    if !axioms.axia.is_empty() {
        names.push(syms.axia.clone());
        decls.push(axia_definition(syms));
    }

    let counts = [
        ("axfb", axioms.axfb.len()),
        ("axfz", axioms.axfz.len()),
        ("axia", axioms.axia.len()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    let axiom_cmds = axioms
        .axfb
        .into_iter()
        .chain(axioms.axfz)
        .chain(axioms.axia)
        .map(Command::Assert)
        .collect();

    let commands = relaxed
        .into_commands()
        .into_iter()
        .map(|c| match c {
            Command::SetLogic(l) => update_logic(&l, TargetTheory::Nra).map(Command::SetLogic),
            other => Ok(other),
        })
        .collect::<Result<Vec<_>>>()?;
    let out = Script::new(assemble(commands, decls, &names, axiom_cmds))?;
    check_nra_output(&out)?;

    let used: BTreeSet<&String> = names.iter().collect();
    let symbols = [
        ("ufrac", &syms.ufrac, Some(Builtin::Frac)),
        ("umod", &syms.umod, None),
        ("axfb", &syms.axfb, None),
        ("axfz", &syms.axfz, None),
        ("axia", &syms.axia, None),
    ]
    .into_iter()
    .filter(|(_, n, _)| used.contains(n))
    .map(|(base, name, meaning)| FreshSymbol {
        base,
        name: name.clone(),
        meaning,
    })
    .collect();

    let config = vec![
        ("tight-frac".to_string(), cfg.tight_frac.to_string()),
        ("relax-ineq".to_string(), cfg.relax_inequalities.to_string()),
        ("axfz-cap".to_string(), cfg.axfz_cap.to_string()),
        ("appendix-form".to_string(), cfg.appendix_form.to_string()),
    ];
    Ok(Overapproximation {
        mode: Mode::Nra,
        script: out,
        symbols,
        config,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{Evaluator, Interpretation, Value};
    use crate::smtlib::{parse_script, parse_term, print_script};

    const SWAP: &str = include_str!("../fixtures/token_swap.smt2");

    fn parse(text: &str) -> Script {
        parse_script(text).unwrap()
    }

    fn nra(text: &str, cfg: &NraConfig) -> String {
        print_script(&nra_overapproximate(&parse(text), cfg).unwrap().script)
    }

    #[test]
    fn lifting_changes_sorts_and_literals() {
        let s = lift_to_real(&parse("(declare-const ts Int)(assert (> ts 0))")).unwrap();
        assert_eq!(
            print_script(&s),
            "(declare-const ts Real)\n(assert (> ts 0.0))\n"
        );
    }

    #[test]
    fn lifting_reaches_datatype_fields() {
        let s = parse(
            "(declare-datatypes ((P 0)) (((mk (fst Int) (snd Bool)))))\
             (declare-const p P)(assert (> (fst p) 1))",
        );
        let text = print_script(&lift_to_real(&s).unwrap());
        assert!(text.contains("((mk (fst Real) (snd Bool)))"), "{text}");
        assert!(text.contains("(assert (> (fst p) 1.0))"), "{text}");
    }

    #[test]
    fn abs_is_unsupported() {
        let s = parse("(declare-const x Int)(assert (> (abs x) 1))");
        assert!(matches!(
            nra_overapproximate(&s, &NraConfig::default()),
            Err(Error::UnsupportedFeature(_))
        ));
    }

    #[test]
    fn div_and_mod_rewrite() {
        let s = parse(
            "(declare-const ws Int)(declare-const tm Int)(declare-const ts Int)(declare-const x Int)\
             (assert (= x (div (* ws tm) ts)))(assert (= (mod x 5) 1))",
        );
        let r = rewrite_div_mod_nra(&lift_to_real(&s).unwrap()).unwrap();
        let got: Vec<String> = r.f1.assertions().map(term_to_string).collect();
        assert_eq!(
            got,
            [
                "(= x (- (/ (* ws tm) ts) (ufrac (* ws tm) ts)))",
                "(= (umod x 5.0) 1.0)"
            ]
        );
        assert_eq!(r.fracs.len(), 2);
        assert!(r.uses_umod);
    }

    #[test]
    fn umod_definition_cases() {
        let syms = NraSymbols::for_script(&parse(""));
        let def = emit_umod_definition(&syms);
        let script = Script::new(vec![
            Command::DeclareFun {
                name: "ufrac".into(),
                args: vec![Sort::Real, Sort::Real],
                ret: Sort::Real,
            },
            def,
        ])
        .unwrap();
        let interp = Interpretation::new().with("ufrac", Builtin::Frac);
        let ev = Evaluator::new(&script, &interp);
        for (x, y, want) in [
            (3, 5, 3),
            (7, 5, 2),
            (-2, 5, 3),
            (-7, 5, 3),
            (13, 5, 3),
            (7, -5, 2),
        ] {
            let t = parse_term(&format!("(umod {x}.0 {y}.0)"), &script)
                .or_else(|_| {
                    parse_term(&format!("(umod {} {})", real_lit(x), real_lit(y)), &script)
                })
                .unwrap();
            assert_eq!(
                ev.eval(&t, &Default::default()).unwrap(),
                Value::int(want),
                "{x} {y}"
            );
        }
    }

    fn real_lit(n: i64) -> String {
        if n < 0 {
            format!("(- {}.0)", -n)
        } else {
            format!("{n}.0")
        }
    }

    #[test]
    fn relaxation_examples() {
        let text = "(declare-const ts Int)(declare-const ws Int)(declare-const wm Int)(declare-const wm2 Int)\
                    (assert (> ts 0))(assert (not (>= wm wm2)))(assert (>= ws 0))";
        let cfg = NraConfig::default();
        let s = relax_inequalities(&lift_to_real(&parse(text)).unwrap(), &cfg).unwrap();
        let got: Vec<String> = s.assertions().map(term_to_string).collect();
        assert_eq!(
            got,
            [
                "(not (< (- ts 1.0) 0.0))",
                "(not (> (+ wm 1.0) wm2))",
                "(>= ws 0.0)"
            ]
        );
        let appendix = NraConfig {
            appendix_form: true,
            ..cfg
        };
        let s = relax_inequalities(&lift_to_real(&parse(text)).unwrap(), &appendix).unwrap();
        assert_eq!(
            term_to_string(s.assertions().next().unwrap()),
            "(>= (- ts 1.0) 0.0)"
        );
    }

    #[test]
    fn zero_polarity_atoms_are_kept() {
        let text = "(declare-const a Int)(declare-const p Bool)\
                    (assert (= p (> a 0)))(assert (ite (< a 3) p (not p)))(assert (=> (<= a 2) (< a 9)))";
        let s = relax_inequalities(&lift_to_real(&parse(text)).unwrap(), &NraConfig::default())
            .unwrap();
        let got: Vec<String> = s.assertions().map(term_to_string).collect();
        assert_eq!(
            got,
            [
                "(= p (> a 0.0))",
                "(ite (< a 3.0) p (not p))",
                "(=> (< (- a 1.0) 2.0) (not (> (+ a 1.0) 9.0)))"
            ]
        );
    }

    #[test]
    fn running_example_instances() {
        let o = nra_overapproximate(&parse(SWAP), &NraConfig::default()).unwrap();
        assert_eq!(o.counts["axfb"], 3);
        assert_eq!(o.counts["axfz"], 9);
        assert_eq!(o.counts["axia"], 8);
        let text = print_script(&o.script);
        assert!(text.starts_with("(set-logic QF_UFNRA)\n"));
        assert!(
            text.contains("(assert (axfz (* ws tm1) ts1 ws tm1))"),
            "{text}"
        );
        assert!(
            text.contains("(assert (axfz (* ns tm1) ts1 ws tm2))"),
            "{text}"
        );
        assert!(text.contains("(assert (axia ts1))"), "{text}");
        assert!(!text.contains("umod"));
    }

    #[test]
    fn axfz_cap_limits_instances() {
        let cfg = NraConfig {
            axfz_cap: 4,
            ..NraConfig::default()
        };
        assert_eq!(
            nra_overapproximate(&parse(SWAP), &cfg).unwrap().counts["axfz"],
            4
        );
    }

    #[test]
    fn tight_variant_changes_bounds() {
        let cfg = NraConfig {
            tight_frac: true,
            ..NraConfig::default()
        };
        let text = nra(SWAP, &cfg);
        assert!(
            text.contains("(<= (ufrac x y) (- 1.0 (/ 1.0 y)))"),
            "{text}"
        );
    }

    #[test]
    fn linear_script_gets_only_integrality() {
        let text = nra(
            "(set-logic QF_NIA)(declare-const a Int)(declare-const b Int)(assert (>= (+ a b) 2))",
            &NraConfig::default(),
        );
        assert_eq!(
            text,
            "(set-logic QF_UFNRA)\n(declare-const a Real)\n(declare-const b Real)\n\
             (assert (>= (+ a b) 2.0))\n\
             (define-fun axia ((x Real)) Bool (or (<= x (- 1.0)) (= x 0.0) (>= x 1.0)))\n\
             (assert (axia a))\n(assert (axia b))\n"
        );
    }

    #[test]
    fn relaxation_is_exact_on_integers() {
        for t in -10i64..=10 {
            for s in -10i64..=10 {
                assert_eq!(t <= s, t - 1 < s);
                assert_eq!(t >= s, t + 1 > s);
            }
        }
    }
}
