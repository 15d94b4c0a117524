//! Linear integer arithmetic overapproximation.
//!
//! Non-linear products, `div` and `mod` are replaced by the uninterpreted
//! functions `umul`, `udiv` and `umod`; ground instances of valid integer
//! properties of those operations are then asserted for the terms that occur in
//! the rewritten assertions. Instances are never generated for terms that only
//! appear inside other instances.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::oracle::Builtin;
use crate::overapprox::{assemble, FreshSymbol, Mode, Overapproximation};
use crate::smtlib::{
    expand_lets, fresh_name, is_nia_logic, update_logic, used_names, Command, CoreOp, Head,
    Position, Script, Sort, TargetTheory, Term, TermKind, DEFAULT_LET_GROWTH_FACTOR,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NonlinearOp {
    Mul,
    Div,
    Mod,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonlinearOccurrence {
    pub op: NonlinearOp,
    /// Operands in normalized input form (lets expanded, products binary and folded).
    pub args: (Term, Term),
    pub origin: Position,
    pub assertion_index: usize,
    /// Literal divisors of the `mod` terms whose first argument contains this occurrence.
    pub wrap_moduli: Vec<BigInt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomCategory {
    Arith,
    ConstLinear,
    Overflow,
    TwosComplement,
    Pair,
}

impl AxiomCategory {
    pub const ALL: [AxiomCategory; 5] = [
        AxiomCategory::Arith,
        AxiomCategory::ConstLinear,
        AxiomCategory::Overflow,
        AxiomCategory::TwosComplement,
        AxiomCategory::Pair,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomCategory::Arith => "arith",
            AxiomCategory::ConstLinear => "const-linear",
            AxiomCategory::Overflow => "overflow",
            AxiomCategory::TwosComplement => "twos-complement",
            AxiomCategory::Pair => "pair",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomInstance {
    pub category: AxiomCategory,
    pub formula: Term,
    pub sources: Vec<NonlinearOccurrence>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairScope {
    SameAssertion,
    WholeScript,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiaConfig {
    pub pair_cap: usize,
    pub pair_scope: PairScope,
    pub enabled: BTreeSet<AxiomCategory>,
    /// Modulus of the machine word whose wraparound `mod` terms trigger the
    /// overflow and two's-complement instances.
    pub wrap_modulus: BigInt,
    pub let_growth_factor: usize,
}

impl Default for LiaConfig {
    fn default() -> LiaConfig {
        LiaConfig {
            pair_cap: 10_000,
            pair_scope: PairScope::WholeScript,
            enabled: AxiomCategory::ALL.into_iter().collect(),
            wrap_modulus: BigInt::one() << 256,
            let_growth_factor: DEFAULT_LET_GROWTH_FACTOR,
        }
    }
}

/// Names chosen for `umul`, `udiv` and `umod`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiaSymbols {
    pub umul: String,
    pub udiv: String,
    pub umod: String,
}

impl LiaSymbols {
    fn for_script(script: &Script) -> LiaSymbols {
        let mut taken = used_names(script);
        LiaSymbols {
            umul: fresh_name("umul", &mut taken),
            udiv: fresh_name("udiv", &mut taken),
            umod: fresh_name("umod", &mut taken),
        }
    }

    fn umul(&self, a: Term, b: Term) -> Term {
        Term::fun(&self.umul, vec![a, b], Sort::Int)
    }

    fn udiv(&self, a: Term, b: Term) -> Term {
        Term::fun(&self.udiv, vec![a, b], Sort::Int)
    }

    fn umod(&self, a: Term, b: Term) -> Term {
        Term::fun(&self.umod, vec![a, b], Sort::Int)
    }

    fn names(&self) -> [String; 3] {
        [self.umul.clone(), self.udiv.clone(), self.umod.clone()]
    }
}

/// Result of the first step: the rewritten script `f1` and the names it uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiaRewrite {
    pub f1: Script,
    pub symbols: LiaSymbols,
}

impl LiaRewrite {
    /// Rewrites a normalized input term into its `f1` form.
    pub fn rewrite(&self, t: &Term) -> Term {
        rewrite_term(t, &self.symbols)
    }
}

pub(crate) fn check_logic(script: &Script) -> Result<()> {
    match script.logic() {
        Some(l) if !is_nia_logic(l) => Err(Error::UnsupportedLogic(l.to_string())),
        _ => Ok(()),
    }
}

/// Makes products binary (left-associated) and folds products of constants.
fn normalize_term(t: &Term) -> Term {
    t.map_bottom_up(&mut |t| match t.kind {
        TermKind::Apply(Head::Core(op @ (CoreOp::Mul | CoreOp::IntDiv)), args)
            if args.len() >= 2 =>
        {
            let mut it = args.into_iter();
            let first = it.next().unwrap();
            it.fold(first, |acc, next| {
                if op == CoreOp::Mul {
                    if let (Some(a), Some(b)) = (acc.as_int_constant(), next.as_int_constant()) {
                        return Term::int(a * b);
                    }
                }
                Term::binary(op, acc, next)
            })
        }
        kind => Term::new(kind, t.sort),
    })
}

pub(crate) fn normalize(script: &Script, let_growth_factor: usize) -> Result<Script> {
    let expanded = expand_lets(script, let_growth_factor)?;
    let commands = expanded
        .into_commands()
        .into_iter()
        .map(|c| match c {
            Command::Assert(t) => Command::Assert(normalize_term(&t)),
            Command::DefineFun {
                name,
                params,
                ret,
                body,
            } => Command::DefineFun {
                name,
                params,
                ret,
                body: normalize_term(&body),
            },
            other => other,
        })
        .collect();
    Script::new(commands)
}

fn nonlinear_op(t: &Term) -> Option<(NonlinearOp, &Term, &Term)> {
    let TermKind::Apply(Head::Core(op), args) = &t.kind else {
        return None;
    };
    let [a, b] = args.as_slice() else {
        return None;
    };
    match op {
        CoreOp::Mul if t.sort == Sort::Int => {
            if a.as_int_constant().is_some() && b.as_int_constant().is_some() {
                None
            } else {
                Some((NonlinearOp::Mul, a, b))
            }
        }
        CoreOp::IntDiv => Some((NonlinearOp::Div, a, b)),
        CoreOp::Mod => Some((NonlinearOp::Mod, a, b)),
        _ => None,
    }
}

fn collect_in(
    t: &Term,
    pos: Position,
    index: usize,
    moduli: &mut Vec<BigInt>,
    out: &mut Vec<NonlinearOccurrence>,
) {
    let nl = nonlinear_op(t);
    let pushed = match nl {
        Some((NonlinearOp::Mod, _, m)) => m.as_int_constant().map(|m| moduli.push(m)).is_some(),
        _ => false,
    };
    for (i, c) in t.children().into_iter().enumerate() {
        // only the dividend of a wraparound mod is "under" it
        if pushed && i == 1 {
            let saved = moduli.pop();
            collect_in(c, pos.child(i + 1), index, moduli, out);
            moduli.extend(saved);
        } else {
            collect_in(c, pos.child(i + 1), index, moduli, out);
        }
    }
    if pushed {
        moduli.pop();
    }
    if let Some((op, a, b)) = nl {
        let mut wrap = moduli.clone();
        wrap.sort();
        wrap.dedup();
        out.push(NonlinearOccurrence {
            op,
            args: (a.clone(), b.clone()),
            origin: pos,
            assertion_index: index,
            wrap_moduli: wrap,
        });
    }
}

fn collect_normalized(script: &Script) -> Vec<NonlinearOccurrence> {
    let mut out = Vec::new();
    for (i, t) in script.assertions().enumerate() {
        collect_in(t, Position::root(), i, &mut Vec::new(), &mut out);
    }
    out
}

/// Every product with at most one constant operand, and every `div` and `mod`,
/// in the assertions of `script`; innermost occurrences first.
pub fn collect_nonlinear(script: &Script) -> Result<Vec<NonlinearOccurrence>> {
    check_logic(script)?;
    Ok(collect_normalized(&normalize(
        script,
        DEFAULT_LET_GROWTH_FACTOR,
    )?))
}

fn rewrite_term(t: &Term, syms: &LiaSymbols) -> Term {
    t.map_bottom_up(&mut |t| match nonlinear_op(&t) {
        Some((op, a, b)) => {
            let (a, b) = (a.clone(), b.clone());
            match op {
                NonlinearOp::Mul => syms.umul(a, b),
                NonlinearOp::Div => syms.udiv(a, b),
                NonlinearOp::Mod => syms.umod(a, b),
            }
        }
        None => t,
    })
}

fn rewrite_normalized(script: &Script) -> Result<LiaRewrite> {
    let symbols = LiaSymbols::for_script(script);
    let commands = script
        .commands()
        .iter()
        .map(|c| match c {
            Command::Assert(t) => Command::Assert(rewrite_term(t, &symbols)),
            Command::DefineFun {
                name,
                params,
                ret,
                body,
            } => Command::DefineFun {
                name: name.clone(),
                params: params.clone(),
                ret: ret.clone(),
                body: rewrite_term(body, &symbols),
            },
            other => other.clone(),
        })
        .collect();
    Ok(LiaRewrite {
        f1: Script::new(commands)?,
        symbols,
    })
}

/// Replaces non-linear products, `div` and `mod` by `umul`, `udiv` and `umod`.
///
/// The fresh functions are not declared here; see [`lia_overapproximate`].
pub fn replace_nonlinear_lia(script: &Script) -> Result<LiaRewrite> {
    check_logic(script)?;
    rewrite_normalized(&normalize(script, DEFAULT_LET_GROWTH_FACTOR)?)
}

struct Emitter<'a> {
    syms: &'a LiaSymbols,
    out: Vec<AxiomInstance>,
    seen: BTreeMap<Term, usize>,
}

impl Emitter<'_> {
    fn emit(&mut self, category: AxiomCategory, formula: Term, src: &[&NonlinearOccurrence]) {
        if formula == Term::bool(true) {
            return;
        }
        if let Some(&i) = self.seen.get(&formula) {
            for s in src {
                if !self.out[i].sources.contains(s) {
                    self.out[i].sources.push((*s).clone());
                }
            }
            return;
        }
        self.seen.insert(formula.clone(), self.out.len());
        self.out.push(AxiomInstance {
            category,
            formula,
            sources: src.iter().map(|s| (*s).clone()).collect(),
        });
    }
}

fn int(n: impl Into<BigInt>) -> Term {
    Term::int(n)
}

fn le(a: Term, b: Term) -> Term {
    Term::binary(CoreOp::Le, a, b)
}

fn lt(a: Term, b: Term) -> Term {
    Term::binary(CoreOp::Lt, a, b)
}

fn ge(a: Term, b: Term) -> Term {
    Term::binary(CoreOp::Ge, a, b)
}

fn add(a: Term, b: Term) -> Term {
    Term::binary(CoreOp::Add, a, b)
}

fn sub(a: Term, b: Term) -> Term {
    Term::binary(CoreOp::Sub, a, b)
}

/// Linear product of a literal and a term.
fn scale(c: &BigInt, t: Term) -> Term {
    Term::binary(CoreOp::Mul, int(c.clone()), t)
}

/// `operand = value => conclusion`, decided statically when `operand` is a literal.
fn when_equals(operand: &Term, value: i64, conclusion: Term) -> Term {
    match operand.as_int_constant() {
        Some(k) if k == BigInt::from(value) => conclusion,
        Some(_) => Term::bool(true),
        None => Term::implies(Term::eq(operand.clone(), int(value)), conclusion),
    }
}

fn mul_axioms(e: &mut Emitter, occ: &NonlinearOccurrence, a: &Term, b: &Term, cfg: &LiaConfig) {
    let s = e.syms;
    let m = s.umul(a.clone(), b.clone());
    let src = [occ];
    if cfg.enabled.contains(&AxiomCategory::Arith) {
        if a != b {
            e.emit(
                AxiomCategory::Arith,
                Term::eq(m.clone(), s.umul(b.clone(), a.clone())),
                &src,
            );
        }
        e.emit(
            AxiomCategory::Arith,
            when_equals(b, 0, Term::eq(m.clone(), int(0))),
            &src,
        );
        e.emit(
            AxiomCategory::Arith,
            when_equals(a, 0, Term::eq(m.clone(), int(0))),
            &src,
        );
        e.emit(
            AxiomCategory::Arith,
            when_equals(b, 1, Term::eq(m.clone(), a.clone())),
            &src,
        );
        e.emit(
            AxiomCategory::Arith,
            when_equals(a, 1, Term::eq(m.clone(), b.clone())),
            &src,
        );
    }
    if cfg.enabled.contains(&AxiomCategory::ConstLinear) {
        if let Some(c) = a.as_int_constant() {
            e.emit(
                AxiomCategory::ConstLinear,
                Term::eq(m.clone(), scale(&c, b.clone())),
                &src,
            );
        } else if let Some(c) = b.as_int_constant() {
            e.emit(
                AxiomCategory::ConstLinear,
                Term::eq(m.clone(), scale(&c, a.clone())),
                &src,
            );
        }
    }
    let wraps = occ.wrap_moduli.contains(&cfg.wrap_modulus);
    let word = || int(cfg.wrap_modulus.clone());
    if wraps && cfg.enabled.contains(&AxiomCategory::Overflow) {
        let fits = le(m.clone(), int(&cfg.wrap_modulus - 1));
        e.emit(
            AxiomCategory::Overflow,
            Term::implies(
                Term::and(vec![
                    ge(b.clone(), int(1)),
                    ge(a.clone(), int(0)),
                    fits.clone(),
                ]),
                Term::eq(s.udiv(m.clone(), b.clone()), a.clone()),
            ),
            &src,
        );
        e.emit(
            AxiomCategory::Overflow,
            Term::implies(
                Term::and(vec![ge(a.clone(), int(1)), ge(b.clone(), int(0)), fits]),
                Term::eq(s.udiv(m.clone(), a.clone()), b.clone()),
            ),
            &src,
        );
    }
    if wraps && cfg.enabled.contains(&AxiomCategory::TwosComplement) {
        let in_word = |t: &Term| vec![le(int(0), t.clone()), lt(t.clone(), word())];
        let mut guard = in_word(a);
        guard.extend(in_word(b));
        let reduced = s.umul(s.umod(a.clone(), word()), s.umod(b.clone(), word()));
        e.emit(
            AxiomCategory::TwosComplement,
            Term::implies(
                Term::and(guard),
                Term::eq(s.umod(m.clone(), word()), s.umod(reduced, word())),
            ),
            &src,
        );
        let negated = s.umul(sub(word(), a.clone()), b.clone());
        let linear = sub(scale(&cfg.wrap_modulus, b.clone()), m.clone());
        e.emit(
            AxiomCategory::TwosComplement,
            Term::implies(
                Term::and(in_word(a)),
                Term::eq(s.umod(negated, word()), s.umod(linear, word())),
            ),
            &src,
        );
    }
}

/// Range and decomposition facts shared by `udiv` and `umod` occurrences.
fn division_axioms(e: &mut Emitter, occ: &NonlinearOccurrence, x: &Term, y: &Term) {
    let s = e.syms;
    let (q, r) = (s.udiv(x.clone(), y.clone()), s.umod(x.clone(), y.clone()));
    let src = [occ];
    let cat = AxiomCategory::Arith;
    let conclusion_one = match occ.op {
        NonlinearOp::Mod => Term::eq(r.clone(), int(0)),
        _ => Term::eq(q.clone(), x.clone()),
    };
    e.emit(cat, when_equals(y, 1, conclusion_one), &src);
    let absorbing = match occ.op {
        NonlinearOp::Mod => Term::eq(r.clone(), int(0)),
        _ => Term::eq(q.clone(), int(0)),
    };
    match (x.as_int_constant(), y.as_int_constant()) {
        (Some(k), Some(c)) if k.is_zero() && !c.is_zero() => e.emit(cat, absorbing, &src),
        (Some(_), Some(_)) => {}
        (Some(k), None) if k.is_zero() => e.emit(
            cat,
            Term::implies(Term::not(Term::eq(y.clone(), int(0))), absorbing),
            &src,
        ),
        (Some(_), None) => {}
        (None, _) if y.as_int_constant().is_some_and(|c| c.is_zero()) => {}
        (None, Some(_)) => e.emit(
            cat,
            Term::implies(Term::eq(x.clone(), int(0)), absorbing),
            &src,
        ),
        (None, None) => e.emit(
            cat,
            Term::implies(
                Term::and(vec![
                    Term::eq(x.clone(), int(0)),
                    Term::not(Term::eq(y.clone(), int(0))),
                ]),
                absorbing,
            ),
            &src,
        ),
    }
    if let Some(c) = y.as_int_constant() {
        if c.is_zero() {
            return;
        }
        e.emit(
            cat,
            Term::and(vec![le(int(0), r.clone()), le(r.clone(), int(c.abs() - 1))]),
            &src,
        );
        e.emit(cat, Term::eq(x.clone(), add(scale(&c, q), r)), &src);
    } else {
        e.emit(
            cat,
            Term::implies(
                Term::and(vec![ge(y.clone(), int(1)), ge(x.clone(), int(0))]),
                Term::and(vec![
                    le(int(0), r.clone()),
                    le(r.clone(), x.clone()),
                    le(int(0), q.clone()),
                    le(q, x.clone()),
                ]),
            ),
            &src,
        );
        e.emit(
            cat,
            Term::implies(
                ge(y.clone(), int(1)),
                Term::and(vec![
                    le(int(0), r.clone()),
                    le(r.clone(), sub(y.clone(), int(1))),
                ]),
            ),
            &src,
        );
        e.emit(
            cat,
            Term::implies(
                le(y.clone(), int(-1)),
                Term::and(vec![
                    le(int(0), r.clone()),
                    le(r, sub(Term::core(CoreOp::Sub, vec![y.clone()]), int(1))),
                ]),
            ),
            &src,
        );
    }
}

fn pair_axioms(
    e: &mut Emitter,
    (o1, a1, b1): (&NonlinearOccurrence, &Term, &Term),
    (o2, a2, b2): (&NonlinearOccurrence, &Term, &Term),
) {
    let s = e.syms;
    let m1 = s.umul(a1.clone(), b1.clone());
    let m2 = s.umul(a2.clone(), b2.clone());
    let src = [o1, o2];
    let mono = |xa: &Term, ya: &Term, xb: &Term, yb: &Term, lo: &Term, hi: &Term| {
        Term::implies(
            Term::and(vec![
                le(int(0), xa.clone()),
                le(xa.clone(), xb.clone()),
                le(int(0), ya.clone()),
                le(ya.clone(), yb.clone()),
            ]),
            le(lo.clone(), hi.clone()),
        )
    };
    e.emit(AxiomCategory::Pair, mono(a1, b1, a2, b2, &m1, &m2), &src);
    e.emit(AxiomCategory::Pair, mono(a2, b2, a1, b1, &m2, &m1), &src);
    let shared = if a1 == a2 {
        Some((a1, b1, b2))
    } else if a1 == b2 {
        Some((a1, b1, a2))
    } else if b1 == a2 {
        Some((b1, a1, b2))
    } else if b1 == b2 {
        Some((b1, a1, a2))
    } else {
        None
    };
    if let Some((x, y1, y2)) = shared {
        e.emit(
            AxiomCategory::Pair,
            Term::eq(add(m1, m2), s.umul(x.clone(), add(y1.clone(), y2.clone()))),
            &src,
        );
    }
}

/// Ground axiom instances for the occurrences `occs` of the rewritten script.
pub fn instantiate_lia_axioms(
    rewrite: &LiaRewrite,
    occs: &[NonlinearOccurrence],
    cfg: &LiaConfig,
) -> Vec<AxiomInstance> {
    let mut e = Emitter {
        syms: &rewrite.symbols,
        out: Vec::new(),
        seen: BTreeMap::new(),
    };
    let f1_args =
        |o: &NonlinearOccurrence| (rewrite.rewrite(&o.args.0), rewrite.rewrite(&o.args.1));
    let mut muls: Vec<(&NonlinearOccurrence, Term, Term)> = Vec::new();
    let mut seen_muls = BTreeSet::new();
    for occ in occs {
        let (a, b) = f1_args(occ);
        match occ.op {
            NonlinearOp::Mul => {
                mul_axioms(&mut e, occ, &a, &b, cfg);
                let key = (occ.assertion_index, a.clone(), b.clone());
                let global_key = (a.clone(), b.clone());
                let fresh = match cfg.pair_scope {
                    PairScope::SameAssertion => seen_muls.insert(key),
                    PairScope::WholeScript => seen_muls.insert((0, global_key.0, global_key.1)),
                };
                if fresh {
                    muls.push((occ, a, b));
                }
            }
            NonlinearOp::Div | NonlinearOp::Mod => {
                if cfg.enabled.contains(&AxiomCategory::Arith) {
                    division_axioms(&mut e, occ, &a, &b);
                }
            }
        }
    }
    if cfg.enabled.contains(&AxiomCategory::Pair) {
        let mut pairs = 0usize;
        'outer: for i in 0..muls.len() {
            for j in i + 1..muls.len() {
                if cfg.pair_scope == PairScope::SameAssertion
                    && muls[i].0.assertion_index != muls[j].0.assertion_index
                {
                    continue;
                }
                if pairs >= cfg.pair_cap {
                    break 'outer;
                }
                pairs += 1;
                let (o1, a1, b1) = &muls[i];
                let (o2, a2, b2) = &muls[j];
                pair_axioms(&mut e, (o1, a1, b1), (o2, a2, b2));
            }
        }
    }
    e.out
}

/// Checks that a script only uses linear integer arithmetic: no `div`, no `mod`,
/// and at least one literal operand in every product.
pub fn check_linear(script: &Script) -> Result<()> {
    let mut bad = None;
    for cmd in script.commands() {
        let (Command::Assert(t) | Command::DefineFun { body: t, .. }) = cmd else {
            continue;
        };
        t.visit(&mut |t| {
            if bad.is_some() {
                return;
            }
            if let TermKind::Apply(Head::Core(op), args) = &t.kind {
                let nonlinear = match op {
                    CoreOp::IntDiv | CoreOp::Mod => true,
                    CoreOp::Mul => {
                        args.iter()
                            .filter(|a| a.as_int_constant().is_none())
                            .count()
                            > 1
                    }
                    _ => false,
                };
                if nonlinear {
                    bad = Some(crate::smtlib::term_to_string(t));
                }
            }
        });
    }
    match bad {
        Some(t) => Err(Error::Invariant(format!(
            "non-linear term in LIA output: {t}"
        ))),
        None => Ok(()),
    }
}

/// Builds the complete LIA overapproximation of an NIA script.
pub fn lia_overapproximate(script: &Script, cfg: &LiaConfig) -> Result<Overapproximation> {
    check_logic(script)?;
    let normalized = normalize(script, cfg.let_growth_factor)?;
    let occs = collect_normalized(&normalized);
    let rewrite = rewrite_normalized(&normalized)?;
    let axioms = instantiate_lia_axioms(&rewrite, &occs, cfg);

    let mut counts: BTreeMap<String, usize> = cfg
        .enabled
        .iter()
        .map(|c| (c.name().to_string(), 0))
        .collect();
    for a in &axioms {
        *counts.entry(a.category.name().to_string()).or_default() += 1;
    }

    let syms = &rewrite.symbols;
    let axiom_cmds: Vec<Command> = axioms
        .into_iter()
        .map(|a| Command::Assert(a.formula))
        .collect();
    let all_names = syms.names();
    let used: Vec<String> = all_names
        .iter()
        .filter(|n| {
            rewrite
                .f1
                .commands()
                .iter()
                .chain(&axiom_cmds)
                .any(|c| match c {
                    Command::Assert(t) | Command::DefineFun { body: t, .. } => t.mentions(n),
                    _ => false,
                })
        })
        .cloned()
        .collect();
    let decls = used
        .iter()
        .map(|n| Command::DeclareFun {
            name: n.clone(),
            args: vec![Sort::Int, Sort::Int],
            ret: Sort::Int,
        })
        .collect();
    let commands = rewrite
        .f1
        .commands()
        .iter()
        .cloned()
        .map(|c| match c {
            Command::SetLogic(l) => update_logic(&l, TargetTheory::Lia).map(Command::SetLogic),
            other => Ok(other),
        })
        .collect::<Result<Vec<_>>>()?;
    let script = Script::new(assemble(commands, decls, &used, axiom_cmds))?;

    let symbols = [
        ("umul", &syms.umul, Builtin::Mul),
        ("udiv", &syms.udiv, Builtin::Div),
        ("umod", &syms.umod, Builtin::Mod),
    ]
    .into_iter()
    .filter(|(_, n, _)| used.contains(n))
    .map(|(base, name, meaning)| FreshSymbol {
        base,
        name: name.clone(),
        meaning: Some(meaning),
    })
    .collect();

    let enabled: Vec<&str> = cfg.enabled.iter().map(|c| c.name()).collect();
    let config = vec![
        ("pair-cap".to_string(), cfg.pair_cap.to_string()),
        (
            "pair-scope".to_string(),
            match cfg.pair_scope {
                PairScope::SameAssertion => "assert",
                PairScope::WholeScript => "script",
            }
            .to_string(),
        ),
        ("axioms".to_string(), enabled.join(",")),
    ];
    Ok(Overapproximation {
        mode: Mode::Lia,
        script,
        symbols,
        config,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smtlib::{parse_script, print_script, term_to_string};

    const SWAP: &str = include_str!("../fixtures/token_swap.smt2");

    fn parse(text: &str) -> Script {
        parse_script(text).unwrap()
    }

    #[test]
    fn running_example_has_three_products_and_three_divisions() {
        let occs = collect_nonlinear(&parse(SWAP)).unwrap();
        let count = |op| occs.iter().filter(|o| o.op == op).count();
        assert_eq!(count(NonlinearOp::Mul), 3);
        assert_eq!(count(NonlinearOp::Div), 3);
        assert_eq!(count(NonlinearOp::Mod), 0);
        let muls: Vec<String> = occs
            .iter()
            .filter(|o| o.op == NonlinearOp::Mul)
            .map(|o| {
                format!(
                    "{} {}",
                    term_to_string(&o.args.0),
                    term_to_string(&o.args.1)
                )
            })
            .collect();
        assert_eq!(muls, ["ws tm1", "ns tm1", "ws tm2"]);
    }

    #[test]
    fn no_arithmetic_means_no_occurrences() {
        let s = parse("(set-logic QF_UFNIA)(declare-const p Bool)(assert p)");
        assert!(collect_nonlinear(&s).unwrap().is_empty());
    }

    #[test]
    fn constant_products_fold() {
        let s = parse("(declare-const a Int)(assert (= a (* 2 3)))");
        assert!(collect_nonlinear(&s).unwrap().is_empty());
        let r = replace_nonlinear_lia(&s).unwrap();
        assert_eq!(term_to_string(r.f1.assertions().next().unwrap()), "(= a 6)");
    }

    #[test]
    fn rewrite_rules() {
        let s = parse(
            "(declare-const ws Int)(declare-const tm Int)(declare-const ts Int)\
             (declare-const x Int)(declare-const a Int)(declare-const b Int)\
             (assert (= x (div (* ws tm) ts)))(assert (> (* 3 x) (+ a b)))",
        );
        let r = replace_nonlinear_lia(&s).unwrap();
        let got: Vec<String> = r.f1.assertions().map(term_to_string).collect();
        assert_eq!(
            got,
            ["(= x (udiv (umul ws tm) ts))", "(> (umul 3 x) (+ a b))"]
        );
    }

    #[test]
    fn fresh_names_skip_user_symbols() {
        let s = parse(
            "(declare-fun umul (Int Int) Int)(declare-const x Int)\
             (assert (= (umul x x) (* x x)))",
        );
        let o = lia_overapproximate(&s, &LiaConfig::default()).unwrap();
        assert_eq!(o.name_of("umul"), Some("umul_1"));
        assert!(o.header().contains("; renamed: umul -> umul_1"));
        assert!(print_script(&o.script).contains("(declare-fun umul_1 (Int Int) Int)"));
    }

    #[test]
    fn commutativity_and_constant_instances() {
        let s = parse(
            "(declare-const ws Int)(declare-const tm Int)(declare-const x Int)\
             (assert (> (* ws tm) (* 3 x)))",
        );
        let o = lia_overapproximate(&s, &LiaConfig::default()).unwrap();
        let text = print_script(&o.script);
        assert!(
            text.contains("(assert (= (umul ws tm) (umul tm ws)))"),
            "{text}"
        );
        assert!(text.contains("(assert (= (umul 3 x) (* 3 x)))"), "{text}");
        check_linear(&o.script).unwrap();
    }

    #[test]
    fn pairs_get_monotonicity_and_distributivity() {
        let s = parse(
            "(declare-const ws Int)(declare-const tm Int)(declare-const ns Int)\
             (assert (> (* ws tm) (* ns tm)))",
        );
        let o = lia_overapproximate(&s, &LiaConfig::default()).unwrap();
        let text = print_script(&o.script);
        assert!(text.contains(
            "(=> (and (<= 0 ws) (<= ws ns) (<= 0 tm) (<= tm tm)) (<= (umul ws tm) (umul ns tm)))"
        ), "{text}");
        assert!(
            text.contains("(= (+ (umul ws tm) (umul ns tm)) (umul tm (+ ws ns)))"),
            "{text}"
        );
        assert_eq!(o.counts["pair"], 3);
    }

    #[test]
    fn pair_cap_and_scope() {
        let s = parse(
            "(declare-const a Int)(declare-const b Int)(declare-const c Int)\
             (assert (> (* a b) 0))(assert (> (* b c) (* a c)))",
        );
        let count = |cfg: &LiaConfig| lia_overapproximate(&s, cfg).unwrap().counts["pair"];
        let whole = count(&LiaConfig::default());
        let same = count(&LiaConfig {
            pair_scope: PairScope::SameAssertion,
            ..LiaConfig::default()
        });
        let none = count(&LiaConfig {
            pair_cap: 0,
            ..LiaConfig::default()
        });
        assert_eq!((whole, same, none), (9, 3, 0));
    }

    #[test]
    fn wraparound_products_get_overflow_instances() {
        let s = parse(
            "(declare-const a Int)(declare-const b Int)\
             (assert (= (mod (* a b) 16) 3))",
        );
        let cfg = LiaConfig {
            wrap_modulus: 16.into(),
            ..LiaConfig::default()
        };
        let o = lia_overapproximate(&s, &cfg).unwrap();
        assert_eq!(o.counts["overflow"], 2);
        assert_eq!(o.counts["twos-complement"], 2);
        let plain = lia_overapproximate(&s, &LiaConfig::default()).unwrap();
        assert_eq!(plain.counts["overflow"], 0);
    }

    #[test]
    fn linear_scripts_only_change_logic() {
        let text = "(set-logic QF_NIA)\n(declare-const a Int)\n(declare-const b Int)\n(assert (> (+ a b) (- a)))\n(check-sat)\n";
        let o = lia_overapproximate(&parse(text), &LiaConfig::default()).unwrap();
        assert_eq!(print_script(&o.script), text.replace("QF_NIA", "QF_UFLIA"));
    }

    #[test]
    fn non_nia_logic_is_rejected() {
        let s = parse("(set-logic QF_LIA)(declare-const a Int)(assert (> a 0))");
        assert!(matches!(
            lia_overapproximate(&s, &LiaConfig::default()),
            Err(Error::UnsupportedLogic(_))
        ));
    }

    #[test]
    fn output_is_deterministic() {
        let s = parse(SWAP);
        let a = lia_overapproximate(&s, &LiaConfig::default())
            .unwrap()
            .render();
        let b = lia_overapproximate(&s, &LiaConfig::default())
            .unwrap()
            .render();
        assert_eq!(a, b);
    }
}
