//! SMT-LIB2 script parser with sort synthesis.

use num_rational::BigRational;

use super::ast::{
    Command, Constructor, CoreOp, DatatypeDecl, Head, Script, Sort, SymbolKind, SymbolTable, Term,
    TermKind,
};
use super::sexpr::{read_all, Atom, SExpr, SExprKind};
use crate::error::{Error, Result};

/// Parses a quantifier-free SMT-LIB 2.6 script.
pub fn parse_script(text: &str) -> Result<Script> {
    let exprs = read_all(text)?;
    let mut parser = Parser {
        text,
        symbols: SymbolTable::default(),
        real_numerals: false,
    };
    let mut commands = Vec::with_capacity(exprs.len());
    for e in &exprs {
        let cmd = parser.command(e)?;
        parser.symbols.declare(&cmd).map_err(|err| match err {
            Error::Script(m) => e.sort_error(m),
            other => other,
        })?;
        commands.push(cmd);
    }
    Script::new(commands)
}

/// Parses a single term against the declarations of `script`.
pub fn parse_term(text: &str, script: &Script) -> Result<Term> {
    let exprs = read_all(text)?;
    let [e] = exprs.as_slice() else {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            message: "expected exactly one term".into(),
        });
    };
    let parser = Parser {
        text,
        symbols: script.symbols().clone(),
        real_numerals: script.logic().is_some_and(is_real_only_logic),
    };
    parser.term(e, &mut Vec::new())
}

/// Real-only logics (e.g. QF_NRA) read bare numerals as reals.
fn is_real_only_logic(logic: &str) -> bool {
    logic.ends_with("RA") && !logic.ends_with("IRA")
}

struct Parser<'a> {
    text: &'a str,
    symbols: SymbolTable,
    real_numerals: bool,
}

type Scope = Vec<(String, Sort)>;

impl Parser<'_> {
    fn raw(&self, e: &SExpr) -> String {
        self.text[e.start..e.end].to_string()
    }

    fn symbol<'e>(&self, e: &'e SExpr, what: &str) -> Result<&'e str> {
        e.as_symbol()
            .ok_or_else(|| e.error(format!("expected {what}")))
    }

    fn list<'e>(&self, e: &'e SExpr, what: &str) -> Result<&'e [SExpr]> {
        e.as_list()
            .ok_or_else(|| e.error(format!("expected {what}")))
    }

    fn command(&mut self, e: &SExpr) -> Result<Command> {
        let items = self.list(e, "a command")?;
        let Some(head) = items.first().and_then(|h| h.as_symbol()) else {
            return Err(e.error("expected a command name"));
        };
        let args = &items[1..];
        let arity = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(e.error(format!(
                    "`{head}` expects {n} argument(s), got {}",
                    args.len()
                )))
            }
        };
        Ok(match head {
            "set-logic" => {
                arity(1)?;
                let logic = self.symbol(&args[0], "a logic name")?.to_string();
                self.real_numerals = is_real_only_logic(&logic);
                Command::SetLogic(logic)
            }
            "set-info" => {
                let keyword = match args.first().map(|a| &a.kind) {
                    Some(SExprKind::Atom(Atom::Keyword(k))) => k.clone(),
                    _ => return Err(e.error("`set-info` expects a keyword")),
                };
                if args.len() > 2 {
                    return Err(e.error("`set-info` expects at most one value"));
                }
                Command::SetInfo {
                    keyword,
                    value: args.get(1).map(|v| self.raw(v)),
                }
            }
            "declare-sort" => {
                if args.is_empty() || args.len() > 2 {
                    return Err(e.error("`declare-sort` expects a name and an arity"));
                }
                let name = self.symbol(&args[0], "a sort name")?.to_string();
                let arity = match args.get(1).map(|a| &a.kind) {
                    None => 0,
                    Some(SExprKind::Atom(Atom::Numeral(n))) => {
                        usize::try_from(n).map_err(|_| args[1].error("arity out of range"))?
                    }
                    _ => return Err(args[1].error("expected a numeral arity")),
                };
                if arity != 0 {
                    return Err(Error::UnsupportedFeature(format!(
                        "parametric sort `{name}`"
                    )));
                }
                Command::DeclareSort { name, arity }
            }
            "declare-const" => {
                arity(2)?;
                Command::DeclareConst {
                    name: self.symbol(&args[0], "a constant name")?.to_string(),
                    sort: self.sort(&args[1])?,
                }
            }
            "declare-fun" => {
                arity(3)?;
                let name = self.symbol(&args[0], "a function name")?.to_string();
                let arg_sorts = self
                    .list(&args[1], "a list of argument sorts")?
                    .iter()
                    .map(|s| self.sort(s))
                    .collect::<Result<Vec<_>>>()?;
                Command::DeclareFun {
                    name,
                    args: arg_sorts,
                    ret: self.sort(&args[2])?,
                }
            }
            "define-fun" => {
                arity(4)?;
                let name = self.symbol(&args[0], "a function name")?.to_string();
                let mut params = Vec::new();
                for p in self.list(&args[1], "a parameter list")? {
                    let pair = self.list(p, "a (name sort) pair")?;
                    if pair.len() != 2 {
                        return Err(p.error("expected a (name sort) pair"));
                    }
                    params.push((
                        self.symbol(&pair[0], "a parameter name")?.to_string(),
                        self.sort(&pair[1])?,
                    ));
                }
                let ret = self.sort(&args[2])?;
                let mut scope = params.clone();
                let body = self.term(&args[3], &mut scope)?;
                if body.sort != ret {
                    return Err(args[3].sort_error(format!(
                        "body of `{name}` has sort {}, declared {ret}",
                        body.sort
                    )));
                }
                Command::DefineFun {
                    name,
                    params,
                    ret,
                    body,
                }
            }
            "declare-datatypes" => {
                arity(2)?;
                let heads = self.list(&args[0], "a list of (name arity) pairs")?;
                let bodies = self.list(&args[1], "a list of constructor lists")?;
                if heads.len() != bodies.len() {
                    return Err(e.error("datatype name and constructor lists differ in length"));
                }
                let mut names = Vec::new();
                for h in heads {
                    let pair = self.list(h, "a (name arity) pair")?;
                    let [name, arity] = pair else {
                        return Err(h.error("expected a (name arity) pair"));
                    };
                    if !matches!(&arity.kind, SExprKind::Atom(Atom::Numeral(n)) if n == &0.into()) {
                        return Err(Error::UnsupportedFeature("parametric datatypes".into()));
                    }
                    names.push(self.symbol(name, "a datatype name")?.to_string());
                }
                self.datatypes(&names, bodies)?
            }
            "declare-datatype" => {
                arity(2)?;
                let name = self.symbol(&args[0], "a datatype name")?.to_string();
                self.datatypes(&[name], std::slice::from_ref(&args[1]))?
            }
            "assert" => {
                arity(1)?;
                let t = self.term(&args[0], &mut Vec::new())?;
                if !t.is_bool() {
                    return Err(args[0]
                        .sort_error(format!("asserted term has sort {}, expected Bool", t.sort)));
                }
                Command::Assert(t)
            }
            "check-sat" => {
                arity(0)?;
                Command::CheckSat
            }
            "exit" => {
                arity(0)?;
                Command::Exit
            }
            _ => Command::Unsupported(self.raw(e)),
        })
    }

    fn datatypes(&mut self, names: &[String], bodies: &[SExpr]) -> Result<Command> {
        // datatypes may refer to each other, so register the names first
        let saved = self.symbols.sorts.clone();
        for n in names {
            self.symbols.sorts.insert(n.clone(), true);
        }
        let result = (|| {
            let mut decls = Vec::new();
            for (name, body) in names.iter().zip(bodies) {
                let mut constructors = Vec::new();
                for c in self.list(body, "a constructor list")? {
                    let parts = self.list(c, "a constructor declaration")?;
                    let Some(cname) = parts.first() else {
                        return Err(c.error("empty constructor declaration"));
                    };
                    let mut fields = Vec::new();
                    for f in &parts[1..] {
                        let pair = self.list(f, "a (selector sort) pair")?;
                        if pair.len() != 2 {
                            return Err(f.error("expected a (selector sort) pair"));
                        }
                        fields.push((
                            self.symbol(&pair[0], "a selector name")?.to_string(),
                            self.sort(&pair[1])?,
                        ));
                    }
                    constructors.push(Constructor {
                        name: self.symbol(cname, "a constructor name")?.to_string(),
                        fields,
                    });
                }
                decls.push(DatatypeDecl {
                    name: name.clone(),
                    constructors,
                });
            }
            Ok(Command::DeclareDatatypes(decls))
        })();
        self.symbols.sorts = saved;
        result
    }

    fn sort(&self, e: &SExpr) -> Result<Sort> {
        match e.as_symbol() {
            Some("Bool") => Ok(Sort::Bool),
            Some("Int") => Ok(Sort::Int),
            Some("Real") => Ok(Sort::Real),
            Some(name) => match self.symbols.sorts.get(name) {
                Some(true) => Ok(Sort::Datatype(name.to_string())),
                Some(false) => Ok(Sort::Uninterpreted(name.to_string())),
                None => Err(e.sort_error(format!("unknown sort `{name}`"))),
            },
            None if e.as_list().is_some() => Err(Error::UnsupportedFeature(format!(
                "compound sort `{}`",
                self.raw(e)
            ))),
            None => Err(e.error("expected a sort")),
        }
    }

    fn term(&self, e: &SExpr, scope: &mut Scope) -> Result<Term> {
        match &e.kind {
            SExprKind::Atom(Atom::Numeral(n)) => Ok(if self.real_numerals {
                Term::new(
                    TermKind::Decimal(BigRational::from_integer(n.clone())),
                    Sort::Real,
                )
            } else {
                Term::new(TermKind::Numeral(n.clone()), Sort::Int)
            }),
            SExprKind::Atom(Atom::Decimal(d)) => {
                Ok(Term::new(TermKind::Decimal(d.clone()), Sort::Real))
            }
            SExprKind::Atom(Atom::Symbol(s)) => self.symbol_term(e, s, scope),
            SExprKind::Atom(Atom::Keyword(k)) => Err(e.error(format!("unexpected keyword `{k}`"))),
            SExprKind::Atom(Atom::Str(_)) => {
                Err(Error::UnsupportedFeature("string literals".into()))
            }
            SExprKind::Atom(Atom::Other(raw)) => {
                Err(Error::UnsupportedFeature(format!("literal `{raw}`")))
            }
            SExprKind::List(items) => self.list_term(e, items, scope),
        }
    }

    fn symbol_term(&self, e: &SExpr, s: &str, scope: &Scope) -> Result<Term> {
        match s {
            "true" => return Ok(Term::bool(true)),
            "false" => return Ok(Term::bool(false)),
            _ => {}
        }
        if let Some((_, sort)) = scope.iter().rev().find(|(n, _)| n == s) {
            return Ok(Term::symbol(s, sort.clone()));
        }
        match self.symbols.get(s) {
            Some(kind) if kind.arg_sorts().is_empty() => Ok(Term::symbol(s, kind.ret_sort())),
            Some(_) => Err(e.sort_error(format!("function `{s}` used without arguments"))),
            None => Err(e.sort_error(format!("unknown symbol `{s}`"))),
        }
    }

    fn list_term(&self, e: &SExpr, items: &[SExpr], scope: &mut Scope) -> Result<Term> {
        let Some(head) = items.first() else {
            return Err(e.error("empty application"));
        };
        let rest = &items[1..];
        if let Some(indexed) = head.as_list() {
            if let [under, is, ctor] = indexed {
                if under.as_symbol() == Some("_") && is.as_symbol() == Some("is") {
                    let ctor = self.symbol(ctor, "a constructor name")?;
                    let Some(SymbolKind::Constructor { datatype, .. }) = self.symbols.get(ctor)
                    else {
                        return Err(e.sort_error(format!("`{ctor}` is not a constructor")));
                    };
                    let [arg] = rest else {
                        return Err(e.sort_error("tester expects one argument"));
                    };
                    let arg = self.term(arg, scope)?;
                    if arg.sort != Sort::Datatype(datatype.clone()) {
                        return Err(e.sort_error(format!(
                            "tester for `{ctor}` applied to sort {}",
                            arg.sort
                        )));
                    }
                    return Ok(Term::new(
                        TermKind::Apply(Head::Tester(ctor.to_string()), vec![arg]),
                        Sort::Bool,
                    ));
                }
            }
            return Err(Error::UnsupportedFeature(format!(
                "indexed identifier `{}`",
                self.raw(head)
            )));
        }
        let Some(name) = head.as_symbol() else {
            return Err(head.error("expected a function symbol"));
        };
        match name {
            "forall" | "exists" => {
                return Err(Error::UnsupportedFeature(format!(
                    "quantifier `{name}` (only quantifier-free scripts are supported)"
                )))
            }
            "match" | "as" | "lambda" => {
                return Err(Error::UnsupportedFeature(format!("`{name}` terms")))
            }
            "!" => {
                // annotations are dropped
                let Some(inner) = rest.first() else {
                    return Err(e.error("`!` expects a term"));
                };
                return self.term(inner, scope);
            }
            "let" => {
                let [bindings, body] = rest else {
                    return Err(e.error("`let` expects bindings and a body"));
                };
                let mut bound = Vec::new();
                for b in self.list(bindings, "a binding list")? {
                    let pair = self.list(b, "a (name term) binding")?;
                    let [n, t] = pair else {
                        return Err(b.error("expected a (name term) binding"));
                    };
                    let name = self.symbol(n, "a variable name")?.to_string();
                    bound.push((name, self.term(t, scope)?));
                }
                let depth = scope.len();
                scope.extend(bound.iter().map(|(n, t)| (n.clone(), t.sort.clone())));
                let body = self.term(body, scope);
                scope.truncate(depth);
                let body = body?;
                let sort = body.sort.clone();
                return Ok(Term::new(TermKind::Let(bound, Box::new(body)), sort));
            }
            "ite" => {
                let [c, t, f] = rest else {
                    return Err(e.sort_error("`ite` expects 3 arguments"));
                };
                let (c, t, f) = (
                    self.term(c, scope)?,
                    self.term(t, scope)?,
                    self.term(f, scope)?,
                );
                if !c.is_bool() {
                    return Err(e.sort_error("`ite` condition must be Bool"));
                }
                if t.sort != f.sort {
                    return Err(e.sort_error(format!(
                        "`ite` branches have sorts {} and {}",
                        t.sort, f.sort
                    )));
                }
                return Ok(Term::ite(c, t, f));
            }
            _ => {}
        }
        let args = rest
            .iter()
            .map(|a| self.term(a, scope))
            .collect::<Result<Vec<_>>>()?;
        if let Some(op) = CoreOp::from_name(name) {
            if !self.symbols.functions.contains_key(name) {
                check_core(op, &args).map_err(|m| e.sort_error(m))?;
                return Ok(Term::core(op, args));
            }
        }
        let kind = self
            .symbols
            .get(name)
            .ok_or_else(|| e.sort_error(format!("unknown function `{name}`")))?;
        let expected = kind.arg_sorts();
        if expected.len() != args.len() {
            return Err(e.sort_error(format!(
                "`{name}` expects {} argument(s), got {}",
                expected.len(),
                args.len()
            )));
        }
        for (i, (want, got)) in expected.iter().zip(&args).enumerate() {
            if want != &got.sort {
                return Err(e.sort_error(format!(
                    "argument {} of `{name}` has sort {}, expected {want}",
                    i + 1,
                    got.sort
                )));
            }
        }
        Ok(Term::fun(name, args, kind.ret_sort()))
    }
}

/// Arity and sort rules for interpreted symbols.
pub(crate) fn check_core(op: CoreOp, args: &[Term]) -> std::result::Result<(), String> {
    let n = args.len();
    let name = op.name();
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(format!("`{name}` expects {what}, got {n} argument(s)"))
        }
    };
    let all_sort = |sort: &Sort| -> std::result::Result<(), String> {
        match args.iter().find(|a| &a.sort != sort) {
            Some(a) => Err(format!("`{name}` expects {sort} arguments, got {}", a.sort)),
            None => Ok(()),
        }
    };
    let same_numeric = || -> std::result::Result<(), String> {
        let first = &args[0].sort;
        if !first.is_numeric() {
            return Err(format!("`{name}` expects numeric arguments, got {first}"));
        }
        all_sort(first)
    };
    match op {
        CoreOp::Not => {
            need(n == 1, "1 argument")?;
            all_sort(&Sort::Bool)
        }
        CoreOp::And | CoreOp::Or | CoreOp::Xor => {
            need(n >= 1, "at least 1 argument")?;
            all_sort(&Sort::Bool)
        }
        CoreOp::Implies => {
            need(n >= 2, "at least 2 arguments")?;
            all_sort(&Sort::Bool)
        }
        CoreOp::Eq | CoreOp::Distinct => {
            need(n >= 2, "at least 2 arguments")?;
            all_sort(&args[0].sort)
        }
        CoreOp::Add | CoreOp::Mul => {
            need(n >= 2, "at least 2 arguments")?;
            same_numeric()
        }
        CoreOp::Sub => {
            need(n >= 1, "at least 1 argument")?;
            same_numeric()
        }
        CoreOp::Le | CoreOp::Lt | CoreOp::Ge | CoreOp::Gt => {
            need(n >= 2, "at least 2 arguments")?;
            same_numeric()
        }
        CoreOp::IntDiv => {
            need(n >= 2, "at least 2 arguments")?;
            all_sort(&Sort::Int)
        }
        CoreOp::Mod => {
            need(n == 2, "2 arguments")?;
            all_sort(&Sort::Int)
        }
        CoreOp::RealDiv => {
            need(n >= 2, "at least 2 arguments")?;
            all_sort(&Sort::Real)
        }
        CoreOp::Abs | CoreOp::ToReal => {
            need(n == 1, "1 argument")?;
            all_sort(&Sort::Int)
        }
        CoreOp::ToInt | CoreOp::IsInt => {
            need(n == 1, "1 argument")?;
            all_sort(&Sort::Real)
        }
    }
}
