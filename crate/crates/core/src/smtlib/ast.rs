//! Sorted syntax trees for quantifier-free SMT-LIB2 scripts.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Bool,
    Int,
    Real,
    Uninterpreted(String),
    Datatype(String),
}

impl Sort {
    pub fn is_numeric(&self) -> bool {
        matches!(self, Sort::Int | Sort::Real)
    }

    pub fn name(&self) -> &str {
        match self {
            Sort::Bool => "Bool",
            Sort::Int => "Int",
            Sort::Real => "Real",
            Sort::Uninterpreted(n) | Sort::Datatype(n) => n,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Interpreted function and predicate symbols of the core, integer and real theories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoreOp {
    And,
    Or,
    Not,
    Implies,
    Xor,
    Eq,
    Distinct,
    Add,
    /// Binary subtraction or, with one argument, negation.
    Sub,
    Mul,
    IntDiv,
    Mod,
    RealDiv,
    Abs,
    Le,
    Lt,
    Ge,
    Gt,
    ToReal,
    ToInt,
    IsInt,
}

impl CoreOp {
    pub fn from_name(name: &str) -> Option<CoreOp> {
        Some(match name {
            "and" => CoreOp::And,
            "or" => CoreOp::Or,
            "not" => CoreOp::Not,
            "=>" => CoreOp::Implies,
            "xor" => CoreOp::Xor,
            "=" => CoreOp::Eq,
            "distinct" => CoreOp::Distinct,
            "+" => CoreOp::Add,
            "-" => CoreOp::Sub,
            "*" => CoreOp::Mul,
            "div" => CoreOp::IntDiv,
            "mod" => CoreOp::Mod,
            "/" => CoreOp::RealDiv,
            "abs" => CoreOp::Abs,
            "<=" => CoreOp::Le,
            "<" => CoreOp::Lt,
            ">=" => CoreOp::Ge,
            ">" => CoreOp::Gt,
            "to_real" => CoreOp::ToReal,
            "to_int" => CoreOp::ToInt,
            "is_int" => CoreOp::IsInt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            CoreOp::And => "and",
            CoreOp::Or => "or",
            CoreOp::Not => "not",
            CoreOp::Implies => "=>",
            CoreOp::Xor => "xor",
            CoreOp::Eq => "=",
            CoreOp::Distinct => "distinct",
            CoreOp::Add => "+",
            CoreOp::Sub => "-",
            CoreOp::Mul => "*",
            CoreOp::IntDiv => "div",
            CoreOp::Mod => "mod",
            CoreOp::RealDiv => "/",
            CoreOp::Abs => "abs",
            CoreOp::Le => "<=",
            CoreOp::Lt => "<",
            CoreOp::Ge => ">=",
            CoreOp::Gt => ">",
            CoreOp::ToReal => "to_real",
            CoreOp::ToInt => "to_int",
            CoreOp::IsInt => "is_int",
        }
    }

    pub fn is_comparison(self) -> bool {
        matches!(self, CoreOp::Le | CoreOp::Lt | CoreOp::Ge | CoreOp::Gt)
    }

    /// Result sort given the sort of the first argument. Does not check the arguments.
    pub fn result_sort(self, first_arg: Option<&Sort>) -> Sort {
        match self {
            CoreOp::And
            | CoreOp::Or
            | CoreOp::Not
            | CoreOp::Implies
            | CoreOp::Xor
            | CoreOp::Eq
            | CoreOp::Distinct
            | CoreOp::Le
            | CoreOp::Lt
            | CoreOp::Ge
            | CoreOp::Gt
            | CoreOp::IsInt => Sort::Bool,
            CoreOp::RealDiv | CoreOp::ToReal => Sort::Real,
            CoreOp::ToInt => Sort::Int,
            CoreOp::Add
            | CoreOp::Sub
            | CoreOp::Mul
            | CoreOp::IntDiv
            | CoreOp::Mod
            | CoreOp::Abs => first_arg.cloned().unwrap_or(Sort::Int),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Head {
    Core(CoreOp),
    /// Declared or defined function, datatype constructor or selector.
    Fun(String),
    /// Datatype tester `(_ is C)`.
    Tester(String),
}

impl fmt::Display for Head {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Head::Core(op) => f.write_str(op.name()),
            Head::Fun(name) => f.write_str(name),
            Head::Tester(ctor) => write!(f, "(_ is {ctor})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermKind {
    /// Non-negative integer literal. Negative values are built as `(- n)`.
    Numeral(BigInt),
    /// Non-negative real literal.
    Decimal(BigRational),
    Bool(bool),
    /// Declared constant, nullary constructor, or a variable bound by `let`/`define-fun`.
    Symbol(String),
    Apply(Head, Vec<Term>),
    Ite(Box<Term>, Box<Term>, Box<Term>),
    Let(Vec<(String, Term)>, Box<Term>),
}

/// A term together with its synthesized sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub kind: TermKind,
    pub sort: Sort,
}

impl Term {
    pub fn new(kind: TermKind, sort: Sort) -> Term {
        Term { kind, sort }
    }

    /// Integer constant; negative values become `(- n)`.
    pub fn int(value: impl Into<BigInt>) -> Term {
        let value = value.into();
        if value.is_negative() {
            let lit = Term::new(TermKind::Numeral(-value), Sort::Int);
            Term::core(CoreOp::Sub, vec![lit])
        } else {
            Term::new(TermKind::Numeral(value), Sort::Int)
        }
    }

    /// Real constant; negative values become `(- r)`.
    pub fn real(value: impl Into<BigRational>) -> Term {
        let value = value.into();
        if value.is_negative() {
            let lit = Term::new(TermKind::Decimal(-value), Sort::Real);
            Term::core(CoreOp::Sub, vec![lit])
        } else {
            Term::new(TermKind::Decimal(value), Sort::Real)
        }
    }

    /// Numeric constant of the given numeric sort.
    pub fn constant(value: impl Into<BigInt>, sort: &Sort) -> Term {
        match sort {
            Sort::Real => Term::real(BigRational::from_integer(value.into())),
            _ => Term::int(value),
        }
    }

    pub fn bool(value: bool) -> Term {
        Term::new(TermKind::Bool(value), Sort::Bool)
    }

    pub fn symbol(name: impl Into<String>, sort: Sort) -> Term {
        Term::new(TermKind::Symbol(name.into()), sort)
    }

    /// Application of an interpreted symbol; the sort follows [`CoreOp::result_sort`].
    pub fn core(op: CoreOp, args: Vec<Term>) -> Term {
        let sort = op.result_sort(args.first().map(|a| &a.sort));
        Term::new(TermKind::Apply(Head::Core(op), args), sort)
    }

    pub fn fun(name: impl Into<String>, args: Vec<Term>, sort: Sort) -> Term {
        if args.is_empty() {
            return Term::symbol(name, sort);
        }
        Term::new(TermKind::Apply(Head::Fun(name.into()), args), sort)
    }

    pub fn ite(cond: Term, then: Term, els: Term) -> Term {
        let sort = then.sort.clone();
        Term::new(
            TermKind::Ite(Box::new(cond), Box::new(then), Box::new(els)),
            sort,
        )
    }

    pub fn and(args: Vec<Term>) -> Term {
        match args.len() {
            0 => Term::bool(true),
            1 => args.into_iter().next().unwrap(),
            _ => Term::core(CoreOp::And, args),
        }
    }

    pub fn or(args: Vec<Term>) -> Term {
        match args.len() {
            0 => Term::bool(false),
            1 => args.into_iter().next().unwrap(),
            _ => Term::core(CoreOp::Or, args),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(arg: Term) -> Term {
        Term::core(CoreOp::Not, vec![arg])
    }

    pub fn implies(lhs: Term, rhs: Term) -> Term {
        Term::core(CoreOp::Implies, vec![lhs, rhs])
    }

    pub fn eq(lhs: Term, rhs: Term) -> Term {
        Term::core(CoreOp::Eq, vec![lhs, rhs])
    }

    pub fn binary(op: CoreOp, lhs: Term, rhs: Term) -> Term {
        Term::core(op, vec![lhs, rhs])
    }

    pub fn is_bool(&self) -> bool {
        self.sort == Sort::Bool
    }

    /// Value of an interpreted integer constant: a numeral or the negation of one.
    pub fn as_int_constant(&self) -> Option<BigInt> {
        match &self.kind {
            TermKind::Numeral(n) if self.sort == Sort::Int => Some(n.clone()),
            TermKind::Apply(Head::Core(CoreOp::Sub), args) if args.len() == 1 => {
                args[0].as_int_constant().map(|n| -n)
            }
            _ => None,
        }
    }

    /// Value of an interpreted real constant whose value is an integer.
    pub fn as_real_integer_constant(&self) -> Option<BigInt> {
        match &self.kind {
            TermKind::Decimal(r) if r.is_integer() => Some(r.to_integer()),
            TermKind::Apply(Head::Core(CoreOp::Sub), args) if args.len() == 1 => {
                args[0].as_real_integer_constant().map(|n| -n)
            }
            _ => None,
        }
    }

    /// Integer value of a numeric literal of either sort.
    pub fn as_numeric_integer(&self) -> Option<BigInt> {
        self.as_int_constant()
            .or_else(|| self.as_real_integer_constant())
    }

    pub fn is_int_zero(&self) -> bool {
        self.as_int_constant().is_some_and(|n| n.is_zero())
    }

    pub fn is_int_one(&self) -> bool {
        self.as_int_constant().is_some_and(|n| n.is_one())
    }

    pub fn children(&self) -> Vec<&Term> {
        match &self.kind {
            TermKind::Apply(_, args) => args.iter().collect(),
            TermKind::Ite(c, t, e) => vec![c, t, e],
            TermKind::Let(bindings, body) => {
                let mut out: Vec<&Term> = bindings.iter().map(|(_, t)| t).collect();
                out.push(body);
                out
            }
            _ => Vec::new(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Pre-order visit of every subterm.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Rebuilds the tree bottom-up, applying `f` to every node after its children.
    pub fn map_bottom_up(&self, f: &mut impl FnMut(Term) -> Term) -> Term {
        let rebuilt = match &self.kind {
            TermKind::Apply(head, args) => {
                let args = args.iter().map(|a| a.map_bottom_up(f)).collect();
                Term::new(TermKind::Apply(head.clone(), args), self.sort.clone())
            }
            TermKind::Ite(c, t, e) => Term::new(
                TermKind::Ite(
                    Box::new(c.map_bottom_up(f)),
                    Box::new(t.map_bottom_up(f)),
                    Box::new(e.map_bottom_up(f)),
                ),
                self.sort.clone(),
            ),
            TermKind::Let(bindings, body) => Term::new(
                TermKind::Let(
                    bindings
                        .iter()
                        .map(|(n, t)| (n.clone(), t.map_bottom_up(f)))
                        .collect(),
                    Box::new(body.map_bottom_up(f)),
                ),
                self.sort.clone(),
            ),
            _ => self.clone(),
        };
        f(rebuilt)
    }

    /// True when `sym` occurs as a symbol or function head anywhere in the term.
    pub fn mentions(&self, sym: &str) -> bool {
        let mut found = false;
        self.visit(&mut |t| match &t.kind {
            TermKind::Symbol(s) if s == sym => found = true,
            TermKind::Apply(Head::Fun(s), _) if s == sym => found = true,
            _ => {}
        });
        found
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constructor {
    pub name: String,
    pub fields: Vec<(String, Sort)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatatypeDecl {
    pub name: String,
    pub constructors: Vec<Constructor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    SetLogic(String),
    /// `value` is kept as raw text.
    SetInfo {
        keyword: String,
        value: Option<String>,
    },
    DeclareSort {
        name: String,
        arity: usize,
    },
    DeclareConst {
        name: String,
        sort: Sort,
    },
    DeclareFun {
        name: String,
        args: Vec<Sort>,
        ret: Sort,
    },
    DefineFun {
        name: String,
        params: Vec<(String, Sort)>,
        ret: Sort,
        body: Term,
    },
    DeclareDatatypes(Vec<DatatypeDecl>),
    Assert(Term),
    CheckSat,
    Exit,
    /// Any other command, kept verbatim.
    Unsupported(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Fun {
        args: Vec<Sort>,
        ret: Sort,
    },
    Macro {
        params: Vec<(String, Sort)>,
        ret: Sort,
        body: Term,
    },
    Constructor {
        datatype: String,
        fields: Vec<Sort>,
    },
    Selector {
        datatype: String,
        ret: Sort,
    },
}

impl SymbolKind {
    pub fn arg_sorts(&self) -> Vec<Sort> {
        match self {
            SymbolKind::Fun { args, .. } => args.clone(),
            SymbolKind::Macro { params, .. } => params.iter().map(|(_, s)| s.clone()).collect(),
            SymbolKind::Constructor { fields, .. } => fields.clone(),
            SymbolKind::Selector { datatype, .. } => vec![Sort::Datatype(datatype.clone())],
        }
    }

    pub fn ret_sort(&self) -> Sort {
        match self {
            SymbolKind::Fun { ret, .. }
            | SymbolKind::Macro { ret, .. }
            | SymbolKind::Selector { ret, .. } => ret.clone(),
            SymbolKind::Constructor { datatype, .. } => Sort::Datatype(datatype.clone()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    pub functions: BTreeMap<String, SymbolKind>,
    /// Declared sort names; `true` for datatypes.
    pub sorts: BTreeMap<String, bool>,
}

impl SymbolTable {
    pub fn get(&self, name: &str) -> Option<&SymbolKind> {
        self.functions.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.functions.contains_key(name) || self.sorts.contains_key(name)
    }

    /// Registers the symbols introduced by `cmd`.
    pub fn declare(&mut self, cmd: &Command) -> Result<()> {
        match cmd {
            Command::DeclareSort { name, .. } => self.add_sort(name, false)?,
            Command::DeclareConst { name, sort } => self.add(
                name,
                SymbolKind::Fun {
                    args: vec![],
                    ret: sort.clone(),
                },
            )?,
            Command::DeclareFun { name, args, ret } => self.add(
                name,
                SymbolKind::Fun {
                    args: args.clone(),
                    ret: ret.clone(),
                },
            )?,
            Command::DefineFun {
                name,
                params,
                ret,
                body,
            } => self.add(
                name,
                SymbolKind::Macro {
                    params: params.clone(),
                    ret: ret.clone(),
                    body: body.clone(),
                },
            )?,
            Command::DeclareDatatypes(decls) => {
                for d in decls {
                    self.add_sort(&d.name, true)?;
                }
                for d in decls {
                    for c in &d.constructors {
                        self.add(
                            &c.name,
                            SymbolKind::Constructor {
                                datatype: d.name.clone(),
                                fields: c.fields.iter().map(|(_, s)| s.clone()).collect(),
                            },
                        )?;
                        for (field, sort) in &c.fields {
                            self.add(
                                field,
                                SymbolKind::Selector {
                                    datatype: d.name.clone(),
                                    ret: sort.clone(),
                                },
                            )?;
                        }
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn add(&mut self, name: &str, kind: SymbolKind) -> Result<()> {
        if self.functions.insert(name.to_string(), kind).is_some() {
            return Err(Error::Script(format!("symbol `{name}` declared twice")));
        }
        Ok(())
    }

    fn add_sort(&mut self, name: &str, datatype: bool) -> Result<()> {
        if self.sorts.insert(name.to_string(), datatype).is_some() {
            return Err(Error::Script(format!("sort `{name}` declared twice")));
        }
        Ok(())
    }
}

/// An ordered list of commands plus the symbols they declare.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Script {
    commands: Vec<Command>,
    symbols: SymbolTable,
}

impl Script {
    /// Builds a script, rejecting duplicate declarations and non-Boolean assertions.
    pub fn new(commands: Vec<Command>) -> Result<Script> {
        let mut symbols = SymbolTable::default();
        for cmd in &commands {
            symbols.declare(cmd)?;
            if let Command::Assert(t) = cmd {
                if !t.is_bool() {
                    return Err(Error::Script(format!(
                        "asserted term has sort {}, expected Bool",
                        t.sort
                    )));
                }
            }
        }
        Ok(Script { commands, symbols })
    }

    pub fn commands(&self) -> &[Command] {
        &self.commands
    }

    pub fn into_commands(self) -> Vec<Command> {
        self.commands
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn logic(&self) -> Option<&str> {
        self.commands.iter().find_map(|c| match c {
            Command::SetLogic(l) => Some(l.as_str()),
            _ => None,
        })
    }

    pub fn assertions(&self) -> impl Iterator<Item = &Term> {
        self.commands.iter().filter_map(|c| match c {
            Command::Assert(t) => Some(t),
            _ => None,
        })
    }

    /// Declared nullary functions, in declaration order.
    pub fn constants(&self) -> Vec<(String, Sort)> {
        self.commands
            .iter()
            .filter_map(|c| match c {
                Command::DeclareConst { name, sort } => Some((name.clone(), sort.clone())),
                Command::DeclareFun { name, args, ret } if args.is_empty() => {
                    Some((name.clone(), ret.clone()))
                }
                _ => None,
            })
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.commands.is_empty()
    }

    pub fn len(&self) -> usize {
        self.commands.len()
    }
}
