use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use super::value::{euclid_div, euclid_mod, Value};
use crate::smtlib::{CoreOp, Head, Script, SymbolKind, SymbolTable, Term, TermKind};

/// Fixed meanings for fresh function symbols introduced by the transformations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// Integer multiplication.
    Mul,
    /// Integer `div`.
    Div,
    /// Integer `mod`.
    Mod,
    /// `n/m - (n div m)` for integers `n`, `m`.
    Frac,
}

#[derive(Clone, Debug, Default)]
pub struct Interpretation {
    functions: BTreeMap<String, Builtin>,
}

impl Interpretation {
    pub fn new() -> Interpretation {
        Interpretation::default()
    }

    pub fn with(mut self, name: impl Into<String>, f: Builtin) -> Interpretation {
        self.functions.insert(name.into(), f);
        self
    }

    pub fn insert(&mut self, name: impl Into<String>, f: Builtin) {
        self.functions.insert(name.into(), f);
    }

    pub fn get(&self, name: &str) -> Option<Builtin> {
        self.functions.get(name).copied()
    }
}

pub type Assignment = BTreeMap<String, Value>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot evaluate: {0}")]
    Unsupported(String),
}

type EvalResult = Result<Value, EvalError>;

/// Evaluates terms of one script under fixed interpretations of fresh symbols.
pub struct Evaluator<'a> {
    symbols: &'a SymbolTable,
    interp: &'a Interpretation,
}

impl<'a> Evaluator<'a> {
    pub fn new(script: &'a Script, interp: &'a Interpretation) -> Evaluator<'a> {
        Evaluator {
            symbols: script.symbols(),
            interp,
        }
    }

    pub fn eval(&self, term: &Term, assignment: &Assignment) -> EvalResult {
        self.eval_in(term, assignment, &BTreeMap::new())
    }

    pub fn eval_bool(&self, term: &Term, assignment: &Assignment) -> Result<bool, EvalError> {
        boolean(self.eval(term, assignment)?)
    }

    fn eval_in(&self, term: &Term, asg: &Assignment, env: &BTreeMap<String, Value>) -> EvalResult {
        match &term.kind {
            TermKind::Numeral(n) => Ok(Value::Int(n.clone())),
            TermKind::Decimal(r) => Ok(Value::Rational(r.clone())),
            TermKind::Bool(b) => Ok(Value::Bool(*b)),
            TermKind::Symbol(s) => {
                if let Some(v) = env.get(s).or_else(|| asg.get(s)) {
                    return Ok(v.clone());
                }
                match self.symbols.get(s) {
                    Some(SymbolKind::Macro { body, .. }) => {
                        self.eval_in(body, asg, &BTreeMap::new())
                    }
                    _ => Err(EvalError::Unsupported(format!("no value for `{s}`"))),
                }
            }
            TermKind::Ite(c, t, e) => {
                if boolean(self.eval_in(c, asg, env)?)? {
                    self.eval_in(t, asg, env)
                } else {
                    self.eval_in(e, asg, env)
                }
            }
            TermKind::Let(bindings, body) => {
                let mut inner = env.clone();
                for (n, t) in bindings {
                    inner.insert(n.clone(), self.eval_in(t, asg, env)?);
                }
                self.eval_in(body, asg, &inner)
            }
            TermKind::Apply(Head::Core(op), args) => self.core(*op, args, asg, env),
            TermKind::Apply(Head::Fun(name), args) => self.function(name, args, asg, env),
            TermKind::Apply(Head::Tester(c), _) => {
                Err(EvalError::Unsupported(format!("datatype tester for `{c}`")))
            }
        }
    }

    fn function(
        &self,
        name: &str,
        args: &[Term],
        asg: &Assignment,
        env: &BTreeMap<String, Value>,
    ) -> EvalResult {
        let vals = args
            .iter()
            .map(|a| self.eval_in(a, asg, env))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(b) = self.interp.get(name) {
            let [x, y] = vals.as_slice() else {
                return Err(EvalError::Unsupported(format!(
                    "`{name}` expects 2 arguments"
                )));
            };
            let (x, y) = (integer(x, name)?, integer(y, name)?);
            return Ok(match b {
                Builtin::Mul => Value::Int(x * y),
                Builtin::Div => Value::Int(euclid_div(&x, &y).ok_or(EvalError::DivisionByZero)?),
                Builtin::Mod => Value::Int(euclid_mod(&x, &y).ok_or(EvalError::DivisionByZero)?),
                Builtin::Frac => {
                    let q = euclid_div(&x, &y).ok_or(EvalError::DivisionByZero)?;
                    Value::Rational(BigRational::new(x, y) - BigRational::from_integer(q))
                }
            });
        }
        match self.symbols.get(name) {
            Some(SymbolKind::Macro { params, body, .. }) => {
                let frame = params
                    .iter()
                    .map(|(n, _)| n.clone())
                    .zip(vals)
                    .collect::<BTreeMap<_, _>>();
                self.eval_in(body, asg, &frame)
            }
            _ => Err(EvalError::Unsupported(format!(
                "uninterpreted function `{name}`"
            ))),
        }
    }

    fn core(
        &self,
        op: CoreOp,
        args: &[Term],
        asg: &Assignment,
        env: &BTreeMap<String, Value>,
    ) -> EvalResult {
        let ev = |t: &Term| self.eval_in(t, asg, env);
        match op {
            CoreOp::And => junction(args.iter().map(ev), false),
            CoreOp::Or => junction(args.iter().map(ev), true),
            CoreOp::Implies => {
                // (=> a1 .. an) holds iff some premise is false or the conclusion holds
                let n = args.len();
                junction(
                    args.iter().enumerate().map(|(i, a)| {
                        let v = ev(a)?;
                        if i + 1 < n {
                            Ok(Value::Bool(!boolean(v)?))
                        } else {
                            Ok(v)
                        }
                    }),
                    true,
                )
            }
            CoreOp::Not => Ok(Value::Bool(!boolean(ev(&args[0])?)?)),
            _ => {
                let vals = args.iter().map(ev).collect::<Result<Vec<_>, _>>()?;
                apply_core(op, &vals)
            }
        }
    }
}

/// Conjunction (`short = false`) or disjunction (`short = true`) that is decided by
/// any argument equal to `short`, even when other arguments fail to evaluate.
fn junction(vals: impl Iterator<Item = EvalResult>, short: bool) -> EvalResult {
    let mut pending = None;
    for v in vals {
        match v.and_then(boolean) {
            Ok(b) if b == short => return Ok(Value::Bool(short)),
            Ok(_) => {}
            Err(e) => {
                pending.get_or_insert(e);
            }
        }
    }
    match pending {
        Some(e) => Err(e),
        None => Ok(Value::Bool(!short)),
    }
}

fn boolean(v: Value) -> Result<bool, EvalError> {
    v.as_bool()
        .ok_or_else(|| EvalError::Unsupported(format!("expected a Boolean, got {v}")))
}

fn integer(v: &Value, what: &str) -> Result<BigInt, EvalError> {
    v.to_integer()
        .ok_or_else(|| EvalError::Unsupported(format!("`{what}` applied to non-integer {v}")))
}

fn rational(v: &Value) -> Result<BigRational, EvalError> {
    v.to_rational()
        .ok_or_else(|| EvalError::Unsupported(format!("expected a number, got {v}")))
}

/// Adds, subtracts or multiplies, staying in the integers when both sides are `Int`.
fn arith(a: &Value, b: &Value, op: CoreOp) -> EvalResult {
    if let (Value::Int(x), Value::Int(y)) = (a, b) {
        return Ok(Value::Int(match op {
            CoreOp::Add => x + y,
            CoreOp::Sub => x - y,
            _ => x * y,
        }));
    }
    let (x, y) = (rational(a)?, rational(b)?);
    Ok(Value::Rational(match op {
        CoreOp::Add => x + y,
        CoreOp::Sub => x - y,
        _ => x * y,
    }))
}

fn apply_core(op: CoreOp, vals: &[Value]) -> EvalResult {
    let chain = |pred: fn(&Value, &Value) -> bool| -> EvalResult {
        for w in vals.windows(2) {
            if !w[0].is_numeric() || !w[1].is_numeric() {
                return Err(EvalError::Unsupported("comparison of non-numbers".into()));
            }
        }
        Ok(Value::Bool(vals.windows(2).all(|w| pred(&w[0], &w[1]))))
    };
    match op {
        CoreOp::Xor => {
            let mut acc = false;
            for v in vals {
                acc ^= boolean(v.clone())?;
            }
            Ok(Value::Bool(acc))
        }
        CoreOp::Eq => Ok(Value::Bool(vals.windows(2).all(|w| w[0] == w[1]))),
        CoreOp::Distinct => {
            for (i, a) in vals.iter().enumerate() {
                if vals[i + 1..].iter().any(|b| a == b) {
                    return Ok(Value::Bool(false));
                }
            }
            Ok(Value::Bool(true))
        }
        CoreOp::Add | CoreOp::Mul => {
            let mut acc = vals[0].clone();
            for v in &vals[1..] {
                acc = arith(&acc, v, op)?;
            }
            Ok(acc)
        }
        CoreOp::Sub => {
            if vals.len() == 1 {
                return arith(&Value::int(0), &vals[0], CoreOp::Sub);
            }
            let mut acc = vals[0].clone();
            for v in &vals[1..] {
                acc = arith(&acc, v, CoreOp::Sub)?;
            }
            Ok(acc)
        }
        CoreOp::IntDiv => {
            let mut acc = integer(&vals[0], "div")?;
            for v in &vals[1..] {
                acc = euclid_div(&acc, &integer(v, "div")?).ok_or(EvalError::DivisionByZero)?;
            }
            Ok(Value::Int(acc))
        }
        CoreOp::Mod => {
            let (n, m) = (integer(&vals[0], "mod")?, integer(&vals[1], "mod")?);
            Ok(Value::Int(
                euclid_mod(&n, &m).ok_or(EvalError::DivisionByZero)?,
            ))
        }
        CoreOp::RealDiv => {
            let mut acc = rational(&vals[0])?;
            for v in &vals[1..] {
                let d = rational(v)?;
                if d.is_zero() {
                    return Err(EvalError::DivisionByZero);
                }
                acc /= d;
            }
            Ok(Value::Rational(acc))
        }
        CoreOp::Abs => match &vals[0] {
            Value::Int(n) => Ok(Value::Int(n.abs())),
            v => Ok(Value::Rational(rational(v)?.abs())),
        },
        CoreOp::ToReal => Ok(Value::Rational(rational(&vals[0])?)),
        CoreOp::ToInt => Ok(Value::Int(rational(&vals[0])?.floor().to_integer())),
        CoreOp::IsInt => Ok(Value::Bool(rational(&vals[0])?.is_integer())),
        CoreOp::Le => chain(|a, b| a <= b),
        CoreOp::Lt => chain(|a, b| a < b),
        CoreOp::Ge => chain(|a, b| a >= b),
        CoreOp::Gt => chain(|a, b| a > b),
        CoreOp::And | CoreOp::Or | CoreOp::Not | CoreOp::Implies => unreachable!(),
    }
}
