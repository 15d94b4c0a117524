//! Positions in formulas and the polarity of subformula occurrences.
//!
//! The root has positive polarity. Conjunction and disjunction pass the polarity
//! on, negation flips it, an implication flips it for every argument but the last
//! and passes it to the last, and both sides of an equivalence get polarity 0.
//!
//! Beyond those connectives: `xor`, `distinct` and arguments of any
//! non-connective application get 0; a Boolean `ite` gives its condition 0 and
//! passes the parent polarity to both branches; `let` bindings get 0 and the body
//! inherits.

use std::collections::BTreeMap;
use std::fmt;

use super::ast::{CoreOp, Head, Term, TermKind};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Negative,
    Zero,
    Positive,
}

impl Polarity {
    pub fn negate(self) -> Polarity {
        match self {
            Polarity::Negative => Polarity::Positive,
            Polarity::Zero => Polarity::Zero,
            Polarity::Positive => Polarity::Negative,
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Polarity::Negative => -1,
            Polarity::Zero => 0,
            Polarity::Positive => 1,
        }
    }
}

/// A path of 1-based argument indices; the empty path is the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn child(&self, index: usize) -> Position {
        let mut path = self.0.clone();
        path.push(index);
        Position(path)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

impl std::str::FromStr for Position {
    type Err = Error;

    fn from_str(s: &str) -> Result<Position> {
        if s.is_empty() || s == "ε" {
            return Ok(Position::root());
        }
        s.split('.')
            .map(|p| match p.parse::<usize>() {
                Ok(i) if i > 0 => Ok(i),
                _ => Err(Error::InvalidPosition(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(Position)
    }
}

/// Polarity of argument `index` (0-based) of `term`, given the polarity of `term`.
pub fn child_polarity(term: &Term, parent: Polarity, index: usize) -> Polarity {
    match &term.kind {
        TermKind::Apply(Head::Core(op), args) => match op {
            CoreOp::And | CoreOp::Or => parent,
            CoreOp::Not => parent.negate(),
            CoreOp::Implies => {
                if index + 1 == args.len() {
                    parent
                } else {
                    parent.negate()
                }
            }
            _ => Polarity::Zero,
        },
        TermKind::Ite(..) => {
            if index == 0 {
                Polarity::Zero
            } else {
                parent
            }
        }
        TermKind::Let(bindings, _) => {
            if index < bindings.len() {
                Polarity::Zero
            } else {
                parent
            }
        }
        _ => Polarity::Zero,
    }
}

/// Subterm at `position`.
pub fn subterm_at<'a>(formula: &'a Term, position: &Position) -> Result<&'a Term> {
    let mut current = formula;
    for &i in &position.0 {
        let children = current.children();
        current = children
            .get(i.wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::InvalidPosition(position.to_string()))?;
    }
    Ok(current)
}

pub fn polarity_at(formula: &Term, position: &Position) -> Result<Polarity> {
    let mut current = formula;
    let mut polarity = Polarity::Positive;
    for &i in &position.0 {
        let children = current.children();
        let child = children
            .get(i.wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::InvalidPosition(position.to_string()))?;
        polarity = child_polarity(current, polarity, i - 1);
        current = child;
    }
    Ok(polarity)
}

/// Polarity of every position of `formula`, computed in one traversal.
pub fn polarity_map(formula: &Term) -> BTreeMap<Position, Polarity> {
    let mut out = BTreeMap::new();
    let mut stack = vec![(formula, Position::root(), Polarity::Positive)];
    while let Some((term, pos, pol)) = stack.pop() {
        for (i, child) in term.children().into_iter().enumerate() {
            stack.push((child, pos.child(i + 1), child_polarity(term, pol, i)));
        }
        out.insert(pos, pol);
    }
    out
}
