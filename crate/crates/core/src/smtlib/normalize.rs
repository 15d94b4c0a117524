//! Normalization passes shared by both overapproximations.

use std::collections::{BTreeSet, HashMap};

use super::ast::{Command, Head, Script, Term, TermKind};
use crate::error::{Error, Result};

pub const DEFAULT_LET_GROWTH_FACTOR: usize = 10;

/// Substitutes every `let` binding into its body, everywhere in the script.
///
/// Fails when the expanded script has more than `growth_factor` times the term
/// nodes of the input.
pub fn expand_lets(script: &Script, growth_factor: usize) -> Result<Script> {
    let before: usize = script
        .commands()
        .iter()
        .map(|c| match c {
            Command::Assert(t) | Command::DefineFun { body: t, .. } => t.size(),
            _ => 0,
        })
        .sum();
    let mut budget = Budget {
        used: 0,
        limit: before.saturating_mul(growth_factor.max(1)),
        before,
    };
    let commands = script
        .commands()
        .iter()
        .map(|c| {
            Ok(match c {
                Command::Assert(t) => Command::Assert(expand(t, &HashMap::new(), &mut budget)?),
                Command::DefineFun {
                    name,
                    params,
                    ret,
                    body,
                } => Command::DefineFun {
                    name: name.clone(),
                    params: params.clone(),
                    ret: ret.clone(),
                    body: expand(body, &HashMap::new(), &mut budget)?,
                },
                other => other.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Script::new(commands)
}

struct Budget {
    used: usize,
    limit: usize,
    before: usize,
}

impl Budget {
    fn spend(&mut self, n: usize) -> Result<()> {
        self.used += n;
        if self.used > self.limit {
            return Err(Error::LetExpansionTooLarge {
                before: self.before,
                limit: self.limit,
            });
        }
        Ok(())
    }
}

fn expand(term: &Term, env: &HashMap<String, (Term, usize)>, budget: &mut Budget) -> Result<Term> {
    match &term.kind {
        TermKind::Symbol(s) => match env.get(s) {
            Some((value, size)) => {
                budget.spend(*size)?;
                Ok(value.clone())
            }
            None => {
                budget.spend(1)?;
                Ok(term.clone())
            }
        },
        TermKind::Let(bindings, body) => {
            let mut inner = env.clone();
            for (name, value) in bindings {
                let v = expand(value, env, budget)?;
                let size = v.size();
                inner.insert(name.clone(), (v, size));
            }
            expand(body, &inner, budget)
        }
        TermKind::Apply(head, args) => {
            budget.spend(1)?;
            let args = args
                .iter()
                .map(|a| expand(a, env, budget))
                .collect::<Result<Vec<_>>>()?;
            Ok(Term::new(
                TermKind::Apply(head.clone(), args),
                term.sort.clone(),
            ))
        }
        TermKind::Ite(c, t, e) => {
            budget.spend(1)?;
            Ok(Term::ite(
                expand(c, env, budget)?,
                expand(t, env, budget)?,
                expand(e, env, budget)?,
            ))
        }
        _ => {
            budget.spend(1)?;
            Ok(term.clone())
        }
    }
}

/// Every symbol or function name used anywhere in the script.
pub fn used_names(script: &Script) -> BTreeSet<String> {
    let mut names: BTreeSet<String> = script.symbols().functions.keys().cloned().collect();
    names.extend(script.symbols().sorts.keys().cloned());
    for cmd in script.commands() {
        let mut note = |t: &Term| match &t.kind {
            TermKind::Symbol(s) | TermKind::Apply(Head::Fun(s), _) => {
                names.insert(s.clone());
            }
            TermKind::Let(bindings, _) => {
                names.extend(bindings.iter().map(|(n, _)| n.clone()));
            }
            _ => {}
        };
        match cmd {
            Command::Assert(t) => t.visit(&mut note),
            Command::DefineFun { params, body, .. } => {
                body.visit(&mut note);
                names.extend(params.iter().map(|(n, _)| n.clone()));
            }
            _ => {}
        }
    }
    names
}

/// Picks `base`, or `base_1`, `base_2`, ... if taken, and reserves the result.
pub fn fresh_name(base: &str, taken: &mut BTreeSet<String>) -> String {
    let mut candidate = base.to_string();
    let mut i = 1;
    while taken.contains(&candidate) {
        candidate = format!("{base}_{i}");
        i += 1;
    }
    taken.insert(candidate.clone());
    candidate
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smtlib::parser::parse_script;
    use crate::smtlib::printer::print_script;

    #[test]
    fn expands_nested_and_parallel_lets() {
        let s = parse_script(
            "(declare-const x Int)(declare-const y Int)\
             (assert (let ((x y) (y x)) (let ((z (+ x y))) (> z x))))",
        )
        .unwrap();
        let e = expand_lets(&s, 10).unwrap();
        assert_eq!(
            print_script(&e),
            "(declare-const x Int)\n(declare-const y Int)\n(assert (> (+ y x) y))\n"
        );
    }

    #[test]
    fn growth_guard_trips() {
        // each level doubles the expanded size
        let mut body = "x".to_string();
        let mut text = String::from("(declare-const x Int)(assert (> ");
        for i in 0..12 {
            text.push_str(&format!("(let ((v{i} (+ {body} {body}))) "));
            body = format!("v{i}");
        }
        text.push_str(&body);
        text.push_str(&")".repeat(12));
        text.push_str(" 0))");
        let s = parse_script(&text).unwrap();
        assert!(matches!(
            expand_lets(&s, 10),
            Err(Error::LetExpansionTooLarge { .. })
        ));
        assert!(expand_lets(&s, 1000).is_ok());
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let mut taken: BTreeSet<String> = ["umul".to_string(), "umul_1".to_string()].into();
        assert_eq!(fresh_name("umul", &mut taken), "umul_2");
        assert_eq!(fresh_name("udiv", &mut taken), "udiv");
        assert_eq!(fresh_name("udiv", &mut taken), "udiv_1");
    }
}
