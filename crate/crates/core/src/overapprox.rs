//! Result type shared by the LIA and NRA transformations.

use std::collections::BTreeMap;
use std::fmt;

use crate::oracle::{Builtin, Interpretation};
use crate::smtlib::{print_script, Command, Script};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Lia,
    Nra,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Lia => "lia",
            Mode::Nra => "nra",
        })
    }
}

/// A fresh symbol introduced by a transformation: its reserved base name, the name
/// actually used, and its intended integer meaning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreshSymbol {
    pub base: &'static str,
    pub name: String,
    pub meaning: Option<Builtin>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overapproximation {
    pub mode: Mode,
    pub script: Script,
    pub symbols: Vec<FreshSymbol>,
    /// `key=value` pairs describing the configuration, in a fixed order.
    pub config: Vec<(String, String)>,
    /// Number of emitted instances per axiom category.
    pub counts: BTreeMap<String, usize>,
}

impl Overapproximation {
    /// Interpretation of the fresh symbols under which integer models lift.
    pub fn lifting(&self) -> Interpretation {
        let mut interp = Interpretation::new();
        for s in &self.symbols {
            if let Some(b) = s.meaning {
                interp.insert(s.name.clone(), b);
            }
        }
        interp
    }

    pub fn name_of(&self, base: &str) -> Option<&str> {
        self.symbols
            .iter()
            .find(|s| s.base == base)
            .map(|s| s.name.as_str())
    }

    pub fn header(&self) -> String {
        let mut out = format!(
            "; generated by nia-overapprox {}\n; mode={}\n",
            env!("CARGO_PKG_VERSION"),
            self.mode
        );
        let cfg: Vec<String> = self
            .config
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        out.push_str(&format!("; config: {}\n", cfg.join(" ")));
        let counts: Vec<String> = self
            .counts
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        out.push_str(&format!("; instances: {}\n", counts.join(" ")));
        for s in &self.symbols {
            if s.name != s.base {
                out.push_str(&format!("; renamed: {} -> {}\n", s.base, s.name));
            }
        }
        out
    }

    /// Comment header followed by the script text.
    pub fn render(&self) -> String {
        self.header() + &print_script(&self.script)
    }
}

/// Inserts `decls` before the first command that mentions one of `names`, and
/// `axioms` after the last assertion.
pub(crate) fn assemble(
    commands: Vec<Command>,
    decls: Vec<Command>,
    names: &[String],
    axioms: Vec<Command>,
) -> Vec<Command> {
    let mentions = |c: &Command| match c {
        Command::Assert(t) | Command::DefineFun { body: t, .. } => {
            names.iter().any(|n| t.mentions(n))
        }
        _ => false,
    };
    let first_use = commands.iter().position(mentions);
    let last_assert = commands
        .iter()
        .rposition(|c| matches!(c, Command::Assert(_)));
    let decl_at = first_use
        .or(if axioms.is_empty() {
            None
        } else {
            last_assert.map(|i| i + 1)
        })
        .unwrap_or_else(|| {
            commands
                .iter()
                .position(|c| matches!(c, Command::CheckSat | Command::Exit))
                .unwrap_or(commands.len())
        });
    let axiom_at = last_assert.map_or(decl_at, |i| i + 1).max(decl_at);
    let mut out = Vec::with_capacity(commands.len() + decls.len() + axioms.len());
    let mut decls = Some(decls);
    let mut axioms = Some(axioms);
    for (i, c) in commands.into_iter().enumerate() {
        if i == decl_at {
            out.extend(decls.take().unwrap());
        }
        if i == axiom_at {
            out.extend(axioms.take().unwrap());
        }
        out.push(c);
    }
    if let Some(d) = decls {
        out.extend(d);
    }
    if let Some(a) = axioms {
        out.extend(a);
    }
    out
}
