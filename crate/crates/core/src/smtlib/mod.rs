//! Parsing, printing and traversal of quantifier-free SMT-LIB2 scripts.

mod ast;
mod logic;
mod normalize;
mod parser;
mod polarity;
mod printer;
mod sexpr;

pub use ast::{
    Command, Constructor, CoreOp, DatatypeDecl, Head, Script, Sort, SymbolKind, SymbolTable, Term,
    TermKind,
};
pub use logic::{is_nia_logic, update_logic, TargetTheory};
pub use normalize::{expand_lets, fresh_name, used_names, DEFAULT_LET_GROWTH_FACTOR};
pub use parser::{parse_script, parse_term};
pub use polarity::{child_polarity, polarity_at, polarity_map, subterm_at, Polarity, Position};
pub use printer::{command_to_string, print_script, term_to_string};
pub use sexpr::{read_all, Atom, SExpr, SExprKind};
