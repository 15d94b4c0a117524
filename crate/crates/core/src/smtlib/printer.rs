//! SMT-LIB2 text output: one command per line, LF line endings.

use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ast::{Command, Script, Term, TermKind};

pub fn print_script(script: &Script) -> String {
    let mut out = String::new();
    for cmd in script.commands() {
        print_command(cmd, &mut out);
        out.push('\n');
    }
    out
}

pub fn command_to_string(cmd: &Command) -> String {
    let mut out = String::new();
    print_command(cmd, &mut out);
    out
}

pub fn term_to_string(term: &Term) -> String {
    let mut out = String::new();
    print_term(term, &mut out);
    out
}

fn print_command(cmd: &Command, out: &mut String) {
    match cmd {
        Command::SetLogic(l) => {
            let _ = write!(out, "(set-logic {l})");
        }
        Command::SetInfo { keyword, value } => match value {
            Some(v) => {
                let _ = write!(out, "(set-info {keyword} {v})");
            }
            None => {
                let _ = write!(out, "(set-info {keyword})");
            }
        },
        Command::DeclareSort { name, arity } => {
            let _ = write!(out, "(declare-sort {name} {arity})");
        }
        Command::DeclareConst { name, sort } => {
            let _ = write!(out, "(declare-const {name} {sort})");
        }
        Command::DeclareFun { name, args, ret } => {
            let args: Vec<_> = args.iter().map(|s| s.name()).collect();
            let _ = write!(out, "(declare-fun {name} ({}) {ret})", args.join(" "));
        }
        Command::DefineFun {
            name,
            params,
            ret,
            body,
        } => {
            let params: Vec<_> = params.iter().map(|(n, s)| format!("({n} {s})")).collect();
            let _ = write!(out, "(define-fun {name} ({}) {ret} ", params.join(" "));
            print_term(body, out);
            out.push(')');
        }
        Command::DeclareDatatypes(decls) => {
            out.push_str("(declare-datatypes (");
            for (i, d) in decls.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "({} 0)", d.name);
            }
            out.push_str(") (");
            for (i, d) in decls.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push('(');
                for (j, c) in d.constructors.iter().enumerate() {
                    if j > 0 {
                        out.push(' ');
                    }
                    out.push('(');
                    out.push_str(&c.name);
                    for (f, s) in &c.fields {
                        let _ = write!(out, " ({f} {s})");
                    }
                    out.push(')');
                }
                out.push(')');
            }
            out.push_str("))");
        }
        Command::Assert(t) => {
            out.push_str("(assert ");
            print_term(t, out);
            out.push(')');
        }
        Command::CheckSat => out.push_str("(check-sat)"),
        Command::Exit => out.push_str("(exit)"),
        Command::Unsupported(raw) => out.push_str(raw),
    }
}

fn print_term(term: &Term, out: &mut String) {
    match &term.kind {
        TermKind::Numeral(n) => print_numeral(n, out),
        TermKind::Decimal(r) => print_decimal(r, out),
        TermKind::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        TermKind::Symbol(s) => out.push_str(s),
        TermKind::Apply(head, args) => {
            let _ = write!(out, "({head}");
            for a in args {
                out.push(' ');
                print_term(a, out);
            }
            out.push(')');
        }
        TermKind::Ite(c, t, e) => {
            out.push_str("(ite ");
            print_term(c, out);
            out.push(' ');
            print_term(t, out);
            out.push(' ');
            print_term(e, out);
            out.push(')');
        }
        TermKind::Let(bindings, body) => {
            out.push_str("(let (");
            for (i, (n, t)) in bindings.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "({n} ");
                print_term(t, out);
                out.push(')');
            }
            out.push_str(") ");
            print_term(body, out);
            out.push(')');
        }
    }
}

fn print_numeral(n: &BigInt, out: &mut String) {
    if n.is_negative() {
        let _ = write!(out, "(- {})", n.abs());
    } else {
        let _ = write!(out, "{n}");
    }
}

/// Reals print as `n.0`, as a finite decimal when one exists, otherwise as a quotient.
fn print_decimal(r: &BigRational, out: &mut String) {
    if r.is_negative() {
        out.push_str("(- ");
        print_decimal(&-r, out);
        out.push(')');
        return;
    }
    if r.is_integer() {
        let _ = write!(out, "{}.0", r.to_integer());
        return;
    }
    if let Some(s) = finite_decimal(r) {
        out.push_str(&s);
    } else {
        let _ = write!(out, "(/ {}.0 {}.0)", r.numer(), r.denom());
    }
}

fn finite_decimal(r: &BigRational) -> Option<String> {
    let mut d = r.denom().clone();
    let two = BigInt::from(2u8);
    let five = BigInt::from(5u8);
    let (mut twos, mut fives) = (0usize, 0usize);
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return None;
    }
    let digits = twos.max(fives);
    let scale = num_traits::pow(BigInt::from(10u8), digits);
    let scaled = (r * BigRational::from_integer(scale)).to_integer();
    let s = scaled.to_string();
    let s = format!("{s:0>width$}", width = digits + 1);
    let (int, frac) = s.split_at(s.len() - digits);
    Some(format!("{int}.{frac}"))
}
