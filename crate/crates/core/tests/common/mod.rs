#![allow(dead_code)]

pub mod checks;

use nia_overapprox::smtlib::{CoreOp, Head, Term, TermKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn lit(n: i64) -> String {
    if n < 0 {
        format!("(- {})", -n)
    } else {
        n.to_string()
    }
}

fn pick<'a, R: Rng>(r: &mut R, xs: &[&'a str]) -> &'a str {
    xs[r.random_range(0..xs.len())]
}

struct NiaGen<'a, R> {
    r: &'a mut R,
    vars: Vec<String>,
}

impl<R: Rng> NiaGen<'_, R> {
    fn leaf(&mut self) -> String {
        if self.r.random_bool(0.6) {
            self.vars[self.r.random_range(0..self.vars.len())].clone()
        } else {
            lit(self.r.random_range(-3..=3))
        }
    }

    fn int(&mut self, depth: u32) -> String {
        if depth == 0 || self.r.random_bool(0.3) {
            return self.leaf();
        }
        match self.r.random_range(0..6) {
            0 => format!("(+ {} {})", self.int(depth - 1), self.int(depth - 1)),
            1 => format!("(- {} {})", self.int(depth - 1), self.int(depth - 1)),
            2 | 3 => format!("(* {} {})", self.int(depth - 1), self.int(depth - 1)),
            op => {
                let op = if op == 4 { "div" } else { "mod" };
                let divisor = if self.r.random_bool(0.5) {
                    lit(self.r.random_range(-3..=3))
                } else {
                    self.int(depth - 1)
                };
                format!("({op} {} {divisor})", self.int(depth - 1))
            }
        }
    }

    fn atom(&mut self) -> String {
        let op = pick(self.r, &["<", "<=", ">", ">=", "=", "=", "distinct"]);
        format!("({op} {} {})", self.int(2), self.int(2))
    }

    fn formula(&mut self, depth: u32) -> String {
        if depth == 0 || self.r.random_bool(0.35) {
            return self.atom();
        }
        let d = depth - 1;
        match self.r.random_range(0..8) {
            0 => format!("(not {})", self.formula(d)),
            1 => format!("(and {} {})", self.formula(d), self.formula(d)),
            2 => format!("(or {} {})", self.formula(d), self.formula(d)),
            3 => format!("(=> {} {})", self.formula(d), self.formula(d)),
            4 => format!(
                "(ite {} {} {})",
                self.formula(d),
                self.formula(d),
                self.formula(d)
            ),
            5 => format!("(= {} {})", self.formula(d), self.formula(d)),
            6 => format!("(xor {} {})", self.formula(d), self.formula(d)),
            _ => self.atom(),
        }
    }
}

/// A random QF_NIA script whose variables are confined to `[-4, 4]` by its own
/// assertions.
pub fn random_nia_script<R: Rng>(r: &mut R) -> String {
    let n = r.random_range(2..=3);
    let vars: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut text = String::from("(set-logic QF_NIA)\n");
    for v in &vars {
        text += &format!("(declare-fun {v} () Int)\n");
    }
    for v in &vars {
        text += &format!("(assert (<= (- 4) {v}))\n(assert (<= {v} 4))\n");
    }
    let asserts = r.random_range(1..=2);
    let mut g = NiaGen { r, vars };
    for _ in 0..asserts {
        let f = if g.r.random_bool(0.25) {
            let bound = g.int(2);
            g.vars.push("l0".into());
            let body = g.formula(3);
            g.vars.pop();
            format!("(let ((l0 {bound})) {body})")
        } else {
            g.formula(3)
        };
        text += &format!("(assert {f})\n");
    }
    text + "(check-sat)\n"
}

/// Declarations for [`random_bool_formula`].
pub const BOOL_DECLS: &str = "(declare-const p0 Bool)(declare-const p1 Bool)\
    (declare-const p2 Bool)(declare-const p3 Bool)(declare-const x Int)(declare-const y Int)";

/// A random formula over `p0..p3` and atoms on `x`, `y`, using every connective
/// with a polarity rule.
pub fn random_bool_formula<R: Rng>(r: &mut R, depth: u32) -> String {
    if depth == 0 || r.random_bool(0.2) {
        return match r.random_range(0..6) {
            0 => "(< x y)".to_string(),
            1 => "(>= (+ x 1) y)".to_string(),
            k => format!("p{}", k - 2),
        };
    }
    let mut f = || random_bool_formula(r, depth - 1);
    let (a, b, c) = (f(), f(), f());
    match r.random_range(0..10) {
        0 => format!("(not {a})"),
        1 => format!("(and {a} {b})"),
        2 => format!("(or {a} {b} {c})"),
        3 => format!("(=> {a} {b})"),
        4 => format!("(=> {a} {b} {c})"),
        5 => format!("(ite {a} {b} {c})"),
        6 => format!("(= {a} {b})"),
        7 => format!("(xor {a} {b})"),
        8 => format!("(distinct {a} {b})"),
        _ => format!("(not (and {a} {b}))"),
    }
}

/// Children in position order (1-based positions index this list from 1).
pub fn kids(t: &Term) -> Vec<&Term> {
    match &t.kind {
        TermKind::Apply(_, args) => args.iter().collect(),
        TermKind::Ite(c, a, b) => vec![c, a, b],
        TermKind::Let(bs, body) => bs.iter().map(|(_, t)| t).chain([&**body]).collect(),
        _ => vec![],
    }
}

/// Polarity as the product of per-edge signs along the path from the root.
pub fn reference_polarity(root: &Term, path: &[usize]) -> i8 {
    let mut sign = 1i8;
    let mut t = root;
    for &i in path {
        let factor = match &t.kind {
            TermKind::Apply(Head::Core(CoreOp::And | CoreOp::Or), _) => 1,
            TermKind::Apply(Head::Core(CoreOp::Not), _) => -1,
            TermKind::Apply(Head::Core(CoreOp::Implies), args) => {
                if i == args.len() {
                    1
                } else {
                    -1
                }
            }
            TermKind::Ite(..) => i8::from(i != 1),
            TermKind::Let(bs, _) => i8::from(i == bs.len() + 1),
            _ => 0,
        };
        sign *= factor;
        t = kids(t)[i - 1];
    }
    sign
}

/// Every position of `t` as a 1-based path, in pre-order.
pub fn all_paths(t: &Term) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for (i, c) in kids(t).into_iter().enumerate() {
        for mut p in all_paths(c) {
            p.insert(0, i + 1);
            out.push(p);
        }
    }
    out
}

/// `t` with the subterm at `path` replaced by `new`.
pub fn replace_at(t: &Term, path: &[usize], new: Term) -> Term {
    let Some((&i, rest)) = path.split_first() else {
        return new;
    };
    let kind = match &t.kind {
        TermKind::Apply(h, args) => {
            let mut args = args.clone();
            args[i - 1] = replace_at(&args[i - 1], rest, new);
            TermKind::Apply(h.clone(), args)
        }
        TermKind::Ite(c, a, b) => {
            let mut v = [(**c).clone(), (**a).clone(), (**b).clone()];
            v[i - 1] = replace_at(&v[i - 1], rest, new);
            let [c, a, b] = v;
            TermKind::Ite(Box::new(c), Box::new(a), Box::new(b))
        }
        other => panic!("no child {i} in {other:?}"),
    };
    Term::new(kind, t.sort.clone())
}
