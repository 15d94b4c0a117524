use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::time::Instant;

use num_rational::BigRational;
use serde::Serialize;

use super::eval::{Assignment, EvalError, Evaluator, Interpretation};
use super::value::Value;
use crate::error::{Error, Result};
use crate::smtlib::{term_to_string, Command, Script, Sort};

pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Inclusive integer range per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub default: (i64, i64),
    pub per_variable: BTreeMap<String, (i64, i64)>,
}

impl Default for Bounds {
    fn default() -> Bounds {
        Bounds::uniform(-4, 4)
    }
}

impl Bounds {
    pub fn uniform(low: i64, high: i64) -> Bounds {
        Bounds {
            default: (low, high),
            per_variable: BTreeMap::new(),
        }
    }

    pub fn with(mut self, var: impl Into<String>, low: i64, high: i64) -> Bounds {
        self.per_variable.insert(var.into(), (low, high));
        self
    }

    pub fn range(&self, var: &str) -> (i64, i64) {
        self.per_variable.get(var).copied().unwrap_or(self.default)
    }

    fn validate(&self) -> Result<()> {
        let bad = std::iter::once(("<default>", &self.default))
            .chain(self.per_variable.iter().map(|(k, v)| (k.as_str(), v)))
            .find(|(_, (lo, hi))| lo > hi);
        match bad {
            Some((var, (lo, hi))) => Err(Error::Usage(format!("empty bound {lo}:{hi} for {var}"))),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub budget: u128,
    /// Worker threads; the outermost variable's range is split between them.
    pub workers: usize,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            budget: DEFAULT_BUDGET,
            workers: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SatResult {
    /// First model in lexicographic order, variables in declaration order.
    Sat(Vec<(String, Value)>),
    UnsatWithinBounds,
    /// No model, but some assignments could not be decided (division by zero).
    Unknown {
        skipped: u64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchReport {
    pub result: SatResult,
    pub skipped: u64,
    pub assignments_evaluated: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Domain {
    Ints(i64, i64),
    Bools,
}

impl Domain {
    fn len(&self) -> u128 {
        match self {
            Domain::Ints(lo, hi) => (*hi as i128 - *lo as i128 + 1) as u128,
            Domain::Bools => 2,
        }
    }

    fn value(&self, i: u128, sort: &Sort) -> Value {
        match self {
            Domain::Bools => Value::Bool(i == 1),
            Domain::Ints(lo, _) => {
                let n = (*lo as i128 + i as i128) as i64;
                if *sort == Sort::Real {
                    Value::Rational(BigRational::from_integer(n.into()))
                } else {
                    Value::int(n)
                }
            }
        }
    }
}

struct Space {
    vars: Vec<(String, Sort, Domain)>,
}

impl Space {
    fn new(script: &Script, bounds: &Bounds, budget: u128) -> Result<Space> {
        bounds.validate()?;
        let mut vars = Vec::new();
        for (name, sort) in script.constants() {
            let domain = match sort {
                Sort::Int | Sort::Real => {
                    let (lo, hi) = bounds.range(&name);
                    Domain::Ints(lo, hi)
                }
                Sort::Bool => Domain::Bools,
                other => {
                    return Err(Error::UnsupportedFeature(format!(
                        "bounded search over sort {other} (variable `{name}`)"
                    )))
                }
            };
            vars.push((name, sort, domain));
        }
        let size = vars
            .iter()
            .try_fold(1u128, |acc, (_, _, d)| acc.checked_mul(d.len()))
            .unwrap_or(u128::MAX);
        if size > budget {
            return Err(Error::BudgetExceeded { size, budget });
        }
        Ok(Space { vars })
    }

    /// Visits assignments whose outermost index lies in `outer`, in lexicographic order.
    fn for_each(
        &self,
        outer: std::ops::Range<u128>,
        mut f: impl FnMut(&Assignment) -> ControlFlow<()>,
    ) {
        let n = self.vars.len();
        let mut asg = Assignment::new();
        if n == 0 {
            if outer.contains(&0) {
                let _ = f(&asg);
            }
            return;
        }
        let mut idx = vec![0u128; n];
        idx[0] = outer.start;
        if outer.is_empty() {
            return;
        }
        for (i, (name, sort, dom)) in self.vars.iter().enumerate() {
            asg.insert(name.clone(), dom.value(idx[i], sort));
        }
        loop {
            if f(&asg).is_break() {
                return;
            }
            // odometer: last variable varies fastest
            let mut k = n;
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                idx[k] += 1;
                let limit = if k == 0 {
                    outer.end
                } else {
                    self.vars[k].2.len()
                };
                if idx[k] < limit {
                    let (name, sort, dom) = &self.vars[k];
                    asg.insert(name.clone(), dom.value(idx[k], sort));
                    break;
                }
                if k == 0 {
                    return;
                }
                idx[k] = 0;
                let (name, sort, dom) = &self.vars[k];
                asg.insert(name.clone(), dom.value(0, sort));
            }
        }
    }

    fn outer_len(&self) -> u128 {
        self.vars.first().map_or(1, |(_, _, d)| d.len())
    }

    fn ordered(&self, asg: &Assignment) -> Vec<(String, Value)> {
        self.vars
            .iter()
            .map(|(n, _, _)| (n.clone(), asg[n].clone()))
            .collect()
    }
}

enum Verdict {
    Model,
    NotModel,
    Skipped,
}

fn check_assertions(ev: &Evaluator, script: &Script, asg: &Assignment) -> Result<Verdict> {
    let mut skipped = false;
    for t in script.assertions() {
        match ev.eval_bool(t, asg) {
            Ok(true) => {}
            Ok(false) => return Ok(Verdict::NotModel),
            Err(EvalError::DivisionByZero) => skipped = true,
            Err(EvalError::Unsupported(m)) => return Err(Error::UnsupportedFeature(m)),
        }
    }
    Ok(if skipped {
        Verdict::Skipped
    } else {
        Verdict::Model
    })
}

struct Slab {
    model: Option<Assignment>,
    skipped: u64,
    evaluated: u64,
}

fn search_slab(
    space: &Space,
    script: &Script,
    interp: &Interpretation,
    outer: std::ops::Range<u128>,
) -> Result<Slab> {
    let ev = Evaluator::new(script, interp);
    let mut slab = Slab {
        model: None,
        skipped: 0,
        evaluated: 0,
    };
    let mut failure = None;
    space.for_each(outer, |asg| {
        slab.evaluated += 1;
        match check_assertions(&ev, script, asg) {
            Ok(Verdict::Model) => {
                slab.model = Some(asg.clone());
                ControlFlow::Break(())
            }
            Ok(Verdict::NotModel) => ControlFlow::Continue(()),
            Ok(Verdict::Skipped) => {
                slab.skipped += 1;
                ControlFlow::Continue(())
            }
            Err(e) => {
                failure = Some(e);
                ControlFlow::Break(())
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(slab),
    }
}

/// Exhaustive search of the bound box for a model of `script`.
pub fn brute_force_sat(
    script: &Script,
    bounds: &Bounds,
    interp: &Interpretation,
    cfg: &SearchConfig,
) -> Result<SearchReport> {
    let space = Space::new(script, bounds, cfg.budget)?;
    let outer = space.outer_len();
    let workers = (cfg.workers.max(1) as u128).min(outer.max(1));
    let slabs: Vec<Result<Slab>> = if workers <= 1 {
        vec![search_slab(&space, script, interp, 0..outer)]
    } else {
        let chunk = outer.div_ceil(workers);
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let range = (w * chunk).min(outer)..((w + 1) * chunk).min(outer);
                    let space = &space;
                    s.spawn(move || search_slab(space, script, interp, range))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("search worker panicked"))
                .collect()
        })
    };
    // the first slab holding a model has the lexicographically least one
    let mut skipped = 0;
    let mut evaluated = 0;
    for slab in slabs {
        let slab = slab?;
        skipped += slab.skipped;
        evaluated += slab.evaluated;
        if let Some(m) = slab.model {
            return Ok(SearchReport {
                result: SatResult::Sat(space.ordered(&m)),
                skipped,
                assignments_evaluated: evaluated,
            });
        }
    }
    Ok(SearchReport {
        result: if skipped > 0 {
            SatResult::Unknown { skipped }
        } else {
            SatResult::UnsatWithinBounds
        },
        skipped,
        assignments_evaluated: evaluated,
    })
}

/// JSON form of a search, as printed by `check`.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<serde_json::Map<String, serde_json::Value>>,
    pub skipped: u64,
    pub assignments_evaluated: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl CheckReport {
    pub fn from_search(report: &SearchReport, wall_time: Option<f64>) -> CheckReport {
        let (status, model) = match &report.result {
            SatResult::Sat(m) => (
                "sat",
                Some(
                    m.iter()
                        .map(|(n, v)| (n.clone(), value_to_json(v)))
                        .collect(),
                ),
            ),
            SatResult::UnsatWithinBounds => ("unsat-within-bounds", None),
            SatResult::Unknown { .. } => ("unknown", None),
        };
        CheckReport {
            status,
            model,
            skipped: report.skipped,
            assignments_evaluated: report.assignments_evaluated,
            wall_time,
        }
    }
}

fn value_to_json(v: &Value) -> serde_json::Value {
    match v {
        Value::Bool(b) => serde_json::Value::Bool(*b),
        other => match other.to_integer().and_then(|n| i64::try_from(n).ok()) {
            Some(n) => serde_json::Value::from(n),
            None => serde_json::Value::String(other.to_string()),
        },
    }
}

/// Timed wrapper around [`brute_force_sat`].
pub fn check(script: &Script, bounds: &Bounds, cfg: &SearchConfig) -> Result<(SearchReport, f64)> {
    let start = Instant::now();
    let r = brute_force_sat(script, bounds, &Interpretation::new(), cfg)?;
    Ok((r, start.elapsed().as_secs_f64()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub model: Vec<(String, Value)>,
    /// Index among the `assert` commands of the transformed script.
    pub assertion_index: usize,
    pub assertion: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LiftingReport {
    /// Models of the original found in the box.
    pub models: u64,
    /// Assignments of the original skipped for division by zero.
    pub skipped: u64,
    /// Lifted models whose transformed evaluation hit a division by zero.
    pub inconclusive: u64,
    pub violations: Vec<Violation>,
}

impl LiftingReport {
    pub fn is_sound(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that every model of `original` in the box, with Int values read as reals
/// where the transformed script uses Real, satisfies `transformed` under `lifting`.
pub fn check_model_lifting(
    original: &Script,
    transformed: &Script,
    lifting: &Interpretation,
    bounds: &Bounds,
    cfg: &SearchConfig,
) -> Result<LiftingReport> {
    let space = Space::new(original, bounds, cfg.budget)?;
    let plain = Interpretation::new();
    let ev_orig = Evaluator::new(original, &plain);
    let ev_tr = Evaluator::new(transformed, lifting);
    let targets = transformed.constants();
    for (name, _) in &targets {
        if !space.vars.iter().any(|(n, _, _)| n == name) {
            return Err(Error::Invariant(format!(
                "transformed script declares `{name}`, which the original does not"
            )));
        }
    }
    let asserts: Vec<_> = transformed
        .commands()
        .iter()
        .filter_map(|c| match c {
            Command::Assert(t) => Some(t),
            _ => None,
        })
        .collect();
    let mut report = LiftingReport::default();
    let mut failure = None;
    space.for_each(0..space.outer_len(), |asg| {
        match check_assertions(&ev_orig, original, asg) {
            Ok(Verdict::Model) => {}
            Ok(Verdict::NotModel) => return ControlFlow::Continue(()),
            Ok(Verdict::Skipped) => {
                report.skipped += 1;
                return ControlFlow::Continue(());
            }
            Err(e) => {
                failure = Some(e);
                return ControlFlow::Break(());
            }
        }
        report.models += 1;
        let lifted: Assignment = targets
            .iter()
            .map(|(name, sort)| {
                let v = &asg[name];
                let v = match (sort, v) {
                    (Sort::Real, Value::Int(n)) => {
                        Value::Rational(BigRational::from_integer(n.clone()))
                    }
                    _ => v.clone(),
                };
                (name.clone(), v)
            })
            .collect();
        let mut undecided = false;
        for (i, t) in asserts.iter().enumerate() {
            match ev_tr.eval_bool(t, &lifted) {
                Ok(true) => {}
                Ok(false) => report.violations.push(Violation {
                    model: space.ordered(asg),
                    assertion_index: i,
                    assertion: term_to_string(t),
                }),
                Err(EvalError::DivisionByZero) => undecided = true,
                Err(EvalError::Unsupported(m)) => {
                    failure = Some(Error::UnsupportedFeature(m));
                    return ControlFlow::Break(());
                }
            }
        }
        if undecided {
            report.inconclusive += 1;
        }
        ControlFlow::Continue(())
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(report),
    }
}
