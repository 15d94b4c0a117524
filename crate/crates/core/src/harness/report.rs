use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::runner::{Encoding, SolverOutcome, Status, DEFAULT_TIMEOUT};
use crate::error::{Error, Result};

/// All recorded outcomes, one per (benchmark, encoding, solver), in that order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CampaignReport {
    outcomes: Vec<SolverOutcome>,
}

impl CampaignReport {
    /// Sorts the outcomes; a later record for the same key replaces an earlier one.
    pub fn from_outcomes(outcomes: impl IntoIterator<Item = SolverOutcome>) -> CampaignReport {
        let mut map = BTreeMap::new();
        for o in outcomes {
            map.insert((o.benchmark.clone(), o.encoding, o.solver.clone()), o);
        }
        CampaignReport {
            outcomes: map.into_values().collect(),
        }
    }

    pub fn outcomes(&self) -> &[SolverOutcome] {
        &self.outcomes
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// Parses line-delimited JSON. A malformed final line (an interrupted write) is ignored.
    pub fn parse_jsonl(text: &str) -> Result<CampaignReport> {
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        let mut outcomes = Vec::with_capacity(lines.len());
        for (i, line) in lines.iter().enumerate() {
            match serde_json::from_str(line) {
                Ok(o) => outcomes.push(o),
                Err(_) if i + 1 == lines.len() && !text.ends_with('\n') => {}
                Err(e) => return Err(Error::Json(e)),
            }
        }
        Ok(CampaignReport::from_outcomes(outcomes))
    }

    pub fn load(path: &Path) -> Result<CampaignReport> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        CampaignReport::parse_jsonl(&text)
    }

    pub fn to_jsonl(&self) -> String {
        self.outcomes
            .iter()
            .map(|o| serde_json::to_string(o).expect("outcomes serialize") + "\n")
            .collect()
    }

    pub fn benchmarks(&self) -> BTreeSet<&str> {
        self.outcomes.iter().map(|o| o.benchmark.as_str()).collect()
    }

    pub fn solvers(&self) -> BTreeSet<&str> {
        self.outcomes.iter().map(|o| o.solver.as_str()).collect()
    }

    pub fn encodings(&self) -> BTreeSet<Encoding> {
        self.outcomes.iter().map(|o| o.encoding).collect()
    }

    fn of(&self, enc: Encoding) -> impl Iterator<Item = &SolverOutcome> {
        self.outcomes.iter().filter(move |o| o.encoding == enc)
    }
}

/// Benchmarks proved unsat in `enc`, by `solver` or by any solver.
pub fn solved(report: &CampaignReport, enc: Encoding, solver: Option<&str>) -> BTreeSet<String> {
    report
        .of(enc)
        .filter(|o| o.status == Status::Unsat && solver.is_none_or(|s| o.solver == s))
        .map(|o| o.benchmark.clone())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VbsRow {
    pub benchmark: String,
    pub best_time: Option<f64>,
    /// Fastest solver; the alphabetically first one on ties.
    pub solver: Option<String>,
}

/// Per benchmark with outcomes in `enc`, the fastest unsat time over all solvers.
pub fn compute_vbs(report: &CampaignReport, enc: Encoding) -> Vec<VbsRow> {
    let mut rows: BTreeMap<&str, VbsRow> = BTreeMap::new();
    for o in report.of(enc) {
        let row = rows.entry(&o.benchmark).or_insert_with(|| VbsRow {
            benchmark: o.benchmark.clone(),
            best_time: None,
            solver: None,
        });
        if o.status == Status::Unsat && row.best_time.is_none_or(|t| o.wall_time < t) {
            row.best_time = Some(o.wall_time);
            row.solver = Some(o.solver.clone());
        }
    }
    rows.into_values().collect()
}

/// Benchmarks solved in `over` but by no solver in `base`.
pub fn newly_solved(report: &CampaignReport, base: Encoding, over: Encoding) -> BTreeSet<String> {
    let before = solved(report, base, None);
    solved(report, over, None)
        .into_iter()
        .filter(|b| !before.contains(b))
        .collect()
}

/// Benchmarks `solver` solves in `over` but not in `base`.
pub fn newly_solved_by(
    report: &CampaignReport,
    base: Encoding,
    over: Encoding,
    solver: &str,
) -> BTreeSet<String> {
    let before = solved(report, base, Some(solver));
    solved(report, over, Some(solver))
        .into_iter()
        .filter(|b| !before.contains(b))
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tightness {
    /// Benchmarks proved unsat in NIA by some solver.
    pub base_unsat: usize,
    pub still_unsat: usize,
    pub unsat_to_sat: usize,
    pub unsat_to_unsolved: usize,
}

/// How the NIA-unsat benchmarks fare in `over`: still unsat, sat (some solver says
/// sat, none unsat) or unsolved.
pub fn tightness_report(report: &CampaignReport, over: Encoding) -> Tightness {
    let base = solved(report, Encoding::Nia, None);
    let unsat = solved(report, over, None);
    let sat: BTreeSet<&str> = report
        .of(over)
        .filter(|o| o.status == Status::Sat)
        .map(|o| o.benchmark.as_str())
        .collect();
    let mut t = Tightness {
        base_unsat: base.len(),
        ..Tightness::default()
    };
    for b in &base {
        if unsat.contains(b) {
            t.still_unsat += 1;
        } else if sat.contains(b.as_str()) {
            t.unsat_to_sat += 1;
        } else {
            t.unsat_to_unsolved += 1;
        }
    }
    t
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverRow {
    pub solver: String,
    pub solved: BTreeMap<Encoding, usize>,
    /// Solved in the encoding but not in NIA, for the same solver (VBS: by any solver).
    pub new: BTreeMap<Encoding, usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub benchmarks: usize,
    pub solvers: Vec<SolverRow>,
    pub vbs: SolverRow,
    pub newly_solved: BTreeMap<Encoding, Vec<String>>,
    /// Solved in at least one overapproximation and not in NIA.
    pub newly_solved_any: usize,
    pub tightness: BTreeMap<Encoding, Tightness>,
}

pub fn summarize(report: &CampaignReport) -> Summary {
    let encodings = report.encodings();
    let overs: Vec<Encoding> = encodings
        .iter()
        .copied()
        .filter(|e| *e != Encoding::Nia)
        .collect();
    let row = |solver: Option<&str>| SolverRow {
        solver: solver.unwrap_or("virtual best solver").to_string(),
        solved: encodings
            .iter()
            .map(|&e| (e, solved(report, e, solver).len()))
            .collect(),
        new: overs
            .iter()
            .map(|&e| {
                let n = match solver {
                    Some(s) => newly_solved_by(report, Encoding::Nia, e, s).len(),
                    None => newly_solved(report, Encoding::Nia, e).len(),
                };
                (e, n)
            })
            .collect(),
    };
    let newly: BTreeMap<Encoding, Vec<String>> = overs
        .iter()
        .map(|&e| {
            (
                e,
                newly_solved(report, Encoding::Nia, e).into_iter().collect(),
            )
        })
        .collect();
    let any: BTreeSet<&String> = newly.values().flatten().collect();
    Summary {
        benchmarks: report.benchmarks().len(),
        solvers: report.solvers().into_iter().map(|s| row(Some(s))).collect(),
        vbs: row(None),
        newly_solved_any: any.len(),
        newly_solved: newly,
        tightness: overs
            .iter()
            .map(|&e| (e, tightness_report(report, e)))
            .collect(),
    }
}

/// One `solver,encoding,solved,new` row per solver and encoding, VBS last.
pub fn summary_csv(summary: &Summary) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["solver", "encoding", "solved", "new"])?;
    for row in summary.solvers.iter().chain([&summary.vbs]) {
        for (enc, n) in &row.solved {
            let new = row.new.get(enc).map(|n| n.to_string()).unwrap_or_default();
            w.write_record([row.solver.as_str(), enc.name(), &n.to_string(), &new])?;
        }
    }
    csv_string(w)
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Invariant(format!("csv buffer: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Per benchmark, the best NIA time and the best time in each other encoding of the
/// report; unsolved runs are placed at `limit`.
pub fn scatter_csv(report: &CampaignReport, limit: Option<f64>) -> Result<String> {
    let limit = limit.unwrap_or(DEFAULT_TIMEOUT);
    let mut encodings = report.encodings();
    encodings.insert(Encoding::Nia);
    let best: Vec<BTreeMap<String, Option<f64>>> = encodings
        .iter()
        .map(|&e| {
            compute_vbs(report, e)
                .into_iter()
                .map(|r| (r.benchmark, r.best_time))
                .collect()
        })
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["benchmark".to_string()];
    header.extend(
        encodings
            .iter()
            .map(|e| format!("{}_time", e.name().to_lowercase())),
    );
    w.write_record(&header)?;
    for b in report.benchmarks() {
        let mut record = vec![b.to_string()];
        for times in &best {
            let t = times.get(b).copied().flatten().unwrap_or(limit).min(limit);
            record.push(t.to_string());
        }
        w.write_record(&record)?;
    }
    csv_string(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(b: &str, e: Encoding, s: &str, st: Status, t: f64) -> SolverOutcome {
        SolverOutcome {
            benchmark: b.into(),
            encoding: e,
            solver: s.into(),
            status: st,
            wall_time: t,
            detail: None,
        }
    }

    #[test]
    fn vbs_takes_fastest_unsat() {
        let r = CampaignReport::from_outcomes([
            o("b1", Encoding::Nia, "z3", Status::Unsat, 2.0),
            o("b1", Encoding::Nia, "cvc5", Status::Unsat, 1.0),
            o("b2", Encoding::Nia, "z3", Status::Unsat, 1.0),
            o("b2", Encoding::Nia, "cvc5", Status::Sat, 0.5),
            o("b3", Encoding::Nia, "cvc5", Status::Timeout, 300.0),
        ]);
        let v = compute_vbs(&r, Encoding::Nia);
        let times: Vec<Option<f64>> = v.iter().map(|r| r.best_time).collect();
        assert_eq!(times, [Some(1.0), Some(1.0), None]);
        assert_eq!(v[0].solver.as_deref(), Some("cvc5"));
    }

    #[test]
    fn ties_and_empty() {
        let r = CampaignReport::from_outcomes([
            o("b", Encoding::Lia, "a", Status::Unsat, 3.0),
            o("b", Encoding::Lia, "z", Status::Unsat, 3.0),
        ]);
        let v = compute_vbs(&r, Encoding::Lia);
        assert_eq!(
            (v[0].best_time, v[0].solver.as_deref()),
            (Some(3.0), Some("a"))
        );
        assert!(compute_vbs(&CampaignReport::default(), Encoding::Nia).is_empty());
        assert_eq!(
            tightness_report(&CampaignReport::default(), Encoding::Nra),
            Tightness::default()
        );
    }

    #[test]
    fn newly_solved_is_a_set_difference() {
        let r = CampaignReport::from_outcomes([
            o("b1", Encoding::Nia, "z3", Status::Unsat, 1.0),
            o("b1", Encoding::Lia, "z3", Status::Unsat, 1.0),
            o("b2", Encoding::Lia, "cvc5", Status::Unsat, 1.0),
            o("b2", Encoding::Nia, "cvc5", Status::Unknown, 1.0),
        ]);
        assert_eq!(
            newly_solved(&r, Encoding::Nia, Encoding::Lia),
            BTreeSet::from(["b2".to_string()])
        );
        assert!(newly_solved(&r, Encoding::Nia, Encoding::Nra).is_empty());
    }

    #[test]
    fn later_records_replace_earlier_ones() {
        let text = concat!(
            r#"{"benchmark":"b","encoding":"NIA","solver":"z3","status":"error","wall_time":0.0}"#,
            "\n",
            r#"{"benchmark":"b","encoding":"NIA","solver":"z3","status":"unsat","wall_time":1.0}"#,
            "\n",
            r#"{"benchmark":"c","encoding":"NIA","so"#
        );
        let r = CampaignReport::parse_jsonl(text).unwrap();
        assert_eq!(r.outcomes().len(), 1);
        assert_eq!(r.outcomes()[0].status, Status::Unsat);
        assert!(CampaignReport::parse_jsonl("{\n{}\n").is_err());
    }

    #[test]
    fn scatter_maps_unsolved_to_limit() {
        let r = CampaignReport::from_outcomes([
            o("b1", Encoding::Nia, "z3", Status::Timeout, 300.0),
            o("b1", Encoding::Nra, "z3", Status::Unsat, 0.25),
        ]);
        assert_eq!(
            scatter_csv(&r, None).unwrap(),
            "benchmark,nia_time,nra_time\nb1,300,0.25\n"
        );
    }
}
