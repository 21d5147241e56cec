//! Report assembly and serialization.

use std::io::Write;

use crossnorm::Verdict;
use serde::{Deserialize, Serialize};

use crate::config::{Format, Suite, SuiteConfig};
use crate::runner::TrialRecord;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub records: usize,
    pub holds: usize,
    pub holds_with_slack: usize,
    pub inconclusive: usize,
    pub violated: usize,
    /// Violations of checks whose statement is proved.
    pub gating_violations: usize,
    /// Smallest point slack over every comparison of the suite.
    pub worst_slack: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: SuiteConfig,
    pub records: Vec<TrialRecord>,
    pub summary: Vec<SuiteSummary>,
}

impl Report {
    pub fn new(config: SuiteConfig, records: Vec<TrialRecord>) -> Self {
        let summary = config
            .suite
            .expand()
            .into_iter()
            .map(|suite| summarize(suite, records.iter().filter(|r| r.suite == suite)))
            .collect();
        Report {
            config,
            records,
            summary,
        }
    }

    pub fn gating_violations(&self) -> usize {
        self.summary.iter().map(|s| s.gating_violations).sum()
    }

    pub fn write<W: Write>(&self, mut w: W, format: Format) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut w, self)?;
                writeln!(w)
            }
            Format::Csv => write_csv(&self.records, w),
        }
    }

    /// One line per suite.
    pub fn summary_lines(&self) -> Vec<String> {
        self.summary
            .iter()
            .map(|s| {
                format!(
                    "{:<17} records {:>4}  holds {:>4}  slack {:>4}  inconclusive {:>4}  violated {:>4}  worst slack {}",
                    s.suite.name(),
                    s.records,
                    s.holds,
                    s.holds_with_slack,
                    s.inconclusive,
                    s.violated,
                    s.worst_slack.map_or("-".to_string(), |v| format!("{v:.3e}")),
                )
            })
            .collect()
    }
}

fn summarize<'a>(suite: Suite, records: impl Iterator<Item = &'a TrialRecord>) -> SuiteSummary {
    let mut s = SuiteSummary {
        suite,
        records: 0,
        holds: 0,
        holds_with_slack: 0,
        inconclusive: 0,
        violated: 0,
        gating_violations: 0,
        worst_slack: None,
    };
    for r in records {
        let rec = &r.record;
        s.records += 1;
        match rec.verdict {
            Verdict::Holds => s.holds += 1,
            Verdict::HoldsWithSlack => s.holds_with_slack += 1,
            Verdict::Inconclusive => s.inconclusive += 1,
            Verdict::Violated => {
                s.violated += 1;
                if rec.gating {
                    s.gating_violations += 1;
                }
            }
        }
        if !rec.slacks.is_empty() {
            let w = rec.worst_slack();
            s.worst_slack = Some(s.worst_slack.map_or(w, |c| c.min(w)));
        }
    }
    s
}

#[derive(Serialize)]
struct CsvRow<'a> {
    suite: &'a str,
    trial: usize,
    name: &'a str,
    verdict: String,
    gating: bool,
    tag: &'a str,
    spaces: String,
    dims: String,
    seed: u64,
    restarts: usize,
    max_iters: usize,
    tolerance: f64,
    worst_slack: f64,
    sides: String,
}

fn write_csv<W: Write>(records: &[TrialRecord], w: W) -> std::io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        let rec = &r.record;
        let sides = rec
            .sides
            .iter()
            .map(|s| format!("{}={}({})", s.label, s.value, s.direction))
            .collect::<Vec<_>>()
            .join(";");
        out.serialize(CsvRow {
            suite: r.suite.name(),
            trial: r.trial,
            name: &rec.name,
            verdict: rec.verdict.to_string(),
            gating: rec.gating,
            tag: &rec.tag,
            spaces: rec.spaces.join(" "),
            dims: rec
                .dims
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join("x"),
            seed: rec.seed,
            restarts: rec.budget.restarts,
            max_iters: rec.budget.max_iters,
            tolerance: rec.tolerance,
            worst_slack: rec.worst_slack(),
            sides,
        })
        .map_err(std::io::Error::other)?;
    }
    out.flush()
}
