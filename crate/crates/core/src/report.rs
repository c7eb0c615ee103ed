//! Verdicts, check records and report rendering.
//!
//! JSON output has a fixed key order (struct field order; `details` objects
//! are key-sorted maps) so that equal inputs give byte-identical reports.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
    Skipped,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Vacuous => "VACUOUS",
            Verdict::Skipped => "SKIPPED",
        })
    }
}

/// Result of one library-level check before it is labelled for a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub verdict: Verdict,
    pub details: Value,
    pub counterexample: Option<Value>,
}

impl Outcome {
    pub fn pass(details: Value) -> Self {
        Outcome {
            verdict: Verdict::Pass,
            details,
            counterexample: None,
        }
    }

    pub fn fail(details: Value, counterexample: Value) -> Self {
        Outcome {
            verdict: Verdict::Fail,
            details,
            counterexample: Some(counterexample),
        }
    }

    pub fn vacuous(details: Value) -> Self {
        Outcome {
            verdict: Verdict::Vacuous,
            details,
            counterexample: None,
        }
    }

    pub fn skipped(reason: &str) -> Self {
        Outcome {
            verdict: Verdict::Skipped,
            details: serde_json::json!({ "reason": reason }),
            counterexample: None,
        }
    }

    /// Pass when `ok`, otherwise fail with the given counterexample.
    pub fn check(ok: bool, details: Value, counterexample: impl FnOnce() -> Value) -> Self {
        if ok {
            Self::pass(details)
        } else {
            Self::fail(details, counterexample())
        }
    }

    pub fn is_fail(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    /// The mathematical statement being checked.
    pub anchor: String,
    pub verdict: Verdict,
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, outcome: Outcome) -> Self {
        let Outcome {
            verdict,
            details,
            counterexample,
        } = outcome;
        let counterexample = match (verdict, counterexample) {
            (Verdict::Fail, None) => Some(serde_json::json!({ "note": "no witness recorded" })),
            (_, c) => c,
        };
        CheckRecord {
            id: id.into(),
            anchor: anchor.into(),
            verdict,
            details,
            counterexample,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub vacuous: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: String,
    pub summary: Summary,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: u64, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let mut summary = Summary::default();
        for c in &checks {
            match c.verdict {
                Verdict::Pass => summary.pass += 1,
                Verdict::Fail => summary.fail += 1,
                Verdict::Vacuous => summary.vacuous += 1,
                Verdict::Skipped => summary.skipped += 1,
            }
        }
        Report {
            tool: "sinkbench".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            seed: format!("{seed:#x}"),
            summary,
            checks,
            timing_ms: None,
        }
    }

    pub fn has_failures(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}  {}", self.tool, self.version, self.command);
        let _ = writeln!(out, "seed {}", self.seed);
        for c in &self.checks {
            let _ = writeln!(out, "{:<8} {}  [{}]", c.verdict.to_string(), c.id, c.anchor);
            if !c.details.is_null() {
                let _ = writeln!(out, "         {}", c.details);
            }
            if let Some(cx) = &c.counterexample {
                let _ = writeln!(out, "         counterexample: {cx}");
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "summary: {} pass, {} fail, {} vacuous, {} skipped",
            s.pass, s.fail, s.vacuous, s.skipped
        );
        if let Some(t) = self.timing_ms {
            let _ = writeln!(out, "time: {t} ms");
        }
        out
    }
}

/// Renders a rational as `"num/den"` (or `"num"` for integers).
pub fn rational_string(q: &BigRational) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
