use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

use super::Confidence;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Counterexample data on failure, e.g. a nonzero residual.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed: true, detail: None }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed: false, detail: Some(detail.into()) }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass(name)
        } else {
            Self::fail(name, detail())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Verbatim,
    Correction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceReport {
    pub variant: Variant,
    pub values: BTreeMap<String, String>,
    pub checks: Vec<CheckResult>,
}

impl InstanceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn label(&self) -> String {
        let v = match self.variant {
            Variant::Verbatim => "verbatim",
            Variant::Correction => "correction",
        };
        if self.values.is_empty() {
            return v.to_string();
        }
        let vals: Vec<String> = self.values.iter().map(|(k, x)| format!("{k}={x}")).collect();
        format!("{v} {{{}}}", vals.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryStatus {
    Pass,
    /// The entry as printed fails, the recorded correction passes.
    KnownIssue,
    Fail,
}

impl EntryStatus {
    pub fn label(&self) -> &'static str {
        match self {
            EntryStatus::Pass => "PASS",
            EntryStatus::KnownIssue => "KNOWN-ISSUE",
            EntryStatus::Fail => "FAIL",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub catalog: String,
    pub id: String,
    pub kind: String,
    pub anchor: String,
    pub confidence: Confidence,
    pub status: EntryStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub known_issue: Option<String>,
    /// Set when the entry could not be instantiated at all.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub instances: Vec<InstanceReport>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl EntryReport {
    pub fn checks_run(&self) -> usize {
        self.instances.iter().map(|i| i.checks.len()).sum()
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = (&InstanceReport, &CheckResult)> {
        self.instances.iter().flat_map(|i| i.checks.iter().filter(|c| !c.passed).map(move |c| (i, c)))
    }
}

/// Per-entry outcomes in catalog order. Timings are kept out of the text and
/// JSON renderings so that both are reproducible byte for byte.
#[derive(Clone, Debug, Default, Serialize)]
pub struct VerificationReport {
    pub entries: Vec<EntryReport>,
}

#[derive(Serialize)]
struct Summary {
    entries: usize,
    passed: usize,
    known_issues: usize,
    failed: usize,
    ok: bool,
}

impl VerificationReport {
    /// No entry failed. Known issues with a passing correction do not count.
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status != EntryStatus::Fail)
    }

    pub fn count(&self, s: EntryStatus) -> usize {
        self.entries.iter().filter(|e| e.status == s).count()
    }

    pub fn get(&self, id: &str) -> Option<&EntryReport> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn total_time(&self) -> Duration {
        self.entries.iter().map(|e| e.elapsed).sum()
    }

    fn summary(&self) -> Summary {
        Summary {
            entries: self.entries.len(),
            passed: self.count(EntryStatus::Pass),
            known_issues: self.count(EntryStatus::KnownIssue),
            failed: self.count(EntryStatus::Fail),
            ok: self.passed(),
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{:<11} {}/{} [{}, {}] {} checks",
                e.status.label(),
                e.catalog,
                e.id,
                e.kind,
                e.confidence.as_str(),
                e.checks_run()
            );
            if let Some(err) = &e.error {
                let _ = writeln!(out, "    error: {err}");
            }
            if let Some(k) = &e.known_issue {
                if e.status != EntryStatus::Pass {
                    let _ = writeln!(out, "    known issue: {k}");
                }
            }
            for (inst, c) in e.failed_checks() {
                let _ = writeln!(out, "    {} {}: {}", inst.label(), c.name, c.detail.as_deref().unwrap_or("failed"));
            }
        }
        let s = self.summary();
        let _ = writeln!(
            out,
            "entries {}, passed {}, known issues {}, failed {}: {}",
            s.entries,
            s.passed,
            s.known_issues,
            s.failed,
            if s.ok { "OK" } else { "FAILED" }
        );
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            summary: Summary,
            entries: &'a [EntryReport],
        }
        serde_json::to_string_pretty(&Doc { summary: self.summary(), entries: &self.entries }).expect("serializable")
    }

    /// One `id  seconds` line per entry; not deterministic.
    pub fn render_timings(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(out, "{}/{}  {:.3}s", e.catalog, e.id, e.elapsed.as_secs_f64());
        }
        let _ = writeln!(out, "total  {:.3}s", self.total_time().as_secs_f64());
        out
    }
}
