//! Reports: one record per law instance plus a summary, rendered as text or
//! as JSON lines.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use regcat_core::LawOutcome;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const TOOL: &str = "regcat";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub law: String,
    pub subject: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl Record {
    pub fn new(law: &str, subject: impl Into<String>, holds: bool, counterexample: Option<String>) -> Self {
        Record {
            law: law.to_string(),
            subject: subject.into(),
            verdict: if holds { Verdict::Pass } else { Verdict::Fail },
            counterexample: if holds { None } else { counterexample },
        }
    }
}

impl From<LawOutcome> for Record {
    fn from(o: LawOutcome) -> Self {
        Record::new(&o.law, o.subject, o.holds, o.counterexample)
    }
}

/// Options in effect after merging flags into the document's options.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Effective {
    pub n_max: usize,
    pub bound: u64,
    pub mode: String,
}

/// Description of a catalog or serialized 2-category written next to the
/// report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    pub kind: String,
    pub entries: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub failures: usize,
    pub passed: bool,
    /// Kind-specific facts such as the obstructedness degree.
    pub facts: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub kind: String,
    pub backend: String,
    pub input_sha256: String,
    pub seed: u64,
    pub options: Effective,
    pub records: Vec<Record>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub artifact: Option<Artifact>,
    pub summary: Summary,
}

/// Accumulates records and facts for one command run.
#[derive(Debug, Default)]
pub struct Builder {
    pub records: Vec<Record>,
    pub facts: BTreeMap<String, serde_json::Value>,
    pub artifact: Option<Artifact>,
}

impl Builder {
    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn extend<I: IntoIterator<Item = LawOutcome>>(&mut self, outcomes: I) {
        self.records.extend(outcomes.into_iter().map(Record::from));
    }

    pub fn fact(&mut self, key: &str, value: impl Serialize) {
        self.facts
            .insert(key.to_string(), serde_json::to_value(value).expect("facts serialize"));
    }
}

pub struct Header {
    pub command: String,
    pub kind: String,
    pub backend: String,
    pub input_sha256: String,
    pub seed: u64,
    pub options: Effective,
}

impl Report {
    pub fn assemble(h: Header, b: Builder) -> Report {
        let failures = b.records.iter().filter(|r| r.verdict == Verdict::Fail).count();
        Report {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            command: h.command,
            kind: h.kind,
            backend: h.backend,
            input_sha256: h.input_sha256,
            seed: h.seed,
            options: h.options,
            summary: Summary {
                checks: b.records.len(),
                failures,
                passed: failures == 0,
                facts: b.facts,
            },
            records: b.records,
            artifact: b.artifact,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.passed
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Records => self.render_records(),
        }
    }

    fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} {} {} {} ({})",
            self.tool, self.version, self.command, self.kind, self.backend
        );
        let _ = writeln!(s, "input sha256: {}", self.input_sha256);
        let _ = writeln!(
            s,
            "seed: {}  n_max: {}  bound: {}  mode: {}",
            self.seed, self.options.n_max, self.options.bound, self.options.mode
        );
        for r in &self.records {
            let tag = match r.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
            };
            let _ = write!(s, "{tag}  {}  {}", r.law, r.subject);
            if let Some(c) = &r.counterexample {
                let _ = write!(s, "  [{c}]");
            }
            s.push('\n');
        }
        if let Some(a) = &self.artifact {
            let _ = writeln!(s, "{}: {} entries, sha256 {}", a.kind, a.entries, a.sha256);
        }
        for (k, v) in &self.summary.facts {
            let _ = writeln!(s, "{k} = {v}");
        }
        let _ = writeln!(
            s,
            "summary: {} checks, {} failures, {}",
            self.summary.checks,
            self.summary.failures,
            if self.summary.passed { "PASS" } else { "FAIL" }
        );
        s
    }

    /// A header line, one line per record, then the summary line.
    fn render_records(&self) -> String {
        let header = serde_json::json!({
            "type": "header",
            "tool": self.tool,
            "version": self.version,
            "command": self.command,
            "kind": self.kind,
            "backend": self.backend,
            "input_sha256": self.input_sha256,
            "seed": self.seed,
            "options": self.options,
        });
        let mut s = String::new();
        let _ = writeln!(s, "{header}");
        for r in &self.records {
            let mut v = serde_json::to_value(r).expect("records serialize");
            v["type"] = "record".into();
            let _ = writeln!(s, "{v}");
        }
        let mut summary = serde_json::to_value(&self.summary).expect("summary serializes");
        summary["type"] = "summary".into();
        if let Some(a) = &self.artifact {
            summary["artifact"] = serde_json::to_value(a).expect("artifact serializes");
        }
        let _ = writeln!(s, "{summary}");
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Records,
}
