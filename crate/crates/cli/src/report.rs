//! Machine- and human-readable reports.
//!
//! The JSON schema is versioned (`"schema": 1`); witnesses are serialized
//! as typed objects carrying enough data to re-verify a verdict through
//! the public predicates.

use serde::Serialize;
use serde_json::{json, Value};

use ultragraph::classify::{Flag, Status, Verdict, Witness};

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub property: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<i64>,
    pub flags: Vec<String>,
    pub citations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &str, input: &str) -> Self {
        Report {
            schema: 1,
            command: command.to_string(),
            input: input.to_string(),
            property: None,
            verdict: None,
            classification: None,
            witness: None,
            witness_verified: None,
            horizon: None,
            flags: Vec::new(),
            citations: Vec::new(),
            details: None,
            exit_code: 0,
        }
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command:  {}\n", self.command));
        out.push_str(&format!("input:    {}\n", self.input));
        if let Some(p) = &self.property {
            out.push_str(&format!("property: {p}\n"));
        }
        if let Some(v) = &self.verdict {
            match self.horizon {
                Some(h) => out.push_str(&format!("verdict:  {v} (window top {h})\n")),
                None => out.push_str(&format!("verdict:  {v}\n")),
            }
        }
        if let Some(c) = &self.classification {
            out.push_str(&format!("class:    {c}\n"));
        }
        if let Some(w) = &self.witness {
            out.push_str(&format!("witness:  {w}\n"));
        }
        if let Some(ok) = self.witness_verified {
            out.push_str(&format!("witness re-verified: {ok}\n"));
        }
        if !self.flags.is_empty() {
            out.push_str(&format!("flags:    {}\n", self.flags.join(", ")));
        }
        if let Some(d) = &self.details {
            out.push_str(&format!("details:  {d}\n"));
        }
        if !self.citations.is_empty() {
            out.push_str(&format!("criteria: {}\n", self.citations.join(", ")));
        }
        out
    }
}

pub fn status_str(s: Status) -> &'static str {
    match s {
        Status::Holds => "holds",
        Status::Fails => "fails",
        Status::Inconclusive => "inconclusive",
    }
}

pub fn flag_str(f: Flag) -> &'static str {
    match f {
        Flag::ReflexivitySensitive => "reflexivity-sensitive",
    }
}

pub fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::ExitlessLoop { edges } => {
            json!({ "kind": "exitless_loop", "edges": edges })
        }
        Witness::LoopFound { edges } => json!({ "kind": "loop", "edges": edges }),
        Witness::NotCofinal {
            vertex,
            cycle,
            escape_family,
        } => json!({
            "kind": "not_cofinal",
            "vertex": vertex,
            "cycle": cycle,
            "escape_family": escape_family,
        }),
        Witness::SingularUnreached { from, to } => {
            json!({ "kind": "singular_unreached", "from": from, "to": to })
        }
        Witness::ProperSaturatedHereditary { cofinite, members } => json!({
            "kind": "proper_saturated_hereditary",
            "cofinite": cofinite,
            "members": members,
        }),
        Witness::NotConnectedToLoop { vertex } => {
            json!({ "kind": "not_connected_to_loop", "vertex": vertex })
        }
        Witness::InfiniteRangeUncovered { edge, from } => {
            json!({ "kind": "infinite_range_uncovered", "edge": edge, "from": from })
        }
    }
}

/// Fills the verdict-shaped fields of a report from a `Verdict`.
pub fn apply_verdict(report: &mut Report, verdict: &Verdict) {
    report.verdict = Some(status_str(verdict.status).to_string());
    report.witness = verdict.witness.as_ref().map(witness_json);
    report.horizon = verdict.horizon;
    report.flags = verdict
        .flags
        .iter()
        .map(|&f| flag_str(f).to_string())
        .collect();
    report.exit_code = match verdict.status {
        Status::Holds => 0,
        Status::Fails => 1,
        Status::Inconclusive => 2,
    };
}
