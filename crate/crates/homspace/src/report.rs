//! Machine-readable check reports.
//!
//! Every check a command runs becomes one entry with a stable anchor
//! string drawn from [`ANCHORS`]; reports are byte-for-byte deterministic
//! for identical inputs, flags, and seed.

use std::collections::BTreeMap;

use serde::Serialize;

/// The fixed registry of check anchors. Tests assert that every emitted
/// entry uses one of these, so reports cannot grow unnamed checks.
pub const ANCHORS: &[&str] = &[
    "jacobi-identity",
    "metric-spd",
    "space-invariants",
    "splitting-certificate",
    "two-route-ricci",
    "moment-trace-identity",
    "ricci-derivation-trace",
    "soliton-fit-residual",
    "soliton-first-order-optimality",
    "soliton-derivation-span",
    "flow-convergence",
    "stratum-label-invariants",
    "stratum-property-commutator",
    "stratum-property-positive",
    "stratum-property-norm-bound",
    "stratum-property-trace",
    "stratum-property-pairing",
    "stratum-trace-inequality",
    "reductive-trace-identity",
    "extension-invariants",
    "extension-two-route-ricci",
    "extension-mean-curvature",
    "lnm-condition-1",
    "lnm-condition-2",
    "lnm-condition-3",
    "lnm-extension-ricci",
    "lnm-trace-inequality-f",
    "lnm-equality-dh",
    "audit-structure",
    "audit-soliton-constant",
];

#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub anchor: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckEntry {
    /// An equality-style check: passes when |value| <= tolerance.
    pub fn residual(name: impl Into<String>, anchor: &'static str, value: f64, tol: f64) -> Self {
        debug_assert!(ANCHORS.contains(&anchor), "unregistered anchor {anchor}");
        CheckEntry { name: name.into(), anchor, value, tolerance: tol, pass: value.abs() <= tol }
    }

    /// An inequality-style check: passes when value >= -tolerance.
    pub fn lower_bound(
        name: impl Into<String>,
        anchor: &'static str,
        value: f64,
        tol: f64,
    ) -> Self {
        debug_assert!(ANCHORS.contains(&anchor), "unregistered anchor {anchor}");
        CheckEntry { name: name.into(), anchor, value, tolerance: tol, pass: value >= -tol }
    }

    /// A strict positivity check (e.g. smallest eigenvalue).
    pub fn positive(name: impl Into<String>, anchor: &'static str, value: f64) -> Self {
        debug_assert!(ANCHORS.contains(&anchor), "unregistered anchor {anchor}");
        CheckEntry { name: name.into(), anchor, value, tolerance: 0.0, pass: value > 0.0 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    pub input_digest: String,
    pub flags: BTreeMap<String, String>,
    pub entries: Vec<CheckEntry>,
    /// Command-specific numbers and matrices (deterministic ordering).
    pub data: BTreeMap<String, serde_json::Value>,
    pub verdict: bool,
}

impl Report {
    pub fn new(command: &str, input: &str, digest: &str) -> Self {
        Report {
            command: command.to_string(),
            input: input.to_string(),
            input_digest: digest.to_string(),
            flags: BTreeMap::new(),
            entries: Vec::new(),
            data: BTreeMap::new(),
            verdict: true,
        }
    }

    pub fn flag(&mut self, key: &str, value: impl ToString) {
        self.flags.insert(key.to_string(), value.to_string());
    }

    pub fn push(&mut self, entry: CheckEntry) {
        self.verdict &= entry.pass;
        self.entries.push(entry);
    }

    pub fn insert_data(&mut self, key: &str, value: impl Serialize) {
        self.data.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable report data"),
        );
    }

    /// Plain-text rendering: one line per check, then the verdict.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("input: {} (sha256 {})\n", self.input, self.input_digest));
        if !self.flags.is_empty() {
            let flags: Vec<String> =
                self.flags.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&format!("flags: {}\n", flags.join(" ")));
        }
        for e in &self.entries {
            out.push_str(&format!(
                "{}  {:<44} [{}] value={:.6e} tol={:.1e}\n",
                if e.pass { "PASS" } else { "FAIL" },
                e.name,
                e.anchor,
                e.value,
                e.tolerance,
            ));
        }
        for (k, v) in &self.data {
            out.push_str(&format!("{k}: {v}\n"));
        }
        out.push_str(&format!("verdict: {}\n", if self.verdict { "PASS" } else { "FAIL" }));
        out
    }

    /// Machine rendering: a single JSON object.
    pub fn render_machine(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
