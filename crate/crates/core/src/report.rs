//! Verification reports and their text and machine renderings.

use serde_json::{Map, Value};

use crate::equivalence::EquivReport;

const MAX_LISTED_FAILURES: usize = 20;

/// Output format of [`write_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    /// A flat JSON object with dotted keys.
    Machine,
}

/// A report that renders as fixed-order text and as flat key-value pairs.
pub trait Render {
    fn text(&self) -> String;
    fn entries(&self) -> Vec<(String, Value)>;
}

/// Renders a report; identical reports give identical bytes.
pub fn write_report(report: &impl Render, format: Format) -> Vec<u8> {
    match format {
        Format::Text => report.text().into_bytes(),
        Format::Machine => {
            let map: Map<String, Value> = report.entries().into_iter().collect();
            let mut out = serde_json::to_string_pretty(&Value::Object(map)).expect("plain JSON values");
            out.push('\n');
            out.into_bytes()
        }
    }
}

fn kv(k: &str, v: impl Into<Value>) -> (String, Value) {
    (k.to_string(), v.into())
}

/// Outcome of a verification sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub check: String,
    pub object: String,
    pub n_max: usize,
    pub depth: usize,
    /// False when a capped clone made some lattice an under-approximation.
    pub exact: bool,
    pub sizes: Vec<String>,
    pub checked: u64,
    pub failure_count: u64,
    /// The first failures, in sweep order.
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(check: &str, object: &str, n_max: usize, depth: usize) -> Self {
        CheckReport {
            check: check.to_string(),
            object: object.to_string(),
            n_max,
            depth,
            exact: true,
            sizes: Vec::new(),
            checked: 0,
            failure_count: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.failure_count += 1;
        if self.failures.len() < MAX_LISTED_FAILURES {
            self.failures.push(msg.into());
        }
    }

    /// Records one check; `Err` carries the failure description.
    pub fn record(&mut self, outcome: Result<(), String>) {
        self.checked += 1;
        if let Err(msg) = outcome {
            self.fail(msg);
        }
    }

    pub fn absorb(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.failure_count += other.failure_count;
        for f in other.failures {
            if self.failures.len() < MAX_LISTED_FAILURES {
                self.failures.push(f);
            }
        }
    }

    pub fn with_object(mut self, object: &str) -> Self {
        self.object = object.to_string();
        self
    }
}

impl Render for CheckReport {
    fn text(&self) -> String {
        let mut out = format!("check: {}\nobject: {}\n", self.check, self.object);
        out += &format!(
            "bounds: n_max={}, depth={}, exact={}\n",
            self.n_max, self.depth, self.exact
        );
        out += &format!("sizes: {}\n", self.sizes.join(" "));
        out += &format!("checked: {}\nfailures: {}\n", self.checked, self.failure_count);
        for f in &self.failures {
            out += &format!("  - {f}\n");
        }
        for n in &self.notes {
            out += &format!("note: {n}\n");
        }
        out += &format!("result: {}\n", if self.passed() { "PASS" } else { "FAIL" });
        out
    }

    fn entries(&self) -> Vec<(String, Value)> {
        let mut e = vec![
            kv("check", self.check.as_str()),
            kv("object", self.object.as_str()),
            kv("bounds.n_max", self.n_max),
            kv("bounds.depth", self.depth),
            kv("bounds.exact", self.exact),
            kv("sizes", self.sizes.join(" ")),
            kv("checked", self.checked),
            kv("failure_count", self.failure_count),
        ];
        for (i, f) in self.failures.iter().enumerate() {
            e.push(kv(&format!("failures.{i}"), f.as_str()));
        }
        for (i, n) in self.notes.iter().enumerate() {
            e.push(kv(&format!("notes.{i}"), n.as_str()));
        }
        e.push(kv("result", if self.passed() { "PASS" } else { "FAIL" }));
        e
    }
}

impl Render for EquivReport {
    fn text(&self) -> String {
        let mut out = format!("mode: {}\nleft: {}\nright: {}\n", self.mode, self.left, self.right);
        out += &format!(
            "bounds: n_max={}, depth={}, exact={}\n",
            self.n_max, self.depth, self.exact
        );
        out += &format!("verdict: {}\n", self.verdict);
        if let Some(w) = &self.witness {
            out += "witness:\n";
            out += &format!("  kind: {}\n", w.kind);
            if let Some(m) = &w.model_map {
                out += &format!("  model map: {m}\n");
            }
            if let Some(p) = &w.phi {
                out += &format!("  phi: {p}\n");
            }
            if let Some(a) = &w.alpha {
                out += &format!("  alpha: {a}\n");
            }
            if !w.sizes.is_empty() {
                out += &format!("  lattice sizes: {}\n", w.sizes.join(" "));
            }
            out += &format!("  laws checked: {}\n", w.laws_checked);
        }
        if let Some(r) = &self.refutation {
            out += &format!("refutation: {r}\n");
        }
        for n in &self.notes {
            out += &format!("note: {n}\n");
        }
        out
    }

    fn entries(&self) -> Vec<(String, Value)> {
        let mut e = vec![
            kv("mode", self.mode.to_string()),
            kv("left", self.left.as_str()),
            kv("right", self.right.as_str()),
            kv("bounds.n_max", self.n_max),
            kv("bounds.depth", self.depth),
            kv("bounds.exact", self.exact),
            kv("verdict", self.verdict.to_string()),
        ];
        if let Some(w) = &self.witness {
            e.push(kv("witness.kind", w.kind.as_str()));
            if let Some(m) = &w.model_map {
                e.push(kv("witness.model_map", m.as_str()));
            }
            if let Some(p) = &w.phi {
                e.push(kv("witness.phi", p.as_str()));
            }
            if let Some(a) = &w.alpha {
                e.push(kv("witness.alpha", a.as_str()));
            }
            if !w.sizes.is_empty() {
                e.push(kv("witness.lattice_sizes", w.sizes.join(" ")));
            }
            e.push(kv("witness.laws_checked", w.laws_checked));
        }
        if let Some(r) = &self.refutation {
            e.push(kv("refutation.vars", r.vars.as_str()));
            e.push(kv("refutation.invariant", r.invariant.as_str()));
            e.push(kv("refutation.left", r.left.as_str()));
            e.push(kv("refutation.right", r.right.as_str()));
            e.push(kv("refutation.text", r.to_string()));
        }
        for (i, n) in self.notes.iter().enumerate() {
            e.push(kv(&format!("notes.{i}"), n.as_str()));
        }
        e
    }
}
