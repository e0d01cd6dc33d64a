use serde::Serialize;

use crate::algebra::Element;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub identity: String,
    /// Axiom or equation label the identity belongs to.
    pub anchor: String,
    /// Frame tuple or generator the residual was computed at.
    pub at: String,
    pub residual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        VerificationReport { name: name.into(), checks: Vec::new(), notes: Vec::new() }
    }

    /// Record a residual; the check passes iff it is zero.
    pub fn residual(&mut self, identity: &str, anchor: &str, at: impl Into<String>, r: &Element) {
        self.checks.push(Check {
            identity: identity.into(),
            anchor: anchor.into(),
            at: at.into(),
            residual: r.to_string(),
            pass: r.is_zero(),
        });
    }

    /// Record a vector-valued residual; passes iff every slot is zero.
    pub fn residual_vec(&mut self, identity: &str, anchor: &str, at: impl Into<String>, r: &[Element]) {
        self.checks.push(Check {
            identity: identity.into(),
            anchor: anchor.into(),
            at: at.into(),
            residual: vec_display(r),
            pass: r.iter().all(Element::is_zero),
        });
    }

    pub fn flag(&mut self, identity: &str, anchor: &str, at: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            identity: identity.into(),
            anchor: anchor.into(),
            at: at.into(),
            residual: detail.into(),
            pass,
        });
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Failing checks whose identity starts with `prefix`.
    pub fn failed(&self, prefix: &str) -> bool {
        self.failures().any(|c| c.identity.starts_with(prefix))
    }

    /// Append the checks of `other`, prefixing its identities with its name.
    pub fn extend(&mut self, other: VerificationReport) {
        for mut c in other.checks {
            c.identity = format!("{}: {}", other.name, c.identity);
            self.checks.push(c);
        }
        self.notes.extend(other.notes);
    }

    pub fn summary(&self) -> String {
        let bad = self.failures().count();
        format!(
            "{}: {} ({} checks, {} failing)",
            self.name,
            if bad == 0 { "pass" } else { "FAIL" },
            self.checks.len(),
            bad
        )
    }

    pub fn to_text(&self) -> String {
        let mut s = self.summary();
        s.push('\n');
        for c in self.failures() {
            s.push_str(&format!("  [{}] {} at {}: {}\n", c.anchor, c.identity, c.at, c.residual));
        }
        for n in &self.notes {
            s.push_str(&format!("  note: {n}\n"));
        }
        s
    }
}

pub fn vec_display(v: &[Element]) -> String {
    let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
    format!("[{}]", parts.join(", "))
}
