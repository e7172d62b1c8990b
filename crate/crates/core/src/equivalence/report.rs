use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
            Verdict::NotApplicable => "not-applicable",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Overall {
    #[serde(rename = "not-equivalent")]
    NotEquivalent,
    #[serde(rename = "consistent-with-quasi-LU")]
    ConsistentWithQuasiLu,
    #[serde(rename = "quasi-LU-certified")]
    QuasiLuCertified,
    #[serde(rename = "LU-certified")]
    LuCertified,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl fmt::Display for Overall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Overall::NotEquivalent => "not-equivalent",
            Overall::ConsistentWithQuasiLu => "consistent-with-quasi-LU",
            Overall::QuasiLuCertified => "quasi-LU-certified",
            Overall::LuCertified => "LU-certified",
            Overall::Inconclusive => "inconclusive",
        })
    }
}

/// What a criterion's failure means.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    /// An LU invariant: failure proves non-equivalence.
    Necessary,
    /// Part of the sufficient direction only.
    Sufficient,
    /// Gates the upgrade from quasi-LU to LU for qubits.
    LuUpgrade,
    /// Reported for information; never affects the verdict.
    Diagnostic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Criterion {
    pub id: String,
    pub name: String,
    /// `(i,j₁,j₂,k)` the entry belongs to, 1-based, if choice-specific.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub choice: Option<String>,
    pub role: Role,
    pub verdict: Verdict,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_len: Option<usize>,
}

impl Criterion {
    pub(crate) fn new(id: &str, name: &str, role: Role, verdict: Verdict, detail: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
            choice: None,
            role,
            verdict,
            detail: detail.into(),
            witness: None,
            witness_len: None,
        }
    }

    pub(crate) fn for_choice(mut self, choice: Option<String>) -> Self {
        self.choice = choice;
        self
    }

    pub(crate) fn with_witness(mut self, witness: Option<String>, len: Option<usize>) -> Self {
        self.witness = witness;
        self.witness_len = len;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub dims: Vec<usize>,
    pub overall: Overall,
    /// Exhaustive word depth used for the trace identities.
    pub depth: usize,
    pub tolerance: f64,
    pub criteria: Vec<Criterion>,
    /// Zero-tensor precondition log.
    pub preconditions: Vec<String>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn criterion(&self, id: &str, choice: Option<&str>) -> Option<&Criterion> {
        self.criteria
            .iter()
            .find(|c| c.id == id && c.choice.as_deref() == choice)
    }

    /// Failing necessary criteria, in report order.
    pub fn failures(&self) -> impl Iterator<Item = &Criterion> {
        self.criteria
            .iter()
            .filter(|c| c.role == Role::Necessary && c.verdict == Verdict::Fail)
    }

    /// First witness among failing necessary criteria.
    pub fn witness(&self) -> Option<(&str, usize)> {
        self.failures()
            .find_map(|c| c.witness.as_deref().zip(c.witness_len))
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("dims {:?}\n", self.dims);
        for p in &self.preconditions {
            out.push_str(&format!("precondition: {p}\n"));
        }
        for c in &self.criteria {
            let choice = c.choice.as_deref().map(|s| format!(" [{s}]")).unwrap_or_default();
            out.push_str(&format!("{:<14} {}{}: {}", c.verdict.to_string(), c.name, choice, c.detail));
            if let Some(w) = &c.witness {
                out.push_str(&format!(" (witness: {w})"));
            }
            out.push('\n');
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        match self.overall {
            Overall::ConsistentWithQuasiLu => {
                out.push_str(&format!("overall: {} (depth {})\n", self.overall, self.depth))
            }
            o => out.push_str(&format!("overall: {o}\n")),
        }
        out
    }
}
