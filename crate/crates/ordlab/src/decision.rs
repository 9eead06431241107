//! Decision outcomes, certificates and refutations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::circular::fincirc::PcvxWitness;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Yes,
    No,
    Unknown,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Yes | Outcome::No => 0,
            Outcome::Unknown => 2,
        }
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Outcome::Yes
        } else {
            Outcome::No
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Yes => "yes",
            Outcome::No => "no",
            Outcome::Unknown => "unknown",
        })
    }
}

/// One entry of a rule trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub rule: String,
    pub detail: String,
}

/// Why a convexity or embeddability claim fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Refutation {
    /// An interior condensation class of the source has no counterpart.
    MissingClassSize { class: String },
    /// Every target region with two classes holds a class of this size
    /// densely, and the source has none.
    DenseClassSizeAbsent { size: u64 },
    /// An extreme class of the source cannot sit at the end of any target class.
    EndpointMismatch { side: String, class: String },
    SkeletonNotConvexEmbeddable { source: String, target: String },
    /// The source holds a well-ordered piece longer than any in the target.
    WellOrderBound { required: String, available: String },
    /// A piece forced into one convex image has no place in the target.
    ForcedCore { core: String },
    /// The source contains η and the target is scattered.
    ScatteredTarget,
    SizeMismatch { source: u64, target: u64 },
    /// Tails of the label sequences differ.
    E1Tail { source: String, target: String },
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refutation::MissingClassSize { class } => write!(f, "missing class size {class}"),
            Refutation::DenseClassSizeAbsent { size } => write!(f, "dense class size {size} absent"),
            Refutation::EndpointMismatch { side, class } => {
                write!(f, "{side} endpoint class {class} has no match")
            }
            Refutation::SkeletonNotConvexEmbeddable { source, target } => {
                write!(f, "skeleton {source} not convex in {target}")
            }
            Refutation::WellOrderBound { required, available } => {
                write!(f, "well-ordered piece {required} exceeds {available}")
            }
            Refutation::ForcedCore { core } => write!(f, "forced core {core} has no image"),
            Refutation::ScatteredTarget => write!(f, "dense source, scattered target"),
            Refutation::SizeMismatch { source, target } => write!(f, "size {source} vs {target}"),
            Refutation::E1Tail { source, target } => write!(f, "tails {source} and {target} differ"),
        }
    }
}

/// Replayable evidence for an outcome. Terms are spelled in the DSL.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Both sides share this canonical form.
    SameForm { form: String },
    /// Canonical forms differ inside the part of the fragment where they are unique.
    DistinctForms { source: String, target: String },
    /// target ≅ left + source + right ("0" for an empty side).
    Convex { left: String, right: String },
    Pair { forward: Box<Certificate>, backward: Box<Certificate> },
    /// Every countable order embeds into the dense part of the target.
    DenseTarget { part: String },
    /// Source atoms mapped in order into target atoms.
    AtomMap { source_atoms: Vec<String>, target_atoms: Vec<String>, assignment: Vec<usize> },
    Refuted(Refutation),
    /// Every cut of the target was tried.
    Exhausted { cuts: usize },
    FinPcvx(PcvxWitness),
    FinMap { map: Vec<usize> },
    /// Circular witness. With source = a + b and target = c + d, the
    /// rotation b + a is the sum of `pieces` and the rotation d + c is the
    /// sum of pieces[i] + gaps[i].
    CircPieces { source_cut: (String, String), pieces: Vec<String>, target_cut: (String, String), gaps: Vec<String> },
    /// Label sequences agree after shifting: x[n̄+k] = y[m̄+k].
    E1Shift { n_bar: u64, m_bar: u64 },
    Compressible { side: String, left: String, right: String },
    Ordinal { value: String },
    Rule { rule: String, evidence: String },
}

/// The result of a decision procedure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub outcome: Outcome,
    pub certificate: Option<Certificate>,
    pub trace: Vec<Step>,
}

impl Decision {
    pub fn yes(cert: Certificate, rule: &str, detail: impl Into<String>) -> Self {
        Decision::new(Outcome::Yes, Some(cert), rule, detail)
    }

    pub fn no(cert: Certificate, rule: &str, detail: impl Into<String>) -> Self {
        Decision::new(Outcome::No, Some(cert), rule, detail)
    }

    pub fn refuted(r: Refutation, rule: &str) -> Self {
        let detail = r.to_string();
        Decision::new(Outcome::No, Some(Certificate::Refuted(r)), rule, detail)
    }

    pub fn unknown(rule: &str, detail: impl Into<String>) -> Self {
        Decision::new(Outcome::Unknown, None, rule, detail)
    }

    fn new(outcome: Outcome, certificate: Option<Certificate>, rule: &str, detail: impl Into<String>) -> Self {
        Decision { outcome, certificate, trace: vec![Step { rule: rule.into(), detail: detail.into() }] }
    }

    pub fn with_step(mut self, rule: &str, detail: impl Into<String>) -> Self {
        self.trace.insert(0, Step { rule: rule.into(), detail: detail.into() });
        self
    }

    pub fn is_decided(&self) -> bool {
        self.outcome != Outcome::Unknown
    }
}
