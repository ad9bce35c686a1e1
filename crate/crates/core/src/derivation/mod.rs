//! Scripted derivations of the protocol family with replayable traces.

mod family;
mod ops;
mod replay;

use alloc::boxed::Box;
use alloc::string::String;
use thiserror::Error;

use crate::algebra::{AlgebraError, EntropicExpr, ResourceInequality};

pub use family::{derive_family, duality_edges, DualityEdge, DualityRelation, Family, Registry};
pub use ops::{append, apply_qe_fraction, apply_rule_i, apply_rule_o, cancel, net_delta, prepend, waste};
pub use replay::{replay, ReplayError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    Append,
    Prepend,
    Cancel,
    RuleI,
    RuleO,
    ApplyQeFraction,
    Waste,
}

impl StepKind {
    pub const ALL: [StepKind; 7] = [
        StepKind::Append,
        StepKind::Prepend,
        StepKind::Cancel,
        StepKind::RuleI,
        StepKind::RuleO,
        StepKind::ApplyQeFraction,
        StepKind::Waste,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            StepKind::Append => "APPEND",
            StepKind::Prepend => "PREPEND",
            StepKind::Cancel => "CANCEL",
            StepKind::RuleI => "RULE_I",
            StepKind::RuleO => "RULE_O",
            StepKind::ApplyQeFraction => "APPLY_QE_FRACTION",
            StepKind::Waste => "WASTE",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        StepKind::ALL.into_iter().find(|k| k.tag() == tag)
    }
}

/// One rewrite.
///
/// `tool` names the primitive used (for compositions), the cancelled resource
/// token (for `CANCEL`), the wasted vector in text form (for `WASTE`), or the
/// rule. `multiplier` is the scale factor, the cancelled amount, or the
/// classical-bit coefficient a rule replaced. `before` and `after` are
/// snapshots without traces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationStep {
    pub kind: StepKind,
    pub tool: String,
    pub multiplier: EntropicExpr,
    pub before: Box<ResourceInequality>,
    pub after: Box<ResourceInequality>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("multiplier `{0}` is negative")]
    NegativeMultiplier(String),
    #[error("not enough output to cover {0}")]
    Deficient(String),
    #[error("catalysis requires asymptotic mode")]
    CatalysisRequiresAsymptotic,
    #[error("cannot cancel {want} {kind}: {side} hand side only has {have}")]
    InsufficientCoefficient { side: &'static str, kind: String, have: String, want: String },
    #[error("protocol not certified for rule {0}")]
    RuleNotCertified(&'static str),
    #[error("rule I needs [c->c] among the inputs")]
    NoClassicalInput,
    #[error("rule O needs [c->c] among the outputs")]
    NoClassicalOutput,
    #[error("rule O needs purely quantum inputs")]
    ClassicalInputForRuleO,
    #[error("cannot waste a negative amount: {0}")]
    NegativeWaste(String),
}

#[cfg(test)]
mod tests;
