use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::expr::EntropicExpr;
use super::resource::{ResourceKind, ResourceVector};
use super::AlgebraError;
use crate::derivation::DerivationStep;

/// Exact (`>=!`) or asymptotic (`>=`) achievability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Asymptotic,
}

impl Mode {
    /// Asymptotic wins: anything built on an asymptotic premise is asymptotic.
    pub fn combine(self, other: Mode) -> Mode {
        if self == Mode::Exact && other == Mode::Exact {
            Mode::Exact
        } else {
            Mode::Asymptotic
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Mode::Exact => "EXACT",
            Mode::Asymptotic => "ASYMPTOTIC",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "EXACT" => Some(Mode::Exact),
            "ASYMPTOTIC" => Some(Mode::Asymptotic),
            _ => None,
        }
    }

    pub fn operator(self) -> &'static str {
        match self {
            Mode::Exact => ">=!",
            Mode::Asymptotic => ">=",
        }
    }
}

/// Certified applicability of the coherence rules.
///
/// These are asserted facts about a known implementation of the protocol,
/// never computed. Rule I additionally admits a relaxed uniformity condition
/// (`log p_x / n` roughly constant); that refinement concerns block protocols
/// and is not modeled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RuleFlags {
    /// The input classical message is almost uniform and almost decoupled.
    pub rule_i_ok: bool,
    /// The output classical message is almost decoupled from everything else.
    pub rule_o_ok: bool,
}

impl RuleFlags {
    pub const NONE: RuleFlags = RuleFlags { rule_i_ok: false, rule_o_ok: false };
    pub const RULE_I: RuleFlags = RuleFlags { rule_i_ok: true, rule_o_ok: false };
    pub const RULE_O: RuleFlags = RuleFlags { rule_i_ok: false, rule_o_ok: true };
}

/// A resource inequality `lhs >= rhs` together with its provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResourceInequality {
    pub name: String,
    pub lhs: ResourceVector,
    pub rhs: ResourceVector,
    pub mode: Mode,
    pub flags: RuleFlags,
    pub trace: Vec<DerivationStep>,
}

impl ResourceInequality {
    /// Builds a validated inequality: both sides nonempty and noisy resources
    /// counted in whole copies.
    pub fn new(
        name: impl Into<String>,
        lhs: ResourceVector,
        rhs: ResourceVector,
        mode: Mode,
    ) -> Result<Self, AlgebraError> {
        let ri = Self::unchecked(name, lhs, rhs, mode);
        ri.validate()?;
        Ok(ri)
    }

    /// Builds an inequality without validation. Intermediate derivation
    /// states go through here.
    pub fn unchecked(name: impl Into<String>, lhs: ResourceVector, rhs: ResourceVector, mode: Mode) -> Self {
        ResourceInequality {
            name: name.into(),
            lhs,
            rhs,
            mode,
            flags: RuleFlags::NONE,
            trace: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), AlgebraError> {
        if self.lhs.is_empty() {
            return Err(AlgebraError::EmptySide("left"));
        }
        if self.rhs.is_empty() {
            return Err(AlgebraError::EmptySide("right"));
        }
        self.lhs.check_noisy_counts()?;
        self.rhs.check_noisy_counts()
    }

    pub fn with_flags(mut self, flags: RuleFlags) -> Self {
        self.flags = flags;
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Same sides and mode; name, flags and trace are ignored.
    pub fn same_statement(&self, other: &ResourceInequality) -> bool {
        self.lhs == other.lhs && self.rhs == other.rhs && self.mode == other.mode
    }

    /// The statement alone, with flags kept and the trace dropped.
    pub fn snapshot(&self) -> ResourceInequality {
        ResourceInequality {
            name: self.name.clone(),
            lhs: self.lhs.clone(),
            rhs: self.rhs.clone(),
            mode: self.mode,
            flags: self.flags,
            trace: Vec::new(),
        }
    }

    /// `lhs - rhs`. Two inequalities with equal nets are interconvertible by
    /// catalytic cancellation alone.
    pub fn net(&self) -> ResourceVector {
        &self.lhs - &self.rhs
    }

    /// Exchanges static and dynamic resources on both sides.
    ///
    /// The name toggles a `dual_` prefix so the map is an involution on names
    /// too. Rule flags are cleared because they certify a specific protocol,
    /// and the trace is dropped since it no longer replays to this statement.
    pub fn dual(&self) -> ResourceInequality {
        let name = match self.name.strip_prefix("dual_") {
            Some(base) => String::from(base),
            None => alloc::format!("dual_{}", self.name),
        };
        ResourceInequality {
            name,
            lhs: self.lhs.dual(),
            rhs: self.rhs.dual(),
            mode: self.mode,
            flags: RuleFlags::NONE,
            trace: Vec::new(),
        }
    }

    /// Moves every term that is negative on all states to the other side.
    pub fn rehome_negatives(&mut self) {
        let moved_l: Vec<(ResourceKind, EntropicExpr)> = self
            .lhs
            .iter()
            .filter(|(_, c)| c.is_definitely_negative())
            .map(|(k, c)| (k.clone(), *c))
            .collect();
        let moved_r: Vec<(ResourceKind, EntropicExpr)> = self
            .rhs
            .iter()
            .filter(|(_, c)| c.is_definitely_negative())
            .map(|(k, c)| (k.clone(), *c))
            .collect();
        for (k, c) in moved_l {
            self.lhs.remove(&k);
            self.rhs.add_term(k, -c);
        }
        for (k, c) in moved_r {
            self.rhs.remove(&k);
            self.lhs.add_term(k, -c);
        }
    }
}

impl fmt::Display for ResourceInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.mode.operator(), self.rhs)
    }
}
