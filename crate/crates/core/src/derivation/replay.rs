use alloc::string::String;
use thiserror::Error;

use super::ops::{apply_qe_fraction, apply_rule_i, apply_rule_o, append, cancel, prepend, waste};
use super::{DerivationError, DerivationStep, Registry, StepKind};
use crate::algebra::{parse_kind, parse_vector, ResourceInequality};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("trace starts from `{0}`, which is not a registered primitive")]
    UnknownStart(String),
    #[error("step {0} uses unknown tool `{1}`")]
    UnknownTool(usize, String),
    #[error("step {0} does not continue from step {prev}", prev = .0 - 1)]
    Broken(usize),
    #[error("step {0} failed to re-run: {1}")]
    Failed(usize, DerivationError),
    #[error("step {0} re-runs to a different result")]
    Mismatch(usize),
    #[error("trace ends in a different statement than the inequality it belongs to")]
    WrongEnd,
}

fn rerun(index: usize, step: &DerivationStep, reg: &Registry) -> Result<ResourceInequality, ReplayError> {
    let before = step.before.as_ref();
    let tool = || reg.get(&step.tool).ok_or_else(|| ReplayError::UnknownTool(index, step.tool.clone()));
    let fail = |e| ReplayError::Failed(index, e);
    let k = &step.multiplier;
    match step.kind {
        StepKind::Append => append(before, tool()?, k).map_err(fail),
        StepKind::Prepend => prepend(before, tool()?, k).map_err(fail),
        StepKind::ApplyQeFraction => apply_qe_fraction(before, tool()?, k).map_err(fail),
        StepKind::Cancel => {
            let kind = parse_kind(&step.tool).map_err(|_| ReplayError::UnknownTool(index, step.tool.clone()))?;
            cancel(before, &kind, k).map_err(fail)
        }
        StepKind::RuleI => apply_rule_i(before).map_err(fail),
        StepKind::RuleO => apply_rule_o(before).map_err(fail),
        StepKind::Waste => {
            let v = parse_vector(&step.tool).map_err(|_| ReplayError::UnknownTool(index, step.tool.clone()))?;
            waste(before, &v).map_err(fail)
        }
    }
}

/// Re-runs every step of `ri.trace` from the registered primitives and checks
/// that each reproduces its recorded result and that the chain ends at `ri`.
pub fn replay(ri: &ResourceInequality, reg: &Registry) -> Result<ResourceInequality, ReplayError> {
    let Some(first) = ri.trace.first() else {
        return match reg.get(&ri.name) {
            Some(p) if p.same_statement(ri) => Ok(p.clone()),
            _ => Err(ReplayError::UnknownStart(ri.name.clone())),
        };
    };
    match reg.get(&first.before.name) {
        Some(p) if p.same_statement(&first.before) => {}
        _ => return Err(ReplayError::UnknownStart(first.before.name.clone())),
    }
    let mut current: Option<ResourceInequality> = None;
    for (i, step) in ri.trace.iter().enumerate() {
        if let Some(prev) = &current {
            if !prev.same_statement(&step.before) {
                return Err(ReplayError::Broken(i));
            }
        }
        let out = rerun(i, step, reg)?;
        if !out.same_statement(&step.after) {
            return Err(ReplayError::Mismatch(i));
        }
        current = Some(out);
    }
    let end = current.expect("trace is nonempty");
    if !end.same_statement(ri) {
        return Err(ReplayError::WrongEnd);
    }
    Ok(end)
}
