//! The rewrites: sequential composition, catalytic cancellation, the two
//! coherence rules and wasting.
//!
//! Every operation returns a fresh inequality whose trace is the input's trace
//! plus one step. Results carry no rule flags; certification is attached by
//! the caller.

use alloc::string::ToString;

use super::{DerivationError, DerivationStep, StepKind};
use crate::algebra::{EntropicExpr, Mode, Rational, ResourceInequality, ResourceKind, ResourceVector};

const RULE_I_TOOL: &str = "rule I";
const RULE_O_TOOL: &str = "rule O";

fn record(before: &ResourceInequality, mut after: ResourceInequality, kind: StepKind, tool: &str, k: EntropicExpr) -> ResourceInequality {
    let step = DerivationStep {
        kind,
        tool: tool.to_string(),
        multiplier: k,
        before: alloc::boxed::Box::new(before.snapshot()),
        after: alloc::boxed::Box::new(after.snapshot()),
    };
    let mut trace = before.trace.clone();
    trace.push(step);
    after.trace = trace;
    after
}

fn check_multiplier(k: &EntropicExpr) -> Result<(), DerivationError> {
    if k.is_definitely_negative() {
        Err(DerivationError::NegativeMultiplier(alloc::format!("{k}")))
    } else {
        Ok(())
    }
}

/// Splits a requirement `need` against an available amount `have`.
///
/// Returns `(matched, deficit)`. When `have` is certainly no larger than
/// `need`, everything available is matched and the rest is a deficit;
/// otherwise the whole requirement is matched and `have - need` stays behind,
/// even if its sign depends on the state.
fn split_requirement(have: EntropicExpr, need: EntropicExpr) -> (EntropicExpr, EntropicExpr) {
    if have.is_zero() {
        return (EntropicExpr::zero(), need);
    }
    if (have - need).is_nonpos() {
        (have, need - have)
    } else {
        (need, EntropicExpr::zero())
    }
}

fn compose(
    base: &ResourceInequality,
    tool: &ResourceInequality,
    k: &EntropicExpr,
    kind: StepKind,
) -> Result<ResourceInequality, DerivationError> {
    check_multiplier(k)?;
    if k.is_zero() {
        return Ok(base.clone());
    }
    let tool_lhs = tool.lhs.scale(k)?;
    let tool_rhs = tool.rhs.scale(k)?;
    let mut lhs = base.lhs.clone();
    let mut rhs = base.rhs.clone();

    match kind {
        StepKind::Prepend => {
            // Tool outputs feed the base's inputs; surplus becomes output.
            for (res, produced) in tool_rhs.iter() {
                let (matched, surplus) = split_requirement(base.lhs.get(res), *produced);
                lhs.add_term(res.clone(), -matched);
                rhs.add_term(res.clone(), surplus);
            }
            lhs = lhs + tool_lhs;
        }
        _ => {
            // Base outputs feed the tool's inputs; deficits become inputs.
            for (res, needed) in tool_lhs.iter() {
                let have = base.rhs.get(res);
                if res.is_noisy() {
                    if (have - *needed).is_definitely_negative() {
                        return Err(DerivationError::Deficient(alloc::format!("{needed} {res}")));
                    }
                    rhs.add_term(res.clone(), -*needed);
                    continue;
                }
                let (matched, deficit) = split_requirement(have, *needed);
                rhs.add_term(res.clone(), -matched);
                lhs.add_term(res.clone(), deficit);
            }
            rhs = rhs + tool_rhs;
        }
    }

    let mut out = ResourceInequality::unchecked(base.name.clone(), lhs, rhs, base.mode.combine(tool.mode));
    out.rehome_negatives();
    Ok(record(base, out, kind, &tool.name, *k))
}

/// Feeds `k` copies' worth of the base's output into `tool`.
pub fn append(base: &ResourceInequality, tool: &ResourceInequality, k: &EntropicExpr) -> Result<ResourceInequality, DerivationError> {
    compose(base, tool, k, StepKind::Append)
}

/// Feeds the output of `k` times `tool` into the base's input.
pub fn prepend(base: &ResourceInequality, tool: &ResourceInequality, k: &EntropicExpr) -> Result<ResourceInequality, DerivationError> {
    compose(base, tool, k, StepKind::Prepend)
}

/// Appends a fraction `k` of `qe` (`[q->q] >=! [qq]`) to the base's output.
/// Same arithmetic as [`append`], recorded as its own step kind.
pub fn apply_qe_fraction(base: &ResourceInequality, qe: &ResourceInequality, k: &EntropicExpr) -> Result<ResourceInequality, DerivationError> {
    compose(base, qe, k, StepKind::ApplyQeFraction)
}

/// Removes `amount` of `kind` from both sides.
///
/// Only allowed in asymptotic mode, where a catalyst can be borrowed once
/// and recycled over many rounds.
pub fn cancel(ri: &ResourceInequality, kind: &ResourceKind, amount: &EntropicExpr) -> Result<ResourceInequality, DerivationError> {
    if amount.is_zero() {
        return Ok(ri.clone());
    }
    if ri.mode == Mode::Exact {
        return Err(DerivationError::CatalysisRequiresAsymptotic);
    }
    if amount.is_definitely_negative() {
        return Err(DerivationError::NegativeMultiplier(alloc::format!("{amount}")));
    }
    for (side, have) in [("left", ri.lhs.get(kind)), ("right", ri.rhs.get(kind))] {
        if (have - *amount).is_definitely_negative() {
            return Err(DerivationError::InsufficientCoefficient {
                side,
                kind: alloc::format!("{kind}"),
                have: alloc::format!("{have}"),
                want: alloc::format!("{amount}"),
            });
        }
    }
    let mut out = ri.snapshot();
    out.flags = Default::default();
    out.lhs.add_term(kind.clone(), -*amount);
    out.rhs.add_term(kind.clone(), -*amount);
    Ok(record(ri, out, StepKind::Cancel, &kind.to_string(), *amount))
}

/// Rule I: input `c [c->c]` becomes `c/2 [q->q]` in and `c/2 [qq]` out.
pub fn apply_rule_i(ri: &ResourceInequality) -> Result<ResourceInequality, DerivationError> {
    if !ri.flags.rule_i_ok {
        return Err(DerivationError::RuleNotCertified("I"));
    }
    let c = ri.lhs.get(&ResourceKind::Cbit);
    if c.is_zero() {
        if ri.rhs.contains(&ResourceKind::Cbit) {
            return Err(DerivationError::NoClassicalInput);
        }
        return Ok(ri.clone());
    }
    let half = c.scale(Rational::new(1, 2));
    let mut out = ri.snapshot();
    out.flags = Default::default();
    out.mode = Mode::Asymptotic;
    out.lhs.remove(&ResourceKind::Cbit);
    out.lhs.add_term(ResourceKind::QubitChannel, half);
    out.rhs.add_term(ResourceKind::Ebit, half);
    Ok(record(ri, out, StepKind::RuleI, RULE_I_TOOL, c))
}

/// Rule O: output `c [c->c]` becomes `c/2 [q->q] + c/2 [qq]`.
/// The inputs must be purely quantum.
pub fn apply_rule_o(ri: &ResourceInequality) -> Result<ResourceInequality, DerivationError> {
    if !ri.flags.rule_o_ok {
        return Err(DerivationError::RuleNotCertified("O"));
    }
    let c = ri.rhs.get(&ResourceKind::Cbit);
    if c.is_zero() {
        if ri.lhs.contains(&ResourceKind::Cbit) {
            return Err(DerivationError::NoClassicalOutput);
        }
        return Ok(ri.clone());
    }
    if ri.lhs.contains(&ResourceKind::Cbit) {
        return Err(DerivationError::ClassicalInputForRuleO);
    }
    let half = c.scale(Rational::new(1, 2));
    let mut out = ri.snapshot();
    out.flags = Default::default();
    out.mode = Mode::Asymptotic;
    out.rhs.remove(&ResourceKind::Cbit);
    out.rhs.add_term(ResourceKind::QubitChannel, half);
    out.rhs.add_term(ResourceKind::Ebit, half);
    Ok(record(ri, out, StepKind::RuleO, RULE_O_TOOL, c))
}

/// Adds resources to the input side that the protocol simply discards.
pub fn waste(ri: &ResourceInequality, extra: &ResourceVector) -> Result<ResourceInequality, DerivationError> {
    if extra.is_empty() {
        return Ok(ri.clone());
    }
    for (kind, c) in extra.iter() {
        if !c.is_nonneg() {
            return Err(DerivationError::NegativeWaste(alloc::format!("{c} {kind}")));
        }
    }
    let mut out = ri.snapshot();
    out.flags = Default::default();
    out.lhs = &out.lhs + extra;
    Ok(record(ri, out, StepKind::Waste, &extra.to_string(), EntropicExpr::one()))
}

/// Net change of `lhs - rhs` caused by a step, for cross-checks.
pub fn net_delta(step: &DerivationStep, tool: Option<&ResourceInequality>) -> Option<ResourceVector> {
    let k = step.multiplier;
    Some(match step.kind {
        StepKind::Append | StepKind::Prepend | StepKind::ApplyQeFraction => tool?.net().scale(&k).ok()?,
        StepKind::Cancel => ResourceVector::new(),
        StepKind::RuleI => {
            let half = k.scale(Rational::new(1, 2));
            ResourceVector::new()
                .with(ResourceKind::Cbit, -k)
                .with(ResourceKind::QubitChannel, half)
                .with(ResourceKind::Ebit, -half)
        }
        StepKind::RuleO => {
            let half = k.scale(Rational::new(1, 2));
            ResourceVector::new()
                .with(ResourceKind::Cbit, k)
                .with(ResourceKind::QubitChannel, -half)
                .with(ResourceKind::Ebit, -half)
        }
        StepKind::Waste => crate::algebra::parse_vector(&step.tool).ok()?,
    })
}
