use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::channel::{channel_state, ChannelFamily};
use super::evaluate::EntropyProfile;
use super::objects::NoisyObject;
use super::state::BipartitePureState;
use super::EntropyError;
use crate::algebra::{EntropicExpr, Mode, ResourceInequality, ResourceKind, ResourceVector};

/// Numeric value of one resource term.
#[derive(Clone, Debug, PartialEq)]
pub enum Rate {
    /// Noiseless resources, in uses per copy of the noisy object.
    PerUse(f64),
    /// Noisy resources, in whole copies of the named object.
    Copies(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateEntry {
    pub kind: ResourceKind,
    pub coeff: EntropicExpr,
    pub rate: Rate,
}

/// An inequality with every coefficient evaluated on a concrete object.
#[derive(Clone, Debug, PartialEq)]
pub struct RateTable {
    pub ri: String,
    pub object: String,
    pub mode: Mode,
    pub profile: EntropyProfile,
    pub lhs: Vec<RateEntry>,
    pub rhs: Vec<RateEntry>,
}

impl RateTable {
    /// Total numeric rate of `kind` on one side, zero if absent.
    pub fn rate_of(&self, lhs: bool, kind: &ResourceKind) -> f64 {
        let side = if lhs { &self.lhs } else { &self.rhs };
        side.iter()
            .filter(|e| &e.kind == kind)
            .map(|e| match e.rate {
                Rate::PerUse(x) => x,
                Rate::Copies(n) => n as f64,
            })
            .sum()
    }
}

fn write_side(f: &mut fmt::Formatter<'_>, side: &[RateEntry], object: &str) -> fmt::Result {
    for (i, e) in side.iter().enumerate() {
        if i > 0 {
            f.write_str(" + ")?;
        }
        match e.rate {
            Rate::Copies(1) => write!(f, "1 copy of {object}")?,
            Rate::Copies(n) => write!(f, "{n} copies of {object}")?,
            Rate::PerUse(x) => write!(f, "{} {}", format_significant(x, 12), e.kind)?,
        }
    }
    Ok(())
}

impl fmt::Display for RateTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_side(f, &self.lhs, &self.object)?;
        write!(f, " {} ", self.mode.operator())?;
        write_side(f, &self.rhs, &self.object)
    }
}

/// Formats `x` with `digits` significant digits, trailing zeros trimmed.
/// Magnitudes below `1e-12` print as `0`.
pub fn format_significant(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return alloc::format!("{x}");
    }
    if x.abs() < 1e-12 {
        return "0".to_string();
    }
    let exp = libm::floor(libm::log10(x.abs())) as i64;
    let decimals = (digits as i64 - 1 - exp).max(0) as usize;
    let mut s = alloc::format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

fn check_kinds(ri: &ResourceInequality, object: &NoisyObject) -> Result<(), EntropyError> {
    for (kind, _) in ri.lhs.iter().chain(ri.rhs.iter()) {
        let (want, handle) = match kind {
            ResourceKind::NoisyState(h) => ("state", h),
            ResourceKind::NoisyChannel(h) => ("channel", h),
            _ => continue,
        };
        let got = object.kind.label();
        if want != got {
            return Err(EntropyError::KindMismatch {
                ri: ri.name.clone(),
                object: object.name.clone(),
                want,
                got,
            });
        }
        if let Some(h) = handle {
            if *h != object.name {
                return Err(EntropyError::HandleMismatch { handle: h.clone(), object: object.name.clone() });
            }
        }
    }
    Ok(())
}

fn side_rates(side: &ResourceVector, profile: &EntropyProfile) -> Vec<RateEntry> {
    side.iter()
        .map(|(kind, coeff)| {
            let rate = match (kind.is_noisy(), coeff.as_count()) {
                (true, Some(n)) => Rate::Copies(n),
                _ => Rate::PerUse(profile.evaluate(coeff)),
            };
            RateEntry { kind: kind.clone(), coeff: *coeff, rate }
        })
        .collect()
}

/// Evaluates `ri` on `object`. Channels use `phi` as the input state, or the
/// maximally entangled state when `phi` is `None`.
pub fn rate_table(
    ri: &ResourceInequality,
    object: &NoisyObject,
    phi: Option<&BipartitePureState>,
) -> Result<RateTable, EntropyError> {
    check_kinds(ri, object)?;
    let psi = object.pure_state(phi)?;
    let profile = EntropyProfile::of(&psi);
    Ok(RateTable {
        ri: ri.name.clone(),
        object: object.name.clone(),
        mode: ri.mode,
        profile,
        lhs: side_rates(&ri.lhs, &profile),
        rhs: side_rates(&ri.rhs, &profile),
    })
}

/// One row of a channel-family sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub profile: EntropyProfile,
    /// Values of the caller's extra expressions, in order.
    pub extra: Vec<f64>,
}

impl SweepRow {
    pub const HEADER: [&'static str; 7] = ["param", "H_A", "H_B", "H_E", "I_AB", "I_AE", "Ic"];

    /// `param, H_A, H_B, H_E, I_AB, I_AE, Ic`, then the extras.
    pub fn values(&self) -> Vec<f64> {
        let p = &self.profile;
        let mut v = alloc::vec![self.param, p.h_a, p.h_b, p.h_e, p.mutual_ab(), p.mutual_ae(), p.coherent()];
        v.extend_from_slice(&self.extra);
        v
    }
}

/// Evaluates a channel family on its maximally entangled input at every
/// grid point, in grid order.
pub fn sweep(family: ChannelFamily, grid: &[f64], extra: &[EntropicExpr]) -> Result<Vec<SweepRow>, EntropyError> {
    grid.iter()
        .map(|&p| {
            let ch = family.build(p)?;
            let psi = channel_state(&ch, &BipartitePureState::maximally_entangled(ch.d_in()))?;
            let profile = EntropyProfile::of(&psi);
            Ok(SweepRow { param: p, profile, extra: extra.iter().map(|e| profile.evaluate(e)).collect() })
        })
        .collect()
}
