use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use super::expr::{EntropicExpr, Rational};
use super::AlgebraError;

/// The six resource kinds of the calculus.
///
/// Noisy kinds may carry a handle naming a concrete state or channel; the
/// handle is opaque here and only resolved when rates are evaluated.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ResourceKind {
    /// `[c->c]`
    Cbit,
    /// `[q->q]`
    QubitChannel,
    /// `[qq]`
    Ebit,
    /// `[q->qq]`
    Cobit,
    /// `{qq}`
    NoisyState(Option<String>),
    /// `{q->q}`
    NoisyChannel(Option<String>),
}

impl ResourceKind {
    pub fn noisy_state() -> Self {
        ResourceKind::NoisyState(None)
    }

    pub fn noisy_channel() -> Self {
        ResourceKind::NoisyChannel(None)
    }

    pub fn is_noisy(&self) -> bool {
        matches!(self, ResourceKind::NoisyState(_) | ResourceKind::NoisyChannel(_))
    }

    pub fn is_classical(&self) -> bool {
        matches!(self, ResourceKind::Cbit)
    }

    pub fn handle(&self) -> Option<&str> {
        match self {
            ResourceKind::NoisyState(h) | ResourceKind::NoisyChannel(h) => h.as_deref(),
            _ => None,
        }
    }

    /// Static/dynamic exchange: `[qq] <-> [q->q]`, `{qq} <-> {q->q}`.
    /// Classical bits and cobits are fixed.
    pub fn dual(&self) -> Self {
        match self {
            ResourceKind::Cbit => ResourceKind::Cbit,
            ResourceKind::Cobit => ResourceKind::Cobit,
            ResourceKind::QubitChannel => ResourceKind::Ebit,
            ResourceKind::Ebit => ResourceKind::QubitChannel,
            ResourceKind::NoisyState(h) => ResourceKind::NoisyChannel(h.clone()),
            ResourceKind::NoisyChannel(h) => ResourceKind::NoisyState(h.clone()),
        }
    }

    /// Upper-case tag used in JSON.
    pub fn tag(&self) -> &'static str {
        match self {
            ResourceKind::Cbit => "CBIT",
            ResourceKind::QubitChannel => "QUBIT_CHANNEL",
            ResourceKind::Ebit => "EBIT",
            ResourceKind::Cobit => "COBIT",
            ResourceKind::NoisyState(_) => "NOISY_STATE",
            ResourceKind::NoisyChannel(_) => "NOISY_CHANNEL",
        }
    }

    pub fn from_tag(tag: &str, handle: Option<String>) -> Option<Self> {
        Some(match tag {
            "CBIT" => ResourceKind::Cbit,
            "QUBIT_CHANNEL" => ResourceKind::QubitChannel,
            "EBIT" => ResourceKind::Ebit,
            "COBIT" => ResourceKind::Cobit,
            "NOISY_STATE" => ResourceKind::NoisyState(handle),
            "NOISY_CHANNEL" => ResourceKind::NoisyChannel(handle),
            _ => return None,
        })
    }
}

impl fmt::Display for ResourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResourceKind::Cbit => f.write_str("[c->c]"),
            ResourceKind::QubitChannel => f.write_str("[q->q]"),
            ResourceKind::Ebit => f.write_str("[qq]"),
            ResourceKind::Cobit => f.write_str("[q->qq]"),
            ResourceKind::NoisyState(None) => f.write_str("{qq}"),
            ResourceKind::NoisyState(Some(h)) => write!(f, "{{qq:{h}}}"),
            ResourceKind::NoisyChannel(None) => f.write_str("{q->q}"),
            ResourceKind::NoisyChannel(Some(h)) => write!(f, "{{q->q:{h}}}"),
        }
    }
}

/// Formal linear combination of resources with entropic coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ResourceVector {
    terms: BTreeMap<ResourceKind, EntropicExpr>,
}

impl ResourceVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(kind: ResourceKind, coeff: EntropicExpr) -> Self {
        Self::new().with(kind, coeff)
    }

    /// Adds `coeff` to the coefficient of `kind`.
    pub fn with(mut self, kind: ResourceKind, coeff: EntropicExpr) -> Self {
        self.add_term(kind, coeff);
        self
    }

    pub fn add_term(&mut self, kind: ResourceKind, coeff: EntropicExpr) {
        let slot = self.terms.entry(kind).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn set(&mut self, kind: ResourceKind, coeff: EntropicExpr) {
        if coeff.is_zero() {
            self.terms.remove(&kind);
        } else {
            self.terms.insert(kind, coeff);
        }
    }

    pub fn remove(&mut self, kind: &ResourceKind) -> EntropicExpr {
        self.terms.remove(kind).unwrap_or_default()
    }

    pub fn get(&self, kind: &ResourceKind) -> EntropicExpr {
        self.terms.get(kind).copied().unwrap_or_default()
    }

    pub fn contains(&self, kind: &ResourceKind) -> bool {
        self.terms.contains_key(kind)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ResourceKind, &EntropicExpr)> {
        self.terms.iter()
    }

    pub fn has_noisy(&self) -> bool {
        self.terms.keys().any(ResourceKind::is_noisy)
    }

    /// Multiplies every coefficient by `k`.
    ///
    /// Vectors holding noisy resources may only be scaled by nonnegative
    /// rational constants, since noisy copies are counted in whole units.
    pub fn scale(&self, k: &EntropicExpr) -> Result<Self, AlgebraError> {
        if self.has_noisy() {
            match k.as_constant() {
                Some(c) if c >= Rational::from_integer(0) => {}
                _ => return Err(AlgebraError::NoisyScale(alloc::format!("{k}"))),
            }
        }
        let mut out = ResourceVector::new();
        for (kind, c) in &self.terms {
            out.set(kind.clone(), c.try_mul(k)?);
        }
        Ok(out)
    }

    pub fn dual(&self) -> Self {
        let mut out = ResourceVector::new();
        for (kind, c) in &self.terms {
            out.add_term(kind.dual(), *c);
        }
        out
    }

    /// Keeps only the quantum resources (drops `[c->c]`).
    pub fn quantum_part(&self) -> Self {
        self.filter(|k| !k.is_classical())
    }

    pub fn filter(&self, mut keep: impl FnMut(&ResourceKind) -> bool) -> Self {
        ResourceVector {
            terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, c)| (k.clone(), *c)).collect(),
        }
    }

    /// Rewrites every cobit as `1/2 [q->q] + 1/2 [qq]`.
    pub fn expand_cobits(&self) -> Self {
        let mut out = ResourceVector::new();
        for (kind, c) in &self.terms {
            if *kind == ResourceKind::Cobit {
                let half = c.scale(Rational::new(1, 2));
                out.add_term(ResourceKind::QubitChannel, half);
                out.add_term(ResourceKind::Ebit, half);
            } else {
                out.add_term(kind.clone(), *c);
            }
        }
        out
    }

    /// Noisy coefficients must be whole, nonnegative copies.
    pub fn check_noisy_counts(&self) -> Result<(), AlgebraError> {
        for (kind, c) in &self.terms {
            if kind.is_noisy() && c.as_count().is_none() {
                return Err(AlgebraError::FractionalNoisy {
                    kind: alloc::format!("{kind}"),
                    coeff: alloc::format!("{c}"),
                });
            }
        }
        Ok(())
    }

    /// First term whose coefficient is negative on every state, if any.
    pub fn definitely_negative_term(&self) -> Option<(&ResourceKind, &EntropicExpr)> {
        self.terms.iter().find(|(_, c)| c.is_definitely_negative())
    }
}

impl Add for ResourceVector {
    type Output = ResourceVector;
    fn add(mut self, rhs: ResourceVector) -> ResourceVector {
        for (kind, c) in rhs.terms {
            self.add_term(kind, c);
        }
        self
    }
}

impl Add for &ResourceVector {
    type Output = ResourceVector;
    fn add(self, rhs: &ResourceVector) -> ResourceVector {
        self.clone() + rhs.clone()
    }
}

impl Neg for ResourceVector {
    type Output = ResourceVector;
    fn neg(self) -> ResourceVector {
        ResourceVector {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl Sub for ResourceVector {
    type Output = ResourceVector;
    fn sub(self, rhs: ResourceVector) -> ResourceVector {
        self + (-rhs)
    }
}

impl Sub for &ResourceVector {
    type Output = ResourceVector;
    fn sub(self, rhs: &ResourceVector) -> ResourceVector {
        self.clone() - rhs.clone()
    }
}

impl FromIterator<(ResourceKind, EntropicExpr)> for ResourceVector {
    fn from_iter<T: IntoIterator<Item = (ResourceKind, EntropicExpr)>>(iter: T) -> Self {
        let mut v = ResourceVector::new();
        for (k, c) in iter {
            v.add_term(k, c);
        }
        v
    }
}

impl fmt::Display for ResourceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (kind, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *c == EntropicExpr::one() {
                write!(f, "{kind}")?;
            } else {
                write!(f, "{c} {kind}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Rational {
        Rational::new(1, 2)
    }

    #[test]
    fn ebits_add_up() {
        let one = ResourceVector::single(ResourceKind::Ebit, EntropicExpr::one());
        let two = one.clone() + one;
        assert_eq!(two.get(&ResourceKind::Ebit), EntropicExpr::int(2));
    }

    #[test]
    fn half_mutual_qubit_rates_add_to_h_a() {
        let a = ResourceVector::single(ResourceKind::QubitChannel, EntropicExpr::mutual_ae().scale(half()));
        let b = ResourceVector::single(ResourceKind::QubitChannel, EntropicExpr::mutual_ab().scale(half()));
        let sum = a + b;
        assert_eq!(sum.get(&ResourceKind::QubitChannel), EntropicExpr::h_a());
        assert_eq!(sum.len(), 1);
    }

    #[test]
    fn additive_inverse_is_empty() {
        let v = ResourceVector::single(ResourceKind::Ebit, EntropicExpr::one());
        let w = ResourceVector::single(ResourceKind::Ebit, EntropicExpr::int(-1));
        assert!((v + w).is_empty());
    }

    #[test]
    fn scaling_teleportation_inputs() {
        let tp_in = ResourceVector::new()
            .with(ResourceKind::Cbit, EntropicExpr::int(2))
            .with(ResourceKind::Ebit, EntropicExpr::one());
        let scaled = tp_in.scale(&EntropicExpr::mutual_ab().scale(half())).unwrap();
        assert_eq!(scaled.get(&ResourceKind::Cbit), EntropicExpr::mutual_ab());
        assert_eq!(scaled.get(&ResourceKind::Ebit), EntropicExpr::mutual_ab().scale(half()));
    }

    #[test]
    fn scaling_by_zero_empties() {
        let v = ResourceVector::single(ResourceKind::Cbit, EntropicExpr::h_a());
        assert!(v.scale(&EntropicExpr::zero()).unwrap().is_empty());
    }

    #[test]
    fn scaling_ebit_by_coherent_information() {
        let v = ResourceVector::single(ResourceKind::Ebit, EntropicExpr::one());
        let s = v.scale(&EntropicExpr::coherent_ab()).unwrap();
        assert_eq!(s.get(&ResourceKind::Ebit), EntropicExpr::h_b() - EntropicExpr::h_e());
    }

    #[test]
    fn nonlinear_and_noisy_scaling_rejected() {
        let v = ResourceVector::single(ResourceKind::Cbit, EntropicExpr::h_a());
        assert!(matches!(
            v.scale(&EntropicExpr::h_b()),
            Err(AlgebraError::NonlinearProduct { .. })
        ));
        let noisy = ResourceVector::single(ResourceKind::noisy_state(), EntropicExpr::one());
        assert!(matches!(noisy.scale(&EntropicExpr::h_a()), Err(AlgebraError::NoisyScale(_))));
        assert!(matches!(noisy.scale(&EntropicExpr::int(-1)), Err(AlgebraError::NoisyScale(_))));
        assert!(noisy.scale(&EntropicExpr::int(3)).is_ok());
    }

    #[test]
    fn dual_fixes_exactly_cbit_and_cobit() {
        let all = [
            ResourceKind::Cbit,
            ResourceKind::QubitChannel,
            ResourceKind::Ebit,
            ResourceKind::Cobit,
            ResourceKind::noisy_state(),
            ResourceKind::noisy_channel(),
        ];
        let fixed: alloc::vec::Vec<_> = all.iter().filter(|k| k.dual() == **k).cloned().collect();
        assert_eq!(fixed, [ResourceKind::Cbit, ResourceKind::Cobit]);
        for k in &all {
            assert_eq!(k.dual().dual(), *k);
        }
    }

    #[test]
    fn cobit_expansion() {
        let v = ResourceVector::single(ResourceKind::Cobit, EntropicExpr::int(2));
        let e = v.expand_cobits();
        assert_eq!(e.get(&ResourceKind::QubitChannel), EntropicExpr::one());
        assert_eq!(e.get(&ResourceKind::Ebit), EntropicExpr::one());
    }

    #[test]
    fn noisy_counts_must_be_whole() {
        let ok = ResourceVector::single(ResourceKind::noisy_state(), EntropicExpr::int(2));
        assert!(ok.check_noisy_counts().is_ok());
        let bad = ResourceVector::single(ResourceKind::noisy_state(), EntropicExpr::ratio(1, 2));
        assert!(bad.check_noisy_counts().is_err());
    }
}
