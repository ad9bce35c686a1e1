use alloc::collections::BTreeMap;
use alloc::string::String;

use num_complex::Complex64;

use super::state::{StateVector, H, X};
use super::{CircuitError, Party};
use crate::algebra::{EntropicExpr, Mode, ResourceInequality, ResourceKind, ResourceVector};

/// Integer counts of noiseless resources consumed and produced by a run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResourceLedger {
    pub consumed: BTreeMap<ResourceKind, u64>,
    pub produced: BTreeMap<ResourceKind, u64>,
}

fn bump(map: &mut BTreeMap<ResourceKind, u64>, kind: ResourceKind, n: u64) {
    assert!(!kind.is_noisy(), "ledgers only count noiseless resources");
    if n > 0 {
        *map.entry(kind).or_insert(0) += n;
    }
}

impl ResourceLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn consume(&mut self, kind: ResourceKind, n: u64) {
        bump(&mut self.consumed, kind, n);
    }

    pub fn produce(&mut self, kind: ResourceKind, n: u64) {
        bump(&mut self.produced, kind, n);
    }

    pub fn consumed_of(&self, kind: &ResourceKind) -> u64 {
        self.consumed.get(kind).copied().unwrap_or(0)
    }

    pub fn produced_of(&self, kind: &ResourceKind) -> u64 {
        self.produced.get(kind).copied().unwrap_or(0)
    }

    /// Consumed minus produced, per kind.
    pub fn net(&self) -> BTreeMap<ResourceKind, i64> {
        let mut net = BTreeMap::new();
        for (k, n) in &self.consumed {
            *net.entry(k.clone()).or_insert(0) += *n as i64;
        }
        for (k, n) in &self.produced {
            *net.entry(k.clone()).or_insert(0) -= *n as i64;
        }
        net.retain(|_, v| *v != 0);
        net
    }

    /// Sequential composition of two runs.
    pub fn then(&self, other: &ResourceLedger) -> ResourceLedger {
        let mut out = self.clone();
        for (k, n) in &other.consumed {
            out.consume(k.clone(), *n);
        }
        for (k, n) in &other.produced {
            out.produce(k.clone(), *n);
        }
        out
    }

    /// The exact inequality `consumed >=! produced`.
    pub fn to_ri(&self, name: impl Into<String>) -> ResourceInequality {
        let side = |m: &BTreeMap<ResourceKind, u64>| {
            m.iter().fold(ResourceVector::new(), |v, (k, n)| v.with(k.clone(), EntropicExpr::int(*n as i64)))
        };
        ResourceInequality::unchecked(name, side(&self.consumed), side(&self.produced), Mode::Exact)
    }
}

/// A register together with the ledger of resources its protocol used.
/// Only the methods here may move quantum information between parties.
#[derive(Clone, Debug)]
pub struct Lab {
    pub state: StateVector,
    pub ledger: ResourceLedger,
}

impl Lab {
    pub fn new(state: StateVector) -> Self {
        Lab { state, ledger: ResourceLedger::new() }
    }

    /// Appends an Alice qubit and a Bob qubit in `|Phi+>`.
    pub fn share_ebit(&mut self) -> (usize, usize) {
        let a = self.state.add_qubit(Party::Alice);
        let b = self.state.add_qubit(Party::Bob);
        self.state.apply_1q_unchecked(a, &H);
        self.state.controlled_unchecked(a, b, &X);
        self.ledger.consume(ResourceKind::Ebit, 1);
        (a, b)
    }

    /// Hands Alice's qubit `q` to Bob.
    pub fn send_qubit(&mut self, q: usize) -> Result<(), CircuitError> {
        self.require(q, Party::Alice)?;
        self.state.set_owner(q, Party::Bob);
        self.ledger.consume(ResourceKind::QubitChannel, 1);
        Ok(())
    }

    /// `|x>^A -> |x>^A |x>^B` on Alice's `src`; returns the new Bob qubit.
    pub fn cobit(&mut self, src: usize) -> Result<usize, CircuitError> {
        self.require(src, Party::Alice)?;
        let t = self.state.add_qubit(Party::Bob);
        self.state.controlled_unchecked(src, t, &X);
        self.ledger.consume(ResourceKind::Cobit, 1);
        Ok(t)
    }

    /// Records `n` classical bits sent from Alice to Bob. The bits
    /// themselves travel as branch labels.
    pub fn send_bits(&mut self, n: u64) {
        self.ledger.consume(ResourceKind::Cbit, n);
    }

    fn require(&self, q: usize, party: Party) -> Result<(), CircuitError> {
        if self.state.owner(q)? != party {
            return Err(CircuitError::NotOwnedBy { qubit: q, party });
        }
        Ok(())
    }
}

/// Ideal cobit applied directly to a bare register, used as an oracle.
pub fn ideal_cobit(state: &StateVector, src: usize) -> StateVector {
    let mut out = state.clone();
    let t = out.add_qubit(Party::Bob);
    out.controlled_unchecked(src, t, &X);
    out
}

pub(crate) fn amp(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cobit_copies_basis_states() {
        for bit in [0u8, 1] {
            let mut lab = Lab::new(StateVector::zeros(&[Party::Alice]));
            if bit == 1 {
                lab.state.x(0).unwrap();
            }
            let t = lab.cobit(0).unwrap();
            let idx = (bit as usize) | ((bit as usize) << t);
            assert_eq!(lab.state.amplitudes()[idx], amp(1.0));
            let t2 = lab.cobit(0).unwrap();
            assert_eq!(lab.state.amplitudes()[idx | ((bit as usize) << t2)], amp(1.0));
        }
    }

    #[test]
    fn resources_respect_ownership() {
        let mut lab = Lab::new(StateVector::zeros(&[Party::Bob]));
        assert_eq!(lab.cobit(0), Err(CircuitError::NotOwnedBy { qubit: 0, party: Party::Alice }));
        assert!(lab.send_qubit(0).is_err());
        assert!(lab.ledger.consumed.is_empty());
    }

    #[test]
    fn ledger_arithmetic() {
        let mut a = ResourceLedger::new();
        a.consume(ResourceKind::QubitChannel, 1);
        a.consume(ResourceKind::Ebit, 1);
        a.produce(ResourceKind::Cobit, 2);
        let mut b = ResourceLedger::new();
        b.consume(ResourceKind::Cobit, 2);
        b.consume(ResourceKind::Ebit, 1);
        b.produce(ResourceKind::QubitChannel, 1);
        b.produce(ResourceKind::Ebit, 2);
        assert!(a.then(&b).net().is_empty());
        let text = crate::algebra::format_ri(&a.to_ri("csd"));
        assert_eq!(text, "csd: [q->q] + [qq] >=! 2 [q->qq]");
    }
}
