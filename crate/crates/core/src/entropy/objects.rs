use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::channel::{channel_state, ChannelFamily, QuantumChannel};
use super::density::{purify, DensityOp};
use super::state::{BipartitePureState, TripartitePureState};
use super::EntropyError;
use crate::algebra::Parties;

/// A concrete noisy resource: a bipartite state `rho^AB` or a channel.
#[derive(Clone, Debug, PartialEq)]
pub enum ObjectKind {
    State { rho: DensityOp, d_a: usize, d_b: usize },
    Channel(QuantumChannel),
}

impl ObjectKind {
    pub fn label(&self) -> &'static str {
        match self {
            ObjectKind::State { .. } => "state",
            ObjectKind::Channel(_) => "channel",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoisyObject {
    pub name: String,
    pub kind: ObjectKind,
}

impl NoisyObject {
    pub fn state(name: impl Into<String>, rho: DensityOp, d_a: usize, d_b: usize) -> Result<Self, EntropyError> {
        if d_a * d_b != rho.dim() {
            return Err(EntropyError::Dimension(alloc::format!(
                "split {d_a}x{d_b} does not match dimension {}",
                rho.dim()
            )));
        }
        Ok(NoisyObject { name: name.into(), kind: ObjectKind::State { rho, d_a, d_b } })
    }

    pub fn channel(name: impl Into<String>, ch: QuantumChannel) -> Self {
        NoisyObject { name: name.into(), kind: ObjectKind::Channel(ch) }
    }

    pub fn is_state(&self) -> bool {
        matches!(self.kind, ObjectKind::State { .. })
    }

    /// The associated `|psi>^ABE`: the purification for a state, or
    /// `(1 ⊗ U_N)|phi>` for a channel with `phi` defaulting to the maximally
    /// entangled state on the full input dimension.
    pub fn pure_state(&self, phi: Option<&BipartitePureState>) -> Result<TripartitePureState, EntropyError> {
        match &self.kind {
            ObjectKind::State { rho, d_a, d_b } => purify(rho, *d_a, *d_b),
            ObjectKind::Channel(ch) => match phi {
                Some(phi) => channel_state(ch, phi),
                None => channel_state(ch, &BipartitePureState::maximally_entangled(ch.d_in())),
            },
        }
    }
}

/// Named objects that noisy resource handles resolve against.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ObjectRegistry {
    objects: BTreeMap<String, NoisyObject>,
}

impl ObjectRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// The example objects: `bell`, `werner` (p = 0.5), `erasure_state`
    /// (`E_0.25` applied to half of a Bell pair), and one channel per family
    /// at a representative parameter.
    pub fn builtin() -> Self {
        let mut reg = ObjectRegistry::new();
        let bell = BipartitePureState::maximally_entangled(2).density();
        let werner = bell.mix(0.5, &DensityOp::maximally_mixed(4)).expect("convex mixture");
        let erasure = ChannelFamily::Erasure.build(0.25).expect("in domain");
        let erased = channel_state(&erasure, &BipartitePureState::maximally_entangled(2))
            .and_then(|psi| psi.reduced(Parties::AB))
            .expect("qubit input");
        for (name, rho, db) in [("bell", bell, 2), ("werner", werner, 2), ("erasure_state", erased, 3)] {
            reg.insert(NoisyObject::state(name, rho, 2, db).expect("dimensions agree"));
        }
        for (fam, p) in [
            (ChannelFamily::Identity, 0.0),
            (ChannelFamily::Erasure, 0.25),
            (ChannelFamily::Depolarizing, 0.5),
            (ChannelFamily::Dephasing, 0.3),
            (ChannelFamily::AmplitudeDamping, 0.4),
        ] {
            reg.insert(NoisyObject::channel(fam.name(), fam.build(p).expect("in domain")));
        }
        reg
    }

    /// Replaces any object with the same name.
    pub fn insert(&mut self, obj: NoisyObject) {
        self.objects.insert(obj.name.clone(), obj);
    }

    pub fn get(&self, name: &str) -> Option<&NoisyObject> {
        self.objects.get(name)
    }

    pub fn names(&self) -> Vec<String> {
        self.objects.keys().map(|k| k.to_string()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &NoisyObject> {
        self.objects.values()
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }
}
