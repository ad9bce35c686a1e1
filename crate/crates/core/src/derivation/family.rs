use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::ops::{append, apply_qe_fraction, apply_rule_i, apply_rule_o, cancel, prepend, waste};
use super::DerivationError;
use crate::algebra::{EntropicExpr, Mode, Rational, ResourceInequality, ResourceKind, ResourceVector, RuleFlags};

fn half(e: EntropicExpr) -> EntropicExpr {
    e.scale(Rational::new(1, 2))
}

/// The five primitive inequalities everything else is derived from.
#[derive(Clone, Debug)]
pub struct Registry {
    entries: BTreeMap<String, ResourceInequality>,
}

impl Registry {
    pub fn standard() -> Self {
        let q = || ResourceKind::QubitChannel;
        let e = || ResourceKind::Ebit;
        let c = || ResourceKind::Cbit;
        let one = EntropicExpr::one;

        let mother = ResourceInequality::unchecked(
            "mother",
            ResourceVector::new()
                .with(q(), half(EntropicExpr::mutual_ae()))
                .with(ResourceKind::noisy_state(), one()),
            ResourceVector::single(e(), half(EntropicExpr::mutual_ab())),
            Mode::Asymptotic,
        );
        let father = ResourceInequality::unchecked(
            "father",
            ResourceVector::new()
                .with(e(), half(EntropicExpr::mutual_ae()))
                .with(ResourceKind::noisy_channel(), one()),
            ResourceVector::single(q(), half(EntropicExpr::mutual_ab())),
            Mode::Asymptotic,
        );
        // The circuit lab certifies the teleportation message as uniform and
        // decoupled (rule I) and the dense-coding message as decoupled (rule O).
        let tp = ResourceInequality::unchecked(
            "TP",
            ResourceVector::new().with(c(), EntropicExpr::int(2)).with(e(), one()),
            ResourceVector::single(q(), one()),
            Mode::Exact,
        )
        .with_flags(RuleFlags::RULE_I);
        let sd = ResourceInequality::unchecked(
            "SD",
            ResourceVector::new().with(q(), one()).with(e(), one()),
            ResourceVector::single(c(), EntropicExpr::int(2)),
            Mode::Exact,
        )
        .with_flags(RuleFlags::RULE_O);
        let qe = ResourceInequality::unchecked(
            "QE",
            ResourceVector::single(q(), one()),
            ResourceVector::single(e(), one()),
            Mode::Exact,
        );
        let entries = [mother, father, tp, sd, qe].into_iter().map(|ri| (ri.name.clone(), ri)).collect();
        Registry { entries }
    }

    pub fn get(&self, name: &str) -> Option<&ResourceInequality> {
        self.entries.get(name)
    }

    pub fn mother(&self) -> &ResourceInequality {
        &self.entries["mother"]
    }

    pub fn father(&self) -> &ResourceInequality {
        &self.entries["father"]
    }

    pub fn tp(&self) -> &ResourceInequality {
        &self.entries["TP"]
    }

    pub fn sd(&self) -> &ResourceInequality {
        &self.entries["SD"]
    }

    pub fn qe(&self) -> &ResourceInequality {
        &self.entries["QE"]
    }

    /// Primitives in presentation order.
    pub fn primitives(&self) -> Vec<&ResourceInequality> {
        ["mother", "father", "TP", "SD", "QE"].iter().map(|n| &self.entries[*n]).collect()
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::standard()
    }
}

/// Derived inequalities keyed by name.
#[derive(Clone, Debug)]
pub struct Family {
    pub entries: BTreeMap<String, ResourceInequality>,
}

impl Family {
    pub const CHILDREN: [&'static str; 5] = ["eq1", "eq2", "eq3", "eq4", "eq5"];

    pub fn get(&self, name: &str) -> Option<&ResourceInequality> {
        self.entries.get(name)
    }

    pub fn children(&self) -> Vec<&ResourceInequality> {
        Self::CHILDREN.iter().map(|n| &self.entries[*n]).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &ResourceInequality)> {
        self.entries.iter()
    }
}

fn derive_all(reg: &Registry) -> Result<Family, DerivationError> {
    let mother = reg.mother();
    let father = reg.father();
    let ab = EntropicExpr::mutual_ab;
    let ae = EntropicExpr::mutual_ae;
    let ic = EntropicExpr::coherent_ab();
    let q = ResourceKind::QubitChannel;
    let e = ResourceKind::Ebit;

    // Noisy teleportation. Its only known implementation is the one built
    // here, which is coherent by construction, hence the rule I flag.
    let eq1 = cancel(&append(mother, reg.tp(), &half(ab()))?, &q, &half(ae()))?
        .renamed("eq1")
        .with_flags(RuleFlags::RULE_I);
    // Hashing inequality.
    let eq2 = cancel(&prepend(mother, reg.tp(), &half(ae()))?, &e, &half(ae()))?
        .renamed("eq2")
        .with_flags(RuleFlags::RULE_I);
    let eq1_via_eq2 = append(&eq2, reg.tp(), &ic)?.renamed("eq1_via_eq2");
    // Noisy dense coding.
    let eq3 = append(mother, reg.sd(), &half(ab()))?
        .renamed("eq3")
        .with_flags(RuleFlags::RULE_O);
    // Entanglement-assisted classical communication.
    let eq4 = append(father, reg.sd(), &half(ab()))?
        .renamed("eq4")
        .with_flags(RuleFlags::RULE_O);
    // Quantum channel capacity.
    let eq5 = cancel(&apply_qe_fraction(father, reg.qe(), &half(ae()))?, &e, &half(ae()))?.renamed("eq5");

    let mother_via_eq2 = apply_rule_i(&eq2)?.renamed("mother_via_eq2");
    let mother_via_eq1 = cancel(&apply_rule_i(&eq1)?, &q, &ic)?.renamed("mother_via_eq1");
    let mother_via_eq3 = cancel(&apply_rule_o(&eq3)?, &q, &half(ab()))?.renamed("mother_via_eq3");
    let father_via_eq4 = cancel(&apply_rule_o(&eq4)?, &e, &half(ab()))?.renamed("father_via_eq4");

    let entries = [
        eq1,
        eq2,
        eq3,
        eq4,
        eq5,
        eq1_via_eq2,
        mother_via_eq1,
        mother_via_eq2,
        mother_via_eq3,
        father_via_eq4,
    ]
    .into_iter()
    .map(|ri| (ri.name.clone(), ri))
    .collect();
    Ok(Family { entries })
}

/// Derives the five children and the reverse (coherent) derivations of the
/// parents, each with its full trace back to the primitives.
pub fn derive_family() -> Family {
    derive_all(&Registry::standard()).expect("scripted derivations of the standard registry are valid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualityRelation {
    /// `dual(left) == right` as statements.
    Exact,
    /// Equal after dropping classical resources from both.
    QuantumParts,
    /// `dual(waste(left, wasted)) == right`.
    AfterWaste,
}

#[derive(Clone, Debug)]
pub struct DualityEdge {
    pub left: String,
    pub right: String,
    pub relation: DualityRelation,
    pub wasted: ResourceVector,
    /// The inequality actually dualized (after any derivation and waste).
    pub witness: ResourceInequality,
    pub target: ResourceInequality,
}

impl DualityEdge {
    pub fn holds(&self) -> bool {
        let d = self.witness.dual();
        match self.relation {
            DualityRelation::Exact | DualityRelation::AfterWaste => d.same_statement(&self.target),
            DualityRelation::QuantumParts => {
                d.lhs.quantum_part() == self.target.lhs.quantum_part()
                    && d.rhs.quantum_part() == self.target.rhs.quantum_part()
            }
        }
    }
}

/// The dashed (duality) and dash-dotted (almost-duality) edges of the tree.
pub fn duality_edges(reg: &Registry, fam: &Family) -> Result<Vec<DualityEdge>, DerivationError> {
    let cbits = |k: EntropicExpr| ResourceVector::single(ResourceKind::Cbit, k);
    let exact = |l: &ResourceInequality, r: &ResourceInequality, rel| DualityEdge {
        left: l.name.clone(),
        right: r.name.clone(),
        relation: rel,
        wasted: ResourceVector::new(),
        witness: l.clone(),
        target: r.clone(),
    };
    let wasteful = |l: &ResourceInequality, base: &ResourceInequality, v: ResourceVector, r: &ResourceInequality| {
        Ok::<_, DerivationError>(DualityEdge {
            left: l.name.clone(),
            right: r.name.clone(),
            relation: DualityRelation::AfterWaste,
            witness: waste(base, &v)?,
            wasted: v,
            target: r.clone(),
        })
    };
    let eq = |n: &str| &fam.entries[n];

    // eq5 followed by QE on its whole output gives {q->q} >= Ic [qq]; wasting
    // I(A;B) cbits on that is the dual of noisy teleportation.
    let eq5_then_qe = append(eq("eq5"), reg.qe(), &EntropicExpr::coherent_ab())?;

    Ok(alloc::vec![
        exact(reg.mother(), reg.father(), DualityRelation::Exact),
        exact(reg.sd(), reg.sd(), DualityRelation::Exact),
        exact(eq("eq3"), eq("eq4"), DualityRelation::QuantumParts),
        wasteful(reg.qe(), reg.qe(), cbits(EntropicExpr::int(2)), reg.tp())?,
        wasteful(eq("eq5"), eq("eq5"), cbits(EntropicExpr::mutual_ae()), eq("eq2"))?,
        wasteful(eq("eq5"), &eq5_then_qe, cbits(EntropicExpr::mutual_ab()), eq("eq1"))?,
    ])
}
