use num_traits::ToPrimitive;

use super::density::entropy;
use super::state::TripartitePureState;
use crate::algebra::{EntropicExpr, Parties, RawExpr, RawSymbol};

/// Single-party entropies of a tripartite pure state, in bits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyProfile {
    pub h_a: f64,
    pub h_b: f64,
    pub h_e: f64,
}

impl EntropyProfile {
    pub fn of(psi: &TripartitePureState) -> Self {
        EntropyProfile {
            h_a: subsystem_entropy(psi, Parties::A),
            h_b: subsystem_entropy(psi, Parties::B),
            h_e: subsystem_entropy(psi, Parties::E),
        }
    }

    pub fn mutual_ab(&self) -> f64 {
        self.h_a + self.h_b - self.h_e
    }

    pub fn mutual_ae(&self) -> f64 {
        self.h_a + self.h_e - self.h_b
    }

    pub fn coherent(&self) -> f64 {
        self.h_b - self.h_e
    }

    pub fn evaluate(&self, expr: &EntropicExpr) -> f64 {
        expr.evaluate_at(self.h_a, self.h_b, self.h_e)
    }
}

fn subsystem_entropy(psi: &TripartitePureState, parties: Parties) -> f64 {
    // reduced() only fails on an empty set, which callers never pass.
    psi.reduced(parties).map(|rho| entropy(&rho)).unwrap_or(0.0)
}

/// Value of a canonical expression on `psi`.
pub fn evaluate(expr: &EntropicExpr, psi: &TripartitePureState) -> f64 {
    EntropyProfile::of(psi).evaluate(expr)
}

/// Value of a raw symbol computed from its own definition, using the reduced
/// state of every subsystem it names rather than the purity relations.
pub fn evaluate_raw(symbol: RawSymbol, psi: &TripartitePureState) -> f64 {
    let h = |p: Parties| subsystem_entropy(psi, p);
    match symbol {
        RawSymbol::One => 1.0,
        RawSymbol::Entropy(p) if p.is_empty() => 0.0,
        // The full system is a single vector; skip the large reduced matrix.
        RawSymbol::Entropy(Parties::ABE) => psi.entropy_of(Parties::ABE),
        RawSymbol::Entropy(p) => h(p),
        RawSymbol::MutualAB => h(Parties::A) + h(Parties::B) - h(Parties::AB),
        RawSymbol::MutualAE => h(Parties::A) + h(Parties::E) - h(Parties::AE),
        RawSymbol::CoherentAB => h(Parties::B) - h(Parties::AB),
    }
}

pub fn evaluate_raw_expr(expr: &RawExpr, psi: &TripartitePureState) -> f64 {
    expr.terms
        .iter()
        .map(|(c, s)| c.to_f64().unwrap_or(f64::NAN) * evaluate_raw(*s, psi))
        .sum()
}
