//! Circuit-level views of the two coherence rules.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::ledger::{amp, Lab, ResourceLedger};
use super::protocols::{bits, run_coherent_tp, Qubit};
use super::state::{normalize, overlap, StateVector};
use super::{CircuitError, Party};
use crate::algebra::ResourceKind;

use Party::{Alice, Bob};

#[derive(Clone, Debug)]
pub struct RuleIDemo {
    /// Probability of Bell outcome `x = m0 + 2 m1`.
    pub distribution: [f64; 4],
    /// Smallest `|<theta_x|theta_x'>|^2` over outcome pairs after correction.
    pub min_decoupling: f64,
    /// Coherent run against `(sum_x sqrt(p_x)|x>|x>) ⊗ |theta>`.
    pub coherent_fidelity: f64,
    pub ledger: ResourceLedger,
}

impl RuleIDemo {
    pub fn max_uniform_deviation(&self) -> f64 {
        self.distribution.iter().map(|p| (p - 0.25).abs()).fold(0.0, f64::max)
    }

    pub fn passes(&self) -> bool {
        self.max_uniform_deviation() <= 1e-12 && self.min_decoupling >= 1.0 - 1e-12 && self.coherent_fidelity >= 1.0 - 1e-12
    }
}

/// Teleportation as a rule I witness: the Bell outcome is uniform, every
/// corrected branch leaves Bob with the same `|theta>`, and running the
/// protocol with cobits yields the coherent target exactly.
pub fn demo_rule_i_on_tp(input: Qubit) -> Result<RuleIDemo, CircuitError> {
    let mut lab = Lab::new(StateVector::from_amplitudes(input.to_vec(), &[Alice])?);
    let (a, b) = lab.share_ebit();
    lab.state.cnot(0, a)?;
    lab.state.h(0)?;
    let mut distribution = [0.0; 4];
    let mut thetas: Vec<Vec<Complex64>> = Vec::new();
    for br in lab.state.branches(&[0, a])? {
        let (m0, m1) = (br.outcome[0], br.outcome[1]);
        distribution[(m0 + 2 * m1) as usize] = br.prob;
        let mut state = br.state;
        state.pauli(b, m1 == 1, m0 == 1)?;
        let mut theta = state.slice(&[(0, m0), (a, m1)]);
        normalize(&mut theta);
        thetas.push(theta);
    }
    let mut min_decoupling = 1.0f64;
    for t in &thetas {
        for u in &thetas {
            min_decoupling = min_decoupling.min(overlap(t, u));
        }
    }

    let coherent = run_coherent_tp(input)?;
    let theta = &thetas[0];
    // Register (0, a) and copies (3, 4); theta on Bob's qubit 2.
    let target = StateVector::from_fn(&[Alice, Alice, Bob, Bob, Bob], |i| {
        if bits(i, 0) == bits(i, 3) && bits(i, 1) == bits(i, 4) {
            let x = bits(i, 0) + 2 * bits(i, 1);
            theta[bits(i, 2)] * libm::sqrt(distribution[x])
        } else {
            amp(0.0)
        }
    })?;
    let coherent_fidelity = coherent.state.fidelity(&target);
    Ok(RuleIDemo { distribution, min_decoupling, coherent_fidelity, ledger: coherent.ledger })
}

#[derive(Clone, Debug)]
pub struct RuleODemo {
    /// Smallest `|<theta_x|theta_x'>|^2` of Bob's residual pair over messages.
    pub min_residual_overlap: f64,
    /// Smallest probability that Bob's copy register reads the sent message.
    pub min_copy_prob: f64,
    /// Coherent run on a uniform message against `sum_x |x>|x> ⊗ |Phi+>/2`.
    pub coherent_fidelity: f64,
    /// Largest deviation of the Gram matrix of the coherent outputs on the
    /// four basis messages from the identity.
    pub unitarity_deviation: f64,
    pub ledger: ResourceLedger,
}

impl RuleODemo {
    pub fn passes(&self) -> bool {
        self.min_residual_overlap >= 1.0 - 1e-12
            && self.min_copy_prob >= 1.0 - 1e-12
            && self.coherent_fidelity >= 1.0 - 1e-12
            && self.unitarity_deviation <= 1e-12
    }
}

/// Bob's side of dense coding without measurement: decode the Bell index,
/// copy it into fresh qubits, undo the decoding and apply `(U_x^T)^dagger` to
/// his half, controlled by the copies. Returns the copy qubits.
fn bob_copy_and_restore(state: &mut StateVector, a: usize, b: usize) -> Result<(usize, usize), CircuitError> {
    state.cnot(a, b)?;
    state.h(a)?;
    let c0 = state.add_qubit(Bob);
    let c1 = state.add_qubit(Bob);
    state.cnot(a, c0)?;
    state.cnot(b, c1)?;
    state.h(a)?;
    state.cnot(a, b)?;
    state.cnot(c1, b)?;
    state.cz(c0, b)?;
    Ok((c0, c1))
}

fn phi_plus_pair() -> [Complex64; 4] {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    [amp(s), amp(0.0), amp(0.0), amp(s)]
}

/// Dense coding as a rule O witness: after Bob extracts the message, his
/// remaining pair is `|Phi+>` for every message, and the controlled version
/// is a unitary producing `sum_x c_x |x>^A |x>^B ⊗ |Phi+>`.
pub fn demo_rule_o_on_sd() -> Result<RuleODemo, CircuitError> {
    let phi = phi_plus_pair();
    let mut residuals: Vec<Vec<Complex64>> = Vec::new();
    let mut min_copy_prob = 1.0f64;
    for x in 0..4usize {
        let mut lab = Lab::new(StateVector::zeros(&[]));
        let (a, b) = lab.share_ebit();
        lab.state.pauli(a, bits(x, 1) == 1, bits(x, 0) == 1)?;
        lab.send_qubit(a)?;
        let (c0, c1) = bob_copy_and_restore(&mut lab.state, a, b)?;
        let mut theta = lab.state.slice(&[(c0, bits(x, 0) as u8), (c1, bits(x, 1) as u8)]);
        let norm = normalize(&mut theta);
        min_copy_prob = min_copy_prob.min(norm * norm);
        residuals.push(theta);
    }
    let mut min_residual_overlap = 1.0f64;
    for t in &residuals {
        min_residual_overlap = min_residual_overlap.min(overlap(t, &phi));
        for u in &residuals {
            min_residual_overlap = min_residual_overlap.min(overlap(t, u));
        }
    }

    let coherent = |message: &[Complex64]| -> Result<(StateVector, ResourceLedger), CircuitError> {
        let mut lab = Lab::new(StateVector::from_amplitudes(message.to_vec(), &[Alice, Alice])?);
        let (a, b) = lab.share_ebit();
        lab.state.cnot(1, a)?;
        lab.state.cz(0, a)?;
        lab.send_qubit(a)?;
        bob_copy_and_restore(&mut lab.state, a, b)?;
        lab.ledger.produce(ResourceKind::Cobit, 2);
        Ok((lab.state, lab.ledger))
    };
    // Qubits: message (0, 1), pair (2, 3), copies (4, 5).
    let (uniform, ledger) = coherent(&[amp(0.5); 4])?;
    let target = StateVector::from_fn(&[Alice, Alice, Bob, Bob, Bob, Bob], |i| {
        if bits(i, 0) == bits(i, 4) && bits(i, 1) == bits(i, 5) {
            phi[bits(i, 2) + 2 * bits(i, 3)] * 0.5
        } else {
            amp(0.0)
        }
    })?;
    let coherent_fidelity = uniform.fidelity(&target);

    let mut outputs = Vec::new();
    for k in 0..4 {
        let mut msg = [amp(0.0); 4];
        msg[k] = amp(1.0);
        outputs.push(coherent(&msg)?.0);
    }
    let mut unitarity_deviation = 0.0f64;
    for (i, u) in outputs.iter().enumerate() {
        for (j, v) in outputs.iter().enumerate() {
            let ip: Complex64 = u.amplitudes().iter().zip(v.amplitudes()).map(|(p, q)| p.conj() * q).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            unitarity_deviation = unitarity_deviation.max((ip - amp(want)).norm());
        }
    }
    Ok(RuleODemo { min_residual_overlap, min_copy_prob, coherent_fidelity, unitarity_deviation, ledger })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_i_demo_on_plus() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let demo = demo_rule_i_on_tp([amp(s), amp(s)]).unwrap();
        for p in demo.distribution {
            assert!((p - 0.25).abs() < 1e-12);
        }
        assert!(demo.min_decoupling >= 1.0 - 1e-12);
        assert!(demo.coherent_fidelity >= 1.0 - 1e-12);
        assert!(demo.passes());
    }

    #[test]
    fn rule_o_demo_residual_is_message_independent() {
        let demo = demo_rule_o_on_sd().unwrap();
        assert!(demo.min_residual_overlap >= 1.0 - 1e-12, "{demo:?}");
        assert!(demo.min_copy_prob >= 1.0 - 1e-12);
        assert!(demo.coherent_fidelity >= 1.0 - 1e-12);
        assert!(demo.unitarity_deviation <= 1e-12);
        assert_eq!(demo.ledger.produced_of(&ResourceKind::Cobit), 2);
    }
}
