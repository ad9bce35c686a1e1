use alloc::vec::Vec;

use num_complex::Complex64;

use super::ledger::{amp, ideal_cobit, Lab, ResourceLedger};
use super::state::{expectation, normalize, overlap, StateVector};
use super::{CircuitError, Party};
use crate::algebra::ResourceKind;
use crate::entropy::{entropy, CMatrix, DensityOp, EntropyError};

use Party::{Alice, Bob};

pub type Qubit = [Complex64; 2];

pub(crate) fn bits(i: usize, q: usize) -> usize {
    (i >> q) & 1
}

/// One Bell-measurement outcome of teleportation.
#[derive(Clone, Debug, PartialEq)]
pub struct TeleportBranch {
    /// `(m0, m1)`: `m0` selects the `Z` correction, `m1` the `X` correction.
    pub outcome: (u8, u8),
    pub prob: f64,
    /// Bob's qubit after his correction.
    pub bob: Vec<Complex64>,
    pub fidelity: f64,
}

#[derive(Clone, Debug)]
pub struct TeleportRun {
    pub branches: Vec<TeleportBranch>,
    /// Bob's reduced state after Alice's operations, before any bits arrive.
    pub bob_before: CMatrix,
    pub ledger: ResourceLedger,
}

impl TeleportRun {
    pub fn min_fidelity(&self) -> f64 {
        self.branches.iter().map(|b| b.fidelity).fold(f64::INFINITY, f64::min)
    }

    /// Largest entry of `bob_before - I/2`.
    pub fn signalling(&self) -> f64 {
        let half = CMatrix::identity(2, 2) * amp(0.5);
        (&self.bob_before - half).iter().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

/// Teleports `input` (qubit 0) over an ebit (qubits 1, 2) and enumerates all
/// four measurement branches.
pub fn run_teleportation(input: Qubit) -> Result<TeleportRun, CircuitError> {
    let mut lab = Lab::new(StateVector::from_amplitudes(input.to_vec(), &[Alice])?);
    let (a, b) = lab.share_ebit();
    lab.state.cnot(0, a)?;
    lab.state.h(0)?;
    let bob_before = lab.state.reduced(&[b]);
    lab.send_bits(2);
    let mut branches = Vec::new();
    for br in lab.state.branches(&[0, a])? {
        let (m0, m1) = (br.outcome[0], br.outcome[1]);
        let mut state = br.state;
        state.pauli(b, m1 == 1, m0 == 1)?;
        let mut bob = state.slice(&[(0, m0), (a, m1)]);
        normalize(&mut bob);
        let fidelity = overlap(&bob, &input);
        branches.push(TeleportBranch { outcome: (m0, m1), prob: br.prob, bob, fidelity });
    }
    lab.ledger.produce(ResourceKind::QubitChannel, 1);
    Ok(TeleportRun { branches, bob_before, ledger: lab.ledger })
}

#[derive(Clone, Debug)]
pub struct SuperdenseRun {
    pub decoded: [bool; 2],
    /// Probability of the decoded outcome; 1 for a deterministic decoder.
    pub prob: f64,
    pub ledger: ResourceLedger,
}

/// Sends `x = (z bit, x bit)` with one qubit over an ebit.
pub fn run_superdense(x: [bool; 2]) -> Result<SuperdenseRun, CircuitError> {
    let mut lab = Lab::new(StateVector::zeros(&[]));
    let (a, b) = lab.share_ebit();
    lab.state.pauli(a, x[1], x[0])?;
    lab.send_qubit(a)?;
    lab.state.cnot(a, b)?;
    lab.state.h(a)?;
    let best = lab
        .state
        .branches(&[a, b])?
        .into_iter()
        .max_by(|p, q| p.prob.total_cmp(&q.prob))
        .expect("four branches");
    lab.ledger.produce(ResourceKind::Cbit, 2);
    Ok(SuperdenseRun { decoded: [best.outcome[0] == 1, best.outcome[1] == 1], prob: best.prob, ledger: lab.ledger })
}

/// `|Phi+>^{⊗n}` with pair `i` on qubits `2i` (Alice) and `2i + 1` (Bob).
pub fn bell_pairs(n: usize) -> StateVector {
    let owners: Vec<Party> = (0..n).flat_map(|_| [Alice, Bob]).collect();
    let a = libm::pow(0.5, n as f64 / 2.0);
    StateVector::from_fn(&owners, |i| {
        if (0..n).all(|k| bits(i, 2 * k) == bits(i, 2 * k + 1)) {
            amp(a)
        } else {
            amp(0.0)
        }
    })
    .expect("normalized by construction")
}

#[derive(Clone, Debug)]
pub struct QeRun {
    pub state: StateVector,
    pub fidelity: f64,
    /// Entropy of Bob's half of the first pair, in bits.
    pub bob_entropy: f64,
    pub ledger: ResourceLedger,
}

/// Alice prepares `n` Bell pairs locally and sends one half of each.
pub fn run_qe(n: usize) -> Result<QeRun, CircuitError> {
    let mut lab = Lab::new(StateVector::zeros(&[]));
    for _ in 0..n {
        let a = lab.state.add_qubit(Alice);
        let a2 = lab.state.add_qubit(Alice);
        lab.state.h(a)?;
        lab.state.cnot(a, a2)?;
        lab.send_qubit(a2)?;
    }
    lab.ledger.produce(ResourceKind::Ebit, n as u64);
    let fidelity = lab.state.fidelity(&bell_pairs(n));
    let bob_entropy = if n > 0 { qubit_entropy(&lab.state, &[1])? } else { 0.0 };
    Ok(QeRun { state: lab.state, fidelity, bob_entropy, ledger: lab.ledger })
}

pub(crate) fn qubit_entropy(state: &StateVector, qubits: &[usize]) -> Result<f64, CircuitError> {
    let rho = DensityOp::new(state.reduced(qubits)).map_err(|e: EntropyError| CircuitError::Entropy(e))?;
    Ok(entropy(&rho))
}

#[derive(Clone, Debug)]
pub struct CobitRun {
    pub state: StateVector,
    pub bob_entropy: f64,
    pub ledger: ResourceLedger,
}

/// One cobit on Alice's single qubit `input`.
pub fn run_cobit(input: Qubit) -> Result<CobitRun, CircuitError> {
    let mut lab = Lab::new(StateVector::from_amplitudes(input.to_vec(), &[Alice])?);
    let t = lab.cobit(0)?;
    let bob_entropy = qubit_entropy(&lab.state, &[t])?;
    Ok(CobitRun { state: lab.state, bob_entropy, ledger: lab.ledger })
}

#[derive(Clone, Debug)]
pub struct CoherentSdRun {
    pub state: StateVector,
    /// Overlap with two ideal cobits applied to the message bits.
    pub fidelity: f64,
    pub ledger: ResourceLedger,
}

/// Two ideal cobits on message qubits 0 and 1; copies land on qubits 2, 3.
pub fn double_cobit_oracle(message: &[Complex64]) -> Result<StateVector, CircuitError> {
    let msg = StateVector::from_amplitudes(message.to_vec(), &[Alice, Alice])?;
    Ok(ideal_cobit(&ideal_cobit(&msg, 0), 1))
}

/// Coherent dense coding: the encoding is controlled by a two-qubit message
/// register and Bob decodes without measuring.
pub fn run_coherent_sd(message: &[Complex64]) -> Result<CoherentSdRun, CircuitError> {
    let mut lab = Lab::new(StateVector::from_amplitudes(message.to_vec(), &[Alice, Alice])?);
    let (a, b) = lab.share_ebit();
    lab.state.cnot(1, a)?;
    lab.state.cz(0, a)?;
    lab.send_qubit(a)?;
    lab.state.cnot(a, b)?;
    lab.state.h(a)?;
    lab.ledger.produce(ResourceKind::Cobit, 2);
    let fidelity = lab.state.fidelity(&double_cobit_oracle(message)?);
    Ok(CoherentSdRun { state: lab.state, fidelity, ledger: lab.ledger })
}

#[derive(Clone, Debug)]
pub struct CoherentTpRun {
    pub state: StateVector,
    /// Overlap of the whole register with `Phi+(0,3) ⊗ Phi+(1,4) ⊗ input(2)`.
    pub fidelity: f64,
    /// `<input|rho_Bob|input>` on qubit 2.
    pub output_fidelity: f64,
    /// Overlap of qubits 0, 1, 3, 4 with two Bell pairs.
    pub residual_fidelity: f64,
    pub ledger: ResourceLedger,
}

pub fn coherent_tp_target(input: Qubit) -> StateVector {
    StateVector::from_fn(&[Alice, Alice, Bob, Bob, Bob], |i| {
        if bits(i, 0) == bits(i, 3) && bits(i, 1) == bits(i, 4) {
            input[bits(i, 2)] * 0.5
        } else {
            amp(0.0)
        }
    })
    .expect("normalized by construction")
}

/// Teleportation with both classical messages sent through cobits and Bob's
/// corrections controlled by the copies.
pub fn run_coherent_tp(input: Qubit) -> Result<CoherentTpRun, CircuitError> {
    let mut lab = Lab::new(StateVector::from_amplitudes(input.to_vec(), &[Alice])?);
    let (a, b) = lab.share_ebit();
    lab.state.cnot(0, a)?;
    lab.state.h(0)?;
    let c0 = lab.cobit(0)?;
    let c1 = lab.cobit(a)?;
    lab.state.cnot(c1, b)?;
    lab.state.cz(c0, b)?;
    lab.ledger.produce(ResourceKind::QubitChannel, 1);
    lab.ledger.produce(ResourceKind::Ebit, 2);

    let fidelity = lab.state.fidelity(&coherent_tp_target(input));
    let output_fidelity = expectation(&lab.state.reduced(&[b]), &input);
    // Local bit order (0, a, c0, c1): pairs are bits (0, 2) and (1, 3).
    let pairs: Vec<Complex64> =
        (0..16).map(|l| if bits(l, 0) == bits(l, 2) && bits(l, 1) == bits(l, 3) { amp(0.5) } else { amp(0.0) }).collect();
    let residual_fidelity = expectation(&lab.state.reduced(&[0, a, c0, c1]), &pairs);
    Ok(CoherentTpRun { state: lab.state, fidelity, output_fidelity, residual_fidelity, ledger: lab.ledger })
}

#[derive(Clone, Debug)]
pub struct CobitEquivalence {
    pub forward: CoherentSdRun,
    pub reverse: CoherentTpRun,
    /// Both directions run back to back.
    pub combined: ResourceLedger,
}

impl CobitEquivalence {
    pub fn net_zero(&self) -> bool {
        self.combined.net().is_empty()
    }

    pub fn min_fidelity(&self) -> f64 {
        self.forward.fidelity.min(self.reverse.fidelity)
    }
}

/// Runs coherent dense coding on a uniform message and coherent
/// teleportation on `input`, and composes their ledgers.
pub fn verify_cobit_equivalence(input: Qubit) -> Result<CobitEquivalence, CircuitError> {
    let forward = run_coherent_sd(&[amp(0.5); 4])?;
    let reverse = run_coherent_tp(input)?;
    let combined = forward.ledger.then(&reverse.ledger);
    Ok(CobitEquivalence { forward, reverse, combined })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_ri;
    use crate::derivation::Registry;
    use crate::entropy::random_pure_qubit;
    use crate::rng::SeededRng;

    const S2: f64 = core::f64::consts::FRAC_1_SQRT_2;

    fn random_qubit(rng: &mut SeededRng) -> Qubit {
        let v = random_pure_qubit(rng);
        [v[0], v[1]]
    }

    #[test]
    fn teleportation_reproduces_inputs() {
        let reg = Registry::standard();
        for input in [[amp(1.0), amp(0.0)], [amp(S2), amp(S2)]] {
            let run = run_teleportation(input).unwrap();
            assert!(run.min_fidelity() > 1.0 - 1e-12);
            assert!(run.signalling() < 1e-12);
            assert!(run.ledger.to_ri("TP").same_statement(reg.tp()));
        }
        let mut rng = SeededRng::new(1);
        for _ in 0..50 {
            let run = run_teleportation(random_qubit(&mut rng)).unwrap();
            assert!(run.min_fidelity() >= 1.0 - 1e-10);
            for b in &run.branches {
                assert!((b.prob - 0.25).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn superdense_decodes_every_message() {
        let reg = Registry::standard();
        for x in [[false, false], [false, true], [true, false], [true, true]] {
            let run = run_superdense(x).unwrap();
            assert_eq!(run.decoded, x);
            assert!((run.prob - 1.0).abs() < 1e-12);
            assert!(run.ledger.to_ri("SD").same_statement(reg.sd()));
        }
    }

    #[test]
    fn qe_makes_bell_pairs() {
        let run = run_qe(1).unwrap();
        assert!(run.fidelity > 1.0 - 1e-12);
        assert!((run.bob_entropy - 1.0).abs() < 1e-12);
        assert!(run.ledger.to_ri("QE").same_statement(Registry::standard().qe()));
        let three = run_qe(3).unwrap();
        assert!(three.fidelity > 1.0 - 1e-12);
        assert_eq!(three.ledger.produced_of(&ResourceKind::Ebit), 3);
    }

    #[test]
    fn cobit_on_plus_makes_a_bell_pair() {
        let run = run_cobit([amp(S2), amp(S2)]).unwrap();
        assert!(run.state.fidelity(&bell_pairs(1)) > 1.0 - 1e-12);
        assert!((run.bob_entropy - 1.0).abs() < 1e-12);
        let zero = run_cobit([amp(1.0), amp(0.0)]).unwrap();
        assert_eq!(zero.state.amplitudes()[0], amp(1.0));
        assert!(zero.bob_entropy.abs() < 1e-12);
    }

    #[test]
    fn coherent_sd_matches_double_cobit() {
        for k in 0..4 {
            let mut msg = [amp(0.0); 4];
            msg[k] = amp(1.0);
            let run = run_coherent_sd(&msg).unwrap();
            assert!(run.fidelity > 1.0 - 1e-12, "basis {k}");
        }
        let uniform = run_coherent_sd(&[amp(0.5); 4]).unwrap();
        assert!(uniform.fidelity > 1.0 - 1e-12);
        // Message qubits (0, 1) paired with copies (2, 3); relabel to pairs.
        let relabeled = StateVector::from_fn(&[Alice, Bob, Alice, Bob], |i| {
            let j = bits(i, 0) | bits(i, 2) << 1 | bits(i, 1) << 2 | bits(i, 3) << 3;
            uniform.state.amplitudes()[j]
        })
        .unwrap();
        assert!(relabeled.fidelity(&bell_pairs(2)) > 1.0 - 1e-10);
        let zero = run_coherent_sd(&[amp(1.0), amp(0.0), amp(0.0), amp(0.0)]).unwrap();
        assert!(qubit_entropy(&zero.state, &[2, 3]).unwrap() < 1e-12);
        let expected = parse_ri("[q->q] + [qq] >=! 2 [q->qq]").unwrap();
        assert!(uniform.ledger.to_ri("").same_statement(&expected));
    }

    #[test]
    fn coherent_tp_outputs_input_and_two_ebits() {
        let one = run_coherent_tp([amp(0.0), amp(1.0)]).unwrap();
        assert!(one.fidelity > 1.0 - 1e-12);
        let mut rng = SeededRng::new(2);
        for _ in 0..50 {
            let run = run_coherent_tp(random_qubit(&mut rng)).unwrap();
            assert!(run.fidelity >= 1.0 - 1e-10);
            assert!(run.output_fidelity >= 1.0 - 1e-10);
            assert!(run.residual_fidelity >= 1.0 - 1e-10);
        }
        let expected = parse_ri("2 [q->qq] + [qq] >=! [q->q] + 2 [qq]").unwrap();
        assert!(one.ledger.to_ri("").same_statement(&expected));
    }

    #[test]
    fn cobit_equivalence_nets_to_zero() {
        let eq = verify_cobit_equivalence([amp(S2), amp(S2)]).unwrap();
        assert!(eq.net_zero());
        assert!(eq.min_fidelity() > 1.0 - 1e-10);
        assert_eq!(eq.forward.ledger.produced_of(&ResourceKind::Cobit), 2);
        assert_eq!(eq.reverse.ledger.consumed_of(&ResourceKind::Ebit), 1);
        assert_eq!(eq.reverse.ledger.produced_of(&ResourceKind::Ebit), 2);
    }
}
