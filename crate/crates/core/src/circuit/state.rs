use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{CircuitError, Party, NORM_TOL};
use crate::entropy::CMatrix;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Qubit register with an owner per qubit. Bit `q` of a basis index is
/// `(index >> q) & 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
    owners: Vec<Party>,
}

/// One outcome of a measurement in the computational basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    /// Measured bits, in the order the qubits were given.
    pub outcome: Vec<u8>,
    pub prob: f64,
    /// Post-measurement state, renormalized; the measured qubits stay in the
    /// register in their collapsed basis state.
    pub state: StateVector,
}

type Gate = [[Complex64; 2]; 2];

pub(crate) const X: Gate = [[ZERO, ONE], [ONE, ZERO]];
pub(crate) const Z: Gate = [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]];
const S2: f64 = core::f64::consts::FRAC_1_SQRT_2;
pub(crate) const H: Gate = [[Complex64::new(S2, 0.0), Complex64::new(S2, 0.0)], [
    Complex64::new(S2, 0.0),
    Complex64::new(-S2, 0.0),
]];

impl StateVector {
    /// `|0...0>` with the given owners.
    pub fn zeros(owners: &[Party]) -> Self {
        let mut amps = vec![ZERO; 1 << owners.len()];
        amps[0] = ONE;
        StateVector { amps, owners: owners.to_vec() }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>, owners: &[Party]) -> Result<Self, CircuitError> {
        if amps.len() != 1 << owners.len() {
            return Err(CircuitError::Length { got: amps.len(), qubits: owners.len() });
        }
        let sv = StateVector { amps, owners: owners.to_vec() };
        sv.check_norm()?;
        Ok(sv)
    }

    /// State with amplitude `f(index)` on every basis index.
    pub fn from_fn(owners: &[Party], f: impl Fn(usize) -> Complex64) -> Result<Self, CircuitError> {
        Self::from_amplitudes((0..1usize << owners.len()).map(f).collect(), owners)
    }

    pub fn num_qubits(&self) -> usize {
        self.owners.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn owner(&self, q: usize) -> Result<Party, CircuitError> {
        self.owners.get(q).copied().ok_or(CircuitError::NoSuchQubit(q))
    }

    pub fn owners(&self) -> &[Party] {
        &self.owners
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amps.iter().map(|a| a.norm_sqr()).sum())
    }

    pub(crate) fn check_norm(&self) -> Result<(), CircuitError> {
        let n = self.norm();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(CircuitError::NotNormalized(n));
        }
        Ok(())
    }

    /// `|<self|other>|^2`; both registers must have the same size.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr()
    }

    /// Appends a qubit in `|0>` as the new highest bit.
    pub fn add_qubit(&mut self, owner: Party) -> usize {
        self.amps.resize(self.amps.len() * 2, ZERO);
        self.owners.push(owner);
        self.owners.len() - 1
    }

    pub(crate) fn set_owner(&mut self, q: usize, owner: Party) {
        self.owners[q] = owner;
    }

    fn check_local(&self, gate: &'static str, qubits: &[usize]) -> Result<(), CircuitError> {
        let first = self.owner(qubits[0])?;
        for &q in &qubits[1..] {
            if self.owner(q)? != first {
                return Err(CircuitError::CrossParty { gate, qubits: qubits.to_vec() });
            }
        }
        Ok(())
    }

    pub(crate) fn apply_1q_unchecked(&mut self, q: usize, g: &Gate) {
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = g[0][0] * a0 + g[0][1] * a1;
                self.amps[i | bit] = g[1][0] * a0 + g[1][1] * a1;
            }
        }
    }

    pub(crate) fn controlled_unchecked(&mut self, c: usize, t: usize, g: &Gate) {
        let (cb, tb) = (1 << c, 1 << t);
        for i in 0..self.amps.len() {
            if i & cb != 0 && i & tb == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | tb]);
                self.amps[i] = g[0][0] * a0 + g[0][1] * a1;
                self.amps[i | tb] = g[1][0] * a0 + g[1][1] * a1;
            }
        }
    }

    pub fn h(&mut self, q: usize) -> Result<(), CircuitError> {
        self.owner(q)?;
        self.apply_1q_unchecked(q, &H);
        Ok(())
    }

    pub fn x(&mut self, q: usize) -> Result<(), CircuitError> {
        self.owner(q)?;
        self.apply_1q_unchecked(q, &X);
        Ok(())
    }

    pub fn z(&mut self, q: usize) -> Result<(), CircuitError> {
        self.owner(q)?;
        self.apply_1q_unchecked(q, &Z);
        Ok(())
    }

    pub fn cnot(&mut self, c: usize, t: usize) -> Result<(), CircuitError> {
        self.controlled("CNOT", c, t, &X)
    }

    pub fn cz(&mut self, c: usize, t: usize) -> Result<(), CircuitError> {
        self.controlled("CZ", c, t, &Z)
    }

    fn controlled(&mut self, name: &'static str, c: usize, t: usize, g: &Gate) -> Result<(), CircuitError> {
        if c == t {
            return Err(CircuitError::SameQubit(c));
        }
        self.check_local(name, &[c, t])?;
        self.controlled_unchecked(c, t, g);
        Ok(())
    }

    /// Pauli correction `Z^z X^x` on `q`.
    pub fn pauli(&mut self, q: usize, x: bool, z: bool) -> Result<(), CircuitError> {
        if x {
            self.x(q)?;
        }
        if z {
            self.z(q)?;
        }
        Ok(())
    }

    /// All outcomes of measuring `qubits`, including zero-probability ones
    /// (their state is left unnormalized at zero).
    pub fn branches(&self, qubits: &[usize]) -> Result<Vec<Branch>, CircuitError> {
        for &q in qubits {
            self.owner(q)?;
        }
        let mut out = Vec::with_capacity(1 << qubits.len());
        for pattern in 0..1usize << qubits.len() {
            let outcome: Vec<u8> = (0..qubits.len()).map(|j| ((pattern >> j) & 1) as u8).collect();
            let matches = |i: usize| qubits.iter().zip(&outcome).all(|(&q, &b)| ((i >> q) & 1) as u8 == b);
            let mut amps: Vec<Complex64> =
                self.amps.iter().enumerate().map(|(i, a)| if matches(i) { *a } else { ZERO }).collect();
            let prob: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
            if prob > 0.0 {
                let s = 1.0 / libm::sqrt(prob);
                amps.iter_mut().for_each(|a| *a *= s);
            }
            out.push(Branch { outcome, prob, state: StateVector { amps, owners: self.owners.clone() } });
        }
        Ok(out)
    }

    /// Amplitudes of the unfixed qubits, in increasing qubit order, with the
    /// given qubits pinned to the given bits.
    pub fn slice(&self, fixed: &[(usize, u8)]) -> Vec<Complex64> {
        let free: Vec<usize> = (0..self.num_qubits()).filter(|q| !fixed.iter().any(|(f, _)| f == q)).collect();
        let base: usize = fixed.iter().map(|&(q, b)| (b as usize) << q).sum();
        (0..1usize << free.len())
            .map(|local| {
                let idx = free.iter().enumerate().fold(base, |acc, (j, &q)| acc | (((local >> j) & 1) << q));
                self.amps[idx]
            })
            .collect()
    }

    /// Reduced density matrix of `qubits`; local bit `j` is qubit `qubits[j]`.
    pub fn reduced(&self, qubits: &[usize]) -> CMatrix {
        let k = qubits.len();
        let rest: Vec<usize> = (0..self.num_qubits()).filter(|q| !qubits.contains(q)).collect();
        let idx = |local: usize, env: usize| {
            let mut i = 0;
            for (j, &q) in qubits.iter().enumerate() {
                i |= ((local >> j) & 1) << q;
            }
            for (j, &q) in rest.iter().enumerate() {
                i |= ((env >> j) & 1) << q;
            }
            i
        };
        let mut rho = CMatrix::zeros(1 << k, 1 << k);
        for env in 0..1usize << rest.len() {
            for r in 0..1usize << k {
                let ar = self.amps[idx(r, env)];
                if ar == ZERO {
                    continue;
                }
                for c in 0..1usize << k {
                    rho[(r, c)] += ar * self.amps[idx(c, env)].conj();
                }
            }
        }
        rho
    }
}

/// `<v|rho|v>` for a state vector `v` given as amplitudes.
pub fn expectation(rho: &CMatrix, v: &[Complex64]) -> f64 {
    let mut acc = ZERO;
    for r in 0..v.len() {
        for c in 0..v.len() {
            acc += v[r].conj() * rho[(r, c)] * v[c];
        }
    }
    acc.re
}

/// `|<a|b>|^2` for amplitude slices.
pub fn overlap(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm_sqr()
}

/// Normalizes `v` in place and returns its original norm.
pub fn normalize(v: &mut [Complex64]) -> f64 {
    let n = libm::sqrt(v.iter().map(|a| a.norm_sqr()).sum());
    if n > 0.0 {
        v.iter_mut().for_each(|a| *a /= n);
    }
    n
}
