use num_complex::Complex64;

use super::density::{entropy, DensityOp};
use super::linalg::{CMatrix, CVector};
use super::{EntropyError, VALIDATION_TOL};
use crate::algebra::Parties;

fn check_norm(amps: &CVector) -> Result<(), EntropyError> {
    let norm = amps.norm();
    if (norm - 1.0).abs() > VALIDATION_TOL {
        return Err(EntropyError::NotNormalized(norm));
    }
    Ok(())
}

/// Pure state on `A ⊗ A'`, amplitudes row-major with `A` the slow index.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartitePureState {
    dims: (usize, usize),
    amps: CVector,
}

impl BipartitePureState {
    pub fn new(dims: (usize, usize), amps: CVector) -> Result<Self, EntropyError> {
        if dims.0 == 0 || dims.1 == 0 || amps.len() != dims.0 * dims.1 {
            return Err(EntropyError::Dimension(alloc::format!(
                "{} amplitudes for dims {}x{}",
                amps.len(),
                dims.0,
                dims.1
            )));
        }
        check_norm(&amps)?;
        Ok(BipartitePureState { dims, amps })
    }

    /// `sum_i |ii> / sqrt(d)`.
    pub fn maximally_entangled(d: usize) -> Self {
        let amp = Complex64::new(1.0 / libm::sqrt(d as f64), 0.0);
        let amps = CVector::from_fn(d * d, |k, _| if k / d == k % d { amp } else { Complex64::new(0.0, 0.0) });
        BipartitePureState { dims: (d, d), amps }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn density(&self) -> DensityOp {
        DensityOp::from_pure(&self.amps)
    }
}

/// Pure state on `A ⊗ B ⊗ E`, index `(a * d_B + b) * d_E + e`.
#[derive(Clone, Debug, PartialEq)]
pub struct TripartitePureState {
    dims: [usize; 3],
    amps: CVector,
}

impl TripartitePureState {
    pub fn new(dims: (usize, usize, usize), amps: CVector) -> Result<Self, EntropyError> {
        let dims = [dims.0, dims.1, dims.2];
        if dims.contains(&0) || amps.len() != dims.iter().product::<usize>() {
            return Err(EntropyError::Dimension(alloc::format!(
                "{} amplitudes for dims {}x{}x{}",
                amps.len(),
                dims[0],
                dims[1],
                dims[2]
            )));
        }
        check_norm(&amps)?;
        Ok(TripartitePureState { dims, amps })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.dims[0], self.dims[1], self.dims[2])
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    /// Reduced density operator on the parties in `keep`, ordered `A, B, E`.
    pub fn reduced(&self, keep: Parties) -> Result<DensityOp, EntropyError> {
        if keep.is_empty() {
            return Err(EntropyError::Dimension("empty subsystem set".into()));
        }
        let m = self.split(keep);
        Ok(DensityOp::from_matrix_unchecked(&m * m.adjoint()))
    }

    /// Entropy of the parties in `keep`, diagonalizing whichever of `M M^dagger`
    /// and `M^dagger M` is smaller. The two share their nonzero spectrum.
    pub fn entropy_of(&self, keep: Parties) -> f64 {
        if keep.is_empty() {
            return 0.0;
        }
        let m = self.split(keep);
        let gram = if m.nrows() <= m.ncols() { &m * m.adjoint() } else { m.adjoint() * &m };
        entropy(&DensityOp::from_matrix_unchecked(gram))
    }

    /// Amplitudes reshaped into a matrix with rows indexed by `keep` and
    /// columns by its complement, so the reduced state is `M M^dagger`.
    fn split(&self, keep: Parties) -> CMatrix {
        let flags = [keep.contains(Parties::A), keep.contains(Parties::B), keep.contains(Parties::E)];
        let kept: usize = (0..3).filter(|&i| flags[i]).map(|i| self.dims[i]).product();
        let traced: usize = (0..3).filter(|&i| !flags[i]).map(|i| self.dims[i]).product();
        let mut m = CMatrix::zeros(kept, traced);
        let [da, db, de] = self.dims;
        for a in 0..da {
            for b in 0..db {
                for e in 0..de {
                    let digits = [(a, da), (b, db), (e, de)];
                    let (mut k, mut t) = (0usize, 0usize);
                    for (i, &(x, d)) in digits.iter().enumerate() {
                        if flags[i] {
                            k = k * d + x;
                        } else {
                            t = t * d + x;
                        }
                    }
                    m[(k, t)] = self.amps[(a * db + b) * de + e];
                }
            }
        }
        m
    }

    /// Dimension of the given parties' joint space.
    pub fn dim_of(&self, parties: Parties) -> usize {
        let mut d = 1;
        for (i, p) in [Parties::A, Parties::B, Parties::E].into_iter().enumerate() {
            if parties.contains(p) {
                d *= self.dims[i];
            }
        }
        d
    }

    pub fn product(a: &CVector, b: &CVector, e: &CVector) -> Result<Self, EntropyError> {
        let amps = a.kronecker(b).kronecker(e);
        Self::new((a.len(), b.len(), e.len()), amps)
    }
}
