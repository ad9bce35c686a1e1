use num_complex::Complex64;

use super::linalg::{hermitian_deviation, hermitian_eigen, hermitian_eigenvalues, CMatrix, CVector};
use super::state::TripartitePureState;
use super::{EntropyError, EIGEN_FLOOR, VALIDATION_TOL};

/// A validated density operator: Hermitian, unit trace and positive
/// semidefinite, each to within `1e-10`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOp {
    matrix: CMatrix,
}

impl DensityOp {
    pub fn new(matrix: CMatrix) -> Result<Self, EntropyError> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(EntropyError::NotSquare { rows: matrix.nrows(), cols: matrix.ncols() });
        }
        let dev = hermitian_deviation(&matrix);
        if dev > VALIDATION_TOL {
            return Err(EntropyError::NotHermitian(dev));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > VALIDATION_TOL || tr.im.abs() > VALIDATION_TOL {
            return Err(EntropyError::BadTrace(tr.re));
        }
        let min = hermitian_eigenvalues(&matrix).into_iter().fold(f64::INFINITY, f64::min);
        if min < -VALIDATION_TOL {
            return Err(EntropyError::NegativeEigenvalue(min));
        }
        Ok(DensityOp { matrix })
    }

    /// For matrices that are density operators by construction (partial
    /// traces of unit vectors).
    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        DensityOp { matrix }
    }

    /// `|v><v|` for a unit vector `v`.
    pub fn from_pure(v: &CVector) -> Self {
        DensityOp { matrix: v * v.adjoint() }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityOp { matrix: CMatrix::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0) }
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self, EntropyError> {
        let n = probs.len();
        Self::new(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(probs[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> alloc::vec::Vec<f64> {
        hermitian_eigen(&self.matrix).0
    }

    /// `Tr(rho sigma)` for a pure `sigma = |v><v|`, i.e. `<v|rho|v>`.
    pub fn fidelity_with_pure(&self, v: &CVector) -> f64 {
        (v.adjoint() * &self.matrix * v)[(0, 0)].re
    }

    /// Convex mixture `p * self + (1 - p) * other`.
    pub fn mix(&self, p: f64, other: &DensityOp) -> Result<Self, EntropyError> {
        Self::new(&self.matrix * Complex64::new(p, 0.0) + &other.matrix * Complex64::new(1.0 - p, 0.0))
    }
}

/// Von Neumann entropy in bits, `-sum lambda log2 lambda` over eigenvalues
/// above the floor, clamped to `[0, log2 dim]`.
pub fn entropy(rho: &DensityOp) -> f64 {
    let h: f64 = hermitian_eigenvalues(rho.matrix())
        .into_iter()
        .filter(|&l| l > EIGEN_FLOOR)
        .map(|l| -l * libm::log2(l))
        .sum();
    h.clamp(0.0, libm::log2(rho.dim() as f64))
}

/// Purifies a bipartite `rho` on `A ⊗ B` into `|psi>` on `A ⊗ B ⊗ E` with
/// `d_E` equal to the numerical rank of `rho`.
///
/// Eigenvectors are phase-fixed (largest component real and positive) and
/// taken in descending eigenvalue order, so the result is deterministic.
pub fn purify(rho: &DensityOp, d_a: usize, d_b: usize) -> Result<TripartitePureState, EntropyError> {
    if d_a * d_b != rho.dim() {
        return Err(EntropyError::Dimension(alloc::format!(
            "split {d_a}x{d_b} does not match dimension {}",
            rho.dim()
        )));
    }
    let (values, vectors) = hermitian_eigen(rho.matrix());
    let kept: alloc::vec::Vec<usize> = (0..values.len()).filter(|&i| values[i] >= EIGEN_FLOOR).collect();
    let d_e = kept.len().max(1);
    let n = rho.dim();
    let mut amps = CVector::zeros(n * d_e);
    for (slot, &i) in kept.iter().enumerate() {
        let col = vectors.column(i);
        let pivot = col.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap_or_default();
        let phase = if pivot.norm() > 0.0 { pivot.conj() / pivot.norm() } else { Complex64::new(1.0, 0.0) };
        let weight = libm::sqrt(values[i]);
        for ab in 0..n {
            amps[ab * d_e + slot] = col[ab] * phase * weight;
        }
    }
    // Renormalize away the mass of the dropped eigenvalues.
    let norm = amps.norm();
    if norm > 0.0 {
        amps /= Complex64::new(norm, 0.0);
    }
    TripartitePureState::new((d_a, d_b, d_e), amps)
}
