use num_complex::Complex64;

use super::density::{purify, DensityOp};
use super::linalg::{CMatrix, CVector};
use super::state::TripartitePureState;
use crate::rng::SeededRng;

fn gaussian_matrix(rng: &mut SeededRng, rows: usize, cols: usize) -> CMatrix {
    // Row-major draw order, independent of nalgebra's storage layout.
    let mut m = CMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m[(r, c)] = rng.complex_gaussian();
        }
    }
    m
}

/// `G G^dagger / Tr(G G^dagger)` with `G` a `d x d` complex Gaussian matrix.
pub fn random_density(rng: &mut SeededRng, d: usize) -> DensityOp {
    let g = gaussian_matrix(rng, d, d);
    let gg = &g * g.adjoint();
    let tr = gg.trace().re;
    let mut m = gg / Complex64::new(tr, 0.0);
    // Symmetrize away rounding so validation never trips.
    m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    DensityOp::new(m).expect("Gaussian Gram matrix is a density operator")
}

/// Purification of a random mixed state on `A ⊗ B`, with `d_A` and `d_B`
/// drawn uniformly from `2..=max_a` and `2..=max_b`.
pub fn random_tripartite(rng: &mut SeededRng, max_a: usize, max_b: usize) -> TripartitePureState {
    let da = rng.range(2, max_a.max(2));
    let db = rng.range(2, max_b.max(2));
    let rho = random_density(rng, da * db);
    purify(&rho, da, db).expect("dimensions agree by construction")
}

pub fn random_pure_qubit(rng: &mut SeededRng) -> CVector {
    let v = CVector::from_fn(2, |_, _| rng.complex_gaussian());
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// Haar-random unitary via QR of a complex Gaussian matrix, with the phases
/// of `R`'s diagonal folded back into `Q`.
pub fn random_unitary(rng: &mut SeededRng, d: usize) -> CMatrix {
    let qr = gaussian_matrix(rng, d, d).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            u[(i, j)] *= phase;
        }
    }
    u
}
