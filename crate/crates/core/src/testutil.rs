//! Shared fixtures for module tests.

use num_complex::Complex;

use crate::coarse::CoarseGraining;
use crate::linalg::{DensityMatrix, PureState};

/// The worked 4-dim example: two 2-dim blocks, coherence between |00⟩ and
/// |11⟩, eigenvalues {5/8, 1/8, 1/8, 1/8}.
pub(crate) fn sample_state_4d() -> DensityMatrix<f64> {
    crate::reference::state_4d()
}

/// Two-block partition {|00⟩,|01⟩} / {|10⟩,|11⟩} of the 4-dim space.
pub(crate) fn sample_cg_4d() -> CoarseGraining<f64> {
    crate::reference::graining_4d()
}

/// (|00⟩ + |11⟩)/√2 as a density matrix.
pub(crate) fn bell_state_4d() -> DensityMatrix<f64> {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let psi = PureState::new(vec![
        Complex::new(a, 0.0),
        Complex::new(0.0, 0.0),
        Complex::new(0.0, 0.0),
        Complex::new(a, 0.0),
    ])
    .unwrap();
    psi.density()
}
