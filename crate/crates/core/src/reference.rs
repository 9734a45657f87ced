//! Built-in 4-dimensional reference case: a two-block coarse-graining and a
//! mixed state with coherence across the blocks. The `verify-theorem1`
//! command and the ε-scan default to this pair, and the shipped fixture
//! files mirror it.

use num_complex::Complex;

use crate::coarse::CoarseGraining;
use crate::linalg::{ComplexMatrix, DensityMatrix};

/// ρ = 3/8|00⟩⟨00| + 1/4|00⟩⟨11| + 1/8|01⟩⟨01| + 1/8|10⟩⟨10|
///   + 1/4|11⟩⟨00| + 3/8|11⟩⟨11|, eigenvalues {5/8, 1/8, 1/8, 1/8}.
pub fn state_4d() -> DensityMatrix<f64> {
    let c = |re: f64| Complex::new(re, 0.0);
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = c(3.0 / 8.0);
    m[(0, 3)] = c(1.0 / 4.0);
    m[(1, 1)] = c(1.0 / 8.0);
    m[(2, 2)] = c(1.0 / 8.0);
    m[(3, 0)] = c(1.0 / 4.0);
    m[(3, 3)] = c(3.0 / 8.0);
    DensityMatrix::new(m).expect("reference state is valid")
}

/// The two-block partition {|00⟩,|01⟩} / {|10⟩,|11⟩}, volumes [2, 2].
pub fn graining_4d() -> CoarseGraining<f64> {
    CoarseGraining::from_basis_blocks(4, &[vec![0, 1], vec![2, 3]])
        .expect("reference partition is valid")
}
