//! Seeded random objects for property tests and numerical experiments:
//! Ginibre mixed states, Haar-column pure states, Haar-ish unitaries via
//! Gram-Schmidt, and rotated basis-partition coarse-grainings.

use num_complex::Complex;

use crate::coarse::CoarseGraining;
use crate::linalg::{ComplexMatrix, DensityMatrix, PureState};
use crate::rng::ProtocolRng;

type C64 = Complex<f64>;

fn gaussian_complex(rng: &mut ProtocolRng) -> C64 {
    C64::new(rng.gaussian(), rng.gaussian())
}

/// Ginibre construction: G G† / tr(G G†).
pub fn random_density(rng: &mut ProtocolRng, dim: usize) -> DensityMatrix<f64> {
    let mut g = ComplexMatrix::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            g[(r, c)] = gaussian_complex(rng);
        }
    }
    let gg = g.matmul(&g.adjoint());
    let tr = gg.trace().re;
    DensityMatrix::new(gg.scale(1.0 / tr)).expect("Ginibre states are valid")
}

/// Normalized complex-gaussian vector (a Haar-distributed column).
pub fn random_pure(rng: &mut ProtocolRng, dim: usize) -> PureState<f64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            let v: Vec<C64> = v.into_iter().map(|z| z.scale(1.0 / norm)).collect();
            return PureState::new(v).expect("normalized");
        }
    }
}

/// Haar-ish unitary: modified Gram-Schmidt on a Ginibre matrix, with one
/// re-orthogonalization pass.
pub fn random_unitary(rng: &mut ProtocolRng, dim: usize) -> ComplexMatrix<f64> {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut v: Vec<C64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        for _pass in 0..2 {
            for u in &cols {
                let overlap: C64 = u
                    .iter()
                    .zip(v.iter())
                    .map(|(a, b)| a.conj() * *b)
                    .sum();
                for (vi, ui) in v.iter_mut().zip(u.iter()) {
                    *vi -= overlap * *ui;
                }
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-8, "Gram-Schmidt degenerated");
        cols.push(v.into_iter().map(|z| z.scale(1.0 / norm)).collect());
    }
    let mut u = ComplexMatrix::zeros(dim);
    for (c, col) in cols.iter().enumerate() {
        for (r, z) in col.iter().enumerate() {
            u[(r, c)] = *z;
        }
    }
    u
}

/// Default block partitions used by the property suites.
pub fn default_partition(dim: usize) -> Vec<Vec<usize>> {
    let sizes: Vec<usize> = match dim {
        2 => vec![1, 1],
        4 => vec![2, 2],
        6 => vec![3, 2, 1],
        8 => vec![3, 3, 2],
        16 => vec![3, 10, 3],
        d => {
            let half = d / 2;
            vec![half, d - half]
        }
    };
    let mut blocks = Vec::new();
    let mut start = 0;
    for s in sizes {
        blocks.push((start..start + s).collect());
        start += s;
    }
    blocks
}

/// Coarse-graining from the fixed partition, optionally conjugated by a
/// random unitary: P_x -> U P_x U†.
pub fn random_coarse_graining(
    rng: &mut ProtocolRng,
    dim: usize,
    rotate: bool,
) -> CoarseGraining<f64> {
    let base = CoarseGraining::from_basis_blocks(dim, &default_partition(dim))
        .expect("partition is valid");
    if !rotate {
        return base;
    }
    let u = random_unitary(rng, dim);
    let udag = u.adjoint();
    let projectors: Vec<ComplexMatrix<f64>> = base
        .projectors()
        .iter()
        .map(|p| {
            let mut m = u.matmul(p).matmul(&udag);
            m.hermitize();
            m
        })
        .collect();
    CoarseGraining::new(projectors).expect("rotated partition stays valid")
}

/// Random Hermitian matrix with gaussian entries.
pub fn random_hermitian(rng: &mut ProtocolRng, dim: usize) -> ComplexMatrix<f64> {
    let mut m = ComplexMatrix::zeros(dim);
    for r in 0..dim {
        m[(r, r)] = C64::new(rng.gaussian(), 0.0);
        for c in (r + 1)..dim {
            let z = gaussian_complex(rng);
            m[(r, c)] = z;
            m[(c, r)] = z.conj();
        }
    }
    m
}

/// Block-diagonal unitary ⊕_x U_x relative to a coarse-graining built from
/// `blocks` (basis partition), optionally conjugated by the same rotation
/// used for the coarse-graining.
pub fn random_block_unitary(
    rng: &mut ProtocolRng,
    dim: usize,
    blocks: &[Vec<usize>],
) -> ComplexMatrix<f64> {
    let mut u = ComplexMatrix::zeros(dim);
    for block in blocks {
        let small = random_unitary(rng, block.len());
        for (bi, &gi) in block.iter().enumerate() {
            for (bj, &gj) in block.iter().enumerate() {
                u[(gi, gj)] = small[(bi, bj)];
            }
        }
    }
    u
}
