//! Coarse-grainings, observational entropy, and the decomposition of total
//! inconsistency into inter-block coherence and intra-block noise.
//!
//! A coarse-graining is a complete family of mutually orthogonal projectors
//! {P_x}. Relative to it, a state ρ carries
//!
//! * observational entropy  S_obs = -Σ p_x log2(p_x / V_x),
//! * total inconsistency    O_C   = S_obs - S(ρ),
//! * inter-block coherence  C_rel = S(Δρ) - S(ρ),
//! * intra-block noise      D_rel = Σ p_x D(ρ_x ‖ P_x/V_x),
//!
//! with p_x = tr(P_x ρ), V_x = rank(P_x), Δ the block-dephasing map, and
//! ρ_x the normalized conditional block states. The identity
//! O_C = C_rel + D_rel holds exactly; the resource purity η = C_rel / O_C
//! (0 by convention when O_C vanishes) measures what fraction of the total
//! inconsistency is usable coherence.

#![allow(clippy::excessive_precision)] // frozen oracle constants keep their full digits

use num_complex::Complex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    relative_entropy, von_neumann_entropy, ComplexMatrix, DensityMatrix, MatrixJson,
};
use crate::scalar::Scalar;

/// Complete ordered family of mutually orthogonal projectors.
#[derive(Debug, Clone)]
pub struct CoarseGraining<S> {
    dim: usize,
    projectors: Vec<ComplexMatrix<S>>,
    volumes: Vec<usize>,
}

impl<S: Scalar> CoarseGraining<S> {
    /// Validate a projector family: each element Hermitian and idempotent,
    /// pairwise orthogonal, summing to the identity. Volumes are the rounded
    /// projector traces.
    pub fn new(projectors: Vec<ComplexMatrix<S>>) -> Result<Self> {
        if projectors.is_empty() {
            return Err(Error::InvalidInput("empty projector list".into()));
        }
        let dim = projectors[0].dim();
        for (i, p) in projectors.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: p.dim(),
                });
            }
            let herm = p.hermiticity_deviation();
            if herm > S::VALIDATION_TOL {
                return Err(Error::NotProjector {
                    index: i,
                    detail: format!("not Hermitian (deviation {:e})", herm.to_f64().unwrap()),
                });
            }
            let idem = p.matmul(p).sub(p).max_abs_entry();
            if idem > S::VALIDATION_TOL {
                return Err(Error::NotProjector {
                    index: i,
                    detail: format!("not idempotent (deviation {:e})", idem.to_f64().unwrap()),
                });
            }
        }
        for i in 0..projectors.len() {
            for j in (i + 1)..projectors.len() {
                let overlap = projectors[i].matmul(&projectors[j]).max_abs_entry();
                if overlap > S::VALIDATION_TOL {
                    return Err(Error::NotOrthogonal {
                        first: i,
                        second: j,
                        overlap: overlap.to_f64().unwrap(),
                    });
                }
            }
        }
        let mut sum = ComplexMatrix::zeros(dim);
        for p in &projectors {
            sum = sum.add(p);
        }
        let completeness = sum.sub(&ComplexMatrix::identity(dim)).max_abs_entry();
        if completeness > S::VALIDATION_TOL {
            return Err(Error::NotComplete {
                deviation: completeness.to_f64().unwrap(),
            });
        }
        let mut volumes = Vec::with_capacity(projectors.len());
        for (i, p) in projectors.iter().enumerate() {
            let tr = p.trace().re.to_f64().unwrap();
            let v = tr.round();
            if v < 1.0 {
                return Err(Error::NotProjector {
                    index: i,
                    detail: format!("rank {} below 1", v),
                });
            }
            volumes.push(v as usize);
        }
        Ok(Self {
            dim,
            projectors,
            volumes,
        })
    }

    /// Coarse-graining from a partition of computational-basis indices.
    pub fn from_basis_blocks(dim: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut projectors = Vec::with_capacity(blocks.len());
        for block in blocks {
            let mut p = ComplexMatrix::zeros(dim);
            for &i in block {
                if i >= dim {
                    return Err(Error::InvalidInput(format!(
                        "basis index {i} out of range for dim {dim}"
                    )));
                }
                p[(i, i)] = Complex::new(S::one(), S::zero());
            }
            projectors.push(p);
        }
        Self::new(projectors)
    }

    /// The trivial coarse-graining {I}.
    pub fn trivial(dim: usize) -> Self {
        Self::new(vec![ComplexMatrix::identity(dim)]).expect("identity is a valid projector")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn projectors(&self) -> &[ComplexMatrix<S>] {
        &self.projectors
    }

    pub fn volumes(&self) -> &[usize] {
        &self.volumes
    }

    /// Block-uniform state κ_x = P_x / V_x.
    pub fn block_uniform(&self, x: usize) -> DensityMatrix<S> {
        let v = S::from_usize(self.volumes[x]).unwrap();
        DensityMatrix::trusted(self.projectors[x].scale(S::one() / v))
    }

    fn check_dim(&self, rho: &DensityMatrix<S>) -> Result<()> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: rho.dim(),
                right: self.dim,
            });
        }
        Ok(())
    }
}

/// Serialized coarse-graining: either a partition of computational-basis
/// indices, or explicit projector matrices (which win when both are given).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoarseGrainingJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projectors: Option<Vec<MatrixJson>>,
}

impl CoarseGrainingJson {
    pub fn to_coarse_graining<S: Scalar>(&self) -> Result<CoarseGraining<S>> {
        if let Some(mats) = &self.projectors {
            let projectors: Result<Vec<_>> = mats.iter().map(|m| m.to_matrix()).collect();
            return CoarseGraining::new(projectors?);
        }
        if let Some(blocks) = &self.blocks {
            return CoarseGraining::from_basis_blocks(self.dim, blocks);
        }
        Err(Error::InvalidInput(
            "coarse-graining needs either blocks or projectors".into(),
        ))
    }
}

/// Metric bundle for one (state, coarse-graining) pair. All entropies in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResourceMetrics<S> {
    /// Von Neumann entropy S(ρ).
    pub s_vn: S,
    /// Observational entropy S_obs(ρ).
    pub s_obs: S,
    /// Inter-block coherence C_rel = S(Δρ) - S(ρ).
    pub c_rel: S,
    /// Intra-block noise D_rel = Σ p_x D(ρ_x ‖ κ_x).
    pub d_rel: S,
    /// Total inconsistency O_C = S_obs - S(ρ).
    pub o_c: S,
    /// Resource purity η = C_rel / O_C (0 when O_C ≈ 0).
    pub eta: S,
}

/// Block dephasing Δ(ρ) = Σ_x P_x ρ P_x.
pub fn block_dephase<S: Scalar>(
    rho: &DensityMatrix<S>,
    cg: &CoarseGraining<S>,
) -> Result<DensityMatrix<S>> {
    cg.check_dim(rho)?;
    let mut out = ComplexMatrix::zeros(cg.dim());
    for p in cg.projectors() {
        out = out.add(&p.matmul(rho.matrix()).matmul(p));
    }
    Ok(DensityMatrix::trusted(out))
}

/// One entry of a block decomposition: the block probability and, when the
/// probability is non-negligible, the normalized conditional state.
#[derive(Debug, Clone)]
pub struct BlockComponent<S> {
    pub probability: S,
    pub state: Option<DensityMatrix<S>>,
}

/// Block probabilities p_x = tr(P_x ρ) and conditional states
/// ρ_x = P_x ρ P_x / p_x; blocks with p_x below the negligibility cutoff
/// carry no state.
pub fn block_analysis<S: Scalar>(
    rho: &DensityMatrix<S>,
    cg: &CoarseGraining<S>,
) -> Result<Vec<BlockComponent<S>>> {
    cg.check_dim(rho)?;
    let mut out = Vec::with_capacity(cg.len());
    for p in cg.projectors() {
        let prob = p.trace_of_product(rho.matrix()).re.max(S::zero());
        let state = if prob > S::NEGLIGIBLE {
            let m = p.matmul(rho.matrix()).matmul(p).scale(S::one() / prob);
            Some(DensityMatrix::trusted(m))
        } else {
            None
        };
        out.push(BlockComponent {
            probability: prob,
            state,
        });
    }
    Ok(out)
}

/// Observational entropy S_obs = -Σ p_x log2(p_x / V_x); empty blocks
/// contribute nothing.
pub fn observational_entropy<S: Scalar>(
    rho: &DensityMatrix<S>,
    cg: &CoarseGraining<S>,
) -> Result<S> {
    cg.check_dim(rho)?;
    let mut s = S::zero();
    for (p, &v) in cg.projectors().iter().zip(cg.volumes()) {
        let prob = p.trace_of_product(rho.matrix()).re.max(S::zero());
        if prob > S::NEGLIGIBLE {
            let vol = S::from_usize(v).unwrap();
            s -= prob * (prob / vol).log2();
        }
    }
    Ok(s)
}

/// Full metric bundle for (ρ, C).
///
/// D_rel goes through the general relative-entropy routine block by block,
/// so the identity O_C = C_rel + D_rel is a genuine cross-check between two
/// independent computation routes rather than being enforced.
pub fn resource_metrics<S: Scalar>(
    rho: &DensityMatrix<S>,
    cg: &CoarseGraining<S>,
) -> Result<ResourceMetrics<S>> {
    cg.check_dim(rho)?;
    let s_vn = von_neumann_entropy(rho)?;
    let dephased = block_dephase(rho, cg)?;
    let c_rel = von_neumann_entropy(&dephased)? - s_vn;
    let s_obs = observational_entropy(rho, cg)?;

    let mut d_rel = S::zero();
    for (x, component) in block_analysis(rho, cg)?.iter().enumerate() {
        if let Some(state) = &component.state {
            let kappa = cg.block_uniform(x);
            d_rel += component.probability * relative_entropy(state, &kappa)?;
        }
    }

    let o_c = s_obs - s_vn;
    let eta = if o_c <= S::NEGLIGIBLE {
        S::zero()
    } else {
        c_rel / o_c
    };
    Ok(ResourceMetrics {
        s_vn,
        s_obs,
        c_rel,
        d_rel,
        o_c,
        eta,
    })
}

/// Max entry of the block-off-diagonal part of ρ, i.e. ρ - Δ(ρ).
pub fn off_block_magnitude<S: Scalar>(
    rho: &DensityMatrix<S>,
    cg: &CoarseGraining<S>,
) -> Result<S> {
    let dephased = block_dephase(rho, cg)?;
    Ok(rho.matrix().sub(dephased.matrix()).max_abs_entry())
}

/// The free (block-uniform) projection Σ_x (p_x / V_x) P_x of ρ.
pub fn block_uniform_projection<S: Scalar>(
    rho: &DensityMatrix<S>,
    cg: &CoarseGraining<S>,
) -> Result<DensityMatrix<S>> {
    cg.check_dim(rho)?;
    let mut out = ComplexMatrix::zeros(cg.dim());
    for (p, &v) in cg.projectors().iter().zip(cg.volumes()) {
        let prob = p.trace_of_product(rho.matrix()).re.max(S::zero());
        let vol = S::from_usize(v).unwrap();
        out = out.add(&p.scale(prob / vol));
    }
    Ok(DensityMatrix::trusted(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{bell_state_4d, sample_cg_4d, sample_state_4d};

    #[test]
    fn two_block_partition_validates() {
        let cg = sample_cg_4d();
        assert_eq!(cg.volumes(), &[2, 2]);
        assert_eq!(cg.dim(), 4);
    }

    #[test]
    fn trivial_partition_validates() {
        let cg = CoarseGraining::<f64>::trivial(5);
        assert_eq!(cg.volumes(), &[5]);
    }

    #[test]
    fn overlapping_projectors_rejected() {
        // {|0><0|, |0><0| + |1><1|} overlaps on index 0
        let p1 = CoarseGraining::<f64>::from_basis_blocks(2, &[vec![0], vec![0, 1]]);
        assert!(matches!(p1, Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn non_idempotent_rejected() {
        let half = ComplexMatrix::<f64>::identity(2).scale(0.5);
        assert!(matches!(
            CoarseGraining::new(vec![half.clone(), half]),
            Err(Error::NotProjector { .. })
        ));
    }

    #[test]
    fn incomplete_family_rejected() {
        let mut p = ComplexMatrix::<f64>::zeros(3);
        p[(0, 0)] = Complex::new(1.0, 0.0);
        assert!(matches!(
            CoarseGraining::new(vec![p]),
            Err(Error::NotComplete { .. })
        ));
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn dephasing_sample_state() {
        let rho = sample_state_4d();
        let cg = sample_cg_4d();
        let d = block_dephase(&rho, &cg).unwrap();
        let want = [0.375, 0.125, 0.125, 0.375];
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { want[i] } else { 0.0 };
                assert!((d.matrix()[(i, j)].re - expect).abs() < 1e-12);
                assert!(d.matrix()[(i, j)].im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dephasing_fixes_block_diagonal_input() {
        let cg = sample_cg_4d();
        let rho = DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.4, 0.1, 0.2, 0.3])).unwrap();
        let d = block_dephase(&rho, &cg).unwrap();
        assert!(d.matrix().sub(rho.matrix()).max_abs_entry() < 1e-12);
    }

    #[test]
    fn block_analysis_sample_state() {
        let rho = sample_state_4d();
        let cg = sample_cg_4d();
        let blocks = block_analysis(&rho, &cg).unwrap();
        assert!((blocks[0].probability - 0.5).abs() < 1e-12);
        assert!((blocks[1].probability - 0.5).abs() < 1e-12);
        let r1 = blocks[0].state.as_ref().unwrap();
        assert!((r1.matrix()[(0, 0)].re - 0.75).abs() < 1e-12);
        assert!((r1.matrix()[(1, 1)].re - 0.25).abs() < 1e-12);
        let r2 = blocks[1].state.as_ref().unwrap();
        assert!((r2.matrix()[(2, 2)].re - 0.25).abs() < 1e-12);
        assert!((r2.matrix()[(3, 3)].re - 0.75).abs() < 1e-12);
    }

    #[test]
    fn block_analysis_single_block_support() {
        let cg = sample_cg_4d();
        let psi = crate::linalg::PureState::basis_state(4, 1);
        let blocks = block_analysis(&psi.density(), &cg).unwrap();
        assert!((blocks[0].probability - 1.0).abs() < 1e-12);
        assert!(blocks[1].probability.abs() < 1e-12);
        assert!(blocks[1].state.is_none());
    }

    #[test]
    fn block_analysis_maximally_mixed() {
        let cg = sample_cg_4d();
        let rho = DensityMatrix::new(ComplexMatrix::identity(4).scale(0.25)).unwrap();
        let blocks = block_analysis(&rho, &cg).unwrap();
        for (x, b) in blocks.iter().enumerate() {
            assert!((b.probability - 0.5).abs() < 1e-12);
            let kappa = cg.block_uniform(x);
            let dev = b
                .state
                .as_ref()
                .unwrap()
                .matrix()
                .sub(kappa.matrix())
                .max_abs_entry();
            assert!(dev < 1e-12);
        }
    }

    #[test]
    fn observational_entropy_values() {
        let cg = sample_cg_4d();
        let mixed = DensityMatrix::new(ComplexMatrix::identity(4).scale(0.25)).unwrap();
        assert!((observational_entropy(&mixed, &cg).unwrap() - 2.0).abs() < 1e-12);

        let rho = sample_state_4d();
        assert!((observational_entropy(&rho, &cg).unwrap() - 2.0).abs() < 1e-10);

        // uniform state on block 1: single term, p = 1, V = 2
        let kappa1 = cg.block_uniform(0);
        assert!((observational_entropy(&kappa1, &cg).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn resource_metrics_sample_state() {
        // frozen from an arbitrary-precision evaluation of the closed forms
        let rho = sample_state_4d();
        let cg = sample_cg_4d();
        let m = resource_metrics(&rho, &cg).unwrap();
        assert!((m.c_rel - 0.2624831837637343).abs() < 1e-10, "c_rel {}", m.c_rel);
        assert!((m.d_rel - 0.18872187554086714).abs() < 1e-10, "d_rel {}", m.d_rel);
        assert!((m.o_c - 0.45120505930460147).abs() < 1e-10, "o_c {}", m.o_c);
        assert!((m.eta - 0.5817381218381597).abs() < 1e-9, "eta {}", m.eta);
        assert!((m.o_c - (m.c_rel + m.d_rel)).abs() < 1e-9);
    }

    #[test]
    fn resource_metrics_free_state_all_zero() {
        let cg = sample_cg_4d();
        // p_x/V_x weights on each block: 0.7/2 and 0.3/2
        let rho =
            DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.35, 0.35, 0.15, 0.15])).unwrap();
        let m = resource_metrics(&rho, &cg).unwrap();
        assert!(m.c_rel.abs() < 1e-9);
        assert!(m.d_rel.abs() < 1e-9);
        assert!(m.o_c.abs() < 1e-9);
        assert_eq!(m.eta, 0.0);
    }

    #[test]
    fn resource_metrics_bell_state() {
        // (|00> + |11>)/sqrt(2): Δρ has eigenvalues {1/2, 1/2}, each block
        // state is pure, so C_rel = 1, D_rel = 1, O_C = 2, eta = 1/2
        let rho = bell_state_4d();
        let cg = sample_cg_4d();
        let m = resource_metrics(&rho, &cg).unwrap();
        assert!((m.c_rel - 1.0).abs() < 1e-10);
        assert!((m.d_rel - 1.0).abs() < 1e-10);
        assert!((m.o_c - 2.0).abs() < 1e-10);
        assert!((m.eta - 0.5).abs() < 1e-10);
    }

    #[test]
    fn dimension_mismatch_reported() {
        let cg = sample_cg_4d();
        let rho = DensityMatrix::new(ComplexMatrix::identity(2).scale(0.5)).unwrap();
        assert!(matches!(
            resource_metrics(&rho, &cg),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn coarse_graining_json_forms() {
        let text = r#"{"dim": 4, "blocks": [[0, 1], [2, 3]]}"#;
        let parsed: CoarseGrainingJson = serde_json::from_str(text).unwrap();
        let cg: CoarseGraining<f64> = parsed.to_coarse_graining().unwrap();
        assert_eq!(cg.volumes(), &[2, 2]);

        let explicit = CoarseGrainingJson {
            dim: 4,
            blocks: None,
            projectors: Some(
                cg.projectors()
                    .iter()
                    .map(MatrixJson::from_matrix)
                    .collect(),
            ),
        };
        let cg2: CoarseGraining<f64> = explicit.to_coarse_graining().unwrap();
        assert_eq!(cg2.volumes(), &[2, 2]);
    }
}
