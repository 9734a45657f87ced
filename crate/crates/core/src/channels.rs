//! Degradation channels and resource-transformation pathway accounting.
//!
//! Two channel families are provided. The reset channel
//! Λ_ε(ρ) = (1-ε)ρ + ε|0⟩⟨0| probabilistically replaces the state with the
//! first computational basis state. The degradation channel
//! Λ_{α,β}(ρ) = (1-α)ρ + α[β Δ(ρ) + (1-β) Σ_x P_x|ψ0⟩⟨ψ0|P_x] mixes the
//! input with block dephasing and block-projected preparation of a reference
//! state; both admixed components are block-incoherent, so the channel maps
//! free states to free states for any coarse-graining.

#![allow(clippy::excessive_precision)] // frozen oracle constants keep their full digits

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::coarse::{block_dephase, resource_metrics, CoarseGraining, ResourceMetrics};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, PureState};
use crate::numfmt::sig12;
use crate::scalar::{lit, Scalar};

/// Reset channel Λ_ε; the reset target is basis vector 0 of the working
/// dimension.
#[derive(Debug, Clone, Copy)]
pub struct EpsilonChannel<S> {
    epsilon: S,
}

impl<S: Scalar> EpsilonChannel<S> {
    pub fn new(epsilon: S) -> Result<Self> {
        if epsilon < S::zero() || epsilon > S::one() {
            return Err(Error::InvalidInput(format!(
                "epsilon {} outside [0, 1]",
                epsilon
            )));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> S {
        self.epsilon
    }
}

/// Apply Λ_ε(ρ) = (1-ε)ρ + ε|0⟩⟨0|.
pub fn apply_epsilon_channel<S: Scalar>(
    rho: &DensityMatrix<S>,
    ch: &EpsilonChannel<S>,
) -> DensityMatrix<S> {
    let eps = ch.epsilon;
    if eps == S::zero() {
        return rho.clone();
    }
    let mut out = rho.matrix().scale(S::one() - eps);
    out[(0, 0)] = out[(0, 0)] + Complex::new(eps, S::zero());
    DensityMatrix::trusted(out)
}

/// Degradation channel Λ_{α,β} with a fixed reference state and
/// coarse-graining.
#[derive(Debug, Clone)]
pub struct DegradationChannel<S> {
    alpha: S,
    beta: S,
    reference_state: PureState<S>,
    coarse_graining: CoarseGraining<S>,
}

impl<S: Scalar> DegradationChannel<S> {
    pub fn new(
        alpha: S,
        beta: S,
        reference_state: PureState<S>,
        coarse_graining: CoarseGraining<S>,
    ) -> Result<Self> {
        if alpha < S::zero() || alpha > S::one() {
            return Err(Error::InvalidInput(format!("alpha {} outside [0, 1]", alpha)));
        }
        if beta < S::zero() || beta > S::one() {
            return Err(Error::InvalidInput(format!("beta {} outside [0, 1]", beta)));
        }
        if reference_state.dim() != coarse_graining.dim() {
            return Err(Error::DimensionMismatch {
                left: reference_state.dim(),
                right: coarse_graining.dim(),
            });
        }
        Ok(Self {
            alpha,
            beta,
            reference_state,
            coarse_graining,
        })
    }

    pub fn alpha(&self) -> S {
        self.alpha
    }

    pub fn beta(&self) -> S {
        self.beta
    }

    pub fn coarse_graining(&self) -> &CoarseGraining<S> {
        &self.coarse_graining
    }

    /// Block-projected reference preparation Σ_x P_x |ψ0⟩⟨ψ0| P_x.
    pub fn projected_reference(&self) -> DensityMatrix<S> {
        let psi = ComplexMatrix::outer(self.reference_state.amplitudes());
        let mut out = ComplexMatrix::zeros(self.coarse_graining.dim());
        for p in self.coarse_graining.projectors() {
            out = out.add(&p.matmul(&psi).matmul(p));
        }
        DensityMatrix::trusted(out)
    }
}

/// Apply Λ_{α,β}(ρ) = (1-α)ρ + α[β Δ(ρ) + (1-β) Σ_x P_x|ψ0⟩⟨ψ0|P_x].
pub fn apply_degradation_channel<S: Scalar>(
    rho: &DensityMatrix<S>,
    ch: &DegradationChannel<S>,
) -> Result<DensityMatrix<S>> {
    if rho.dim() != ch.coarse_graining.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: ch.coarse_graining.dim(),
        });
    }
    if ch.alpha == S::zero() {
        return Ok(rho.clone());
    }
    let dephased = block_dephase(rho, &ch.coarse_graining)?;
    let prepared = ch.projected_reference();
    let noise = dephased
        .matrix()
        .scale(ch.beta)
        .add(&prepared.matrix().scale(S::one() - ch.beta));
    let out = rho
        .matrix()
        .scale(S::one() - ch.alpha)
        .add(&noise.scale(ch.alpha));
    Ok(DensityMatrix::trusted(out))
}

/// Degradation severity classes over the purity drop Δη = η(ρ) - η(Λρ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Severity {
    None,
    Minor,
    Significant,
    Severe,
}

impl std::fmt::Display for Severity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Severity::None => "None",
            Severity::Minor => "Minor",
            Severity::Significant => "Significant",
            Severity::Severe => "Severe",
        };
        f.write_str(s)
    }
}

/// Classify a purity drop: None for ≤ 0, Minor on (0, 0.2), Significant on
/// [0.2, 0.4), Severe for ≥ 0.4.
pub fn classify_severity<S: Scalar>(eta_drop: S) -> Severity {
    if eta_drop <= S::zero() {
        Severity::None
    } else if eta_drop < lit::<S>(0.2) {
        Severity::Minor
    } else if eta_drop < lit::<S>(0.4) {
        Severity::Significant
    } else {
        Severity::Severe
    }
}

/// Signed metric changes across one channel application (after - before),
/// with severity assigned from the purity drop.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PathwayDelta<S> {
    pub d_c_rel: S,
    pub d_d_rel: S,
    pub d_o_c: S,
    pub d_eta: S,
    pub severity: Severity,
}

/// Resource-transformation pathway between two metric bundles taken against
/// the same coarse-graining.
pub fn pathway_delta<S: Scalar>(
    before: &ResourceMetrics<S>,
    after: &ResourceMetrics<S>,
) -> PathwayDelta<S> {
    let d_eta = after.eta - before.eta;
    let drop = (before.eta - after.eta).max(S::zero());
    PathwayDelta {
        d_c_rel: after.c_rel - before.c_rel,
        d_d_rel: after.d_rel - before.d_rel,
        d_o_c: after.o_c - before.o_c,
        d_eta,
        severity: classify_severity(drop),
    }
}

/// One row of an ε-scan; deltas are relative to the ε = 0 baseline.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScanRow<S> {
    pub epsilon: S,
    pub c_rel: S,
    pub d_rel: S,
    pub o_c: S,
    pub eta: S,
    pub d_c_rel: S,
    pub d_d_rel: S,
    pub d_o_c: S,
    /// d_d_rel / |d_c_rel|; absent when the coherence change is negligible.
    pub conversion_ratio: Option<S>,
}

/// Sweep Λ_ε over a sorted grid, reporting per-point metrics and deltas
/// relative to the unperturbed state. Grid points are independent; row order
/// follows the grid.
pub fn epsilon_scan<S: Scalar>(
    rho: &DensityMatrix<S>,
    cg: &CoarseGraining<S>,
    eps_grid: &[S],
) -> Result<Vec<ScanRow<S>>> {
    debug_assert!(
        eps_grid.windows(2).all(|w| w[0] <= w[1]),
        "epsilon grid must be sorted ascending"
    );
    let baseline = resource_metrics(rho, cg)?;
    let mut rows = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let ch = EpsilonChannel::new(eps)?;
        let out = apply_epsilon_channel(rho, &ch);
        let m = resource_metrics(&out, cg)?;
        let d_c_rel = m.c_rel - baseline.c_rel;
        let d_d_rel = m.d_rel - baseline.d_rel;
        let d_o_c = m.o_c - baseline.o_c;
        let conversion_ratio = if d_c_rel.abs() > S::NEGLIGIBLE {
            Some(d_d_rel / d_c_rel.abs())
        } else {
            None
        };
        rows.push(ScanRow {
            epsilon: eps,
            c_rel: m.c_rel,
            d_rel: m.d_rel,
            o_c: m.o_c,
            eta: m.eta,
            d_c_rel,
            d_d_rel,
            d_o_c,
            conversion_ratio,
        });
    }
    Ok(rows)
}

/// CSV header for ε-scan output.
pub const SCAN_CSV_HEADER: &str =
    "epsilon,c_rel,d_rel,o_c,eta,d_c_rel,d_d_rel,d_o_c,conversion_ratio";

/// Render scan rows as CSV with 12 significant digits; the conversion-ratio
/// field is empty when absent.
pub fn scan_to_csv(rows: &[ScanRow<f64>]) -> String {
    let mut out = String::from(SCAN_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let ratio = r
            .conversion_ratio
            .map(sig12)
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            sig12(r.epsilon),
            sig12(r.c_rel),
            sig12(r.d_rel),
            sig12(r.o_c),
            sig12(r.eta),
            sig12(r.d_c_rel),
            sig12(r.d_d_rel),
            sig12(r.d_o_c),
            ratio
        ));
    }
    out
}
