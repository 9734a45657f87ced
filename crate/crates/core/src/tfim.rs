//! Transverse-field Ising chain with periodic boundaries and the
//! three-window energy coarse-graining built on its spectrum.
//!
//! H = -Σ_i Z_i Z_{i+1} - h Σ_i X_i with the chain closed (index i+1 taken
//! mod n). Basis convention: qubit 0 is the most significant bit, so
//! |00..0⟩ is index 0.

#![allow(clippy::excessive_precision)] // frozen oracle constants keep their full digits

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::coarse::CoarseGraining;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Spectrum};
use crate::scalar::Scalar;

/// Chain description. Boundaries are always periodic.
#[derive(Debug, Clone, Copy)]
pub struct TfimSpec<S> {
    n_qubits: usize,
    field_h: S,
}

impl<S: Scalar> TfimSpec<S> {
    /// 2..=6 qubits keeps the dimension at or below 64.
    pub fn new(n_qubits: usize, field_h: S) -> Result<Self> {
        if !(2..=6).contains(&n_qubits) {
            return Err(Error::InvalidInput(format!(
                "n_qubits {} outside 2..=6",
                n_qubits
            )));
        }
        if !field_h.is_finite() {
            return Err(Error::InvalidInput("field_h not finite".into()));
        }
        Ok(Self { n_qubits, field_h })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn field_h(&self) -> S {
        self.field_h
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }
}

impl<S: Scalar> Default for TfimSpec<S> {
    fn default() -> Self {
        Self::new(4, S::one()).unwrap()
    }
}

/// Dense H = -Σ Z_i Z_{i+1} - h Σ X_i; real symmetric, dimension 2^n.
pub fn build_hamiltonian<S: Scalar>(spec: &TfimSpec<S>) -> ComplexMatrix<S> {
    let n = spec.n_qubits();
    let dim = spec.dim();
    let mut h = ComplexMatrix::zeros(dim);
    for b in 0..dim {
        // ZZ bonds: diagonal in the computational basis
        let mut zz = S::zero();
        for i in 0..n {
            let j = (i + 1) % n;
            let zi = if (b >> (n - 1 - i)) & 1 == 0 { S::one() } else { -S::one() };
            let zj = if (b >> (n - 1 - j)) & 1 == 0 { S::one() } else { -S::one() };
            zz += zi * zj;
        }
        h[(b, b)] = Complex::new(-zz, S::zero());
        // transverse field: single bit flips
        for i in 0..n {
            let flipped = b ^ (1 << (n - 1 - i));
            h[(flipped, b)] = h[(flipped, b)] - Complex::new(spec.field_h(), S::zero());
        }
    }
    h
}

/// Energy-window label per eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    Low,
    Medium,
    High,
}

/// Three-window energy coarse-graining.
///
/// Low: E < E_min + f·ΔE (strict); high: E > E_max - f·ΔE (strict); medium:
/// the closed complement. Degenerate eigenvalues (gaps at or below the
/// clustering tolerance) are assigned as one group; empty windows are
/// dropped from the projector family.
#[derive(Debug, Clone)]
pub struct EnergyWindows<S> {
    fraction: S,
    assignment: Vec<Window>,
    window_order: Vec<Window>,
    coarse_graining: CoarseGraining<S>,
}

impl<S: Scalar> EnergyWindows<S> {
    pub fn fraction(&self) -> S {
        self.fraction
    }

    /// Per-eigenstate labels, in spectrum order.
    pub fn assignment(&self) -> &[Window] {
        &self.assignment
    }

    /// Which window each projector of the coarse-graining corresponds to.
    pub fn window_order(&self) -> &[Window] {
        &self.window_order
    }

    pub fn coarse_graining(&self) -> &CoarseGraining<S> {
        &self.coarse_graining
    }

    /// Eigenstate indices labeled with `w`.
    pub fn indices(&self, w: Window) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(i, &a)| (a == w).then_some(i))
            .collect()
    }

    /// Projector index within the coarse-graining for window `w`, if the
    /// window is non-empty.
    pub fn projector_index(&self, w: Window) -> Option<usize> {
        self.window_order.iter().position(|&x| x == w)
    }
}

/// Build the three-window coarse-graining from a Hamiltonian spectrum.
///
/// Eigenvalues are chained into degenerate clusters (gap ≤ tolerance); each
/// cluster is classified by its mean energy with the strict low/high
/// comparisons, so a cluster exactly on a threshold lands in medium. If the
/// members of one cluster individually classify into different windows the
/// assignment is ambiguous and `DegenerateSplit` is returned. A flat
/// spectrum (ΔE ≈ 0) is entirely medium.
pub fn energy_windows<S: Scalar>(spectrum: &Spectrum<S>, fraction: S) -> Result<EnergyWindows<S>> {
    if fraction <= S::zero() || fraction >= S::from_f64(0.5).unwrap() {
        return Err(Error::InvalidInput(format!(
            "fraction {} outside (0, 0.5)",
            fraction
        )));
    }
    let evals = spectrum.eigenvalues();
    let n = evals.len();
    let e_min = evals[0];
    let e_max = evals[n - 1];
    let delta = e_max - e_min;

    let mut assignment = vec![Window::Medium; n];
    if delta > S::DEGENERACY_TOL {
        let t_low = e_min + fraction * delta;
        let t_high = e_max - fraction * delta;
        let classify = |e: S| -> Window {
            if e < t_low {
                Window::Low
            } else if e > t_high {
                Window::High
            } else {
                Window::Medium
            }
        };
        let mut lo = 0;
        while lo < n {
            let mut hi = lo;
            while hi + 1 < n && evals[hi + 1] - evals[hi] <= S::DEGENERACY_TOL {
                hi += 1;
            }
            let count = S::from_usize(hi - lo + 1).unwrap();
            let mean = evals[lo..=hi].iter().copied().sum::<S>() / count;
            let label = classify(mean);
            for i in lo..=hi {
                if classify(evals[i]) != label {
                    return Err(Error::DegenerateSplit { lo, hi });
                }
                assignment[i] = label;
            }
            lo = hi + 1;
        }
    }

    let mut window_order = Vec::new();
    let mut projectors = Vec::new();
    for w in [Window::Low, Window::Medium, Window::High] {
        let members: Vec<usize> = (0..n).filter(|&i| assignment[i] == w).collect();
        if members.is_empty() {
            continue;
        }
        let mut p = ComplexMatrix::zeros(n);
        for &i in &members {
            let v = spectrum.eigenvector(i);
            p = p.add(&ComplexMatrix::outer(&v));
        }
        p.hermitize();
        projectors.push(p);
        window_order.push(w);
    }
    let coarse_graining = CoarseGraining::new(projectors)?;

    Ok(EnergyWindows {
        fraction,
        assignment,
        window_order,
        coarse_graining,
    })
}
