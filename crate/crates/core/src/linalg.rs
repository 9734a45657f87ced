//! Dense complex linear algebra and entropy primitives.
//!
//! Everything here targets Hilbert-space dimensions up to 64, so the
//! representation is a plain row-major `Vec<Complex<S>>` and the eigensolver
//! is cyclic Jacobi: O(n^3) per sweep, deterministic for a fixed input, and
//! free of external solver dependencies.

#![allow(clippy::excessive_precision)] // frozen oracle constants keep their full digits

use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Largest supported Hilbert-space dimension.
pub const MAX_DIM: usize = 64;

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<S> {
    dim: usize,
    data: Vec<Complex<S>>,
}

impl<S: fmt::Debug> fmt::Debug for ComplexMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix(dim={})", self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| {
                    let z = &self.data[r * self.dim + c];
                    format!("{:?}{:+?}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<S: Scalar> ComplexMatrix<S> {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0 && dim <= MAX_DIM, "dimension out of range");
        Self {
            dim,
            data: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::one();
        }
        m
    }

    /// Build from a row-major slice of entries.
    pub fn from_entries(dim: usize, entries: &[Complex<S>]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        Ok(Self {
            dim,
            data: entries.to_vec(),
        })
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[S]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, S::zero());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex<S>] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a.re.is_zero() && a.im.is_zero() {
                    continue;
                }
                for c in 0..n {
                    out[(r, c)] = out[(r, c)] + a * rhs[(k, c)];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o = *o + *r;
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o = *o - *r;
        }
        out
    }

    pub fn scale(&self, factor: S) -> Self {
        let mut out = self.clone();
        for z in out.data.iter_mut() {
            *z = Complex::new(z.re * factor, z.im * factor);
        }
        out
    }

    pub fn trace(&self) -> Complex<S> {
        (0..self.dim).map(|i| self[(i, i)]).fold(Complex::zero(), |a, b| a + b)
    }

    /// Largest entry magnitude measured as max(|re|, |im|) over all entries.
    pub fn max_abs_entry(&self) -> S {
        self.data
            .iter()
            .map(|z| z.re.abs().max(z.im.abs()))
            .fold(S::zero(), S::max)
    }

    pub fn frobenius_norm(&self) -> S {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(S::zero(), |a, b| a + b)
            .sqrt()
    }

    /// Max-entry deviation from the conjugate transpose.
    pub fn hermiticity_deviation(&self) -> S {
        let mut dev = S::zero();
        for r in 0..self.dim {
            for c in r..self.dim {
                let d = self[(r, c)] - self[(c, r)].conj();
                dev = dev.max(d.re.abs()).max(d.im.abs());
            }
        }
        dev
    }

    /// Replace the matrix with its Hermitian part (A + A†)/2.
    pub fn hermitize(&mut self) {
        let half = lit::<S>(0.5);
        for r in 0..self.dim {
            for c in r..self.dim {
                let avg = (self[(r, c)] + self[(c, r)].conj()).scale(half);
                self[(r, c)] = avg;
                self[(c, r)] = avg.conj();
            }
            let d = self[(r, r)];
            self[(r, r)] = Complex::new(d.re, S::zero());
        }
    }

    /// tr(AB), exploiting row access of both operands.
    pub fn trace_of_product(&self, rhs: &Self) -> Complex<S> {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut acc = Complex::zero();
        for r in 0..n {
            for k in 0..n {
                acc = acc + self[(r, k)] * rhs[(k, r)];
            }
        }
        acc
    }

    /// ⟨v|A|v⟩ for a raw complex vector.
    pub fn quadratic_form(&self, v: &[Complex<S>]) -> Complex<S> {
        assert_eq!(v.len(), self.dim);
        let mut acc = Complex::zero();
        for r in 0..self.dim {
            let mut row = Complex::zero();
            for c in 0..self.dim {
                row = row + self[(r, c)] * v[c];
            }
            acc = acc + v[r].conj() * row;
        }
        acc
    }

    /// |v⟩⟨v| for a raw complex vector.
    pub fn outer(v: &[Complex<S>]) -> Self {
        let mut m = Self::zeros(v.len());
        for r in 0..v.len() {
            for c in 0..v.len() {
                m[(r, c)] = v[r] * v[c].conj();
            }
        }
        m
    }

    /// A|v⟩.
    pub fn apply(&self, v: &[Complex<S>]) -> Vec<Complex<S>> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|r| {
                let mut acc = Complex::zero();
                for c in 0..self.dim {
                    acc = acc + self[(r, c)] * v[c];
                }
                acc
            })
            .collect()
    }
}

impl<S: Scalar> std::ops::Index<(usize, usize)> for ComplexMatrix<S> {
    type Output = Complex<S>;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex<S> {
        &self.data[r * self.dim + c]
    }
}

impl<S: Scalar> std::ops::IndexMut<(usize, usize)> for ComplexMatrix<S> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<S> {
        &mut self.data[r * self.dim + c]
    }
}

/// Serialized matrix form: row-major real and imaginary parts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixJson {
    pub fn to_matrix<S: Scalar>(&self) -> Result<ComplexMatrix<S>> {
        if self.dim == 0 || self.dim > MAX_DIM {
            return Err(Error::InvalidInput(format!("dim {} out of range", self.dim)));
        }
        if self.re.len() != self.dim * self.dim || self.im.len() != self.dim * self.dim {
            return Err(Error::InvalidInput(
                "re/im length does not match dim*dim".into(),
            ));
        }
        let entries: Vec<Complex<S>> = self
            .re
            .iter()
            .zip(self.im.iter())
            .map(|(&re, &im)| Complex::new(lit(re), lit(im)))
            .collect();
        ComplexMatrix::from_entries(self.dim, &entries)
    }

    pub fn from_matrix<S: Scalar>(m: &ComplexMatrix<S>) -> Self {
        Self {
            dim: m.dim(),
            re: m.entries().iter().map(|z| z.re.to_f64().unwrap()).collect(),
            im: m.entries().iter().map(|z| z.im.to_f64().unwrap()).collect(),
        }
    }
}

/// Normalized pure state |ψ⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<S> {
    amplitudes: Vec<Complex<S>>,
}

impl<S: Scalar> PureState<S> {
    /// Requires the Euclidean norm to be within 1e-12 of 1 (per-type scale).
    pub fn new(amplitudes: Vec<Complex<S>>) -> Result<Self> {
        let norm_sqr: S = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        let dev = (norm_sqr.sqrt() - S::one()).abs();
        if dev > S::NEGLIGIBLE {
            return Err(Error::InvalidState(format!(
                "pure state norm deviates from 1 by {:e}",
                dev.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Computational basis vector |index⟩.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut amplitudes = vec![Complex::zero(); dim];
        amplitudes[index] = Complex::one();
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<S>] {
        &self.amplitudes
    }

    pub fn density(&self) -> DensityMatrix<S> {
        DensityMatrix::trusted(ComplexMatrix::outer(&self.amplitudes))
    }
}

/// Validated density matrix: Hermitian, unit trace, PSD up to tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<S> {
    mat: ComplexMatrix<S>,
}

impl<S: Scalar> DensityMatrix<S> {
    /// Full validation: hermiticity and trace by inspection, PSD via the
    /// eigensolver. Eigenvalues in [-tol, 0) are tolerated as roundoff.
    pub fn new(mat: ComplexMatrix<S>) -> Result<Self> {
        let dev = mat.hermiticity_deviation();
        if dev > S::VALIDATION_TOL {
            return Err(Error::NonHermitianInput {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
            });
        }
        let tr = mat.trace();
        if (tr.re - S::one()).abs() > S::VALIDATION_TOL || tr.im.abs() > S::VALIDATION_TOL {
            return Err(Error::InvalidState(format!(
                "trace {:?} not within tolerance of 1",
                (tr.re.to_f64(), tr.im.to_f64())
            )));
        }
        let mut sym = mat.clone();
        sym.hermitize();
        let spec = hermitian_eig(&sym)?;
        let min = spec.eigenvalues()[0];
        if min < -S::VALIDATION_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:e}",
                min.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(Self { mat: sym })
    }

    /// Wrap a matrix that is PSD/unit-trace by construction (convex mixtures
    /// of valid states, projections of valid states). Hermitizes in place.
    pub(crate) fn trusted(mut mat: ComplexMatrix<S>) -> Self {
        mat.hermitize();
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix<S> {
        &self.mat
    }

    /// Re-run full validation (used by invariant tests on internally
    /// constructed states).
    pub fn validate(&self) -> Result<()> {
        Self::new(self.mat.clone()).map(|_| ())
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum<S> {
    eigenvalues: Vec<S>,
    eigenvectors: ComplexMatrix<S>,
}

impl<S: Scalar> Spectrum<S> {
    pub fn eigenvalues(&self) -> &[S] {
        &self.eigenvalues
    }

    /// Unitary matrix whose columns are the eigenvectors, ordered as the
    /// eigenvalues.
    pub fn eigenvectors(&self) -> &ComplexMatrix<S> {
        &self.eigenvectors
    }

    /// Eigenvector `k` as a column vector.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex<S>> {
        let n = self.eigenvalues.len();
        (0..n).map(|r| self.eigenvectors[(r, k)]).collect()
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Sweeps pivot pairs in fixed row-major order until the off-diagonal
/// Frobenius norm falls below `Scalar::EIG_TOL` (scaled by the matrix norm),
/// so the output is deterministic for a fixed input. Eigenvalues are sorted
/// ascending and each eigenvector's largest-magnitude component is made real
/// positive so downstream projectors are reproducible.
pub fn hermitian_eig<S: Scalar>(h: &ComplexMatrix<S>) -> Result<Spectrum<S>> {
    let dev = h.hermiticity_deviation();
    if dev > S::VALIDATION_TOL {
        return Err(Error::NonHermitianInput {
            deviation: dev.to_f64().unwrap_or(f64::NAN),
        });
    }

    let n = h.dim();
    let mut a = h.clone();
    a.hermitize();
    let mut v = ComplexMatrix::<S>::identity(n);

    let scale = a.frobenius_norm().max(S::one());
    let target = S::EIG_TOL * scale;
    // Rotations on entries this small cannot move the off-norm past the target.
    let skip_below = target / lit::<S>((n * n) as f64);

    let off_norm = |a: &ComplexMatrix<S>| -> S {
        let mut acc = S::zero();
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    acc += a[(r, c)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    };

    let max_sweeps = 100;
    for _ in 0..max_sweeps {
        if off_norm(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let m = apq.norm_sqr().sqrt();
                if m <= skip_below {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let two = lit::<S>(2.0);
                let tau = (aqq - app) / (two * m);
                // smaller-magnitude root of t^2 - 2 tau t - 1 = 0
                let t = if tau >= S::zero() {
                    -S::one() / (tau + (S::one() + tau * tau).sqrt())
                } else {
                    S::one() / (-tau + (S::one() + tau * tau).sqrt())
                };
                let c = S::one() / (S::one() + t * t).sqrt();
                let sigma = t * c;
                // phase of a_pq; s = sigma * e^{-i phi}
                let phase = apq.scale(S::one() / m);
                let s = phase.conj().scale(sigma);
                let ms_conj = -s.conj();

                // column update: A <- A R, V <- V R
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp.scale(c) + akq * s;
                    a[(k, q)] = akp * ms_conj + akq.scale(c);

                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp.scale(c) + vkq * s;
                    v[(k, q)] = vkp * ms_conj + vkq.scale(c);
                }
                // row update: A <- R† A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk.scale(c) + aqk * s.conj();
                    a[(q, k)] = apk * (-s) + aqk.scale(c);
                }
                a[(p, q)] = Complex::zero();
                a[(q, p)] = Complex::zero();
                a[(p, p)] = Complex::new(a[(p, p)].re, S::zero());
                a[(q, q)] = Complex::new(a[(q, q)].re, S::zero());
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = ComplexMatrix::<S>::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        eigenvalues.push(a[(src, src)].re);
        // fix the global phase: largest-magnitude component real positive
        let mut best = S::zero();
        let mut best_row = 0;
        for r in 0..n {
            let mag = v[(r, src)].norm_sqr();
            if mag > best {
                best = mag;
                best_row = r;
            }
        }
        let pivot = v[(best_row, src)];
        let mag = pivot.norm_sqr().sqrt();
        let phase = if mag > S::zero() {
            pivot.conj().scale(S::one() / mag)
        } else {
            Complex::one()
        };
        for r in 0..n {
            eigenvectors[(r, col)] = v[(r, src)] * phase;
        }
    }

    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Von Neumann entropy in bits, with the 0·log2(0) = 0 convention.
///
/// Eigenvalues in [-tol, 0) are clamped to zero (numerical PSD drift);
/// anything below -tol is a genuinely invalid state.
pub fn von_neumann_entropy<S: Scalar>(rho: &DensityMatrix<S>) -> Result<S> {
    let spec = hermitian_eig(rho.matrix())?;
    entropy_of_eigenvalues(spec.eigenvalues())
}

/// Shared entropy kernel over an eigenvalue list.
pub(crate) fn entropy_of_eigenvalues<S: Scalar>(eigenvalues: &[S]) -> Result<S> {
    let mut s = S::zero();
    for &lam in eigenvalues {
        if lam < -S::VALIDATION_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:e}",
                lam.to_f64().unwrap_or(f64::NAN)
            )));
        }
        if lam > S::zero() {
            s -= lam * lam.log2();
        }
    }
    Ok(s.max(S::zero()))
}

/// Quantum relative entropy D(ρ‖σ) in bits.
///
/// The kernel of σ is the span of eigenvectors with eigenvalue below
/// `Scalar::NEGLIGIBLE`; ρ may carry at most `Scalar::SUPPORT_TOL` weight
/// there, otherwise the divergence is +∞ and `SupportViolation` is returned.
pub fn relative_entropy<S: Scalar>(rho: &DensityMatrix<S>, sigma: &DensityMatrix<S>) -> Result<S> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let spec_sigma = hermitian_eig(sigma.matrix())?;
    let mut kernel_weight = S::zero();
    let mut cross = S::zero();
    for (j, &s_j) in spec_sigma.eigenvalues().iter().enumerate() {
        let v = spec_sigma.eigenvector(j);
        let w = rho.matrix().quadratic_form(&v).re.max(S::zero());
        if s_j <= S::NEGLIGIBLE {
            kernel_weight += w;
        } else {
            cross += w * s_j.log2();
        }
    }
    if kernel_weight > S::SUPPORT_TOL {
        return Err(Error::SupportViolation {
            weight: kernel_weight.to_f64().unwrap_or(f64::NAN),
        });
    }
    let s_rho = von_neumann_entropy(rho)?;
    Ok(-s_rho - cross)
}
