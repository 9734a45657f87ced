//! Scalar abstraction for the numerical core.
//!
//! All dense linear algebra, entropy, and channel code is generic over a
//! floating-point scalar. The per-type tolerance constants below encode how
//! tightly structural invariants (hermiticity, trace normalization,
//! projector algebra) can be enforced at that precision; the `f64`
//! instantiation is the reference configuration used by the CLI and all
//! shipped tolerances.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by the numerical core.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum<Self>
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Tolerance for structural invariants: hermiticity, unit trace,
    /// PSD floor, projector idempotence/orthogonality/completeness.
    const VALIDATION_TOL: Self;
    /// Off-diagonal Frobenius-norm target for the Jacobi eigensolver,
    /// relative to the matrix scale.
    const EIG_TOL: Self;
    /// Below this, probabilities and eigenvalues count as zero.
    const NEGLIGIBLE: Self;
    /// Maximum tolerated weight on the kernel of the second argument in
    /// relative entropy.
    const SUPPORT_TOL: Self;
    /// Eigenvalues closer than this form a degenerate cluster.
    const DEGENERACY_TOL: Self;
}

impl Scalar for f64 {
    const VALIDATION_TOL: f64 = 1e-10;
    const EIG_TOL: f64 = 1e-13;
    const NEGLIGIBLE: f64 = 1e-12;
    const SUPPORT_TOL: f64 = 1e-9;
    const DEGENERACY_TOL: f64 = 1e-9;
}

impl Scalar for f32 {
    const VALIDATION_TOL: f32 = 1e-4;
    const EIG_TOL: f32 = 1e-6;
    const NEGLIGIBLE: f32 = 1e-6;
    const SUPPORT_TOL: f32 = 1e-4;
    const DEGENERACY_TOL: f32 = 1e-4;
}

/// Convert an `f64` literal into the working scalar type.
#[inline]
pub(crate) fn lit<S: Scalar>(x: f64) -> S {
    S::from_f64(x).expect("literal representable in scalar type")
}
