//! Observational-entropy decomposition and resource-purity diagnostics for
//! small quantum systems.
//!
//! The crate decomposes the total inconsistency O_C between a state and a
//! projective coarse-graining into inter-block coherence C_rel plus
//! intra-block noise D_rel, tracks the purity ratio η = C_rel / O_C under
//! degradation channels, and drives a four-qubit transverse-field Ising
//! experiment in which a parameterized circuit degrades through a
//! three-phase noise protocol. A statistics layer provides the Pearson /
//! Fisher-Z machinery used to analyze multi-run ensembles.
//!
//! The numerical core (`linalg`, `coarse`, `channels`, `tfim`) is generic
//! over the scalar type through [`scalar::Scalar`]; the concrete `f64`
//! aliases below are what the protocol and CLI layers use.

pub mod channels;
pub mod coarse;
pub mod error;
pub mod linalg;
pub mod numfmt;
pub mod reference;
pub mod rng;
pub mod sampling;
pub mod scalar;
pub mod stats;
pub mod tfim;
pub mod vqa;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Double-precision instantiations of the generic core.
pub type CMatrix = linalg::ComplexMatrix<f64>;
pub type Density = linalg::DensityMatrix<f64>;
pub type State = linalg::PureState<f64>;
pub type EigenSpectrum = linalg::Spectrum<f64>;
pub type Graining = coarse::CoarseGraining<f64>;
pub type Metrics = coarse::ResourceMetrics<f64>;
pub type Delta = channels::PathwayDelta<f64>;
pub type Windows = tfim::EnergyWindows<f64>;
