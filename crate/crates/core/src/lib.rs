//! Computation engine for Jack measures on integer partitions.
//!
//! Joint moments and cumulants of transition-measure observables are computed
//! by three independent routes that must agree:
//!
//! - weighted enumeration of ribbon paths ([`ribbon`]), producing exact
//!   bivariate polynomials in the deformation parameters,
//! - sparse operator algebra on the polynomial Fock space ([`fock`]),
//!   via coherent-state matrix elements of the commuting Lax hierarchy,
//! - direct sums over partitions weighted by Jack measure probabilities.
//!
//! The [`asymptotics`] module computes the limiting objects (convex and
//! dispersive action profiles, fluctuation covariances, mean shifts) from
//! truncated spectral data, and [`sampler`] draws from the measures at desk
//! scale for trend checks.
//!
//! Everything is generic over a [`scalar::Scalar`] so that small cases can be
//! certified in exact Gaussian-rational arithmetic while larger runs use
//! complex doubles. Eigenproblems are numeric only.

pub mod asymptotics;
pub mod bipoly;
pub mod fock;
pub mod params;
pub mod partition;
pub mod profile;
pub mod ribbon;
pub mod sampler;
pub mod scalar;
pub mod series;
pub mod specialization;

pub use bipoly::BiPolynomial;
pub use params::AnisotropyParams;
pub use partition::Partition;
pub use scalar::{Rat, Scalar};
pub use specialization::Specialization;
