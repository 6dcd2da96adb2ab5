//! Numerical laboratory for the spatial degrees of freedom of a full-duplex
//! base station with continuous (length-limited) arrays.
//!
//! The crate has two halves. The closed-form half ([`intervals`], [`regions`])
//! evaluates the degrees-of-freedom region of the three-node topology
//! directly from array half-lengths and scattering-interval measures. The
//! constructive half ([`linalg`], [`channel`], [`scheme`]) builds explicit
//! channel operators, either as sampled Fourier kernels or as exact
//! integer-dimension block models, and runs the zero-forcing transmission
//! scheme whose achieved stream counts meet the closed-form corner points.

pub mod channel;
pub mod intervals;
pub mod linalg;
pub mod regions;
pub mod scheme;
