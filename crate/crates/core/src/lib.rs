//! Phase design for shaping the on-axis intensity of annular beams.
//!
//! With `s = r²` and `Ω = k/(2z)` the on-axis Fresnel integral is a Fourier
//! transform, so the design problem becomes one of matching a Fourier
//! modulus. The crate provides the transform, lower bounds on the achievable
//! error, a stationary-phase construction, Gerchberg-Saxton refinement, and
//! chirp pre-compensation for pulses.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod caustic;
pub mod error;
pub mod grids;
pub mod gs;
pub mod numeric;
pub mod profiles;
pub mod pulse;
pub mod scenario;
pub mod spectral;

pub use error::{Error, Result};
