//! Neutral spin-1/2 wavepacket in a constant-gradient magnetic field.
//!
//! In scaled units (ħ = m = 1) the spin-up and spin-down amplitudes obey
//! decoupled Schrödinger equations with opposite linear potentials `∓ g z`.
//! As the two components separate, the local spin direction starts to depend
//! on position: at a fixed time it winds around the 3-axis while tilting from
//! -3 to +3 across the packet.
//!
//! The crate provides
//! - two integrators, split-step spectral and implicit Crank–Nicolson ([`integrator`]),
//! - the exact solution for the Gaussian start, certified by a PDE residual check ([`oracle`]),
//! - the spin texture and its helix coordinates ([`texture`]),
//! - post-selection through an aperture and analyzer statistics ([`experiment`]),
//! - configuration, CSV exports and end-to-end runs ([`config`], [`export`], [`pipeline`]).
//!
//! The linear field `B_z = z B'` is not divergence free; it stands in for the
//! z-dependence seen along the beam axis of a real Stern–Gerlach magnet.

// NaN must fail parameter checks, so `!(x > 0.0)` is deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod convergence;
pub mod error;
pub mod experiment;
pub mod export;
mod fft;
pub mod field;
pub mod grid;
pub mod integrator;
pub mod oracle;
pub mod pipeline;
pub mod texture;
pub mod tridiag;

pub use config::{parse_config, SimulationConfig};
pub use error::{Error, Result};
pub use experiment::{aperture_postselect, measurement_probability, scan_hole, ConditionalState, ScanRow};
pub use field::{initial_state, observables, Branch, Observables, SpinorField};
pub use grid::{make_grid, SpatialGrid};
pub use integrator::{evolve, step, Method, StepReport};
pub use oracle::{exact_bloch, exact_component, OracleParams};
pub use texture::{bloch_vector, texture, twist_profile, BlochSample, TwistProfile, Vec3};
