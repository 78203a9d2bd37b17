//! Third-order Active Flux solver for the one-dimensional shallow water
//! equations over variable bottom topography.
//!
//! Cell averages and interface point values of `h` and `m` are evolved
//! together. Point values follow an approximate characteristic evolution;
//! averages are updated conservatively from Simpson fluxes and a momentum
//! source that is exact for the lake at rest. Dry regions and moving shores
//! rely on non-negative piecewise reconstructions and on a draining time
//! step that limits outgoing fluxes.
//!
//! Built-in setups live in [`scenarios`]; [`driver::Simulation`] runs them.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bottom;
pub mod characteristics;
pub mod error;
pub mod grid;
pub mod reconstruction;
pub mod state;
pub mod evolution;
pub mod averages;
pub mod driver;
pub mod scenarios;
pub mod norms;
pub mod snapshot;
pub mod config;
pub mod cli;
