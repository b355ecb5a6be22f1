//! Continuous-time quantum walk on an N-cycle with one extra link.
//!
//! The graph is a ring of `n` nodes labelled `1..=n` plus a single chord
//! joining node 1 to node `m`. Its Laplacian doubles as the walk
//! Hamiltonian. This crate provides
//!
//! - the graph model and its Laplacian ([`graph`]),
//! - Chebyshev polynomials of both kinds with the identity suite the
//!   spectral solver relies on ([`chebyshev`]),
//! - dependency-free dense numerics: a cyclic Jacobi eigensolver, spectral
//!   time evolution, RK4 integration and a scaling-and-squaring matrix
//!   exponential ([`linalg`]),
//! - the analytic spectrum: the Chebyshev determinant equation, its
//!   cycle/theta factorisation, the isolated largest eigenvalue and its
//!   exponentially localised eigenstate, and degenerate perturbation
//!   theory ([`spectral`]),
//! - transition probabilities, long-time averages and the localisation
//!   analysis ([`dynamics`]),
//! - trapping: survival probability under an absorbing node and its
//!   perturbative description ([`trapping`]).
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature
//! (default) only switches float intrinsics and error-trait impls.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod chebyshev;
pub mod dynamics;
mod error;
pub mod graph;
pub mod linalg;
pub mod spectral;
pub mod trapping;

pub use error::Error;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
