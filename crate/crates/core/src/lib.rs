//! Structured decompositions of inner products on the space of n×n complex
//! matrices.
//!
//! Every inner product ⟨·,·⟩ on M_n(ℂ) is the trace pairing against a linear
//! map: ⟨X, Y⟩ = trace(Y* 𝒜(X)) with 𝒜 self-adjoint and positive-definite.
//! This crate validates that property and rewrites 𝒜(X) = Σ Eᵢ X Fᵢ into
//! progressively more structured operator-sum forms, each step backed by a
//! machine-checkable numerical certificate:
//!
//! * [`superop`] — operator-sum and supermatrix representations, minimal-length
//!   reduction via realignment, self-adjointness and positivity tests;
//! * [`hermitize`] — rewriting a self-adjoint sum with Hermitian pairs, either
//!   through the conjugate-involution square root or by summand doubling;
//! * [`positivize`] — positive-pair forms: exact for one or two summands, the
//!   minus-one-sign form in general, and the conditional all-positive upgrade;
//! * [`witness`] — the ε-map counterexample, its obstruction audit, and the
//!   Fong–Sourour zero-map identities as executable oracles.
//!
//! [`matspace`] holds the dense complex-matrix primitives (spectral
//! decompositions, pencils, matrix exponential/logarithm) the rest builds on.
//! [`batch`] runs independent trials in parallel when the `parallel` feature
//! (default) is enabled, sequentially otherwise.

pub mod batch;
pub mod config;
pub mod error;
pub mod hermitize;
pub mod matspace;
pub mod pipeline;
pub mod positivize;
pub mod random;
pub mod superop;
pub mod witness;

pub use config::Tol;
pub use error::{Error, Result};
pub use matspace::{CMat, CVec, Complex64, HermMat, PosMat};
pub use superop::{OpSum, SuperMat};
