//! Exact symbolic kernel for 2-sorted representations of Lie algebras
//! (a Lie algebra acting on a module over the free unital associative
//! algebra) and for Lie algebras equipped with a projection-derivation.
//!
//! Everything is computed over an exact field: arbitrary-precision
//! rationals by default, or a small prime field when a finite model is
//! needed to make hom-sets enumerable. There is no floating point
//! anywhere in the crate.
//!
//! The main layers, bottom up:
//!
//! * [`scalars`] — exact rationals and small prime fields behind one
//!   [`scalars::Field`] trait.
//! * [`freeassoc`] — sparse elements of the free unital associative
//!   algebra `A(X)` and of the free module `A(X)Y`.
//! * [`freelie`] — the free Lie algebra `L(X)` in its Lyndon basis, with
//!   normal forms computed through the associative embedding.
//! * [`representation`] — free 2-sorted representations `W(X, Y)`,
//!   finite-dimensional representations given by structure constants,
//!   homomorphism pairs and their evaluation.
//! * [`projder`] — Lie algebras with projection-derivation, the splitting
//!   functors between the two categories, and free objects on both sides.
//! * [`words`] — derived ("starred") operations given by words in free
//!   algebras with projection-derivation, the axiom checker for them, and
//!   the exhaustive classification of the admissible word systems.
//! * [`congruence`] — degree-truncated congruence pairs, the Galois
//!   correspondence against a finite model, and its transport through the
//!   splitting functors.

pub mod congruence;
pub mod error;
pub mod freeassoc;
pub mod freelie;
pub mod linalg;
pub mod projder;
pub mod representation;
pub mod sampling;
pub mod scalars;
pub mod slices;
pub mod words;

pub use error::{Error, Result};
pub use scalars::{Field, FpScalar, Scalar};
