//! K-theory invariants of algebraic tori, computed through the equivariant
//! topology of the character-lattice torus.
//!
//! A torus `T` over a field `F` that splits over a Galois extension with
//! group `G` is encoded by its character lattice: a free abelian group of
//! finite rank with a `G`-action by unimodular integer matrices (a
//! [`glattice::GLattice`]). The real torus `Λ_ℝ/Λ` inherits the action, and
//! its Bredon homology with suitable Mackey-functor coefficients computes the
//! K-groups of `T`. This crate builds equivariant cell structures on that
//! torus, computes the homology, and cross-checks the answers against
//! independent presentations (the Merkurjev–Panin presentation of `K₀`, a
//! coend presentation of `H₀`, and Swan's rank-1 computation).
//!
//! Everything is exact: arbitrary-precision integers, exact rational vertex
//! coordinates, no floating point.
//!
//! The pipeline, bottom to top:
//!
//! * [`exactalg`] — Smith normal form, kernels, cokernels over ℤ.
//! * [`glattice`] — finite groups, subgroups, lattices with `G`-action,
//!   induction, the norm-one construction, Weil resolutions, character orbits.
//! * [`groupcoh`] — `H⁰`/`H¹` with lattice coefficients and restriction maps.
//! * [`eqcell`] — regular equivariant cell structures on `Λ_ℝ/Λ` (cubical and
//!   periodic-Delaunay backends).
//! * [`bredon`] — Bredon chains and homology, coend and Merkurjev–Panin
//!   presentations of `K₀`.
//! * [`ktheory`] — Mackey coefficient data, the Atiyah–Hirzebruch `E²` page,
//!   lacunary collapse, finite-field presets, the Swan rank-1 oracle.
//! * [`catalog`] — built-in example lattices with frozen expected values.
//! * [`cli`] — the `mirrork` command-line frontend.

pub mod bredon;
pub mod catalog;
pub mod cli;
pub mod eqcell;
pub mod error;
pub mod exactalg;
pub mod glattice;
pub mod groupcoh;
pub mod ktheory;

pub use error::{Error, Result};
