//! Exact integral lattice toolkit.
//!
//! Even lattices are represented by Gram matrices over arbitrary-precision
//! integers. On top of the basic calculus (signatures, discriminant forms,
//! saturation, complements) the crate provides Nikulin-style existence and
//! uniqueness criteria, enumeration for definite lattices, bounded embedding
//! searches, and verifiers for the classification tables of prime-order
//! automorphisms of Kummer-type hyperkähler manifolds.

pub mod automorphism;
pub mod discriminant;
pub mod embeddings;
pub mod enumerate;
pub mod error;
pub mod genus;
pub mod io;
pub mod groups;
pub mod isometry;
pub mod kummer;
pub mod lattice;
pub mod matrix;
pub mod named;
pub mod reduce;

pub use discriminant::DiscriminantGroup;
pub use error::{Error, Result};
pub use lattice::{Definiteness, Lattice, Sublattice};
pub use matrix::IntMatrix;
