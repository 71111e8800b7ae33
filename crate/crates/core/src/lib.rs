//! Exact computation of adjoint polynomial torsions of finitely presented
//! 3-manifold groups.

pub mod analysis;
pub mod complex;
pub mod error;
pub mod group;
pub mod job;
pub mod par;
pub mod rep;
pub mod ring;
pub mod sample;
pub(crate) mod syntax;
pub mod torsion;
