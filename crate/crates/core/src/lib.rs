//! Exact computation of the torsion of abelianizations of finite-index
//! subgroups of finitely generated split metabelian groups, together with
//! executable checkers for the inequalities that govern how that torsion
//! grows with the index.
//!
//! The pipeline: a group G = A x| Z^r is described by a finitely presented
//! Z[Z^r]-module A ([`modules::ModulePresentation`]); a standard subgroup
//! H = B x| P pairs a submodule with a finite-index sublattice P <= Z^r
//! ([`groupring::Sublattice`]); the coinvariant pushdown turns (B, P) into
//! an integer relation matrix whose Smith normal form gives the torsion of
//! H^ab exactly ([`intlinalg`]). The [`verify`] module turns every bound
//! into a reproducible pass/fail report.

pub mod error;
pub mod groupring;
pub mod intlinalg;
pub mod metabelian;
pub mod modules;
pub mod verify;

pub use error::{Error, Result};
