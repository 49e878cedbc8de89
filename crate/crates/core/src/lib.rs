//! Completely regular codes in Johnson graphs `J(n,k)` and Grassmann graphs
//! `J_q(n,k)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`galois`]: arithmetic in small finite fields `GF(p^m)`.
//! * [`subspaces`]: canonical subsets and subspaces, enumeration, lattice
//!   operations.
//! * [`graphs`]: Johnson/Grassmann graphs with a dense vertex numbering and
//!   the eigenvalue ladder.
//! * [`constructions`]: spreads, the extended Hamming quadruple system,
//!   avoid-codes and the inclusion-matrix push-forward.
//! * [`verify`]: exact complete-regularity checks, quotient eigenvalues and
//!   design strength.
//! * [`orbit_bip`]: group orbits, quotient matrices and an exact 0/1
//!   feasibility search for covering radius one codes.
//! * [`codefile`]: the text formats shared with the command line tool.

pub mod codefile;
pub mod constructions;
pub mod error;
pub mod galois;
pub mod graphs;
pub mod orbit_bip;
pub mod subspaces;
pub mod verify;

pub use error::{Error, Result};
