//! Combinatorial engine for (m+2)-angulations of the annulus and the
//! coloured quivers of m-cluster categories of type Ã_{p,q}.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: the annulus `P_{p,q,m}`, diagonals as homotopy classes,
//!   crossing numbers and the rotation/shift/flip operators.
//! - [`polygon`]: faces of dissected convex polygons.
//! - [`angulation`]: validated angulations, face maps, mutation, factoring,
//!   extension and canonical forms up to rotation (and flip).
//! - [`quiver`]: coloured quivers, their mutation, isomorphism and
//!   canonical forms.
//! - [`mutclass`]: breadth-first enumeration of mutation classes on both
//!   sides and the class-level bijection check, plus closed-form counts.
//! - [`diagcat`]: elementary moves, translation and the windowed
//!   AR-quiver of the category of m-diagonals.
//! - [`cli`]: the `annulus` command-line driver.

pub mod angulation;
pub mod cli;
pub mod diagcat;
pub mod geometry;
pub mod mutclass;
pub mod polygon;
pub mod quiver;

pub use angulation::{Angulation, FaceMap, Rejection};
pub use geometry::{AnnulusConfig, Diagonal};
pub use quiver::ColouredQuiver;
