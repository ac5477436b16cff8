//! Exact lattice criteria for graded factoriality and Cox rings of finitely
//! presented graded algebras.

pub mod abelian;
pub mod cli;
pub mod lattice;
pub mod criteria;
pub mod ring;
