//! Exact Artin-Schreier L-functions over `F_q`, Dirichlet characters of
//! `F_q[x]`, lattices over `F_q[x]`, and low-lying zero statistics.

pub mod algebra;
pub mod asfamilies;
pub mod characters;
pub mod cli;
pub mod error;
pub mod fqxlattice;
pub mod zerostats;

pub use error::{Error, Result};
