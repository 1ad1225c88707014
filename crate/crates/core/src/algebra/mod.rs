//! Finite fields, polynomials over them, arithmetic functions and `Z[ζ_p]`.

pub mod arith;
pub mod cyclotomic;
pub mod field;
pub mod poly;

pub use cyclotomic::{AdditiveChar, CyclotomicInt};
pub use field::{make_field, make_field_with_modulus, Extension, Fe, Field, FiniteField};
pub use poly::{Degree, Poly, PolyRing, RationalFunction};
