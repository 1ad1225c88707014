//! Artin-Schreier families, curve-side L-functions and their character-side
//! counterparts.

mod family;
mod lfunction;
mod lpoly;

pub use family::{squarefree_monics, AsFunction, FamilyDescriptor, FamilyKind, DEFAULT_ENUMERATION_BUDGET};
pub use lfunction::{
    char_power_sum, character_of, check_factorization, curve_degree, curve_side_from_char, delta_factor,
    l_function_as, twist_check, AsCharacter,
};
pub use lpoly::{LPoly, Side};
