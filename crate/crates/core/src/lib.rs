//! Generalized amicable numbers: exact membership predicates, bounded
//! searches, multiplier constructions and empirical counting functions.

pub mod arith;
pub mod families;
pub mod search;
pub mod construct;
pub mod density;
