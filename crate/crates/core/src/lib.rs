//! Exact computation of the torsion part of a local equivariant Tamagawa
//! invariant attached to real biquadratic fields, valued in `(Z/4)^*`.

pub mod biquadratic;
pub mod burnsinvariant;
pub mod error;
pub mod grouprings;
pub mod linalg;
pub mod localterms;
pub mod perfectcomplex;
pub mod rational;
pub mod relk0;

pub use error::{Error, Result};
