//! Exact computation of orbifold two-variable elliptic genera from
//! fixed-point data, their discrete-torsion twists, and the finite-group
//! cohomology (2-cocycles, H², antisymmetrized phases, the Weil pairing)
//! that controls the twists.
//!
//! The crate is layered bottom-up:
//!
//! * [`exactnum`]: rationals, cyclotomic numbers, rational functions in `y^{1/r}`;
//! * [`series`]: truncated Puiseux series in `q` and nilpotent jets;
//! * [`jacobi`]: the reduced theta function and the genus exponential `f`;
//! * [`groups`] and [`cohom`]: finite groups, commuting pairs, cocycles;
//! * [`genus`]: fixed-point data and all genus computations;
//! * [`datafile`]: the JSON file formats read by the command-line tool.

/// Owned-operand forwarding for binary operators implemented on references.
macro_rules! forward_owned {
    ($ty:ty, $tr:ident, $method:ident) => {
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                (&self).$method(rhs)
            }
        }
    };
}

pub mod error;
pub mod exactnum;
pub mod series;
pub mod jacobi;
pub mod groups;
pub mod cohom;
pub mod genus;
pub mod datafile;

pub use error::{Error, Result};
