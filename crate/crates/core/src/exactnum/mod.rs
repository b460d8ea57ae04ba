//! Exact arithmetic: rationals, elements of cyclotomic fields, and rational
//! functions in a fractional power of `y`.

mod cyclotomic;
mod laurent;
mod qpoly;
mod rational;
mod yrational;

pub use cyclotomic::{cyclotomic_polynomial, totient, Cyclotomic};
pub use laurent::LaurentPoly;
pub use rational::{format_rational, parse_rational, rat, Rational};
pub use yrational::YRational;

pub(crate) fn lcm_u32(a: u32, b: u32) -> u32 {
    num_integer::lcm(a.max(1), b.max(1))
}
