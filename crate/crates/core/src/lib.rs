//! Computational toolkit for pure number fields `K = Q(a^(1/d))` of odd degree.
//!
//! The crate is `no_std` (it needs `alloc`) and contains no IO. It covers:
//!
//! * [`arith`]: factorization and the power-free decomposition `a = A_1 A_2^2 ... A_{d-1}^{d-1}`,
//! * [`purefield`]: field descriptors, irreducibility and discriminant data,
//! * [`element`]: exact arithmetic in `Q[x]/(x^d - a)` and minimal polynomials,
//! * [`height`]: certified Mahler measures and Weil heights,
//! * [`bounds`]: generator height lower bounds and class group torsion exponents,
//! * [`primes`]: small degree-one primes of norm `p`,
//! * [`enumerate`]: certified enumeration of primitive elements of bounded height.
//!
//! Real quantities are returned as [`RealEnclosure`]s, rational intervals that are
//! guaranteed to contain the true value.
#![no_std]
// Polynomial and lattice code indexes several arrays by the same position.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod arith;
pub mod bounds;
pub mod element;
pub mod enumerate;
mod error;
pub mod height;
pub mod interval;
mod local;
pub mod poly;
pub mod primes;
pub mod purefield;
mod roots;

use alloc::format;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub use error::{Error, Result};
pub use height::{HeightOrdering, RealEnclosure};

/// Default working precision, in bits, of every certified numeric routine.
pub const DEFAULT_PREC_BITS: u32 = 128;

/// Parses `"0.5"`, `"1/3"` or `"2"` into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let err = || Error::Parse(format!("invalid rational {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| err())?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let v = BigRational::new(digits, scale);
    Ok(if neg { -v } else { v })
}
