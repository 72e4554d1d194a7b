//! Coefficient fields for exact rank computations.
//!
//! All linear algebra in the crate is generic over [`Field`]. Two families are
//! provided: the prime fields [`Gf<P>`] with a compile-time modulus, and the
//! rationals ([`Rational`](crate::Rational)). Command-line callers pick a field
//! at run time through [`FieldSpec::dispatch`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Scalar type with exact field arithmetic.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Characteristic of the field (0 for the rationals).
    fn characteristic() -> u32;
}

impl Field for BigRational {
    fn characteristic() -> u32 {
        0
    }
}

const fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Integers modulo the prime `P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Gf<const P: u32>(u32);

impl<const P: u32> Gf<P> {
    const PRIME: () = assert!(is_prime(P), "Gf modulus must be prime");

    pub fn new(value: i64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::PRIME;
        Gf(value.rem_euclid(P as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    fn pow(self, mut exp: u32) -> Self {
        let mut base = self.0 as u64;
        let mut acc = 1u64;
        let p = P as u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        Gf(acc as u32)
    }

    pub fn inverse(self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }
}

impl<const P: u32> fmt::Debug for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u32> fmt::Display for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Gf<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Gf(((self.0 as u64 + rhs.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Sub for Gf<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Gf(((self.0 as u64 + P as u64 - rhs.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Mul for Gf<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Gf(((self.0 as u64 * rhs.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Div for Gf<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse().expect("division by zero in Gf")
    }
}

impl<const P: u32> Neg for Gf<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Gf((P - self.0) % P)
    }
}

impl<const P: u32> Zero for Gf<P> {
    fn zero() -> Self {
        Gf(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Gf<P> {
    fn one() -> Self {
        Gf::new(1)
    }
}

impl<const P: u32> Field for Gf<P> {
    fn characteristic() -> u32 {
        P
    }
}

/// Convenience: the rational number `n / 1`.
pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A field chosen at run time: `0` for the rationals, otherwise a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Prime(u32),
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::Prime(2)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "0"),
            FieldSpec::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Generic computation to run once the concrete field is known.
pub trait FieldVisitor {
    type Output;
    fn visit<F: Field>(self) -> Self::Output;
}

macro_rules! supported_primes {
    ($($p:literal),*) => {
        /// Primes accepted by [`FieldSpec`].
        pub const SUPPORTED_PRIMES: &[u32] = &[$($p),*];

        impl FieldSpec {
            /// Runs `visitor` with the concrete field type.
            pub fn dispatch<V: FieldVisitor>(self, visitor: V) -> Result<V::Output> {
                match self {
                    FieldSpec::Rational => Ok(visitor.visit::<BigRational>()),
                    $(FieldSpec::Prime($p) => Ok(visitor.visit::<Gf<$p>>()),)*
                    FieldSpec::Prime(p) => Err(Error::UnsupportedField(p)),
                }
            }
        }
    };
}

supported_primes!(
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97
);

impl FieldSpec {
    pub fn from_characteristic(p: u32) -> Result<Self> {
        if p == 0 {
            Ok(FieldSpec::Rational)
        } else if SUPPORTED_PRIMES.contains(&p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(Error::UnsupportedField(p))
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let p: u32 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidValue(format!("field must be a prime or 0, got `{s}`")))?;
        FieldSpec::from_characteristic(p)
    }
}
