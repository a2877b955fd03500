//! Exact arithmetic in the prime field Z/pZ.
//!
//! The coefficient field is fixed once per computation. Elements carry their
//! modulus so that mixing fields is caught in debug builds; all values are
//! kept fully reduced to `[0, p)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0} out of range (need 2 <= p < 2^31)")]
    ModulusOutOfRange(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

/// The field Z/pZ for a validated prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    modulus: u32,
}

impl PrimeField {
    /// Validates primality by trial division. Composite moduli are rejected;
    /// the reduction theory needs a field.
    pub fn new(modulus: u32) -> Result<Self, FieldError> {
        if !(2..1 << 31).contains(&modulus) {
            return Err(FieldError::ModulusOutOfRange(modulus));
        }
        if !is_prime(modulus) {
            return Err(FieldError::NotPrime(modulus));
        }
        Ok(PrimeField { modulus })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Reduces any integer into the field.
    pub fn element(&self, value: i64) -> FieldElement {
        let p = i64::from(self.modulus);
        FieldElement {
            value: value.rem_euclid(p) as u32,
            modulus: self.modulus,
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            value: 0,
            modulus: self.modulus,
        }
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// `+1` or `-1` as a field element; the only coefficients a boundary map
    /// ever emits. For p = 2 both signs collapse to `1`.
    pub fn sign(&self, sign: i8) -> FieldElement {
        if sign >= 0 {
            self.one()
        } else {
            -self.one()
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    let p = u64::from(p);
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A fully reduced residue modulo a prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    modulus: u32,
}

impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inverse(self) -> Result<FieldElement, FieldError> {
        if self.value == 0 {
            return Err(FieldError::ZeroInverse);
        }
        let p = i64::from(self.modulus);
        let (mut r0, mut r1) = (p, i64::from(self.value));
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "modulus is prime, gcd must be 1");
        Ok(FieldElement {
            value: t0.rem_euclid(p) as u32,
            modulus: self.modulus,
        })
    }

    fn check_same_field(&self, other: &FieldElement) {
        debug_assert_eq!(
            self.modulus, other.modulus,
            "field elements from different moduli"
        );
    }
}

impl Add for FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: FieldElement) -> FieldElement {
        self.check_same_field(&rhs);
        let sum = (u64::from(self.value) + u64::from(rhs.value)) % u64::from(self.modulus);
        FieldElement {
            value: sum as u32,
            modulus: self.modulus,
        }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;

    fn sub(self, rhs: FieldElement) -> FieldElement {
        self + (-rhs)
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;

    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.check_same_field(&rhs);
        let prod = (u64::from(self.value) * u64::from(rhs.value)) % u64::from(self.modulus);
        FieldElement {
            value: prod as u32,
            modulus: self.modulus,
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        if self.value == 0 {
            self
        } else {
            FieldElement {
                value: self.modulus - self.value,
                modulus: self.modulus,
            }
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
