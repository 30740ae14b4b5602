use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};

/// Largest admissible modulus; products of two reduced values fit in `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    if q.is_multiple_of(2) {
        return q == 2;
    }
    let mut k = 3;
    while k * k <= q {
        if q.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

pub(crate) fn check_modulus(q: u64) -> Result<()> {
    if q >= MAX_MODULUS {
        return arg(format!("modulus {q} must be below 2^31"));
    }
    if !is_prime(q) {
        return arg(format!("modulus {q} is not prime"));
    }
    Ok(())
}

/// An element of the prime field `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElement {
    value: u64,
    modulus: u64,
}

impl FieldElement {
    /// Reduces `value` modulo the prime `q`.
    pub fn new(value: u64, q: u64) -> Result<Self> {
        check_modulus(q)?;
        Ok(FieldElement {
            value: value % q,
            modulus: q,
        })
    }

    pub(crate) fn new_unchecked(value: u64, q: u64) -> Self {
        debug_assert!(value < q);
        FieldElement { value, modulus: q }
    }

    pub fn zero(q: u64) -> Result<Self> {
        Self::new(0, q)
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let q = self.modulus;
        let mut base = self.value;
        let mut acc = 1 % q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % q;
            }
            base = base * base % q;
            exp >>= 1;
        }
        FieldElement::new_unchecked(acc, q)
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inverse(self) -> Option<Self> {
        (!self.is_zero()).then(|| self.pow(self.modulus - 2))
    }

    fn same_field(self, other: Self) -> u64 {
        assert_eq!(self.modulus, other.modulus, "mixed moduli");
        self.modulus
    }
}

impl Add for FieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let q = self.same_field(rhs);
        FieldElement::new_unchecked((self.value + rhs.value) % q, q)
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let q = self.same_field(rhs);
        FieldElement::new_unchecked((self.value + q - rhs.value) % q, q)
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let q = self.same_field(rhs);
        FieldElement::new_unchecked(self.value * rhs.value % q, q)
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        let q = self.modulus;
        FieldElement::new_unchecked((q - self.value) % q, q)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}
