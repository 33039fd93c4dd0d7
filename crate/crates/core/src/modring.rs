//! Exact arithmetic in `Z/mZ`.
//!
//! [`RingElem`] carries its modulus so that mixing rings is caught at runtime.
//! Hot loops elsewhere in the crate work on bare residues through the
//! `*_raw` helpers on [`RingZm`], which skip that check.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported modulus.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("modulus {0} out of range (expected 2..={MAX_MODULUS})")]
    BadModulus(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("{value} is not a unit mod {modulus}")]
    NotAUnit { value: u32, modulus: u32 },
}

/// The ring `Z/mZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingZm {
    modulus: u32,
}

/// A canonical residue in `[0, modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingElem {
    value: u32,
    modulus: u32,
}

impl RingZm {
    pub fn new(modulus: u64) -> Result<Self, RingError> {
        if !(2..=MAX_MODULUS).contains(&modulus) {
            return Err(RingError::BadModulus(modulus));
        }
        Ok(Self {
            modulus: modulus as u32,
        })
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    /// Reduces any integer into the ring.
    pub fn elem(self, v: i64) -> RingElem {
        RingElem {
            value: v.rem_euclid(self.modulus as i64) as u32,
            modulus: self.modulus,
        }
    }

    pub fn zero(self) -> RingElem {
        self.elem(0)
    }

    pub fn one(self) -> RingElem {
        self.elem(1)
    }

    /// All residues coprime to the modulus, ascending.
    pub fn units(self) -> Vec<RingElem> {
        (1..self.modulus)
            .filter(|&v| self.is_unit_raw(v))
            .map(|v| self.elem(v as i64))
            .collect()
    }

    /// Every residue of the ring, ascending.
    pub fn elements(self) -> impl Iterator<Item = RingElem> {
        (0..self.modulus).map(move |v| RingElem {
            value: v,
            modulus: self.modulus,
        })
    }

    #[inline]
    pub fn add_raw(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.modulus as u64) as u32
    }

    #[inline]
    pub fn sub_raw(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.modulus as u64 - b as u64) % self.modulus as u64) as u32
    }

    #[inline]
    pub fn mul_raw(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.modulus as u64) as u32
    }

    pub fn is_unit_raw(self, a: u32) -> bool {
        gcd(a as u64 % self.modulus as u64, self.modulus as u64) == 1
    }

    /// Inverse by the extended Euclidean algorithm; no field assumption.
    pub fn inv_raw(self, a: u32) -> Result<u32, RingError> {
        let m = self.modulus as i64;
        let (mut r0, mut r1) = (m, (a as i64).rem_euclid(m));
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 != 1 {
            return Err(RingError::NotAUnit {
                value: a % self.modulus,
                modulus: self.modulus,
            });
        }
        Ok(t0.rem_euclid(m) as u32)
    }

    /// `a^e`; negative exponents require `a` to be a unit.
    pub fn pow_raw(self, a: u32, e: i64) -> Result<u32, RingError> {
        let mut base = if e < 0 { self.inv_raw(a)? } else { a % self.modulus };
        let mut exp = e.unsigned_abs();
        let mut acc = 1 % self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        Ok(acc)
    }
}

impl fmt::Display for RingZm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}", self.modulus)
    }
}

impl RingElem {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn ring(self) -> RingZm {
        RingZm { modulus: self.modulus }
    }

    fn same_ring(self, other: RingElem) -> Result<RingZm, RingError> {
        if self.modulus != other.modulus {
            return Err(RingError::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(self.ring())
    }

    pub fn checked_add(self, other: RingElem) -> Result<RingElem, RingError> {
        let r = self.same_ring(other)?;
        Ok(r.elem(r.add_raw(self.value, other.value) as i64))
    }

    pub fn checked_sub(self, other: RingElem) -> Result<RingElem, RingError> {
        let r = self.same_ring(other)?;
        Ok(r.elem(r.sub_raw(self.value, other.value) as i64))
    }

    pub fn checked_mul(self, other: RingElem) -> Result<RingElem, RingError> {
        let r = self.same_ring(other)?;
        Ok(r.elem(r.mul_raw(self.value, other.value) as i64))
    }

    pub fn is_unit(self) -> bool {
        self.ring().is_unit_raw(self.value)
    }

    pub fn inv(self) -> Result<RingElem, RingError> {
        let r = self.ring();
        Ok(r.elem(r.inv_raw(self.value)? as i64))
    }

    pub fn pow(self, e: i64) -> Result<RingElem, RingError> {
        let r = self.ring();
        Ok(r.elem(r.pow_raw(self.value, e)? as i64))
    }
}

impl std::ops::Neg for RingElem {
    type Output = RingElem;

    fn neg(self) -> RingElem {
        self.ring().elem(-(self.value as i64))
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
