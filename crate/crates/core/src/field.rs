//! Arithmetic in the prime field Z_p.
//!
//! Elements are plain reduced integers; the modulus lives in a [`Field`]
//! context that every operation borrows. Nothing here is constant-time.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 2^61 - 1, the default modulus.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

/// Seed used when a caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x005e_ed0f_9017_5ba2;

/// A value in `[0, p)`. The modulus is carried by the [`Field`] that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Field context: a verified prime modulus plus the default seed for
/// anything sampled "from the field".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Field {
    modulus: u64,
    default_seed: u64,
}

impl Default for Field {
    fn default() -> Self {
        Field {
            modulus: MERSENNE_61,
            default_seed: DEFAULT_SEED,
        }
    }
}

impl Field {
    /// Builds a context after checking `modulus` is prime.
    pub fn new(modulus: u64) -> Result<Self> {
        Self::with_seed(modulus, DEFAULT_SEED)
    }

    pub fn with_seed(modulus: u64, default_seed: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::ModulusTooSmall(modulus));
        }
        if !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        Ok(Field {
            modulus,
            default_seed,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn default_seed(&self) -> u64 {
        self.default_seed
    }

    /// Reduces an arbitrary integer into the field.
    pub fn elem(&self, v: u64) -> FieldElement {
        FieldElement(v % self.modulus)
    }

    /// Accepts `v` only if it is already reduced.
    pub fn checked_elem(&self, v: u64) -> Result<FieldElement> {
        if v >= self.modulus {
            return Err(Error::EntryOutOfRange {
                value: v,
                modulus: self.modulus,
            });
        }
        Ok(FieldElement(v))
    }

    /// Maps a signed integer into the field (so `-1` becomes `p - 1`).
    pub fn from_i64(&self, v: i64) -> FieldElement {
        let r = (v as i128).rem_euclid(self.modulus as i128);
        FieldElement(r as u64)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (s, overflow) = a.0.overflowing_add(b.0);
        if overflow || s >= self.modulus {
            FieldElement(s.wrapping_sub(self.modulus))
        } else {
            FieldElement(s)
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 >= b.0 {
            FieldElement(a.0 - b.0)
        } else {
            FieldElement(self.modulus - (b.0 - a.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a.0 == 0 {
            a
        } else {
            FieldElement(self.modulus - a.0)
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let wide = a.0 as u128 * b.0 as u128;
        if self.modulus == MERSENNE_61 {
            // x = hi * 2^61 + lo  ≡  hi + lo  (mod 2^61 - 1)
            let lo = (wide as u64) & MERSENNE_61;
            let hi = (wide >> 61) as u64;
            let mut s = lo + hi;
            if s >= MERSENNE_61 {
                s -= MERSENNE_61;
            }
            FieldElement(s)
        } else {
            FieldElement((wide % self.modulus as u128) as u64)
        }
    }

    pub fn pow(&self, base: FieldElement, mut exp: u64) -> FieldElement {
        let mut acc = FieldElement::ONE;
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat: a^(p-2).
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::InverseOfZero);
        }
        Ok(self.pow(a, self.modulus - 2))
    }

    /// Uniform element.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(0..self.modulus))
    }

    /// Uniform nonzero element.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(1..self.modulus))
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
