//! Sliding Karp-Rabin fingerprints over the Mersenne field GF(2^61 - 1).
//!
//! A string `s_0 .. s_{l-1}` maps to `sum s_k * base^k (mod p)`. Each
//! [`Fingerprint`] also carries `base^l` and `base^-l`, so that given any two
//! of `u`, `v` and `uv` the third is recovered with O(1) field operations.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pattern::Symbol;

/// The field modulus, 2^61 - 1.
pub const MODULUS: u64 = (1 << 61) - 1;

#[inline]
fn reduce(x: u128) -> u64 {
    let lo = (x as u64) & MODULUS;
    let hi = (x >> 61) as u64;
    // lo, hi < 2^61 for x < 2^122, so one fold plus one conditional subtract.
    let mut r = lo + (hi & MODULUS) + ((x >> 122) as u64);
    while r >= MODULUS {
        r -= MODULUS;
    }
    r
}

#[inline]
fn mul(a: u64, b: u64) -> u64 {
    reduce(a as u128 * b as u128)
}

#[inline]
fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

#[inline]
fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MODULUS - b
    }
}

fn pow(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

/// Randomness of the fingerprint function: the evaluation point and the seed it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldParams {
    base: u64,
    inv_base: u64,
    seed: u64,
}

impl FieldParams {
    /// Draws `base` uniformly from `[2, p - 2]`.
    pub fn from_seed(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::with_base(rng.gen_range(2..=MODULUS - 2), seed)
    }

    pub(crate) fn with_base(base: u64, seed: u64) -> Self {
        assert!((2..=MODULUS - 2).contains(&base));
        Self {
            base,
            inv_base: pow(base, MODULUS - 2),
            seed,
        }
    }

    pub fn prime_modulus(&self) -> u64 {
        MODULUS
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The fingerprint of the empty string.
    pub fn empty(&self) -> Fingerprint {
        Fingerprint::EMPTY
    }

    /// `fp(s . ch)` from `fp(s)`.
    #[inline]
    pub fn append(&self, fp: &Fingerprint, ch: Symbol) -> Fingerprint {
        Fingerprint {
            value: add(fp.value, mul(ch % MODULUS, fp.base_pow)),
            length: fp.length + 1,
            base_pow: mul(fp.base_pow, self.base),
            inv_base_pow: mul(fp.inv_base_pow, self.inv_base),
        }
    }

    /// The fingerprint of a single character.
    pub fn of_symbol(&self, ch: Symbol) -> Fingerprint {
        self.append(&Fingerprint::EMPTY, ch)
    }

    pub fn of(&self, s: &[Symbol]) -> Fingerprint {
        s.iter()
            .fold(Fingerprint::EMPTY, |fp, &c| self.append(&fp, c))
    }

    pub fn of_bytes(&self, s: &[u8]) -> Fingerprint {
        s.iter().fold(Fingerprint::EMPTY, |fp, &c| {
            self.append(&fp, Symbol::from(c))
        })
    }
}

/// Fingerprint of a string together with its length and the matching base powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    value: u64,
    length: u64,
    base_pow: u64,
    inv_base_pow: u64,
}

impl Default for Fingerprint {
    fn default() -> Self {
        Self::EMPTY
    }
}

impl Fingerprint {
    pub const EMPTY: Fingerprint = Fingerprint {
        value: 0,
        length: 0,
        base_pow: 1,
        inv_base_pow: 1,
    };

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn len(&self) -> u64 {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    pub fn base_pow(&self) -> u64 {
        self.base_pow
    }

    pub fn inv_base_pow(&self) -> u64 {
        self.inv_base_pow
    }

    /// `fp(uv)` from `fp(u)` and `fp(v)`.
    #[inline]
    pub fn concat(&self, v: &Fingerprint) -> Fingerprint {
        Fingerprint {
            value: add(self.value, mul(v.value, self.base_pow)),
            length: self.length + v.length,
            base_pow: mul(self.base_pow, v.base_pow),
            inv_base_pow: mul(self.inv_base_pow, v.inv_base_pow),
        }
    }

    /// `fp(v)` from `fp(uv)` (self) and `fp(u)`.
    #[inline]
    pub fn remove_prefix(&self, u: &Fingerprint) -> Result<Fingerprint> {
        if u.length > self.length {
            return Err(Error::LengthUnderflow {
                len: self.length,
                removed: u.length,
            });
        }
        Ok(Fingerprint {
            value: mul(sub(self.value, u.value), u.inv_base_pow),
            length: self.length - u.length,
            base_pow: mul(self.base_pow, u.inv_base_pow),
            inv_base_pow: mul(self.inv_base_pow, u.base_pow),
        })
    }

    /// `fp(u)` from `fp(uv)` (self) and `fp(v)`.
    #[inline]
    pub fn remove_suffix(&self, v: &Fingerprint) -> Result<Fingerprint> {
        if v.length > self.length {
            return Err(Error::LengthUnderflow {
                len: self.length,
                removed: v.length,
            });
        }
        let base_pow = mul(self.base_pow, v.inv_base_pow);
        Ok(Fingerprint {
            value: sub(self.value, mul(v.value, base_pow)),
            length: self.length - v.length,
            base_pow,
            inv_base_pow: mul(self.inv_base_pow, v.base_pow),
        })
    }

    /// `fp(u^k)` for this fingerprint `fp(u)`.
    pub fn repeat(&self, times: u64) -> Fingerprint {
        let mut acc = Fingerprint::EMPTY;
        let mut block = *self;
        let mut k = times;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.concat(&block);
            }
            block = block.concat(&block);
            k >>= 1;
        }
        acc
    }
}
