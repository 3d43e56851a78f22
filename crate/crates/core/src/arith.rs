//! Number-theoretic and randomness primitives.
//!
//! Everything here is a pure function of its inputs: primality and prime
//! search via a deterministic Miller–Rabin witness set, the two directions of
//! the isomorphism `ℤ/nmℤ ≅ ℤ/nℤ × ℤ/mℤ` for coprime moduli, and a splitmix64
//! generator whose output is pinned bit-exactly so seeded constructions
//! reproduce across implementations.

use crate::error::{Error, Result};

/// A modulus of a cyclic group `ℤ/mℤ`, restricted to `m ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(value: u64) -> Result<Self> {
        if value < 2 {
            return Err(Error::ModulusTooSmall(value));
        }
        Ok(Modulus(value))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Residue pair `(x mod n, x mod m)` for coprime `n`, `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrtPair {
    a: u64,
    b: u64,
    n: Modulus,
    m: Modulus,
}

impl CrtPair {
    /// Builds a pair, enforcing coprime moduli and residue ranges.
    pub fn new(a: u64, b: u64, n: Modulus, m: Modulus) -> Result<Self> {
        if gcd(n.get(), m.get()) != 1 {
            return Err(Error::NonCoprimeModuli(n.get(), m.get()));
        }
        if a >= n.get() {
            return Err(Error::ResidueOutOfRange {
                value: a,
                modulus: n.get(),
            });
        }
        if b >= m.get() {
            return Err(Error::ResidueOutOfRange {
                value: b,
                modulus: m.get(),
            });
        }
        Ok(CrtPair { a, b, n, m })
    }

    pub fn residues(self) -> (u64, u64) {
        (self.a, self.b)
    }

    pub fn moduli(self) -> (Modulus, Modulus) {
        (self.n, self.m)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Splits `x mod n·m` into its residues modulo the coprime factors.
pub fn crt_split(x: u64, n: Modulus, m: Modulus) -> Result<CrtPair> {
    if gcd(n.get(), m.get()) != 1 {
        return Err(Error::NonCoprimeModuli(n.get(), m.get()));
    }
    let nm = n
        .get()
        .checked_mul(m.get())
        .ok_or(Error::ResidueOutOfRange {
            value: x,
            modulus: u64::MAX,
        })?;
    if x >= nm {
        return Err(Error::ResidueOutOfRange {
            value: x,
            modulus: nm,
        });
    }
    CrtPair::new(x % n.get(), x % m.get(), n, m)
}

/// Recombines a residue pair into the unique `x` in `[0, n·m)`.
///
/// Inverse of [`crt_split`]; cannot fail because [`CrtPair`] enforces the
/// coprimality and range invariants at construction.
pub fn crt_combine(pair: CrtPair) -> u64 {
    let (a, b) = (pair.a, pair.b);
    let (n, m) = (pair.n.get(), pair.m.get());
    // x = a + n * ((b - a) * n^{-1} mod m)
    let n_inv = mod_inverse(n % m, m);
    let diff = (b + m - a % m) % m;
    let t = mulmod(diff, n_inv, m);
    a + n * t
}

/// Modular inverse by the extended Euclidean algorithm; `a` must be
/// invertible modulo `m`.
fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "inverse requires gcd(a, m) = 1");
    if t < 0 {
        t += m as i128;
    }
    t as u64
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Witness set proving primality deterministically for every n < 2^64.
const MILLER_RABIN_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality test for the full 64-bit range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in MILLER_RABIN_BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest prime `p ≤ k`.
pub fn prev_prime(k: u64) -> Result<u64> {
    if k < 2 {
        return Err(Error::NoPrimeBelow(k));
    }
    let mut p = k;
    loop {
        if is_prime(p) {
            return Ok(p);
        }
        p -= 1;
    }
}

/// splitmix64 generator. Single `u64` of state; the step is pinned bit-exactly
/// so certificate seeds replay identically everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Next 64-bit output.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Exactly uniform draw from `[0, n)` by rejection sampling: raw 64-bit
    /// outputs at or above `⌊2^64/n⌋·n` are discarded, the rest reduced mod n.
    ///
    /// Panics on `n = 0`.
    pub fn uniform_below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "uniform_below requires a nonempty range");
        // 2^64 - (2^64 mod n) = ⌊2^64/n⌋·n
        let rem = ((1u128 << 64) % n as u128) as u64;
        let threshold = u64::MAX - rem; // accept z iff z <= threshold, i.e. z < ⌊2^64/n⌋·n
        loop {
            let z = self.next_u64();
            if z <= threshold {
                return z % n;
            }
        }
    }
}
