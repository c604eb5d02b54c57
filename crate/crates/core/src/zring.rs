//! Arithmetic in `Z_d`: factorization, units, `p`-valuations and the
//! Chinese remainder maps between `Z_d` and `∏ Z_{p_i^{s_i}}`.
//!
//! Elements are plain `u64` least non-negative residues. The modulus is
//! capped at `u32::MAX` so that a product of two residues never leaves `u64`.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest modulus accepted anywhere in the crate.
pub const MAX_MODULUS: u64 = u32::MAX as u64;

/// One factor `p^s` of the modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PrimePower {
    pub p: u64,
    pub s: u32,
}

impl PrimePower {
    pub fn new(p: u64, s: u32) -> Result<Self> {
        if s == 0 {
            return Err(Error::domain("prime power exponent must be at least 1"));
        }
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        match p.checked_pow(s) {
            Some(q) if q <= MAX_MODULUS => Ok(PrimePower { p, s }),
            _ => Err(Error::domain(format!(
                "{p}^{s} exceeds the supported modulus"
            ))),
        }
    }

    /// `p^s`.
    pub fn modulus(self) -> u64 {
        self.p.pow(self.s)
    }

    /// `p^e` for `e ≤ s`.
    pub fn power(self, e: u32) -> u64 {
        self.p.pow(e)
    }
}

/// The ring `Z_d` together with the prime factorization of `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingCtx {
    d: u64,
    factors: Vec<PrimePower>,
}

impl RingCtx {
    pub fn new(d: u64) -> Result<Self> {
        let factors = factorize(d)?;
        if d > MAX_MODULUS {
            return Err(Error::domain(format!("modulus {d} exceeds {MAX_MODULUS}")));
        }
        Ok(RingCtx { d, factors })
    }

    pub fn modulus(&self) -> u64 {
        self.d
    }

    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn is_square_free(&self) -> bool {
        self.factors.iter().all(|f| f.s == 1)
    }

    /// Context of the `i`-th Chinese factor `Z_{p_i^{s_i}}`.
    pub fn factor_ctx(&self, i: usize) -> RingCtx {
        let f = self.factors[i];
        RingCtx {
            d: f.modulus(),
            factors: vec![f],
        }
    }

    pub fn reduce(&self, x: i128) -> u64 {
        x.rem_euclid(self.d as i128) as u64
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        (x + y) % self.d
    }

    pub fn sub(&self, x: u64, y: u64) -> u64 {
        (x + self.d - y % self.d) % self.d
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        mul_mod(x, y, self.d)
    }

    pub fn is_unit(&self, x: u64) -> bool {
        is_unit(x, self.d)
    }

    pub fn inv(&self, x: u64) -> Result<u64> {
        inv_mod(x, self.d)
    }

    /// The unit group `U(Z_d)` in increasing order.
    pub fn units(&self) -> Vec<u64> {
        units(self.d)
    }

    /// `π_i(x)`: reduction of `x` modulo the `i`-th factor.
    pub fn crt_project(&self, x: u64, i: usize) -> u64 {
        x % self.factors[i].modulus()
    }

    /// The unique `x ∈ [0, d)` with `x ≡ residues[i] (mod p_i^{s_i})` for every `i`.
    pub fn crt_lift(&self, residues: &[u64]) -> Result<u64> {
        if residues.len() != self.factors.len() {
            return Err(Error::domain(format!(
                "expected {} residues, got {}",
                self.factors.len(),
                residues.len()
            )));
        }
        let mut x = 0u64;
        for (f, &r) in self.factors.iter().zip(residues) {
            let q = f.modulus();
            if r >= q {
                return Err(Error::domain(format!("residue {r} out of range mod {q}")));
            }
            let cofactor = self.d / q;
            // cofactor is invertible mod q since the factors are coprime
            let e = mul_mod(cofactor, inv_mod(cofactor % q, q)?, self.d);
            x = (x + mul_mod(e, r, self.d)) % self.d;
        }
        Ok(x)
    }
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(d: u64) -> Result<Vec<PrimePower>> {
    if d < 2 {
        return Err(Error::domain(format!(
            "modulus must be at least 2, got {d}"
        )));
    }
    let mut out = Vec::new();
    let mut n = d;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut s = 0;
            while n.is_multiple_of(p) {
                n /= p;
                s += 1;
            }
            out.push(PrimePower { p, s });
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(PrimePower { p: n, s: 1 });
    }
    Ok(out)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

pub fn mul_mod(x: u64, y: u64, m: u64) -> u64 {
    ((x as u128 * y as u128) % m as u128) as u64
}

pub fn is_unit(x: u64, m: u64) -> bool {
    (x % m).gcd(&m) == 1
}

pub fn inv_mod(x: u64, m: u64) -> Result<u64> {
    let e = (x as i128 % m as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return Err(Error::domain(format!("{x} is not a unit mod {m}")));
    }
    Ok(e.x.rem_euclid(m as i128) as u64)
}

pub fn units(m: u64) -> Vec<u64> {
    (1..m).filter(|&x| is_unit(x, m)).collect()
}

/// `|U(Z_{p^s})| = p^s − p^{s−1}`.
pub fn units_count(p: u64, s: u32) -> u128 {
    let p = p as u128;
    p.pow(s) - p.pow(s - 1)
}

/// Largest `t ≤ s` with `p^t | x`, taking `x` modulo `p^s`; zero has valuation `s`.
pub fn valuation(p: u64, s: u32, x: u64) -> u32 {
    let mut x = x % p.pow(s);
    if x == 0 {
        return s;
    }
    let mut t = 0;
    while x.is_multiple_of(p) {
        x /= p;
        t += 1;
    }
    t
}
