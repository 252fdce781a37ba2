//! Integer and modular arithmetic: factorization of odd moduli, Legendre and
//! Jacobi symbols, primitive roots and discrete logarithms.
//!
//! Everything here is desk scale. Factorization is trial division and
//! discrete logarithms use baby-step/giant-step over `u64`.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A prime power `p^alpha` with `p` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    pub p: u64,
    pub alpha: u32,
}

impl PrimePower {
    pub fn value(&self) -> u64 {
        self.p.pow(self.alpha)
    }

    /// `phi(p^alpha) = p^(alpha-1) (p-1)`.
    pub fn phi(&self) -> u64 {
        self.p.pow(self.alpha - 1) * (self.p - 1)
    }
}

/// An odd modulus `q >= 3` together with its factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Modulus {
    q: u64,
    factors: Vec<PrimePower>,
    phi: u64,
    square_full: bool,
}

impl Modulus {
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Prime-power factors in ascending order of the prime.
    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    /// Euler's totient of `q`.
    pub fn phi(&self) -> u64 {
        self.phi
    }

    /// Number of distinct prime divisors of `q`.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    /// Every prime divides `q` at least twice.
    pub fn is_square_full(&self) -> bool {
        self.square_full
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].alpha == 1
    }

    pub fn is_coprime_to(&self, n: i64) -> bool {
        n.rem_euclid(self.q as i64).gcd(&(self.q as i64)) == 1
    }

    /// Builds `p^alpha` directly, checking that `p` is an odd prime.
    pub fn prime_power(p: u64, alpha: u32) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if alpha == 0 {
            return Err(Error::OutOfRange("prime-power exponent must be >= 1".into()));
        }
        let q = p
            .checked_pow(alpha)
            .ok_or(Error::UnsupportedModulus { q: u64::MAX, reason: "prime power overflows u64" })?;
        Ok(Self::from_factors(q, vec![PrimePower { p, alpha }]))
    }

    fn from_factors(q: u64, factors: Vec<PrimePower>) -> Self {
        let phi = factors.iter().map(PrimePower::phi).product();
        let square_full = factors.iter().all(|f| f.alpha >= 2);
        Modulus { q, factors, phi, square_full }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

/// Factorizes an odd modulus `q >= 3` by trial division.
pub fn factorize(q: u64) -> Result<Modulus> {
    if q < 3 {
        return Err(Error::UnsupportedModulus { q, reason: "modulus must be at least 3" });
    }
    if q % 2 == 0 {
        return Err(Error::UnsupportedModulus { q, reason: "even moduli are not supported" });
    }
    let mut factors = Vec::new();
    let mut rest = q;
    let mut d = 3u64;
    while d * d <= rest {
        if rest % d == 0 {
            let mut alpha = 0;
            while rest % d == 0 {
                rest /= d;
                alpha += 1;
            }
            factors.push(PrimePower { p: d, alpha });
        }
        d += 2;
    }
    if rest > 1 {
        factors.push(PrimePower { p: rest, alpha: 1 });
    }
    Ok(Modulus::from_factors(q, factors))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn is_odd_prime(n: u64) -> bool {
    n % 2 == 1 && is_prime(n)
}

/// Distinct prime divisors of `n` in ascending order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Euler's totient for any positive `n` (even values allowed).
pub fn totient(n: u64) -> u64 {
    prime_divisors(n).into_iter().fold(n, |acc, p| acc / p * (p - 1))
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Reduces a signed integer into `[0, m)`.
pub fn residue(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Jacobi symbol `(a/n)` for odd `n >= 1`.
pub fn jacobi(a: i64, n: u64) -> Result<i8> {
    if n % 2 == 0 {
        return Err(Error::OutOfRange(format!("Jacobi symbol needs an odd lower argument, got {n}")));
    }
    let mut a = residue(a, n);
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// Legendre symbol `(a/p)`; `p` must be an odd prime.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    if !is_odd_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    jacobi(a, p)
}

/// `(-1/p)`, which is `+1` for `p = 1 mod 4` and `-1` for `p = 3 mod 4`.
pub fn legendre_minus_one(p: u64) -> i8 {
    if p % 4 == 1 {
        1
    } else {
        -1
    }
}

/// Multiplicative order of `g` modulo `m`, given the group order `n`.
fn has_order(g: u64, group_order: u64, order_primes: &[u64], m: u64) -> bool {
    pow_mod(g, group_order, m) == 1
        && order_primes.iter().all(|&r| pow_mod(g, group_order / r, m) != 1)
}

/// Generator of the unit group modulo `p^alpha`.
///
/// Takes the smallest primitive root `g` modulo `p`; for `alpha >= 2` keeps
/// `g` when `g^(phi(p^alpha)/p) != 1 (mod p^alpha)` and otherwise lifts to
/// `g + p`.
pub fn primitive_root(p: u64, alpha: u32) -> Result<u64> {
    if !is_odd_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if alpha == 0 {
        return Err(Error::OutOfRange("prime-power exponent must be >= 1".into()));
    }
    let primes = prime_divisors(p - 1);
    let g = (2..p)
        .find(|&g| has_order(g, p - 1, &primes, p))
        .unwrap_or(1); // p = 3 finds 2; only reached for p = 2
    if alpha == 1 {
        return Ok(g);
    }
    let pp = PrimePower { p, alpha };
    if pow_mod(g, pp.phi() / p, pp.value()) != 1 {
        Ok(g)
    } else {
        Ok(g + p)
    }
}

/// Baby-step/giant-step discrete logarithm of `x` to base `g` modulo
/// `p^alpha`. Returns the exponent in `[0, phi(p^alpha))`.
pub fn discrete_log(x: i64, g: u64, p: u64, alpha: u32) -> Result<u64> {
    let pp = PrimePower { p, alpha };
    let m = pp.value();
    let x = residue(x, m);
    if x % p == 0 {
        return Err(Error::NotUnit { x: x as i64, modulus: m });
    }
    let n = pp.phi();
    let step = (n as f64).sqrt().ceil() as u64;
    let mut baby = HashMap::with_capacity(step as usize);
    let mut cur = 1u64;
    for j in 0..step {
        baby.entry(cur).or_insert(j);
        cur = (cur as u128 * g as u128 % m as u128) as u64;
    }
    // g^(-step)
    let factor = pow_mod(g, n - step % n, m);
    let mut gamma = x;
    for i in 0..=step {
        if let Some(&j) = baby.get(&gamma) {
            let e = (i * step + j) % n;
            if pow_mod(g, e, m) == x {
                return Ok(e);
            }
        }
        gamma = (gamma as u128 * factor as u128 % m as u128) as u64;
    }
    Err(Error::OutOfRange(format!("{g} does not generate the units modulo {m}")))
}
