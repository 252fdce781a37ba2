//! Closed-form right-hand sides, evaluated exactly.
//!
//! Each evaluator refuses inputs outside the hypotheses of its identity. The
//! identities are false there (the power-mean formula fails for
//! non-square-full `q`, for instance), so extrapolating would be wrong.
//!
//! Signed powers such as `(-1/p)^(k/2)` are integer powers of the Legendre
//! symbol `(-1/p)`, so every value here is a rational integer except the
//! fourth moment at `p = 1 mod 4` (an element of `Z[sqrt p]`) and the
//! `k`-th power fourth moment (a rational).

use std::fmt;

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_rational::BigRational;
use num_traits::{Pow, Signed, ToPrimitive, Zero};

use crate::arith::{is_odd_prime, legendre, legendre_minus_one, residue, totient, Modulus, PrimePower};
use crate::cyclo::CycloSum;
use crate::error::{Error, Result};
use crate::gauss::classical_gauss_sum;

fn odd_prime(claim: &'static str, p: u64) -> Result<()> {
    if is_odd_prime(p) {
        Ok(())
    } else {
        Err(Error::hypothesis(claim, format!("p = {p} is not an odd prime")))
    }
}

fn big(x: impl Into<BigInt>) -> BigInt {
    x.into()
}

/// `(-1)^e` for a possibly negative exponent.
fn sign_pow(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `4^((m-1) omega(q)) q^(m-1) phi(q)^2`: the `2m`-th power mean of
/// `|G(n, chi; q)|` over all characters, valid for odd square-full `q > 1`,
/// `m >= 2` and any `n` coprime to `q`.
pub fn power_mean_closed(modulus: &Modulus, m: u32) -> Result<BigInt> {
    const CLAIM: &str = "theorem1";
    if !modulus.is_square_full() {
        return Err(Error::hypothesis(CLAIM, format!("q = {} is not square-full", modulus.q())));
    }
    if m < 2 {
        return Err(Error::hypothesis(CLAIM, format!("m = {m} must be at least 2")));
    }
    let four = big(4).pow((m - 1) as usize * modulus.omega());
    Ok(four * big(modulus.q()).pow(m - 1) * big(modulus.phi()).pow(2u32))
}

/// `4^(m-1) phi(p^alpha)^2 p^((m-1) alpha)`, the prime-power case.
pub fn prime_power_mean_closed(p: u64, alpha: u32, m: u32) -> Result<BigInt> {
    const CLAIM: &str = "lemma9";
    odd_prime(CLAIM, p)?;
    if alpha < 2 {
        return Err(Error::hypothesis(CLAIM, format!("alpha = {alpha} must be at least 2")));
    }
    if m < 2 {
        return Err(Error::hypothesis(CLAIM, format!("m = {m} must be at least 2")));
    }
    let phi = PrimePower { p, alpha }.phi();
    Ok(big(4).pow(m - 1) * big(phi).pow(2u32) * big(p).pow((m - 1) * alpha))
}

/// `T_p(n, k, a)`: the sum of `(x_1 ... x_k / p)` over tuples of nonzero
/// residues `x_1 .. x_n` with `x_1 + ... + x_n = a (mod p)`.
///
/// Four cases by the parity of `k` and whether `p | a`.
pub fn t_sum_closed(p: u64, n: u32, k: u32, a: i64) -> Result<BigInt> {
    const CLAIM: &str = "t-sum";
    odd_prime(CLAIM, p)?;
    if k < 1 || k > n {
        return Err(Error::hypothesis(CLAIM, format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let minus_one = legendre_minus_one(p) as i64;
    let (n, k) = (n as i64, k as i64);
    let divides = residue(a, p) == 0;
    let pb = big(p);
    let v = match (k % 2 == 1, divides) {
        (true, false) => {
            let a_p = legendre(a, p)? as i64;
            let sign = sign_pow(n - k) * a_p * minus_one.pow(((k - 1) / 2) as u32);
            big(sign) * pb.pow(((k - 1) / 2) as u32)
        }
        (true, true) => BigInt::zero(),
        (false, false) => {
            let sign = sign_pow(n + 1 - k) * minus_one.pow((k / 2) as u32);
            big(sign) * pb.pow(((k - 2) / 2) as u32)
        }
        (false, true) => {
            let sign = sign_pow(n - k) * minus_one.pow((k / 2) as u32);
            big(sign) * big(p - 1) * pb.pow(((k - 2) / 2) as u32)
        }
    };
    Ok(v)
}

/// `sum_{x=1}^{p-1} ((x^2 + a x) / p)`: `-1` when `p` does not divide `a`,
/// `p - 1` when it does.
pub fn quad_sum_closed(p: u64, a: i64) -> Result<BigInt> {
    odd_prime("quad-sum", p)?;
    Ok(if residue(a, p) == 0 { big(p - 1) } else { big(-1) })
}

/// Number of tuples of `n` nonzero residues mod `p` summing to `a`.
pub fn count_closed(p: u64, n: u32, a: i64) -> Result<BigInt> {
    const CLAIM: &str = "count";
    odd_prime(CLAIM, p)?;
    if n < 1 {
        return Err(Error::hypothesis(CLAIM, "n must be at least 1"));
    }
    let top = big(p - 1).pow(n);
    let sign = big(sign_pow(n as i64));
    let numerator = if residue(a, p) == 0 { top + big(p - 1) * sign } else { top - sign };
    let (q, r) = numerator.div_rem(&big(p));
    debug_assert!(r.is_zero());
    Ok(q)
}

/// How a unit `a` modulo `p^alpha` sits relative to `a^2 - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerSumCase {
    /// `p^(alpha-1)` does not divide `a^2 - 1`.
    NotDivisible,
    /// `p^(alpha-1) || a^2 - 1`, with `a = r p^(alpha-1) + epsilon`.
    ExactlyDivides { r: u64, epsilon: i8 },
    /// `p^alpha | a^2 - 1`, i.e. `a = +-1`.
    FullyDivides,
}

/// Classifies a unit `a` modulo `p^alpha`, `alpha >= 2`.
pub fn classify_inner(p: u64, alpha: u32, a: i64) -> Result<InnerSumCase> {
    const CLAIM: &str = "inner-sum";
    odd_prime(CLAIM, p)?;
    if alpha < 2 {
        return Err(Error::hypothesis(CLAIM, format!("alpha = {alpha} must be at least 2")));
    }
    let pa = PrimePower { p, alpha }.value();
    let low = pa / p;
    let a = residue(a, pa);
    if a % p == 0 {
        return Err(Error::hypothesis(CLAIM, format!("a = {a} is not a unit modulo {pa}")));
    }
    let sq = (a as u128 * a as u128 % pa as u128) as u64;
    let a2m1 = (sq + pa - 1) % pa;
    if a2m1 == 0 {
        return Ok(InnerSumCase::FullyDivides);
    }
    if a2m1 % low != 0 {
        return Ok(InnerSumCase::NotDivisible);
    }
    // a = +-1 mod p^(alpha-1)
    if a % low == 1 {
        Ok(InnerSumCase::ExactlyDivides { r: a / low, epsilon: 1 })
    } else {
        Ok(InnerSumCase::ExactlyDivides { r: (a + 1) / low, epsilon: -1 })
    }
}

/// `sum'_{b mod p^alpha} e(n b^2 (a^2 - 1) / p^alpha)` as a [`CycloSum`] of
/// order `p^alpha`:
/// `0`, `p^(alpha-1) [ (2 epsilon r n / p) G(1; p) - 1 ]` or `phi(p^alpha)`
/// according to [`classify_inner`].
pub fn inner_sum_closed(p: u64, alpha: u32, n: i64, a: i64) -> Result<CycloSum> {
    const CLAIM: &str = "inner-sum";
    odd_prime(CLAIM, p)?;
    if residue(n, p) == 0 {
        return Err(Error::hypothesis(CLAIM, format!("gcd(n, p) = 1 fails for n = {n}")));
    }
    let pp = PrimePower { p, alpha };
    let order = pp.value() as usize;
    Ok(match classify_inner(p, alpha, a)? {
        InnerSumCase::NotDivisible => CycloSum::zero(order),
        InnerSumCase::FullyDivides => CycloSum::integer(order, pp.phi()),
        InnerSumCase::ExactlyDivides { r, epsilon } => {
            let symbol = legendre(2 * epsilon as i64 * r as i64 * residue(n, p) as i64, p)?;
            let g = classical_gauss_sum(1, &Modulus::prime_power(p, 1)?).embed(order)?;
            let inner = &g.scale(&big(symbol)) - &CycloSum::integer(order, 1);
            inner.scale(&big(p).pow(alpha - 1))
        }
    })
}

/// `A(m, k) = 2^(m-2) p^(m(alpha-1)-1) ((-1)^k (p+1)(p-1)^m + (p-1)^(m-k+1) (p+1)^k)`.
///
/// `A(m, k)` is the sum, over unit tuples with product `1 (mod p^alpha)`
/// whose first `k` entries satisfy `p^(alpha-1) || x^2 - 1` and the rest
/// `p^alpha | x^2 - 1`, of the product of the inner sums. For `m = 1` the
/// bracket is even, so the value stays integral.
pub fn a_sum_closed(p: u64, alpha: u32, m: u32, k: u32) -> Result<BigInt> {
    const CLAIM: &str = "a-sum";
    odd_prime(CLAIM, p)?;
    if alpha < 2 {
        return Err(Error::hypothesis(CLAIM, format!("alpha = {alpha} must be at least 2")));
    }
    if m < 1 || k > m {
        return Err(Error::hypothesis(CLAIM, format!("need 0 <= k <= m, m >= 1, got k = {k}, m = {m}")));
    }
    let (pm1, pp1) = (big(p - 1), big(p + 1));
    let bracket = big(sign_pow(k as i64)) * &pp1 * pm1.clone().pow(m) + pm1.pow(m - k + 1) * pp1.pow(k);
    let scaled = bracket * big(p).pow(m * (alpha - 1) - 1);
    Ok(if m >= 2 {
        scaled * big(2).pow(m - 2)
    } else {
        let (q, r) = scaled.div_rem(&big(2));
        debug_assert!(r.is_zero());
        q
    })
}

/// `rational + radical * sqrt(p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticSurd {
    pub rational: BigInt,
    pub radical: BigInt,
    pub p: u64,
}

impl QuadraticSurd {
    pub fn to_f64(&self) -> f64 {
        self.rational.to_f64().unwrap() + self.radical.to_f64().unwrap() * (self.p as f64).sqrt()
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        self.radical.is_zero().then_some(&self.rational)
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radical.is_zero() {
            return write!(f, "{}", self.rational);
        }
        let sign = if self.radical.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}*sqrt({})", self.rational, sign, self.radical.abs(), self.p)
    }
}

/// Fourth power mean over characters modulo a prime:
/// `(p-1)(3p^2 - 6p - 1)`, plus `4 (n/p) (p-1) sqrt(p)` when `p = 1 mod 4`.
pub fn fourth_moment_prime_closed(p: u64, n: i64) -> Result<QuadraticSurd> {
    const CLAIM: &str = "zhang-p4";
    odd_prime(CLAIM, p)?;
    if residue(n, p) == 0 {
        return Err(Error::hypothesis(CLAIM, format!("p = {p} divides n = {n}")));
    }
    let pb = big(p);
    let rational = big(p - 1) * (big(3) * &pb * &pb - big(6) * &pb - big(1));
    let radical = if p % 4 == 1 { big(4 * legendre(n, p)? as i64) * big(p - 1) } else { BigInt::zero() };
    Ok(QuadraticSurd { rational, radical, p })
}

/// Sixth power mean over characters modulo a prime `p = 3 mod 4`:
/// `(p-1)(10p^3 - 25p^2 - 4p - 1)`. No closed form is known for
/// `p = 1 mod 4`, and that case is refused.
pub fn sixth_moment_prime_closed(p: u64) -> Result<BigInt> {
    const CLAIM: &str = "zhang-p6";
    odd_prime(CLAIM, p)?;
    if p % 4 == 1 {
        return Err(Error::hypothesis(
            CLAIM,
            format!("p = {p} is 1 mod 4; the sixth moment has no known closed form there (open question)"),
        ));
    }
    let pb = big(p);
    Ok(big(p - 1) * (big(10) * pb.clone().pow(3u32) - big(25) * &pb * &pb - big(4) * &pb - big(1)))
}

/// `q phi(q)^2 prod_{p | q} (k, p-1)^2 prod_{p | q, (k, p-1) = 1} phi(p-1)/(p-1)`,
/// the quoted fourth power mean of the `k`-th power sums
/// `sum_a chi(a) e(n a^k / q)` for odd square-full `q` and `(k, q) = 1`.
pub fn kth_power_fourth_moment_closed(modulus: &Modulus, k: u64) -> Result<BigRational> {
    const CLAIM: &str = "zhang-liu";
    let q = modulus.q();
    if !modulus.is_square_full() {
        return Err(Error::hypothesis(CLAIM, format!("q = {q} is not square-full")));
    }
    if k < 1 {
        return Err(Error::hypothesis(CLAIM, "k must be at least 1"));
    }
    if k.gcd(&q) != 1 {
        return Err(Error::hypothesis(CLAIM, format!("gcd(k, q) = 1 fails for k = {k}, q = {q}")));
    }
    let mut value = BigRational::from_integer(big(q) * big(modulus.phi()).pow(2u32));
    for f in modulus.factors() {
        let g = k.gcd(&(f.p - 1));
        value *= BigRational::from_integer(big(g * g));
        if g == 1 {
            value *= BigRational::new(big(totient(f.p - 1)), big(f.p - 1));
        }
    }
    Ok(value)
}

/// `C(m, k)` as a big integer.
pub fn choose(m: u32, k: u32) -> BigInt {
    binomial(big(m), big(k))
}

/// `phi(p^alpha) sum_k C(m, k) A(m, k)`, the decomposition of the
/// prime-power moment into the `A(m, k)` pieces.
pub fn recombined_prime_power_mean(p: u64, alpha: u32, m: u32) -> Result<BigInt> {
    let phi = PrimePower { p, alpha }.phi();
    let mut total = BigInt::zero();
    for k in 0..=m {
        total += choose(m, k) * a_sum_closed(p, alpha, m, k)?;
    }
    Ok(total * big(phi))
}
