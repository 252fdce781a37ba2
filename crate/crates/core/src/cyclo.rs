//! Exact arithmetic on integer combinations of `L`-th roots of unity.
//!
//! A [`CycloSum`] of order `L` stores coefficients `c_0 .. c_{L-1}` and
//! denotes `sum_j c_j e(j/L)` with `e(x) = exp(2 pi i x)`. This is the group
//! ring `Z[C_L]`, which maps onto the cyclotomic integers `Z[zeta_L]` with
//! kernel generated by `Phi_L`. Two vectors can name the same number, so
//! equality is decided by divisibility by the `L`-th cyclotomic polynomial
//! ([`CycloSum::equals_exact`]) and never by comparing coefficients.
//!
//! Multiplication is a sparse cyclic convolution. When the coefficient
//! magnitudes allow it the kernels run in `i128` and fall back to `BigInt`
//! otherwise, so results never overflow.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element of `Z[C_L]`, read as a sum of `L`-th roots of unity.
#[derive(Clone, Debug)]
pub struct CycloSum {
    order: usize,
    coeffs: Vec<BigInt>,
}

/// Floating-point value of a [`CycloSum`] with an a-priori bound on
/// `|computed - true|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloatValue {
    pub value: Complex64,
    pub error: f64,
}

impl CycloSum {
    pub fn zero(order: usize) -> Self {
        assert!(order >= 1, "order must be positive");
        CycloSum { order, coeffs: vec![BigInt::zero(); order] }
    }

    /// The rational integer `value`.
    pub fn integer(order: usize, value: impl Into<BigInt>) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value.into();
        s
    }

    /// `coeff * e(index/L)`.
    pub fn monomial(order: usize, index: u64, coeff: impl Into<BigInt>) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[(index % order as u64) as usize] = coeff.into();
        s
    }

    /// `e(numerator/denominator)` at working order `order`. Fails unless
    /// `denominator` divides `order`.
    pub fn from_root(order: usize, numerator: i64, denominator: u64) -> Result<Self> {
        if denominator == 0 || order as u64 % denominator != 0 {
            return Err(Error::NotADivisor { denominator, order });
        }
        let step = order as u64 / denominator;
        let j = (numerator as i128 * step as i128).rem_euclid(order as i128) as u64;
        Ok(Self::monomial(order, j, 1))
    }

    /// Builds from a coefficient vector of length `order`.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "order must be positive");
        CycloSum { order: coeffs.len(), coeffs }
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Adds `coeff` to the coefficient of `e(index/L)`.
    pub fn add_term(&mut self, index: u64, coeff: impl Into<BigInt>) {
        let j = (index % self.order as u64) as usize;
        self.coeffs[j] += coeff.into();
    }

    pub fn is_zero_vector(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn nonzero_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Sum of absolute coefficient values.
    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch { left: self.order, right: other.order })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycloSum { order: self.order, coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycloSum { order: self.order, coeffs })
    }

    /// Cyclic convolution of the coefficient vectors.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let xs = sparse(&self.coeffs);
        let ys = sparse(&other.coeffs);
        let l = self.order;
        // |c_k| <= l1(x) l1(y) for every product coefficient
        if self.l1_norm().bits() + other.l1_norm().bits() <= 125 {
            let xs: Vec<(usize, i128)> = xs.iter().map(|(i, c)| (*i, c.to_i128().unwrap())).collect();
            let ys: Vec<(usize, i128)> = ys.iter().map(|(i, c)| (*i, c.to_i128().unwrap())).collect();
            let mut acc = vec![0i128; l];
            for &(i, a) in &xs {
                for &(j, b) in &ys {
                    let k = if i + j >= l { i + j - l } else { i + j };
                    acc[k] += a * b;
                }
            }
            return Ok(CycloSum { order: l, coeffs: acc.into_iter().map(BigInt::from).collect() });
        }
        let mut acc = vec![BigInt::zero(); l];
        for (i, a) in &xs {
            for (j, b) in &ys {
                let k = (i + j) % l;
                acc[k] += *a * *b;
            }
        }
        Ok(CycloSum { order: l, coeffs: acc })
    }

    /// Complex conjugate: index `j` maps to `-j mod L`.
    pub fn conjugate(&self) -> Self {
        let l = self.order;
        let mut coeffs = vec![BigInt::zero(); l];
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs[(l - j) % l] = c.clone();
        }
        CycloSum { order: l, coeffs }
    }

    /// The Galois action `e(1/L) -> e(t/L)` for `t` coprime to `L`.
    pub fn galois(&self, t: i64) -> Result<Self> {
        let l = self.order as i64;
        if t.gcd(&l) != 1 {
            return Err(Error::OutOfRange(format!("{t} is not coprime to the order {l}")));
        }
        let mut coeffs = vec![BigInt::zero(); self.order];
        for (j, c) in self.coeffs.iter().enumerate() {
            let k = (j as i128 * t as i128).rem_euclid(l as i128) as usize;
            coeffs[k] = c.clone();
        }
        Ok(CycloSum { order: self.order, coeffs })
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        CycloSum { order: self.order, coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Re-embeds at order `new_order`, a multiple of the current order.
    pub fn embed(&self, new_order: usize) -> Result<Self> {
        if new_order % self.order != 0 {
            return Err(Error::NotADivisor { denominator: self.order as u64, order: new_order });
        }
        let step = new_order / self.order;
        let mut coeffs = vec![BigInt::zero(); new_order];
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs[j * step] = c.clone();
        }
        Ok(CycloSum { order: new_order, coeffs })
    }

    /// `self^exponent` with reduction modulo `Phi_L` between products.
    pub fn pow(&self, exponent: u32) -> Self {
        let mut acc = Self::integer(self.order, 1);
        let base = self.reduce();
        for _ in 0..exponent {
            acc = acc.try_mul(&base).expect("same order").reduce();
        }
        acc
    }

    /// Remainder modulo the `L`-th cyclotomic polynomial. Its coefficients
    /// vanish at indices `>= phi(L)`, and it names the same number. The
    /// remainder is unique, so two sums are equal iff their reductions agree.
    pub fn reduce(&self) -> Self {
        let phi_l = cyclotomic_terms(self.order);
        if let Some(coeffs) = reduce_i128(&self.coeffs, &phi_l) {
            return CycloSum { order: self.order, coeffs: coeffs.into_iter().map(BigInt::from).collect() };
        }
        CycloSum { order: self.order, coeffs: reduce_big(self.coeffs.clone(), &phi_l) }
    }

    /// True iff `self - other` is divisible by `Phi_L` over the integers.
    ///
    /// # Panics
    ///
    /// Panics if the orders differ.
    pub fn equals_exact(&self, other: &Self) -> bool {
        self.try_sub(other)
            .expect("equals_exact needs matching orders")
            .reduce()
            .is_zero_vector()
    }

    /// The rational integer this sum equals, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        let r = self.reduce();
        if r.coeffs[1..].iter().all(Zero::is_zero) {
            Some(r.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Double-precision value, summing terms in ascending index order.
    ///
    /// The error bound covers argument rounding, `sin`/`cos` error,
    /// coefficient conversion and the running sum: `(N + 16) eps sum|c_j|`
    /// per component with `N` the number of nonzero terms, doubled for the
    /// modulus.
    pub fn eval_float(&self) -> FloatValue {
        let l = self.order as f64;
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        let mut mass = 0.0f64;
        let mut terms = 0usize;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = c.to_f64().unwrap_or(f64::INFINITY);
            let (s, co) = (TAU * j as f64 / l).sin_cos();
            re += c * co;
            im += c * s;
            mass += c.abs();
            terms += 1;
        }
        let error = 2.0 * (terms as f64 + 16.0) * f64::EPSILON * mass * (1.0 + 1e-12);
        FloatValue { value: Complex64::new(re, im), error }
    }
}

impl fmt::Display for CycloSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            if j == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            let g = j.gcd(&self.order);
            write!(f, "e({}/{})", j / g, self.order / g)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &CycloSum {
    type Output = CycloSum;
    fn add(self, rhs: &CycloSum) -> CycloSum {
        self.try_add(rhs).expect("order mismatch in CycloSum addition")
    }
}

impl Sub for &CycloSum {
    type Output = CycloSum;
    fn sub(self, rhs: &CycloSum) -> CycloSum {
        self.try_sub(rhs).expect("order mismatch in CycloSum subtraction")
    }
}

impl Mul for &CycloSum {
    type Output = CycloSum;
    fn mul(self, rhs: &CycloSum) -> CycloSum {
        self.try_mul(rhs).expect("order mismatch in CycloSum multiplication")
    }
}

impl Neg for &CycloSum {
    type Output = CycloSum;
    fn neg(self) -> CycloSum {
        CycloSum { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

fn sparse(coeffs: &[BigInt]) -> Vec<(usize, &BigInt)> {
    coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
}

/// Sparse form of a monic cyclotomic polynomial: its degree and the
/// nonzero lower-order terms.
struct CyclotomicTerms {
    degree: usize,
    lower: Vec<(usize, i64)>,
}

fn reduce_i128(coeffs: &[BigInt], phi: &CyclotomicTerms) -> Option<Vec<i128>> {
    let mut f: Vec<i128> = coeffs.iter().map(|c| c.to_i128()).collect::<Option<_>>()?;
    let d = phi.degree;
    for top in (d..f.len()).rev() {
        let c = f[top];
        if c == 0 {
            continue;
        }
        for &(j, a) in &phi.lower {
            let slot = &mut f[top - d + j];
            *slot = slot.checked_sub(c.checked_mul(a as i128)?)?;
        }
        f[top] = 0;
    }
    Some(f)
}

fn reduce_big(mut f: Vec<BigInt>, phi: &CyclotomicTerms) -> Vec<BigInt> {
    let d = phi.degree;
    for top in (d..f.len()).rev() {
        if f[top].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut f[top]);
        for &(j, a) in &phi.lower {
            f[top - d + j] -= &c * a;
        }
    }
    f
}

fn cyclotomic_terms(n: usize) -> Arc<CyclotomicTerms> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CyclotomicTerms>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return t.clone();
    }
    let poly = cyclotomic_polynomial(n);
    let degree = poly.len() - 1;
    let lower = poly[..degree]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(j, &c)| (j, c))
        .collect();
    let t = Arc::new(CyclotomicTerms { degree, lower });
    cache.lock().unwrap().insert(n, t.clone());
    t
}

/// Coefficients (ascending) of the `n`-th cyclotomic polynomial, obtained by
/// dividing `X^n - 1` exactly by `Phi_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic index must be positive");
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.as_ref().clone();
    }
    let mut poly = vec![0i64; n + 1];
    poly[0] = -1;
    poly[n] = 1;
    for d in (1..n).filter(|d| n % d == 0) {
        poly = exact_div_monic(&poly, &cyclotomic_polynomial(d));
    }
    cache.lock().unwrap().insert(n, Arc::new(poly.clone()));
    poly
}

/// Exact quotient of `num` by the monic `den`; panics on a nonzero remainder.
fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1);
    let mut rem = num.to_vec();
    let qd = num.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    let terms: Vec<(usize, i64)> =
        den[..dd].iter().enumerate().filter(|(_, &c)| c != 0).map(|(j, &c)| (j, c)).collect();
    for k in (0..=qd).rev() {
        let c = rem[k + dd];
        if c == 0 {
            continue;
        }
        quot[k] = c;
        rem[k + dd] = 0;
        for &(j, a) in &terms {
            rem[k + j] = rem[k + j]
                .checked_sub(c.checked_mul(a).expect("cyclotomic coefficient overflow"))
                .expect("cyclotomic coefficient overflow");
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}
