//! Classical and generalized quadratic Gauss sums.
//!
//! `G(n; q) = sum_{a=1}^{q} e(n a^2 / q)` and
//! `G(n, chi; q) = sum_{a=1}^{q} chi(a) e(n a^2 / q)`, computed exactly as
//! [`CycloSum`]s of the working order `lcm(q, phi(q))`: character values
//! have order dividing `phi(q)` and the additive part order dividing `q`.

use std::sync::Arc;

use num_integer::Integer;

use crate::arith::{residue, Modulus};
use crate::characters::{Character, CharacterGroup};
use crate::cyclo::{CycloSum, FloatValue};
use crate::error::{Error, Result};

/// `lcm(q, phi(q))`, the order at which every `G(n, chi; q)` lives.
pub fn working_order(modulus: &Modulus) -> usize {
    modulus.q().lcm(&modulus.phi()) as usize
}

/// `sum_{a=1}^{q} e(n a^2 / q)` at order `q`.
pub fn classical_gauss_sum(n: i64, modulus: &Modulus) -> CycloSum {
    let q = modulus.q();
    let n = residue(n, q) as u128;
    let mut s = CycloSum::zero(q as usize);
    for a in 1..=q as u128 {
        s.add_term((n * a % q as u128 * a % q as u128) as u64, 1);
    }
    s
}

/// `sum_{a=1}^{q} chi(a) e(n a^k / q)` at the given order, which must be a
/// multiple of `lcm(q, phi(q))`. `k = 2` is the quadratic Gauss sum.
pub fn character_power_sum(n: i64, chi: &Character, k: u32, order: usize) -> Result<CycloSum> {
    let modulus = chi.modulus();
    let (q, phi) = (modulus.q(), modulus.phi());
    if order as u64 % q != 0 || order as u64 % phi != 0 {
        return Err(Error::NotADivisor { denominator: q.lcm(&phi), order });
    }
    let additive_step = order as u64 / q;
    let char_step = order as u64 / phi;
    let n = residue(n, q) as u128;
    let mut s = CycloSum::zero(order);
    for a in 1..q {
        let Some(e) = chi.exponent(a as i64) else { continue };
        let ak = crate::arith::pow_mod(a, k as u64, q) as u128;
        let add = (n * ak % q as u128) as u64;
        let idx = (add * additive_step + e * char_step) % order as u64;
        s.add_term(idx, 1);
    }
    Ok(s)
}

/// `G(n, chi; q)` with its exact and floating-point values.
#[derive(Debug, Clone)]
pub struct GaussSumValue {
    /// `n` reduced into `[0, q)`.
    pub n: u64,
    pub chi: Character,
    pub exact: CycloSum,
    pub float: FloatValue,
}

impl GaussSumValue {
    pub fn modulus(&self) -> &Modulus {
        self.chi.modulus()
    }

    /// `|G|^2` as `G * conj(G)`.
    pub fn abs_squared(&self) -> CycloSum {
        &self.exact * &self.exact.conjugate()
    }

    pub fn abs_float(&self) -> f64 {
        self.float.value.norm()
    }
}

/// `G(n, chi; q)`. Rejects `gcd(n, q) > 1`.
pub fn gauss_sum(n: i64, chi: &Character) -> Result<GaussSumValue> {
    let modulus = chi.modulus();
    if !modulus.is_coprime_to(n) {
        return Err(Error::hypothesis("gauss sum", format!("gcd(n, q) = 1 fails for n = {n}, q = {modulus}")));
    }
    let exact = character_power_sum(n, chi, 2, working_order(modulus))?;
    let float = exact.eval_float();
    Ok(GaussSumValue { n: residue(n, modulus.q()), chi: chi.clone(), exact, float })
}

/// Checks `G(u, chi; m1 m2) = chi1(m2) chi2(m1) G(u m2, chi1; m1) G(u m1, chi2; m2)`
/// exactly, where `chi = chi1 chi2` through the Chinese remainder theorem.
pub fn multiplicativity_check(u: i64, chi1: &Character, chi2: &Character) -> Result<bool> {
    let target = product_group(chi1.modulus(), chi2.modulus(), u)?;
    multiplicativity_check_in(u, chi1, chi2, &target)
}

/// The group modulo `m1 * m2`, after checking the coprimality hypotheses.
pub fn product_group(m1: &Modulus, m2: &Modulus, u: i64) -> Result<Arc<CharacterGroup>> {
    let (q1, q2) = (m1.q(), m2.q());
    if q1.gcd(&q2) != 1 {
        return Err(Error::hypothesis("multiplicativity", format!("moduli {q1} and {q2} are not coprime")));
    }
    let combined = crate::arith::factorize(q1 * q2)?;
    if !combined.is_coprime_to(u) {
        return Err(Error::hypothesis("multiplicativity", format!("gcd(u, m1 m2) = 1 fails for u = {u}")));
    }
    CharacterGroup::new(&combined)
}

/// [`multiplicativity_check`] with a prebuilt group modulo `m1 * m2`.
pub fn multiplicativity_check_in(
    u: i64,
    chi1: &Character,
    chi2: &Character,
    target: &Arc<CharacterGroup>,
) -> Result<bool> {
    let (m1, m2) = (chi1.modulus(), chi2.modulus());
    let chi = Character::crt_product(chi1, chi2, target)?;
    let order = working_order(target.modulus());
    let lhs = character_power_sum(u, &chi, 2, order)?;
    let (q1, q2) = (m1.q() as i64, m2.q() as i64);
    let g1 = character_power_sum(u * q2, chi1, 2, working_order(m1))?.embed(order)?;
    let g2 = character_power_sum(u * q1, chi2, 2, working_order(m2))?.embed(order)?;
    let twist = &chi1.evaluate(q2).to_cyclo(order)? * &chi2.evaluate(q1).to_cyclo(order)?;
    let rhs = &(&twist * &g1) * &g2;
    Ok(lhs.equals_exact(&rhs))
}

/// Result of checking `|G(n, chi; q)| <= 2^omega(q) sqrt(q)` over all `chi`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub q: u64,
    pub n: u64,
    pub max_abs: f64,
    /// Index vector of a character attaining `max_abs`.
    pub argmax: Vec<u64>,
    pub bound: f64,
    pub tolerance: f64,
    pub holds: bool,
}

pub const BOUND_TOLERANCE: f64 = 1e-6;

/// `2^omega(q) sqrt(q)`.
pub fn gauss_bound(modulus: &Modulus) -> f64 {
    2f64.powi(modulus.omega() as i32) * (modulus.q() as f64).sqrt()
}

pub fn bound_check(n: i64, modulus: &Modulus) -> Result<BoundReport> {
    let group = CharacterGroup::new(modulus)?;
    let mut max_abs = -1.0f64;
    let mut argmax = Vec::new();
    for chi in group.characters() {
        let g = gauss_sum(n, &chi)?;
        let v = g.abs_float();
        if v > max_abs {
            max_abs = v;
            argmax = chi.indices().to_vec();
        }
    }
    let bound = gauss_bound(modulus);
    Ok(BoundReport {
        q: modulus.q(),
        n: residue(n, modulus.q()),
        max_abs,
        argmax,
        bound,
        tolerance: BOUND_TOLERANCE,
        holds: max_abs <= bound + BOUND_TOLERANCE,
    })
}
