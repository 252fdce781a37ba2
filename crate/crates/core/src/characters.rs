//! Dirichlet characters modulo an odd `q`.
//!
//! The unit group modulo each odd prime power `p^alpha` is cyclic with a
//! fixed generator `g` (see [`primitive_root`]). A character is the product
//! over the prime-power factors of `a -> e(k * ind_g(a) / phi(p^alpha))`,
//! so it is named by one index `k` per factor. Values are exact rational
//! exponents of roots of unity.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::arith::{primitive_root, residue, Modulus, PrimePower};
use crate::cyclo::CycloSum;
use crate::error::{Error, Result};

#[derive(Debug)]
struct Component {
    prime_power: PrimePower,
    modulus: u64,
    phi: u64,
    generator: u64,
    /// `log[a]` is the index of `a` to base `generator`, `u32::MAX` off units.
    log: Vec<u32>,
}

impl Component {
    fn new(prime_power: PrimePower) -> Result<Self> {
        let modulus = prime_power.value();
        let phi = prime_power.phi();
        let generator = primitive_root(prime_power.p, prime_power.alpha)?;
        let mut log = vec![u32::MAX; modulus as usize];
        let mut x = 1u64;
        for i in 0..phi {
            log[x as usize] = i as u32;
            x = x * generator % modulus;
        }
        Ok(Component { prime_power, modulus, phi, generator, log })
    }

    fn index(&self, a: i64) -> Option<u64> {
        match self.log[residue(a, self.modulus) as usize] {
            u32::MAX => None,
            i => Some(i as u64),
        }
    }
}

/// Precomputed index tables for all characters modulo `q`.
#[derive(Debug)]
pub struct CharacterGroup {
    modulus: Modulus,
    components: Vec<Component>,
}

impl CharacterGroup {
    pub fn new(modulus: &Modulus) -> Result<Arc<Self>> {
        let components = modulus
            .factors()
            .iter()
            .map(|&pp| Component::new(pp))
            .collect::<Result<_>>()?;
        Ok(Arc::new(CharacterGroup { modulus: modulus.clone(), components }))
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// Number of characters, `phi(q)`.
    pub fn len(&self) -> usize {
        self.modulus.phi() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn generators(&self) -> Vec<u64> {
        self.components.iter().map(|c| c.generator).collect()
    }

    pub fn character(self: &Arc<Self>, indices: Vec<u64>) -> Result<Character> {
        if indices.len() != self.components.len() {
            return Err(Error::OutOfRange(format!(
                "expected {} character indices, got {}",
                self.components.len(),
                indices.len()
            )));
        }
        for (k, c) in indices.iter().zip(&self.components) {
            if *k >= c.phi {
                return Err(Error::OutOfRange(format!(
                    "character index {k} not below phi({}) = {}",
                    c.modulus, c.phi
                )));
            }
        }
        Ok(Character { group: Arc::clone(self), indices })
    }

    pub fn principal(self: &Arc<Self>) -> Character {
        Character { group: Arc::clone(self), indices: vec![0; self.components.len()] }
    }

    /// All characters, index vectors in lexicographic order.
    pub fn characters(self: &Arc<Self>) -> Vec<Character> {
        let mut out = Vec::with_capacity(self.len());
        let mut idx = vec![0u64; self.components.len()];
        loop {
            out.push(Character { group: Arc::clone(self), indices: idx.clone() });
            // odometer, last position fastest
            let mut pos = idx.len();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < self.components[pos].phi {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    /// The exponent of `chi(a)` over the common denominator `phi(q)`, or
    /// `None` off the units.
    fn log_value(&self, indices: &[u64], a: i64) -> Option<u64> {
        let phi = self.modulus.phi();
        let mut acc = 0u128;
        for (k, c) in indices.iter().zip(&self.components) {
            let ind = c.index(a)?;
            acc += (*k as u128 * ind as u128 % c.phi as u128) * (phi / c.phi) as u128;
        }
        Some((acc % phi as u128) as u64)
    }
}

/// Value of a character: zero off the units, otherwise `e(numerator/denominator)`
/// with the fraction in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharValue {
    Zero,
    Root { numerator: u64, denominator: u64 },
}

impl CharValue {
    /// The value as a [`CycloSum`] of order `order`.
    pub fn to_cyclo(self, order: usize) -> Result<CycloSum> {
        match self {
            CharValue::Zero => Ok(CycloSum::zero(order)),
            CharValue::Root { numerator, denominator } => {
                CycloSum::from_root(order, numerator as i64, denominator)
            }
        }
    }
}

/// A Dirichlet character modulo `q`.
#[derive(Clone)]
pub struct Character {
    group: Arc<CharacterGroup>,
    indices: Vec<u64>,
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Character(mod {}, {:?})", self.group.modulus.q(), self.indices)
    }
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        self.group.modulus == other.group.modulus && self.indices == other.indices
    }
}

impl Eq for Character {}

impl Character {
    pub fn modulus(&self) -> &Modulus {
        &self.group.modulus
    }

    pub fn group(&self) -> &Arc<CharacterGroup> {
        &self.group
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn generators(&self) -> Vec<u64> {
        self.group.generators()
    }

    pub fn is_principal(&self) -> bool {
        self.indices.iter().all(|&k| k == 0)
    }

    /// Multiplicative order of the character.
    pub fn order(&self) -> u64 {
        self.indices
            .iter()
            .zip(&self.group.components)
            .map(|(&k, c)| c.phi / k.gcd(&c.phi))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    /// The conjugate character: each index negated modulo its `phi`.
    pub fn conj(&self) -> Character {
        let indices = self
            .indices
            .iter()
            .zip(&self.group.components)
            .map(|(&k, c)| (c.phi - k) % c.phi)
            .collect();
        Character { group: Arc::clone(&self.group), indices }
    }

    /// Pointwise product with a character of the same modulus.
    pub fn mul(&self, other: &Character) -> Result<Character> {
        if self.modulus() != other.modulus() {
            return Err(Error::OutOfRange("characters have different moduli".into()));
        }
        let indices = self
            .indices
            .iter()
            .zip(&other.indices)
            .zip(&self.group.components)
            .map(|((&a, &b), c)| (a + b) % c.phi)
            .collect();
        Ok(Character { group: Arc::clone(&self.group), indices })
    }

    /// `chi(a)` as an exact root of unity, or zero when `gcd(a, q) > 1`.
    pub fn evaluate(&self, a: i64) -> CharValue {
        match self.group.log_value(&self.indices, a) {
            None => CharValue::Zero,
            Some(num) => {
                let den = self.group.modulus.phi();
                let g = num.gcd(&den);
                CharValue::Root { numerator: num / g, denominator: den / g }
            }
        }
    }

    /// Exponent of `chi(a)` over the denominator `phi(q)`; `None` off units.
    pub fn exponent(&self, a: i64) -> Option<u64> {
        self.group.log_value(&self.indices, a)
    }

    /// The character `chi1 * chi2` modulo `m1 * m2` for coprime moduli.
    /// `target` must be the group modulo `m1 * m2`.
    pub fn crt_product(chi1: &Character, chi2: &Character, target: &Arc<CharacterGroup>) -> Result<Character> {
        let (q1, q2) = (chi1.modulus().q(), chi2.modulus().q());
        if q1.gcd(&q2) != 1 || target.modulus.q() != q1 * q2 {
            return Err(Error::hypothesis(
                "character product",
                format!("moduli {q1} and {q2} must be coprime with product {}", target.modulus.q()),
            ));
        }
        let indices = target
            .components
            .iter()
            .map(|c| {
                [chi1, chi2]
                    .into_iter()
                    .find_map(|chi| {
                        chi.group
                            .components
                            .iter()
                            .position(|d| d.prime_power == c.prime_power)
                            .map(|i| chi.indices[i])
                    })
                    .expect("every prime power of m1*m2 comes from m1 or m2")
            })
            .collect();
        target.character(indices)
    }
}

/// Every character modulo `q`, in lexicographic order of index vectors.
pub fn enumerate_characters(modulus: &Modulus) -> Result<Vec<Character>> {
    Ok(CharacterGroup::new(modulus)?.characters())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;

    fn group(q: u64) -> Arc<CharacterGroup> {
        CharacterGroup::new(&factorize(q).unwrap()).unwrap()
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(group(9).characters().len(), 6);
        assert_eq!(group(675).characters().len(), 360);
        let chars = group(7).characters();
        assert_eq!(chars.len(), 6);
        let quadratic: Vec<_> = chars.iter().filter(|c| c.order() == 2).collect();
        assert_eq!(quadratic.len(), 1);
        assert_eq!(quadratic[0].indices(), &[3]);
    }

    #[test]
    fn enumeration_is_lexicographic_and_distinct() {
        let chars = group(225).characters();
        for w in chars.windows(2) {
            assert!(w[0].indices() < w[1].indices());
        }
        assert_eq!(chars[0].indices(), &[0, 0]);
        assert_eq!(chars[1].indices(), &[0, 1]);
    }

    #[test]
    fn evaluate_examples() {
        let g9 = group(9);
        assert_eq!(g9.principal().evaluate(2), CharValue::Root { numerator: 0, denominator: 1 });
        let g7 = group(7);
        let legendre = g7.character(vec![3]).unwrap();
        assert_eq!(legendre.evaluate(3), CharValue::Root { numerator: 1, denominator: 2 });
        for chi in g9.characters() {
            assert_eq!(chi.evaluate(3), CharValue::Zero);
            assert_eq!(chi.evaluate(0), CharValue::Zero);
        }
    }

    #[test]
    fn legendre_character_matches_symbol() {
        for p in [3u64, 5, 7, 11, 13] {
            let g = group(p);
            let chi = g.character(vec![(p - 1) / 2]).unwrap();
            for a in 1..p as i64 {
                let expect = crate::arith::legendre(a, p).unwrap();
                let got = match chi.evaluate(a) {
                    CharValue::Root { numerator: 0, .. } => 1,
                    CharValue::Root { numerator: 1, denominator: 2 } => -1,
                    other => panic!("{other:?}"),
                };
                assert_eq!(got, expect);
            }
        }
    }

    #[test]
    fn rejects_bad_indices() {
        let g = group(45);
        assert!(g.character(vec![0]).is_err());
        assert!(g.character(vec![6, 0]).is_err());
        assert!(g.character(vec![5, 3]).is_ok());
    }

    #[test]
    fn multiplicativity_and_conjugation() {
        for q in [3u64, 9, 15, 25, 27, 45, 49] {
            let g = group(q);
            let phi = g.modulus().phi();
            let units: Vec<i64> = (1..q as i64).filter(|a| a.gcd(&(q as i64)) == 1).collect();
            for chi in g.characters() {
                let conj = chi.conj();
                for &a in &units {
                    let ea = chi.exponent(a).unwrap();
                    assert_eq!((ea + conj.exponent(a).unwrap()) % phi, 0);
                    for &b in &units {
                        let eb = chi.exponent(b).unwrap();
                        let eab = chi.exponent(a * b % q as i64).unwrap();
                        assert_eq!((ea + eb) % phi, eab, "q={q} {chi:?} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn crt_product_splits_values() {
        let (g9, g25, g225) = (group(9), group(25), group(225));
        for c1 in g9.characters() {
            for c2 in g25.characters().into_iter().step_by(3) {
                let chi = Character::crt_product(&c1, &c2, &g225).unwrap();
                for a in [1i64, 2, 7, 13, 101, 224] {
                    let want = c1.evaluate(a).to_cyclo(120).unwrap()
                        .try_mul(&c2.evaluate(a).to_cyclo(120).unwrap())
                        .unwrap();
                    assert!(chi.evaluate(a).to_cyclo(120).unwrap().equals_exact(&want));
                }
            }
        }
        assert!(Character::crt_product(&g9.principal(), &g9.principal(), &group(81)).is_err());
    }
}
