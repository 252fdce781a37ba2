//! Cartesian parameter grids with per-claim defaults.

use super::{Case, Claim};
use crate::arith::{is_odd_prime, PrimePower};
use crate::error::{Error, Result};

/// Parameter lists for a run. Empty lists take the claim's default range.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GridSpec {
    pub q: Vec<u64>,
    pub m: Vec<u32>,
    /// The coefficient `n` of a Gauss sum, or the tuple length for the
    /// tuple sums (`t-sum`, `count`).
    pub n: Vec<i64>,
    /// With `n` empty, tuple lengths `1..=n_max` for the tuple sums.
    pub n_max: Option<u32>,
    pub p: Vec<u64>,
    pub alpha: Vec<u32>,
    pub k: Vec<u32>,
    pub a: Vec<i64>,
    /// Coprime modulus pairs for the multiplicativity claim.
    pub pairs: Vec<(u64, u64)>,
}

/// Square-full moduli used when no `q` is given.
pub const DEFAULT_SQUARE_FULL: [u64; 4] = [9, 25, 27, 49];
/// Prime powers used when neither `p` nor `alpha` is given.
pub const DEFAULT_PRIME_POWERS: [(u64, u32); 4] = [(3, 2), (3, 3), (5, 2), (7, 2)];
pub const DEFAULT_PRIMES: [u64; 5] = [3, 5, 7, 11, 13];
pub const DEFAULT_PAIRS: [(u64, u64); 3] = [(9, 25), (9, 49), (27, 25)];

fn or<T: Clone>(given: &[T], default: &[T]) -> Vec<T> {
    if given.is_empty() {
        default.to_vec()
    } else {
        given.to_vec()
    }
}

impl GridSpec {
    /// Expands the grid for `claim` in a fixed order: the parameters vary
    /// lexicographically in the order they appear in each report.
    pub fn cases(&self, claim: Claim) -> Result<Vec<Case>> {
        let mut out = Vec::new();
        let mut push = |params: Vec<(&'static str, i64)>| out.push(Case::new(claim, params));
        match claim {
            Claim::PowerMean => {
                for q in or(&self.q, &DEFAULT_SQUARE_FULL) {
                    for m in or(&self.m, &[2, 3]) {
                        for n in or(&self.n, &[1]) {
                            push(vec![("q", q as i64), ("m", m as i64), ("n", n)]);
                        }
                    }
                }
            }
            Claim::PrimePowerMean => {
                for (p, alpha) in self.prime_powers() {
                    for m in or(&self.m, &[2, 3]) {
                        for n in or(&self.n, &[1]) {
                            push(vec![("p", p as i64), ("alpha", alpha as i64), ("m", m as i64), ("n", n)]);
                        }
                    }
                }
            }
            Claim::TSum | Claim::Count => {
                for p in or(&self.p, &[3, 5, 7]) {
                    for n in self.tuple_lengths(if claim == Claim::TSum { 4 } else { 6 })? {
                        let ks: Vec<u32> = if claim == Claim::Count {
                            vec![0]
                        } else if self.k.is_empty() {
                            (1..=n).collect()
                        } else {
                            self.k.clone()
                        };
                        for k in ks {
                            for a in self.residues(p) {
                                if claim == Claim::TSum {
                                    push(vec![("p", p as i64), ("n", n as i64), ("k", k as i64), ("a", a)]);
                                } else {
                                    push(vec![("p", p as i64), ("n", n as i64), ("a", a)]);
                                }
                            }
                        }
                    }
                }
            }
            Claim::QuadSum => {
                for p in or(&self.p, &DEFAULT_PRIMES) {
                    for a in self.residues(p) {
                        push(vec![("p", p as i64), ("a", a)]);
                    }
                }
            }
            Claim::InnerSum => {
                for (p, alpha) in self.prime_powers() {
                    let pa = PrimePower { p, alpha }.value() as i64;
                    for n in or(&self.n, &[1, 2]) {
                        let units: Vec<i64> = if self.a.is_empty() {
                            (1..pa).filter(|a| a % p as i64 != 0).collect()
                        } else {
                            self.a.clone()
                        };
                        for a in units {
                            push(vec![("p", p as i64), ("alpha", alpha as i64), ("n", n), ("a", a)]);
                        }
                    }
                }
            }
            Claim::ASum => {
                for p in or(&self.p, &[3, 5]) {
                    for alpha in or(&self.alpha, &[2]) {
                        for m in or(&self.m, &[2, 3]) {
                            let ks: Vec<u32> = if self.k.is_empty() { (0..=m).collect() } else { self.k.clone() };
                            for k in ks {
                                push(vec![("p", p as i64), ("alpha", alpha as i64), ("m", m as i64), ("k", k as i64)]);
                            }
                        }
                    }
                }
            }
            Claim::GaussSquare => {
                let primes: Vec<u64> = (3..=97).filter(|&p| is_odd_prime(p)).collect();
                for p in or(&self.p, &primes) {
                    push(vec![("p", p as i64)]);
                }
            }
            Claim::Multiplicativity => {
                for (m1, m2) in or(&self.pairs, &DEFAULT_PAIRS) {
                    for u in or(&self.n, &[1, 2]) {
                        push(vec![("m1", m1 as i64), ("m2", m2 as i64), ("u", u)]);
                    }
                }
            }
            Claim::FourthMomentPrime => {
                for p in or(&self.p, &[5, 7, 11, 13]) {
                    for n in or(&self.n, &[1, 2]) {
                        push(vec![("p", p as i64), ("n", n)]);
                    }
                }
            }
            Claim::SixthMomentPrime => {
                for p in or(&self.p, &[7, 11]) {
                    for n in or(&self.n, &[1]) {
                        push(vec![("p", p as i64), ("n", n)]);
                    }
                }
            }
            Claim::KthPowerFourthMoment => {
                for q in or(&self.q, &DEFAULT_SQUARE_FULL) {
                    for k in or(&self.k, &[2]) {
                        for n in or(&self.n, &[1]) {
                            push(vec![("q", q as i64), ("k", k as i64), ("n", n)]);
                        }
                    }
                }
            }
            Claim::Bounds => {
                for q in or(&self.q, &[7, 9, 25, 27, 49, 225]) {
                    for n in or(&self.n, &[1, 2]) {
                        push(vec![("q", q as i64), ("n", n)]);
                    }
                }
            }
        }
        Ok(out)
    }

    fn prime_powers(&self) -> Vec<(u64, u32)> {
        if self.p.is_empty() && self.alpha.is_empty() {
            return DEFAULT_PRIME_POWERS.to_vec();
        }
        let mut out = Vec::new();
        for p in or(&self.p, &[3, 5, 7]) {
            for alpha in or(&self.alpha, &[2]) {
                out.push((p, alpha));
            }
        }
        out
    }

    fn tuple_lengths(&self, default_max: u32) -> Result<Vec<u32>> {
        if self.n.is_empty() {
            return Ok((1..=self.n_max.unwrap_or(default_max)).collect());
        }
        self.n
            .iter()
            .map(|&n| u32::try_from(n).map_err(|_| Error::OutOfRange(format!("tuple length n = {n} is negative"))))
            .collect()
    }

    fn residues(&self, p: u64) -> Vec<i64> {
        or(&self.a, &(0..p as i64).collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_sum_grid_size() {
        let g = GridSpec { p: vec![7], n_max: Some(4), ..Default::default() };
        // k ranges over 1..=n for n = 1..=4, a over 0..7.
        assert_eq!(g.cases(Claim::TSum).unwrap().len(), (1 + 2 + 3 + 4) * 7);
    }

    #[test]
    fn defaults() {
        let g = GridSpec::default();
        assert_eq!(g.cases(Claim::PowerMean).unwrap().len(), 8);
        assert_eq!(g.cases(Claim::GaussSquare).unwrap().len(), 24);
        assert_eq!(g.cases(Claim::Multiplicativity).unwrap().len(), 6);
        assert_eq!(g.cases(Claim::ASum).unwrap().len(), 2 * (3 + 4));
        let inner = g.cases(Claim::InnerSum).unwrap();
        assert_eq!(inner.len(), 2 * (6 + 18 + 20 + 42));
    }

    #[test]
    fn explicit_lists_and_order() {
        let g = GridSpec { q: vec![25, 9], m: vec![2], n: vec![1, 2], ..Default::default() };
        let cases = g.cases(Claim::PowerMean).unwrap();
        let qs: Vec<_> = cases.iter().map(|c| (c.params.get("q"), c.params.get("n"))).collect();
        assert_eq!(qs, vec![(Some(25), Some(1)), (Some(25), Some(2)), (Some(9), Some(1)), (Some(9), Some(2))]);
        let g = GridSpec { n: vec![-1], ..Default::default() };
        assert!(g.cases(Claim::Count).is_err());
    }
}
