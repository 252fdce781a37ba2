//! The full invariant suite at desk scale, one pass/fail line per suite.
//!
//! Output contains no timings and suites are reported in a fixed order, so
//! the summary is byte-identical whatever the worker count.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{in_pool, run_cases, Claim, GridSpec, RunOptions};
use crate::arith::{self, factorize, jacobi, legendre, pow_mod};
use crate::characters::CharacterGroup;
use crate::closedform;
use crate::cyclo::CycloSum;
use crate::error::{Error, Result};
use crate::gauss::{gauss_sum, working_order};

/// A deliberate defect, used to check that the suite notices it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// The Legendre symbol seen by the suite has its sign flipped.
    Legendre,
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "legendre" => Ok(Fault::Legendre),
            _ => Err(Error::OutOfRange(format!("unknown fault {s:?}"))),
        }
    }
}

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    /// Description of the first failing check.
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "{:<18} pass  {} checks", self.name, self.checks)
        } else {
            write!(
                f,
                "{:<18} FAIL  {} of {} checks failed; first: {}",
                self.name,
                self.failures,
                self.checks,
                self.first_failure.as_deref().unwrap_or("?")
            )
        }
    }
}

/// All suite results plus the rendered summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestReport {
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    /// One line per suite, then a totals line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            writeln!(out, "{s}").unwrap();
        }
        let failed = self.suites.iter().filter(|s| !s.passed()).count();
        writeln!(out, "selftest: {} suites, {} failed", self.suites.len(), failed).unwrap();
        out
    }
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    /// Records an error as a failed check.
    fn ok<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, || format!("{}: {e}", what()));
                None
            }
        }
    }

    fn finish(self, name: &'static str) -> SuiteResult {
        SuiteResult { name, checks: self.checks, failures: self.failures, first_failure: self.first }
    }
}

type Suite = (&'static str, fn(Option<Fault>) -> Tally);

const SUITES: [Suite; 18] = [
    ("arith", arith_suite),
    ("characters", characters_suite),
    ("cyclo", cyclo_suite),
    ("gauss", gauss_suite),
    ("closedform", closedform_suite),
    ("theorem1", |_| claim_suite(Claim::PowerMean, &GridSpec { n: vec![1, 2], ..Default::default() })),
    ("lemma9", |_| claim_suite(Claim::PrimePowerMean, &GridSpec::default())),
    ("t-sum", |_| claim_suite(Claim::TSum, &GridSpec::default())),
    ("quad-sum", |_| claim_suite(Claim::QuadSum, &GridSpec::default())),
    ("count", |_| claim_suite(Claim::Count, &GridSpec::default())),
    ("inner-sum", |_| claim_suite(Claim::InnerSum, &GridSpec::default())),
    ("a-sum", |_| claim_suite(Claim::ASum, &GridSpec::default())),
    ("gauss-square", gauss_square_suite),
    ("multiplicativity", |_| claim_suite(Claim::Multiplicativity, &GridSpec { n: vec![1], ..Default::default() })),
    ("zhang-p4", |_| claim_suite(Claim::FourthMomentPrime, &GridSpec::default())),
    ("zhang-p6", |_| claim_suite(Claim::SixthMomentPrime, &GridSpec::default())),
    ("zhang-liu", |_| claim_suite(Claim::KthPowerFourthMoment, &GridSpec::default())),
    ("bounds", |_| claim_suite(Claim::Bounds, &GridSpec::default())),
];

/// Runs every suite on a pool of `threads` workers.
pub fn run_selftest(threads: usize, fault: Option<Fault>) -> SelftestReport {
    let suites = in_pool(threads, || {
        SUITES.par_iter().map(|&(name, suite)| suite(fault).finish(name)).collect()
    });
    SelftestReport { suites }
}

/// The Legendre symbol as the suite sees it, possibly corrupted.
fn legendre_under(fault: Option<Fault>, a: i64, p: u64) -> Result<i8> {
    let v = legendre(a, p)?;
    Ok(if fault == Some(Fault::Legendre) { -v } else { v })
}

fn claim_suite(claim: Claim, grid: &GridSpec) -> Tally {
    let mut t = Tally::default();
    let Some(cases) = t.ok(grid.cases(claim), || format!("{claim} grid")) else { return t };
    // Nested inside the suite pool; rayon reuses the current pool.
    for (case, result) in cases.iter().zip(run_cases(&cases, &RunOptions::default(), rayon::current_num_threads())) {
        if let Some(r) = t.ok(result, || format!("{} {}", claim, case.params)) {
            t.check(r.matched, || format!("{} {}: closed {} vs oracle {}", claim, case.params, r.closed_form, r.oracle));
        }
    }
    t
}

fn arith_suite(fault: Option<Fault>) -> Tally {
    let mut t = Tally::default();
    for (q, phi, square_full) in [(27u64, 18u64, true), (675, 360, true), (45, 24, false)] {
        if let Some(m) = t.ok(factorize(q), || format!("factorize({q})")) {
            t.check(m.phi() == phi && m.is_square_full() == square_full, || format!("factorize({q})"));
        }
    }
    for q in (3..=301u64).step_by(2) {
        let direct = (1..=q).filter(|&a| num_integer::Integer::gcd(&a, &q) == 1).count() as u64;
        t.check(arith::totient(q) == direct, || format!("phi({q})"));
    }
    for p in (3..=97u64).filter(|&p| arith::is_odd_prime(p)) {
        for a in 1..p {
            let euler = pow_mod(a, (p - 1) / 2, p);
            let want = if euler == 1 { 1 } else { -1 };
            if let Some(l) = t.ok(legendre_under(fault, a as i64, p), || format!("legendre({a}, {p})")) {
                t.check(l == want, || format!("legendre({a}, {p}) = {l}, Euler criterion gives {want}"));
            }
        }
        if let Some(g) = t.ok(arith::primitive_root(p, 2), || format!("primitive root mod {p}^2")) {
            let pa = p * p;
            let phi = p * (p - 1);
            let full = arith::prime_divisors(phi).iter().all(|&r| pow_mod(g, phi / r, pa) != 1);
            t.check(full, || format!("{g} is not a primitive root mod {pa}"));
            for x in [2i64, 3, (pa - 1) as i64] {
                if x as u64 % p == 0 {
                    continue;
                }
                if let Some(e) = t.ok(arith::discrete_log(x, g, p, 2), || format!("dlog({x}) mod {pa}")) {
                    t.check(pow_mod(g, e, pa) == x as u64 % pa, || format!("dlog({x}) mod {pa} round trip"));
                }
            }
        }
    }
    for n in (3..=45u64).step_by(2) {
        for a in -10i64..=10 {
            for b in [2i64, 3, 7] {
                let (ja, jb, jab) = (jacobi(a, n), jacobi(b, n), jacobi(a * b, n));
                if let (Ok(ja), Ok(jb), Ok(jab)) = (ja, jb, jab) {
                    t.check(ja * jb == jab, || format!("jacobi multiplicativity at ({a}, {b}; {n})"));
                }
            }
        }
    }
    t
}

fn characters_suite(_: Option<Fault>) -> Tally {
    let mut t = Tally::default();
    for q in [9u64, 25, 27, 49] {
        let Some(group) = t.ok(factorize(q).and_then(|m| CharacterGroup::new(&m)), || format!("group mod {q}")) else {
            continue;
        };
        let chars = group.characters();
        let order = working_order(group.modulus());
        for a in (1..q as i64).filter(|&a| group.modulus().is_coprime_to(a)) {
            let mut total = CycloSum::zero(order);
            for chi in &chars {
                if let Some(v) = t.ok(chi.evaluate(a).to_cyclo(order), || format!("chi({a}) mod {q}")) {
                    total = &total + &v;
                }
            }
            let want = if a == 1 { group.modulus().phi() as i64 } else { 0 };
            t.check(total.equals_exact(&CycloSum::integer(order, want)), || format!("orthogonality at a = {a} mod {q}"));
        }
    }
    for q in (3..=49u64).step_by(2) {
        let Some(group) = t.ok(factorize(q).and_then(|m| CharacterGroup::new(&m)), || format!("group mod {q}")) else {
            continue;
        };
        let chars = group.characters();
        let units: Vec<i64> = (1..q as i64).filter(|&a| group.modulus().is_coprime_to(a)).collect();
        for chi in chars.iter().step_by(3) {
            let conj = chi.conj();
            for &a in &units {
                let (e, c) = (chi.exponent(a), conj.exponent(a));
                let phi = group.modulus().phi();
                t.check(matches!((e, c), (Some(e), Some(c)) if (e + c) % phi == 0), || {
                    format!("conjugation at a = {a} mod {q}")
                });
            }
            for &a in units.iter().take(6) {
                for &b in units.iter().take(6) {
                    let ab = a * b % q as i64;
                    let phi = group.modulus().phi();
                    let lhs = chi.exponent(ab);
                    let rhs = chi.exponent(a).zip(chi.exponent(b)).map(|(x, y)| (x + y) % phi);
                    t.check(lhs == rhs, || format!("multiplicativity at ({a}, {b}) mod {q}"));
                }
            }
        }
    }
    t
}

fn random_sum(rng: &mut ChaCha8Rng, order: usize) -> CycloSum {
    let mut s = CycloSum::zero(order);
    for _ in 0..rng.random_range(1..8) {
        let index = rng.random_range(0..order as u64);
        s.add_term(index, BigInt::from(rng.random_range(-5i64..=5)));
    }
    s
}

fn cyclo_suite(_: Option<Fault>) -> Tally {
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a75_7373);
    let orders = [12usize, 18, 36, 60, 90, 180, 360];
    for i in 0..100 {
        let order = orders[i % orders.len()];
        let (x, y, z) = (random_sum(&mut rng, order), random_sum(&mut rng, order), random_sum(&mut rng, order));
        t.check((&x * &y).equals_exact(&(&y * &x)), || format!("commutativity at order {order}"));
        t.check((&(&x * &y) * &z).equals_exact(&(&x * &(&y * &z))), || format!("associativity at order {order}"));
        t.check((&x * &y).conjugate().equals_exact(&(&x.conjugate() * &y.conjugate())), || {
            format!("conjugation homomorphism at order {order}")
        });
        let (fx, fy) = (x.eval_float(), y.eval_float());
        let close = (fx.value - fy.value).norm() <= fx.error + fy.error + 1e-9;
        t.check(x.equals_exact(&y) == close, || format!("exact/float equality agreement at order {order}"));
        let norm = (&x * &x.conjugate()).eval_float();
        t.check(norm.value.re >= -1e-9 && norm.value.im.abs() <= 1e-9, || format!("|x|^2 real at order {order}"));
    }
    let third = |k| CycloSum::from_root(3, k, 3);
    if let (Ok(a), Ok(b), Ok(c)) = (third(0), third(1), third(2)) {
        t.check((&(&a + &b) + &c).equals_exact(&CycloSum::zero(3)), || "cube roots of unity sum to 0".into());
    }
    t
}

fn gauss_suite(_: Option<Fault>) -> Tally {
    let mut t = Tally::default();
    for q in [9u64, 15, 21, 25, 27, 49] {
        let Some(group) = t.ok(factorize(q).and_then(|m| CharacterGroup::new(&m)), || format!("group mod {q}")) else {
            continue;
        };
        for chi in group.characters() {
            let Some(base) = t.ok(gauss_sum(1, &chi), || format!("G(1, chi; {q})")) else { continue };
            let base2 = base.abs_squared();
            t.check((base.abs_float() - base2.eval_float().value.re.max(0.0).sqrt()).abs() < 1e-6, || {
                format!("|G| float/exact agreement mod {q}")
            });
            for s in [2i64, 4] {
                if !group.modulus().is_coprime_to(s) {
                    continue;
                }
                if let Some(tw) = t.ok(gauss_sum(s * s, &chi), || format!("G({}, chi; {q})", s * s)) {
                    t.check(tw.abs_squared().equals_exact(&base2), || format!("|G| twist by {s}^2 mod {q}"));
                }
            }
            if q <= 25 {
                let lhs = gauss_sum(1, &chi.conj());
                let rhs = gauss_sum(-1, &chi);
                if let (Some(l), Some(r)) = (t.ok(lhs, || "G(1, conj chi)".into()), t.ok(rhs, || "G(-1, chi)".into())) {
                    t.check(l.exact.equals_exact(&r.exact.conjugate()), || format!("conjugate character mod {q}"));
                }
            }
        }
    }
    t
}

fn gauss_square_suite(fault: Option<Fault>) -> Tally {
    let mut t = Tally::default();
    for p in (3..=97u64).filter(|&p| arith::is_odd_prime(p)) {
        let Some(modulus) = t.ok(factorize(p), || format!("factorize({p})")) else { continue };
        let Some(sign) = t.ok(legendre_under(fault, -1, p), || format!("legendre(-1, {p})")) else { continue };
        let g = crate::gauss::classical_gauss_sum(1, &modulus);
        let want = CycloSum::integer(p as usize, sign as i64 * p as i64);
        t.check((&g * &g).equals_exact(&want), || format!("G(1; {p})^2 differs from {}", sign as i64 * p as i64));
    }
    t
}

fn closedform_suite(_: Option<Fault>) -> Tally {
    let mut t = Tally::default();
    for p in [3u64, 5, 7] {
        for alpha in [2u32, 3] {
            let phi = BigInt::from(arith::PrimePower { p, alpha }.phi());
            for m in 2..=4u32 {
                let lhs = closedform::recombined_prime_power_mean(p, alpha, m);
                let rhs = closedform::prime_power_mean_closed(p, alpha, m);
                if let (Some(l), Some(r)) = (t.ok(lhs, || "recombination".into()), t.ok(rhs, || "prime-power mean".into())) {
                    t.check(l == r, || format!("recombination at p={p} alpha={alpha} m={m}"));
                }
                for k in 0..m {
                    let a = closedform::a_sum_closed(p, alpha, m, k);
                    let b = closedform::a_sum_closed(p, alpha, m - 1, k);
                    if let (Some(a), Some(b)) = (t.ok(a, || "A(m,k)".into()), t.ok(b, || "A(m-1,k)".into())) {
                        t.check(a == BigInt::from(2) * &phi * b, || format!("A recursion at p={p} alpha={alpha} m={m} k={k}"));
                    }
                }
            }
        }
    }
    for p in [3u64, 5, 7, 11] {
        for n in 2..=6u32 {
            for k in 1..n {
                for a in 0..p as i64 {
                    let x = closedform::t_sum_closed(p, n, k, a);
                    let y = closedform::t_sum_closed(p, n - 1, k, a);
                    if let (Some(x), Some(y)) = (t.ok(x, || "T".into()), t.ok(y, || "T".into())) {
                        t.check(x == -y, || format!("T descent at p={p} n={n} k={k} a={a}"));
                    }
                }
            }
        }
    }
    for q in (9..=1000u64).step_by(2) {
        let Ok(modulus) = factorize(q) else { continue };
        if !modulus.is_square_full() {
            continue;
        }
        let zl = closedform::kth_power_fourth_moment_closed(&modulus, 2);
        let pm = closedform::power_mean_closed(&modulus, 2);
        if let (Some(zl), Some(pm)) = (t.ok(zl, || format!("k-th power moment at q={q}")), t.ok(pm, || "power mean".into())) {
            t.check(zl == num_rational::BigRational::from_integer(pm), || format!("k = 2 reduction at q={q}"));
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fault_is_caught_by_named_suites() {
        let mut t = arith_suite(Some(Fault::Legendre));
        assert!(t.failures > 0);
        assert!(t.first.take().unwrap().contains("legendre"));
        assert!(gauss_square_suite(Some(Fault::Legendre)).failures > 0);
        assert_eq!(gauss_square_suite(None).failures, 0);
    }

    #[test]
    fn light_suites_pass() {
        for suite in [arith_suite, characters_suite, cyclo_suite, closedform_suite] {
            let t = suite(None);
            assert_eq!(t.failures, 0, "{:?}", t.first);
            assert!(t.checks > 0);
        }
    }

    #[test]
    fn fault_names_parse() {
        assert_eq!("legendre".parse::<Fault>().unwrap(), Fault::Legendre);
        assert!("jacobi".parse::<Fault>().is_err());
    }
}
