//! Brute-force evaluations of every sum that the closed forms describe.
//!
//! Each oracle enumerates the defining sum directly and never calls into
//! [`crate::closedform`]. Quadratic residuosity is read off a table of
//! squares rather than the Legendre-symbol routine. Enumeration sizes are
//! bounded by cost estimates ([`Error::TooLarge`]) rather than timeouts, so
//! whether a case runs is deterministic.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::arith::{is_odd_prime, residue, Modulus, PrimePower};
use crate::characters::CharacterGroup;
use crate::cyclo::CycloSum;
use crate::error::{Error, Result};
use crate::gauss::{character_power_sum, working_order};

/// Largest tuple enumeration the tuple oracles accept.
pub const TUPLE_LIMIT: f64 = 1e8;

/// Largest estimated work for the exact power-mean backend, counted as
/// `phi(q) * m * phi(L)^2` coefficient products at working order `L`.
pub const EXACT_POWER_MEAN_LIMIT: f64 = 2e8;

/// Largest estimated work for the float power-mean backend, counted as
/// `phi(q) * (q + L)` term evaluations.
pub const FLOAT_POWER_MEAN_LIMIT: f64 = 1e8;

/// Parameters of one lemma-level sum. Which fields matter depends on the
/// sum; unused fields stay `None`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct SumSpec {
    pub q: Option<u64>,
    pub p: Option<u64>,
    pub alpha: Option<u32>,
    pub n: Option<i64>,
    pub k: Option<u32>,
    pub m: Option<u32>,
    pub a: Option<i64>,
}

impl SumSpec {
    /// Set fields as `(name, value)` pairs in a fixed order.
    pub fn params(&self) -> Vec<(&'static str, i64)> {
        let mut out = Vec::new();
        if let Some(v) = self.q {
            out.push(("q", v as i64));
        }
        if let Some(v) = self.p {
            out.push(("p", v as i64));
        }
        if let Some(v) = self.alpha {
            out.push(("alpha", v as i64));
        }
        if let Some(v) = self.n {
            out.push(("n", v));
        }
        if let Some(v) = self.k {
            out.push(("k", v as i64));
        }
        if let Some(v) = self.m {
            out.push(("m", v as i64));
        }
        if let Some(v) = self.a {
            out.push(("a", v));
        }
        out
    }
}

fn require_odd_prime(p: u64) -> Result<()> {
    if is_odd_prime(p) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(p))
    }
}

fn guard(what: &'static str, cost: f64, limit: f64) -> Result<()> {
    if cost <= limit {
        Ok(())
    } else {
        Err(Error::TooLarge { what, cost, limit })
    }
}

/// Quadratic character mod `p` from the table of squares: index `x` holds
/// `0`, `1` or `-1`.
fn residue_table(p: u64) -> Vec<i8> {
    let mut t = vec![-1i8; p as usize];
    t[0] = 0;
    for x in 1..p {
        t[(x * x % p) as usize] = 1;
    }
    t
}

/// `T_p(n, k, a)` by enumeration: the first `n - 1` coordinates range over
/// `1..p` and the last is forced by the congruence.
pub fn t_sum_brute(p: u64, n: u32, k: u32, a: i64) -> Result<BigInt> {
    require_odd_prime(p)?;
    if k < 1 || k > n {
        return Err(Error::OutOfRange(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    guard("T-sum enumeration", ((p - 1) as f64).powi(n as i32 - 1), TUPLE_LIMIT)?;
    let chi = residue_table(p);
    let target = residue(a, p);

    struct Walk<'a> {
        p: u64,
        n: u32,
        k: u32,
        target: u64,
        chi: &'a [i8],
        total: i64,
    }
    impl Walk<'_> {
        fn go(&mut self, depth: u32, sum: u64, sign: i64) {
            if depth == self.n - 1 {
                let last = (self.target + self.p - sum) % self.p;
                if last == 0 {
                    return;
                }
                let sign = if self.k == self.n { sign * self.chi[last as usize] as i64 } else { sign };
                self.total += sign;
                return;
            }
            for x in 1..self.p {
                let s = if depth < self.k { sign * self.chi[x as usize] as i64 } else { sign };
                self.go(depth + 1, (sum + x) % self.p, s);
            }
        }
    }
    let mut w = Walk { p, n, k, target, chi: &chi, total: 0 };
    w.go(0, 0, 1);
    Ok(BigInt::from(w.total))
}

/// Number of `n`-tuples of nonzero residues mod `p` with sum `a`.
pub fn count_brute(p: u64, n: u32, a: i64) -> Result<BigInt> {
    require_odd_prime(p)?;
    if n < 1 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    guard("count enumeration", ((p - 1) as f64).powi(n as i32 - 1), TUPLE_LIMIT)?;
    fn go(p: u64, left: u32, sum: u64, target: u64) -> u64 {
        if left == 1 {
            return u64::from((target + p - sum) % p != 0);
        }
        (1..p).map(|x| go(p, left - 1, (sum + x) % p, target)).sum()
    }
    Ok(BigInt::from(go(p, n, 0, residue(a, p))))
}

/// `sum_{x=1}^{p-1} ((x^2 + a x) / p)`.
pub fn quad_sum_brute(p: u64, a: i64) -> Result<BigInt> {
    require_odd_prime(p)?;
    let chi = residue_table(p);
    let a = residue(a, p);
    let total: i64 = (1..p).map(|x| chi[((x * x + a * x) % p) as usize] as i64).sum();
    Ok(BigInt::from(total))
}

/// `sum'_{b mod p^alpha} e(n b^2 (a^2 - 1) / p^alpha)` over units `b`, at
/// order `p^alpha`.
pub fn inner_sum_brute(p: u64, alpha: u32, n: i64, a: i64) -> Result<CycloSum> {
    require_odd_prime(p)?;
    if alpha < 2 {
        return Err(Error::OutOfRange(format!("alpha = {alpha} must be at least 2")));
    }
    let pa = PrimePower { p, alpha }.value();
    if residue(n, p) == 0 || residue(a, p) == 0 {
        return Err(Error::OutOfRange(format!("n = {n} and a = {a} must be prime to {p}")));
    }
    let a = residue(a, pa) as u128;
    let c = (residue(n, pa) as u128 * ((a * a + pa as u128 - 1) % pa as u128)) % pa as u128;
    let mut s = CycloSum::zero(pa as usize);
    for b in (1..pa).filter(|b| b % p != 0) {
        let b = b as u128;
        s.add_term((c * b % pa as u128 * b % pa as u128) as u64, 1);
    }
    Ok(s)
}

/// `A(m, k)` with `n = 1`; see [`a_sum_brute_n`].
pub fn a_sum_brute(p: u64, alpha: u32, m: u32, k: u32) -> Result<BigInt> {
    a_sum_brute_n(p, alpha, m, k, 1)
}

/// `A(m, k)`: over unit tuples `x_1 .. x_m` mod `p^alpha` with product `1`,
/// the first `k` satisfying `p^(alpha-1) || x^2 - 1` and the others
/// `p^alpha | x^2 - 1`, sum the products of [`inner_sum_brute`] values.
///
/// The result must be a rational integer; anything else is reported as
/// [`Error::NonIntegral`].
pub fn a_sum_brute_n(p: u64, alpha: u32, m: u32, k: u32, n: i64) -> Result<BigInt> {
    require_odd_prime(p)?;
    if alpha < 2 || m < 1 || k > m {
        return Err(Error::OutOfRange(format!("need alpha >= 2, m >= 1, k <= m; got {alpha}, {m}, {k}")));
    }
    let pp = PrimePower { p, alpha };
    let (pa, phi) = (pp.value(), pp.phi());
    guard("A(m,k) enumeration", (phi as f64).powi(m as i32), TUPLE_LIMIT)?;
    let order = pa as usize;
    let low = pa / p;

    // per unit: (exactly divides, fully divides, inner sum)
    let mut class = vec![(false, false); pa as usize];
    let mut inner = vec![None; pa as usize];
    let units: Vec<u64> = (1..pa).filter(|x| x % p != 0).collect();
    for &x in &units {
        let d = (x as u128 * x as u128 % pa as u128) as u64;
        let d = (d + pa - 1) % pa;
        class[x as usize] = (d % low == 0 && d != 0, d == 0);
        inner[x as usize] = Some(inner_sum_brute(p, alpha, n, x as i64)?);
    }
    let wanted = |pos: u32, x: u64| {
        let (exact, full) = class[x as usize];
        if pos < k { exact } else { full }
    };

    let mut total = CycloSum::zero(order);
    let mut idx = vec![0usize; (m - 1) as usize];
    'outer: loop {
        let mut prod = 1u64;
        let mut ok = true;
        for (pos, &i) in idx.iter().enumerate() {
            let x = units[i];
            ok &= wanted(pos as u32, x);
            prod = prod * x % pa;
        }
        let last = modinv(prod, pa);
        if ok && wanted(m - 1, last) {
            let mut term = inner[last as usize].clone().unwrap();
            for &i in &idx {
                term = (&term * inner[units[i] as usize].as_ref().unwrap()).reduce();
            }
            total = &total + &term;
        }
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < units.len() {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    total
        .as_integer()
        .ok_or_else(|| Error::NonIntegral(format!("A({m},{k}) mod {p}^{alpha}")))
}

fn modinv(x: u64, m: u64) -> u64 {
    let e = (x as i64).extended_gcd(&(m as i64));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i64) as u64
}

/// Which arithmetic evaluates a power mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

/// An exact power mean: an integer when it is one, else the cyclotomic
/// value as computed.
#[derive(Debug, Clone)]
pub enum ExactMean {
    Integer(BigInt),
    Algebraic(CycloSum),
}

/// Outcome of a power-mean oracle.
#[derive(Debug, Clone)]
pub enum PowerMean {
    Exact(ExactMean),
    /// Floating-point value with an a-priori absolute error bound.
    Float { value: f64, error: f64 },
}

impl PowerMean {
    pub fn as_integer(&self) -> Option<&BigInt> {
        match self {
            PowerMean::Exact(ExactMean::Integer(v)) => Some(v),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        match self {
            PowerMean::Exact(ExactMean::Integer(v)) => v.to_f64().unwrap(),
            PowerMean::Exact(ExactMean::Algebraic(s)) => s.eval_float().value.re,
            PowerMean::Float { value, .. } => *value,
        }
    }
}

/// Estimated work of the exact backend, compared against
/// [`EXACT_POWER_MEAN_LIMIT`].
pub fn exact_power_mean_cost(modulus: &Modulus, m: u32) -> f64 {
    let phi_l = crate::arith::totient(working_order(modulus) as u64) as f64;
    modulus.phi() as f64 * m.max(1) as f64 * phi_l * phi_l
}

/// Estimated work of the float backend, compared against
/// [`FLOAT_POWER_MEAN_LIMIT`].
pub fn float_power_mean_cost(modulus: &Modulus) -> f64 {
    modulus.phi() as f64 * (modulus.q() as f64 + working_order(modulus) as f64)
}

/// `sum_{chi mod q} |G(n, chi; q)|^(2m)`.
pub fn power_mean_brute(n: i64, modulus: &Modulus, m: u32, backend: Backend) -> Result<PowerMean> {
    power_sum_k_brute(n, modulus, 2, m, backend)
}

/// `sum_{chi mod q} |sum_a chi(a) e(n a^k / q)|^(2m)`.
///
/// The exact backend sums `(S conj(S))^m` in the cyclotomic ring and, for
/// square-full `q`, insists that the total is a rational integer. The float
/// backend sums in character enumeration order.
pub fn power_sum_k_brute(n: i64, modulus: &Modulus, k: u32, m: u32, backend: Backend) -> Result<PowerMean> {
    if !modulus.is_coprime_to(n) {
        return Err(Error::hypothesis("power mean", format!("gcd(n, q) = 1 fails for n = {n}, q = {modulus}")));
    }
    if m < 1 || k < 1 {
        return Err(Error::OutOfRange(format!("need m >= 1 and k >= 1, got m = {m}, k = {k}")));
    }
    match backend {
        Backend::Exact => guard("exact power mean", exact_power_mean_cost(modulus, m), EXACT_POWER_MEAN_LIMIT)?,
        Backend::Float => guard("float power mean", float_power_mean_cost(modulus), FLOAT_POWER_MEAN_LIMIT)?,
    }
    let group = CharacterGroup::new(modulus)?;
    let order = working_order(modulus);
    match backend {
        Backend::Exact => {
            let mut total = CycloSum::zero(order);
            for chi in group.characters() {
                let s = character_power_sum(n, &chi, k, order)?;
                let abs2 = (&s * &s.conjugate()).reduce();
                total = &total + &abs2.pow(m);
            }
            match total.as_integer() {
                Some(v) => Ok(PowerMean::Exact(ExactMean::Integer(v))),
                None if modulus.is_square_full() => {
                    Err(Error::NonIntegral(format!("power mean mod {modulus}, n = {n}, m = {m}")))
                }
                None => Ok(PowerMean::Exact(ExactMean::Algebraic(total.reduce()))),
            }
        }
        Backend::Float => {
            let mut value = 0.0f64;
            let mut error = 0.0f64;
            let mut count = 0usize;
            for chi in group.characters() {
                let f = character_power_sum(n, &chi, k, order)?.eval_float();
                let r = f.value.norm();
                let s = f.value.norm_sqr();
                let term = s.powi(m as i32);
                let upper = (r + f.error).powi(2 * m as i32);
                error += (upper - term).abs() + (2 * m as usize + 4) as f64 * f64::EPSILON * upper;
                value += term;
                count += 1;
            }
            error += count as f64 * f64::EPSILON * value.abs();
            Ok(PowerMean::Float { value, error })
        }
    }
}
