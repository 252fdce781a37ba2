//! One runner per claim: evaluate the closed form, evaluate the oracle,
//! compare.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::{decimal, default_tolerance, resolve_backend, Case, Claim, RunOptions, VerificationReport};
use crate::arith::{factorize, legendre_minus_one, Modulus};
use crate::characters::CharacterGroup;
use crate::closedform::{self, QuadraticSurd};
use crate::cyclo::CycloSum;
use crate::error::{Error, Result};
use crate::gauss::{self, classical_gauss_sum};
use crate::oracle::{self, exact_power_mean_cost, Backend, ExactMean, PowerMean};

pub(super) fn run(case: &Case, options: &RunOptions) -> Result<VerificationReport> {
    match case.claim {
        Claim::PowerMean => {
            let modulus = factorize(u(case, "q")?)?;
            let m = u32p(case, "m")?;
            let closed = Closed::Integer(closedform::power_mean_closed(&modulus, m)?);
            power_mean_case(case, options, &modulus, 2, m, closed)
        }
        Claim::PrimePowerMean => {
            let (p, alpha, m) = (u(case, "p")?, u32p(case, "alpha")?, u32p(case, "m")?);
            let closed = Closed::Integer(closedform::prime_power_mean_closed(p, alpha, m)?);
            let modulus = Modulus::prime_power(p, alpha)?;
            power_mean_case(case, options, &modulus, 2, m, closed)
        }
        Claim::TSum => {
            let (p, n, k, a) = (u(case, "p")?, u32p(case, "n")?, u32p(case, "k")?, case.param("a")?);
            let closed = closedform::t_sum_closed(p, n, k, a)?;
            integer_case(case, closed, oracle::t_sum_brute(p, n, k, a)?)
        }
        Claim::QuadSum => {
            let (p, a) = (u(case, "p")?, case.param("a")?);
            integer_case(case, closedform::quad_sum_closed(p, a)?, oracle::quad_sum_brute(p, a)?)
        }
        Claim::Count => {
            let (p, n, a) = (u(case, "p")?, u32p(case, "n")?, case.param("a")?);
            integer_case(case, closedform::count_closed(p, n, a)?, oracle::count_brute(p, n, a)?)
        }
        Claim::InnerSum => {
            let (p, alpha, n, a) = (u(case, "p")?, u32p(case, "alpha")?, case.param("n")?, case.param("a")?);
            let closed = closedform::inner_sum_closed(p, alpha, n, a)?;
            let brute = oracle::inner_sum_brute(p, alpha, n, a)?;
            Ok(exact_report(case, cyclo_string(&closed), cyclo_string(&brute), closed.equals_exact(&brute)))
        }
        Claim::ASum => {
            let (p, alpha, m, k) = (u(case, "p")?, u32p(case, "alpha")?, u32p(case, "m")?, u32p(case, "k")?);
            integer_case(case, closedform::a_sum_closed(p, alpha, m, k)?, oracle::a_sum_brute(p, alpha, m, k)?)
        }
        Claim::GaussSquare => {
            let p = u(case, "p")?;
            let modulus = factorize(p)?;
            if !modulus.is_prime() {
                return Err(Error::hypothesis("gauss-square", format!("p = {p} is not an odd prime")));
            }
            let closed = CycloSum::integer(p as usize, legendre_minus_one(p) as i64 * p as i64);
            let g = classical_gauss_sum(1, &modulus);
            let square = &g * &g;
            Ok(exact_report(case, cyclo_string(&closed), cyclo_string(&square), square.equals_exact(&closed)))
        }
        Claim::Multiplicativity => multiplicativity_case(case),
        Claim::FourthMomentPrime => {
            let (p, n) = (u(case, "p")?, case.param("n")?);
            let closed = Closed::Surd(closedform::fourth_moment_prime_closed(p, n)?);
            power_mean_case(case, options, &factorize(p)?, 2, 2, closed)
        }
        Claim::SixthMomentPrime => {
            let p = u(case, "p")?;
            let closed = Closed::Integer(closedform::sixth_moment_prime_closed(p)?);
            power_mean_case(case, options, &factorize(p)?, 2, 3, closed)
        }
        Claim::KthPowerFourthMoment => {
            let modulus = factorize(u(case, "q")?)?;
            let k = u32p(case, "k")?;
            let closed = Closed::Rational(closedform::kth_power_fourth_moment_closed(&modulus, k as u64)?);
            power_mean_case(case, options, &modulus, k, 2, closed)
        }
        Claim::Bounds => {
            let (modulus, n) = (factorize(u(case, "q")?)?, case.param("n")?);
            let r = gauss::bound_check(n, &modulus)?;
            Ok(VerificationReport {
                claim: case.claim.id(),
                params: case.params.clone(),
                closed_form: decimal(r.bound),
                oracle: decimal(r.max_abs),
                backend: Backend::Float.name(),
                matched: r.holds,
                tolerance: Some(decimal(r.tolerance)),
                warning: None,
                elapsed_ms: 0,
            })
        }
    }
}

fn u(case: &Case, name: &str) -> Result<u64> {
    let v = case.param(name)?;
    u64::try_from(v).map_err(|_| Error::OutOfRange(format!("{name} = {v} must be non-negative")))
}

fn u32p(case: &Case, name: &str) -> Result<u32> {
    let v = case.param(name)?;
    u32::try_from(v).map_err(|_| Error::OutOfRange(format!("{name} = {v} is out of range")))
}

fn exact_report(case: &Case, closed_form: String, oracle: String, matched: bool) -> VerificationReport {
    VerificationReport {
        claim: case.claim.id(),
        params: case.params.clone(),
        closed_form,
        oracle,
        backend: Backend::Exact.name(),
        matched,
        tolerance: None,
        warning: None,
        elapsed_ms: 0,
    }
}

fn integer_case(case: &Case, closed: BigInt, brute: BigInt) -> Result<VerificationReport> {
    Ok(exact_report(case, closed.to_string(), brute.to_string(), closed == brute))
}

/// An integer when the value is one, else `re,im` of its float evaluation.
fn cyclo_string(x: &CycloSum) -> String {
    match x.as_integer() {
        Some(v) => v.to_string(),
        None => {
            let v = x.eval_float().value;
            format!("{},{}", decimal(v.re), decimal(v.im))
        }
    }
}

/// Exact closed-form value of a power mean.
enum Closed {
    Integer(BigInt),
    Rational(BigRational),
    Surd(QuadraticSurd),
}

impl Closed {
    fn to_f64(&self) -> f64 {
        match self {
            Closed::Integer(v) => v.to_f64().unwrap_or(f64::INFINITY),
            Closed::Rational(v) => v.to_f64().unwrap_or(f64::INFINITY),
            Closed::Surd(v) => v.to_f64(),
        }
    }

    fn render(&self) -> String {
        match self {
            Closed::Integer(v) => v.to_string(),
            Closed::Rational(v) => v.to_string(),
            Closed::Surd(v) => v.to_string(),
        }
    }

    /// Exact comparison with an exact oracle value.
    fn equals(&self, mean: &ExactMean) -> Result<bool> {
        Ok(match (self, mean) {
            (Closed::Integer(c), ExactMean::Integer(o)) => c == o,
            (Closed::Rational(c), ExactMean::Integer(o)) => c.denom().is_one() && c.numer() == o,
            (Closed::Surd(s), ExactMean::Integer(o)) => s.as_integer() == Some(o),
            (Closed::Surd(s), ExactMean::Algebraic(o)) => surd_to_cyclo(s, o.order())?.equals_exact(o),
            (Closed::Integer(_) | Closed::Rational(_), ExactMean::Algebraic(_)) => false,
        })
    }
}

/// `rational + radical sqrt(p)` as a cyclotomic integer. For `p = 1 mod 4`
/// the classical sum `G(1; p)` equals `sqrt(p)`; for `p = 3 mod 4` it is
/// `i sqrt(p)`, and only surds with zero radical are representable here.
fn surd_to_cyclo(s: &QuadraticSurd, order: usize) -> Result<CycloSum> {
    let rational = CycloSum::integer(order, s.rational.clone());
    if s.as_integer().is_some() {
        return Ok(rational);
    }
    if s.p % 4 != 1 {
        return Err(Error::OutOfRange(format!("sqrt({}) is not a real cyclotomic integer of this form", s.p)));
    }
    let root = classical_gauss_sum(1, &factorize(s.p)?).embed(order)?;
    Ok(&rational + &root.scale(&s.radical))
}

fn power_mean_case(
    case: &Case,
    options: &RunOptions,
    modulus: &Modulus,
    k: u32,
    m: u32,
    closed: Closed,
) -> Result<VerificationReport> {
    let n = case.params.get("n").unwrap_or(1);
    let (backend, warning) = resolve_backend(options.backend, exact_power_mean_cost(modulus, m));
    let mean = match oracle::power_sum_k_brute(n, modulus, k, m, backend) {
        Err(Error::NonIntegral(what)) => {
            // A non-integral exact mean at square-full q is a failed check,
            // not bad input.
            return Ok(VerificationReport {
                claim: case.claim.id(),
                params: case.params.clone(),
                closed_form: closed.render(),
                oracle: "non-integral".into(),
                backend: backend.name(),
                matched: false,
                tolerance: None,
                warning: Some(format!("non-integral result for {what}")),
                elapsed_ms: 0,
            });
        }
        other => other?,
    };
    let mut report = VerificationReport {
        claim: case.claim.id(),
        params: case.params.clone(),
        closed_form: closed.render(),
        oracle: String::new(),
        backend: backend.name(),
        matched: false,
        tolerance: None,
        warning,
        elapsed_ms: 0,
    };
    match &mean {
        PowerMean::Exact(exact) => {
            report.oracle = match exact {
                ExactMean::Integer(v) => v.to_string(),
                ExactMean::Algebraic(s) => cyclo_string(s),
            };
            report.matched = closed.equals(exact)?;
        }
        PowerMean::Float { value, error } => {
            let c = closed.to_f64();
            let tol = options.tolerance.unwrap_or_else(|| default_tolerance(modulus.q(), c));
            report.oracle = decimal(*value);
            report.tolerance = Some(decimal(tol));
            report.matched = (c - value).abs() <= tol;
            if *error > tol {
                let note = format!("float error bound {} exceeds tolerance", decimal(*error));
                report.warning = Some(match report.warning.take() {
                    Some(w) => format!("{w}; {note}"),
                    None => note,
                });
            }
        }
    }
    Ok(report)
}

/// Checks every character pair for one `(m1, m2, u)`; the closed form is
/// the number of pairs and the oracle the number that split exactly.
fn multiplicativity_case(case: &Case) -> Result<VerificationReport> {
    let (m1, m2) = (factorize(u(case, "m1")?)?, factorize(u(case, "m2")?)?);
    let uu = case.param("u")?;
    let target = gauss::product_group(&m1, &m2, uu)?;
    let (c1, c2) = (CharacterGroup::new(&m1)?.characters(), CharacterGroup::new(&m2)?.characters());
    let mut holding = 0usize;
    for a in &c1 {
        for b in &c2 {
            if gauss::multiplicativity_check_in(uu, a, b, &target)? {
                holding += 1;
            }
        }
    }
    let pairs = c1.len() * c2.len();
    Ok(exact_report(case, pairs.to_string(), holding.to_string(), holding == pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{run_case, BackendChoice};

    fn run(claim: Claim, params: Vec<(&'static str, i64)>, backend: BackendChoice) -> Result<VerificationReport> {
        run_case(&Case::new(claim, params), &RunOptions { backend, ..Default::default() })
    }

    #[test]
    fn fourth_moment_exact_at_one_mod_four() {
        let r = run(Claim::FourthMomentPrime, vec![("p", 5), ("n", 1)], BackendChoice::Exact).unwrap();
        assert!(r.matched, "{r:?}");
        assert_eq!(r.closed_form, "176+16*sqrt(5)");
        let r = run(Claim::FourthMomentPrime, vec![("p", 5), ("n", 2)], BackendChoice::Float).unwrap();
        assert!(r.matched, "{r:?}");
        assert_eq!(r.closed_form, "176-16*sqrt(5)");
    }

    #[test]
    fn power_mean_hypothesis_errors() {
        let e = run(Claim::PowerMean, vec![("q", 45), ("m", 2), ("n", 1)], BackendChoice::Auto).unwrap_err();
        assert!(e.to_string().contains("not square-full"), "{e}");
        assert!(e.is_invalid_input());
    }

    #[test]
    fn float_report_carries_tolerance() {
        let r = run(Claim::PowerMean, vec![("q", 25), ("m", 2), ("n", 1)], BackendChoice::Float).unwrap();
        assert!(r.matched);
        assert_eq!(r.tolerance.as_deref(), Some("0.000001"));
        assert_eq!(r.backend, "float");
    }

    #[test]
    fn inner_sum_renders_algebraic_values() {
        let r = run(Claim::InnerSum, vec![("p", 3), ("alpha", 2), ("n", 1), ("a", 4)], BackendChoice::Auto).unwrap();
        assert!(r.matched);
        assert!(r.closed_form.starts_with("-3"), "{}", r.closed_form);
    }

    #[test]
    fn multiplicativity_counts_pairs() {
        let r = run(Claim::Multiplicativity, vec![("m1", 9), ("m2", 25), ("u", 1)], BackendChoice::Auto).unwrap();
        assert_eq!((r.closed_form.as_str(), r.oracle.as_str(), r.matched), ("120", "120", true));
    }

    #[test]
    fn bounds_report() {
        let r = run(Claim::Bounds, vec![("q", 9), ("n", 1)], BackendChoice::Auto).unwrap();
        assert_eq!(r.closed_form, "6");
        assert!(r.matched);
    }
}
