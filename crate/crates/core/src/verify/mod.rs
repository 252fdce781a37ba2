//! Pairs every closed form with its oracle and reports the comparison.
//!
//! A [`Claim`] names an identity; a [`Case`] is one parameter point of it.
//! [`run_case`] evaluates both sides and produces a [`VerificationReport`].
//! [`run_cases`] runs a whole grid on a worker pool and returns the reports
//! in grid order, so output never depends on scheduling.

mod claims;
mod grid;
pub mod selftest;
pub mod table;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};
use crate::oracle::Backend;

pub use grid::GridSpec;

/// An identity the harness can check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Claim {
    /// Power mean of `|G(n, chi; q)|^(2m)` for square-full `q`.
    PowerMean,
    /// The same mean at a prime power `p^alpha`.
    PrimePowerMean,
    /// `T_p(n, k, a)`, the Legendre-weighted tuple sum.
    TSum,
    /// `sum_x ((x^2 + a x) / p)`.
    QuadSum,
    /// Number of nonzero tuples with a prescribed sum.
    Count,
    /// The inner exponential sum over units `b mod p^alpha`.
    InnerSum,
    /// The constrained tuple sums `A(m, k)`.
    ASum,
    /// `G(1; p)^2 = (-1/p) p`.
    GaussSquare,
    /// Splitting of `G(u, chi; m1 m2)` over coprime moduli.
    Multiplicativity,
    /// Fourth moment over characters modulo a prime.
    FourthMomentPrime,
    /// Sixth moment over characters modulo a prime `p = 3 mod 4`.
    SixthMomentPrime,
    /// Fourth moment of `k`-th power character sums.
    KthPowerFourthMoment,
    /// `max_chi |G(n, chi; q)| <= 2^omega(q) sqrt(q)`.
    Bounds,
}

impl Claim {
    pub const ALL: [Claim; 13] = [
        Claim::PowerMean,
        Claim::PrimePowerMean,
        Claim::TSum,
        Claim::QuadSum,
        Claim::Count,
        Claim::InnerSum,
        Claim::ASum,
        Claim::GaussSquare,
        Claim::Multiplicativity,
        Claim::FourthMomentPrime,
        Claim::SixthMomentPrime,
        Claim::KthPowerFourthMoment,
        Claim::Bounds,
    ];

    /// The identifier used on the command line and in reports.
    pub fn id(self) -> &'static str {
        match self {
            Claim::PowerMean => "theorem1",
            Claim::PrimePowerMean => "lemma9",
            Claim::TSum => "t-sum",
            Claim::QuadSum => "quad-sum",
            Claim::Count => "count",
            Claim::InnerSum => "inner-sum",
            Claim::ASum => "a-sum",
            Claim::GaussSquare => "gauss-square",
            Claim::Multiplicativity => "multiplicativity",
            Claim::FourthMomentPrime => "zhang-p4",
            Claim::SixthMomentPrime => "zhang-p6",
            Claim::KthPowerFourthMoment => "zhang-liu",
            Claim::Bounds => "bounds",
        }
    }

    /// Whether the claim compares power means, and so has a float backend.
    pub fn has_float_backend(self) -> bool {
        matches!(
            self,
            Claim::PowerMean
                | Claim::PrimePowerMean
                | Claim::FourthMomentPrime
                | Claim::SixthMomentPrime
                | Claim::KthPowerFourthMoment
                | Claim::Bounds
        )
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Claim::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::OutOfRange(format!("unknown claim {s:?}")))
    }
}

/// Which backend the power-mean claims should use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BackendChoice {
    Exact,
    Float,
    /// Exact when the cost guard admits it, else float with a warning.
    #[default]
    Auto,
}

impl FromStr for BackendChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(BackendChoice::Exact),
            "float" => Ok(BackendChoice::Float),
            "auto" => Ok(BackendChoice::Auto),
            _ => Err(Error::OutOfRange(format!("unknown backend {s:?}"))),
        }
    }
}

/// Ordered `(name, value)` parameters of a case. Serializes as a JSON
/// object whose keys keep this order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Params(pub Vec<(&'static str, i64)>);

impl Params {
    pub fn get(&self, name: &str) -> Option<i64> {
        self.0.iter().find(|(k, _)| *k == name).map(|&(_, v)| v)
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.0.iter().map(|&(k, _)| k).collect()
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

impl Serialize for Params {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// One parameter point of a claim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Case {
    pub claim: Claim,
    pub params: Params,
}

impl Case {
    pub fn new(claim: Claim, params: Vec<(&'static str, i64)>) -> Self {
        Case { claim, params: Params(params) }
    }

    fn param(&self, name: &str) -> Result<i64> {
        self.params
            .get(name)
            .ok_or_else(|| Error::OutOfRange(format!("{} case is missing parameter {name}", self.claim)))
    }
}

/// Result of checking one case. Values are decimal strings so that reports
/// are identical across platforms.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct VerificationReport {
    pub claim: &'static str,
    pub params: Params,
    pub closed_form: String,
    pub oracle: String,
    pub backend: &'static str,
    #[serde(rename = "match")]
    pub matched: bool,
    /// Absolute tolerance applied; present for float comparisons only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<String>,
    /// Set when the backend was downgraded or the comparison is advisory.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    /// Wall time of the case; zero unless timing was requested, so that
    /// repeated runs produce byte-identical streams.
    pub elapsed_ms: u64,
}

/// Settings shared by every case of a run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunOptions {
    pub backend: BackendChoice,
    /// Absolute tolerance overriding the default policy.
    pub tolerance: Option<f64>,
    pub timing: bool,
}

/// Default float tolerance: `1e-6` absolute for `q <= 100`, else `1e-3`
/// relative to the closed-form value.
pub fn default_tolerance(q: u64, closed: f64) -> f64 {
    if q <= 100 {
        1e-6
    } else {
        1e-3 * closed.abs()
    }
}

/// Evaluates both sides of one case.
pub fn run_case(case: &Case, options: &RunOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = claims::run(case, options)?;
    if options.timing {
        report.elapsed_ms = start.elapsed().as_millis() as u64;
    }
    Ok(report)
}

/// Runs cases on a pool of `threads` workers; results come back in the
/// order of `cases` whatever the completion order.
pub fn run_cases(cases: &[Case], options: &RunOptions, threads: usize) -> Vec<Result<VerificationReport>> {
    in_pool(threads, || cases.par_iter().map(|c| run_case(c, options)).collect())
}

/// Runs `f` on a dedicated pool of `threads` workers (at least one).
pub fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("failed to build worker pool")
        .install(f)
}

/// Expands a grid and runs it, rejecting a float backend request for a claim
/// that only has an exact comparison.
pub fn verify(
    claim: Claim,
    grid: &GridSpec,
    options: &RunOptions,
    threads: usize,
) -> Result<Vec<Result<VerificationReport>>> {
    if options.backend == BackendChoice::Float && !claim.has_float_backend() {
        return Err(Error::OutOfRange(format!("{claim} is checked exactly and has no float backend")));
    }
    if options.backend == BackendChoice::Exact && claim == Claim::Bounds {
        return Err(Error::OutOfRange("bounds are checked in floating point only".into()));
    }
    let cases = grid.cases(claim)?;
    Ok(run_cases(&cases, options, threads))
}

/// Picks the backend for a power mean of estimated exact cost `cost`.
fn resolve_backend(choice: BackendChoice, cost: f64) -> (Backend, Option<String>) {
    match choice {
        BackendChoice::Exact => (Backend::Exact, None),
        BackendChoice::Float => (Backend::Float, None),
        BackendChoice::Auto if cost <= crate::oracle::EXACT_POWER_MEAN_LIMIT => (Backend::Exact, None),
        BackendChoice::Auto => (
            Backend::Float,
            Some(format!("exact backend cost {cost:.3e} exceeds guard; used float")),
        ),
    }
}

/// Shortest round-trip decimal form of a float, with `-0` printed as `0`.
pub fn decimal(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claim_ids_round_trip() {
        for c in Claim::ALL {
            assert_eq!(c.id().parse::<Claim>().unwrap(), c);
        }
        assert!("theorem2".parse::<Claim>().is_err());
    }

    #[test]
    fn params_serialize_in_order() {
        let p = Params(vec![("q", 9), ("m", 2), ("n", 1)]);
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"q":9,"m":2,"n":1}"#);
        assert_eq!(p.to_string(), "q=9 m=2 n=1");
    }

    #[test]
    fn tolerance_policy() {
        assert_eq!(default_tolerance(49, 1e9), 1e-6);
        assert_eq!(default_tolerance(225, 51_840_000.0), 51_840.0);
    }

    #[test]
    fn decimal_strings() {
        assert_eq!(decimal(-0.0), "0");
        assert_eq!(decimal(624.0), "624");
        assert_eq!(decimal(0.5), "0.5");
    }

    #[test]
    fn auto_backend_downgrades_with_warning() {
        assert_eq!(resolve_backend(BackendChoice::Auto, 1.0), (Backend::Exact, None));
        let (b, w) = resolve_backend(BackendChoice::Auto, 1e12);
        assert_eq!(b, Backend::Float);
        assert!(w.unwrap().contains("float"));
    }

    #[test]
    fn float_backend_rejected_for_exact_claims() {
        let opts = RunOptions { backend: BackendChoice::Float, ..Default::default() };
        assert!(verify(Claim::TSum, &GridSpec::default(), &opts, 1).is_err());
    }

    #[test]
    fn reports_serialize_with_match_key() {
        let r = run_case(&Case::new(Claim::PowerMean, vec![("q", 9), ("m", 2), ("n", 1)]), &RunOptions::default())
            .unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"claim":"theorem1","params":{"q":9,"m":2,"n":1},"closed_form":"1296","oracle":"1296","backend":"exact","match":true,"elapsed_ms":0}"#
        );
    }
}
