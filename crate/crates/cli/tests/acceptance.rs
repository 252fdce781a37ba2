//! Acceptance suite: one PASS/FAIL line per criterion, at the published
//! tolerances. Runs without the libtest harness so that the lines come out
//! in order and the process exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::Instant;

use gauss_moments::arith::{factorize, is_odd_prime};
use gauss_moments::closedform::{
    kth_power_fourth_moment_closed, power_mean_closed, prime_power_mean_closed, recombined_prime_power_mean,
};
use gauss_moments::oracle::{power_sum_k_brute, Backend};
use gauss_moments::verify::{run_cases, BackendChoice, Case, Claim, GridSpec, RunOptions, VerificationReport};
use num_traits::ToPrimitive;

struct Outcome {
    cases: usize,
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { cases: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn reports(&mut self, results: Vec<gauss_moments::Result<VerificationReport>>) {
        for r in results {
            match r {
                Ok(r) => self.check(r.matched, || {
                    format!("{} {}: closed {} vs oracle {} ({})", r.claim, r.params, r.closed_form, r.oracle, r.backend)
                }),
                Err(e) => self.check(false, || e.to_string()),
            }
        }
    }
}

fn threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn run(cases: Vec<Case>, backend: BackendChoice, out: &mut Outcome) {
    let options = RunOptions { backend, ..Default::default() };
    out.reports(run_cases(&cases, &options, threads()));
}

fn grid(claim: Claim, spec: GridSpec) -> Vec<Case> {
    spec.cases(claim).expect("grid")
}

fn power_mean_exact() -> Outcome {
    let mut out = Outcome::new();
    let mut cases = Vec::new();
    for q in [9i64, 25, 27, 49, 121] {
        for m in [2, 3] {
            for n in [1, 2, q - 1] {
                cases.push(Case::new(Claim::PowerMean, vec![("q", q), ("m", m), ("n", n)]));
            }
        }
    }
    run(cases, BackendChoice::Exact, &mut out);
    out
}

fn power_mean_composite() -> Outcome {
    let mut out = Outcome::new();
    let closed = power_mean_closed(&factorize(225).unwrap(), 2).unwrap();
    out.check(closed == 51_840_000.into(), || format!("closed form at q=225, m=2 is {closed}"));
    let cases = (1..=2).map(|n| Case::new(Claim::PowerMean, vec![("q", 225), ("m", 2), ("n", n)])).collect();
    run(cases, BackendChoice::Float, &mut out);
    out
}

fn prime_power_grid() -> Outcome {
    let mut out = Outcome::new();
    run(grid(Claim::PrimePowerMean, GridSpec::default()), BackendChoice::Auto, &mut out);
    out
}

fn t_sum_suite() -> Outcome {
    let mut out = Outcome::new();
    let spec = GridSpec { p: vec![3, 5, 7, 11, 13], n_max: Some(6), ..Default::default() };
    run(grid(Claim::TSum, spec), BackendChoice::Auto, &mut out);
    out
}

fn inner_sum_classification() -> Outcome {
    let mut out = Outcome::new();
    // The default prime powers are 9, 27, 25 and 49.
    let spec = GridSpec { n: vec![1, 2], ..Default::default() };
    run(grid(Claim::InnerSum, spec), BackendChoice::Auto, &mut out);
    out
}

fn a_sum_machinery() -> Outcome {
    let mut out = Outcome::new();
    let spec = GridSpec { p: vec![3, 5], alpha: vec![2], m: vec![2, 3], ..Default::default() };
    run(grid(Claim::ASum, spec), BackendChoice::Auto, &mut out);
    for p in [3u64, 5] {
        for m in [2u32, 3] {
            let lhs = recombined_prime_power_mean(p, 2, m).unwrap();
            let rhs = prime_power_mean_closed(p, 2, m).unwrap();
            out.check(lhs == rhs, || format!("recombination at p={p} m={m}: {lhs} vs {rhs}"));
        }
    }
    out
}

fn counting_lemma() -> Outcome {
    let mut out = Outcome::new();
    let spec = GridSpec { p: vec![3, 5, 7, 11, 13], n_max: Some(8), ..Default::default() };
    let cases = grid(Claim::Count, spec);
    let options = RunOptions::default();
    let results = run_cases(&cases, &options, threads());
    // Row sums over a, from the oracle column; the values stay far below
    // i128::MAX.
    let mut rows: BTreeMap<(i64, i64), i128> = BTreeMap::new();
    for r in results.iter().flatten() {
        let key = (r.params.get("p").unwrap(), r.params.get("n").unwrap());
        *rows.entry(key).or_default() += r.oracle.parse::<i128>().expect("integer oracle value");
    }
    for ((p, n), sum) in rows {
        let want = ((p - 1) as i128).pow(n as u32);
        out.check(sum == want, || format!("row sum at p={p} n={n}: {sum} vs {want}"));
    }
    out.reports(results);
    out
}

fn gauss_square() -> Outcome {
    let mut out = Outcome::new();
    let primes: Vec<u64> = (3..=97).filter(|&p| is_odd_prime(p)).collect();
    run(grid(Claim::GaussSquare, GridSpec { p: primes, ..Default::default() }), BackendChoice::Auto, &mut out);
    out
}

fn multiplicativity() -> Outcome {
    let mut out = Outcome::new();
    let spec = GridSpec { pairs: vec![(9, 25), (9, 49), (27, 25)], n: vec![1, 2], ..Default::default() };
    run(grid(Claim::Multiplicativity, spec), BackendChoice::Auto, &mut out);
    out
}

fn prior_results() -> Outcome {
    let mut out = Outcome::new();
    let p4 = GridSpec { p: vec![5, 7, 11, 13], n: vec![1, 2], ..Default::default() };
    run(grid(Claim::FourthMomentPrime, p4), BackendChoice::Float, &mut out);
    let p6 = GridSpec { p: vec![7, 11], ..Default::default() };
    run(grid(Claim::SixthMomentPrime, p6), BackendChoice::Float, &mut out);

    for q in (9..=1000u64).step_by(2) {
        let modulus = factorize(q).unwrap();
        if !modulus.is_square_full() {
            continue;
        }
        let zl = kth_power_fourth_moment_closed(&modulus, 2).unwrap();
        let pm = power_mean_closed(&modulus, 2).unwrap();
        out.check(zl.is_integer() && zl.to_integer() == pm, || format!("k = 2 reduction at q={q}: {zl} vs {pm}"));
    }

    // The cubic case: both sides at q = 9, k = 3.
    let modulus = factorize(9).unwrap();
    let oracle = power_sum_k_brute(1, &modulus, 3, 2, Backend::Float).unwrap().to_f64();
    match kth_power_fourth_moment_closed(&modulus, 3) {
        Ok(closed) => {
            let c = closed.to_f64().unwrap_or(f64::NAN);
            out.check((c - oracle).abs() <= 1e-6, || format!("cubic fourth moment at q=9: closed {closed} vs oracle {oracle}"));
        }
        Err(e) => out.check(false, || format!("cubic fourth moment at q=9 (expected 162): closed form refused ({e}); oracle {oracle}")),
    }
    out
}

fn bounds() -> Outcome {
    let mut out = Outcome::new();
    let mut cases = Vec::new();
    for q in [7i64, 9, 25, 27, 49, 225] {
        for n in [1, 2, q - 1] {
            cases.push(Case::new(Claim::Bounds, vec![("q", q), ("n", n)]));
        }
    }
    let results = run_cases(&cases, &RunOptions::default(), threads());
    for (case, r) in cases.iter().zip(results) {
        let q = case.params.get("q").unwrap() as u64;
        match r {
            Ok(r) if r.matched => out.check(true, String::new),
            Ok(r) if !factorize(q).unwrap().is_prime() => {
                // A composite-modulus excess is reported but does not fail.
                eprintln!("note: bound exceeded at {}: {} > {}", r.params, r.oracle, r.closed_form);
                out.check(true, String::new)
            }
            Ok(r) => out.check(false, || format!("bound exceeded at {}: {} > {}", r.params, r.oracle, r.closed_form)),
            Err(e) => out.check(false, || e.to_string()),
        }
    }
    out
}

fn determinism() -> Outcome {
    let mut out = Outcome::new();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_gauss-moments"))
            .args(["selftest", "--parallel", threads])
            .output()
            .expect("run selftest")
    };
    let (one, eight) = (run("1"), run("8"));
    out.check(one.status.success(), || format!("selftest --parallel 1 exited with {}", one.status));
    out.check(eight.status.success(), || format!("selftest --parallel 8 exited with {}", eight.status));
    out.check(one.stdout == eight.stdout, || "selftest output differs between 1 and 8 workers".into());
    out.check(!one.stdout.is_empty(), || "selftest printed nothing".into());
    out
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("power mean, exact, prime powers and q=121", power_mean_exact),
        ("power mean, float, q=225", power_mean_composite),
        ("prime-power mean grid", prime_power_grid),
        ("T-sum suite", t_sum_suite),
        ("inner-sum classification", inner_sum_classification),
        ("A(m,k) machinery and recombination", a_sum_machinery),
        ("counting lemma and row sums", counting_lemma),
        ("Gauss-square identity, p <= 97", gauss_square),
        ("multiplicativity", multiplicativity),
        ("prior fourth/sixth/k-th power moments", prior_results),
        ("Gauss-sum bounds", bounds),
        ("selftest determinism across worker counts", determinism),
    ];
    let mut failed = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = criterion();
        let secs = start.elapsed().as_secs_f64();
        if outcome.failures.is_empty() {
            println!("criterion {:>2} PASS  {name} ({} checks, {secs:.1}s)", i + 1, outcome.cases);
        } else {
            failed += 1;
            println!(
                "criterion {:>2} FAIL  {name} ({} of {} checks failed, {secs:.1}s)",
                i + 1,
                outcome.failures.len(),
                outcome.cases
            );
            for f in outcome.failures.iter().take(5) {
                println!("    {f}");
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
