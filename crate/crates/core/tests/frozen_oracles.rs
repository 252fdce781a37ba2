//! Oracle values frozen from direct enumeration. These pin the brute-force
//! side independently of any closed form, so a regression in an oracle
//! cannot hide behind a matching regression in its formula.

use gauss_moments::arith::factorize;
use gauss_moments::cyclo::CycloSum;
use gauss_moments::oracle::{
    a_sum_brute, count_brute, inner_sum_brute, power_mean_brute, power_sum_k_brute, quad_sum_brute, t_sum_brute,
    Backend, ExactMean, PowerMean,
};
use num_bigint::BigInt;
use num_complex::Complex64;

fn b(x: i64) -> BigInt {
    BigInt::from(x)
}

#[test]
fn t_sums() {
    let table = [
        ((5, 2, 2, 0), 4),
        ((3, 2, 1, 0), 0),
        ((7, 1, 1, 0), 0),
        ((5, 3, 2, 1), 1),
        ((7, 2, 2, 0), -6),
        ((7, 3, 3, 1), -7),
        ((11, 4, 4, 0), 110),
    ];
    for ((p, n, k, a), want) in table {
        assert_eq!(t_sum_brute(p, n, k, a).unwrap(), b(want), "T_{p}({n},{k},{a})");
    }
}

#[test]
fn counts_and_quadratic_sums() {
    assert_eq!(count_brute(3, 2, 0).unwrap(), b(2));
    assert_eq!(count_brute(3, 2, 1).unwrap(), b(1));
    assert_eq!(count_brute(5, 1, 3).unwrap(), b(1));
    assert_eq!(count_brute(13, 8, 0).unwrap(), b(33_075_516));
    assert_eq!(count_brute(13, 8, 5).unwrap(), b(33_075_515));
    assert_eq!(quad_sum_brute(5, 0).unwrap(), b(4));
    assert_eq!(quad_sum_brute(5, 1).unwrap(), b(-1));
    assert_eq!(quad_sum_brute(7, 14).unwrap(), b(6));
}

#[test]
fn inner_sums() {
    assert_eq!(inner_sum_brute(3, 2, 1, 1).unwrap().as_integer(), Some(b(6)));
    let v = inner_sum_brute(3, 2, 1, 4).unwrap().eval_float().value;
    assert!((v - Complex64::new(-3.0, -27f64.sqrt())).norm() < 1e-9);
    assert!(inner_sum_brute(5, 2, 1, 2).unwrap().equals_exact(&CycloSum::zero(25)));
    assert_eq!(inner_sum_brute(7, 2, 2, 48).unwrap().as_integer(), Some(b(42)));
}

#[test]
fn a_sums() {
    assert_eq!(a_sum_brute(3, 2, 2, 0).unwrap(), b(72));
    assert_eq!(a_sum_brute(3, 2, 2, 1).unwrap(), b(0));
    assert_eq!(a_sum_brute(3, 2, 2, 2).unwrap(), b(144));
    assert_eq!(a_sum_brute(5, 2, 3, 2).unwrap(), b(48_000));
    assert_eq!(a_sum_brute(5, 2, 3, 3).unwrap(), b(24_000));
}

#[test]
fn power_means_exact() {
    let table = [(9, 2, 1296), (9, 3, 46_656), (25, 2, 40_000), (27, 2, 34_992), (49, 2, 345_744)];
    for (q, m, want) in table {
        let got = power_mean_brute(1, &factorize(q).unwrap(), m, Backend::Exact).unwrap();
        assert_eq!(got.as_integer(), Some(&b(want)), "q={q} m={m}");
    }
}

#[test]
fn power_means_float() {
    let seven = power_mean_brute(1, &factorize(7).unwrap(), 2, Backend::Float).unwrap();
    assert!((seven.to_f64() - 624.0).abs() < 1e-6);
    let five = power_mean_brute(1, &factorize(5).unwrap(), 2, Backend::Float).unwrap();
    assert!((five.to_f64() - 211.777_087_639_996_6).abs() < 1e-6);
    let quartic_25 = power_sum_k_brute(1, &factorize(25).unwrap(), 2, 2, Backend::Float).unwrap();
    assert!((quartic_25.to_f64() - 40_000.0).abs() < 1e-3);
}

#[test]
fn prime_modulus_mean_is_not_rational_at_one_mod_four() {
    match power_mean_brute(1, &factorize(5).unwrap(), 2, Backend::Exact).unwrap() {
        PowerMean::Exact(ExactMean::Algebraic(v)) => {
            assert!((v.eval_float().value.re - (176.0 + 16.0 * 5f64.sqrt())).abs() < 1e-9)
        }
        other => panic!("expected an algebraic value, got {other:?}"),
    }
}

#[test]
fn cubic_power_sums() {
    // The k-th power analogue at q = 9: frozen from direct enumeration.
    let cubic = power_sum_k_brute(1, &factorize(9).unwrap(), 3, 2, Backend::Float).unwrap();
    assert!((cubic.to_f64() - 667.539_590_865_365).abs() < 1e-6);
    let quintic = power_sum_k_brute(1, &factorize(9).unwrap(), 5, 2, Backend::Exact).unwrap();
    assert_eq!(quintic.as_integer(), Some(&b(324)));
}
