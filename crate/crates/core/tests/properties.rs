//! Randomized algebraic invariants of the arithmetic layers.

use gauss_moments::arith::{discrete_log, factorize, jacobi, legendre, pow_mod, primitive_root};
use gauss_moments::characters::CharacterGroup;
use gauss_moments::cyclo::CycloSum;
use gauss_moments::gauss::gauss_sum;
use num_bigint::BigInt;
use proptest::prelude::*;

const ORDERS: [usize; 8] = [1, 2, 6, 12, 18, 36, 90, 360];

fn cyclo(order: usize) -> impl Strategy<Value = CycloSum> {
    prop::collection::vec((0..order as u64, -20i64..=20), 0..10).prop_map(move |terms| {
        let mut s = CycloSum::zero(order);
        for (i, c) in terms {
            s.add_term(i, BigInt::from(c));
        }
        s
    })
}

fn triple() -> impl Strategy<Value = (CycloSum, CycloSum, CycloSum)> {
    prop::sample::select(&ORDERS[..]).prop_flat_map(|l| (cyclo(l), cyclo(l), cyclo(l)))
}

proptest! {
    #[test]
    fn mul_commutes_and_associates((x, y, z) in triple()) {
        prop_assert!((&x * &y).equals_exact(&(&y * &x)));
        prop_assert!((&(&x * &y) * &z).equals_exact(&(&x * &(&y * &z))));
    }

    #[test]
    fn mul_distributes((x, y, z) in triple()) {
        prop_assert!((&x * &(&y + &z)).equals_exact(&(&(&x * &y) + &(&x * &z))));
    }

    #[test]
    fn conjugation_is_an_involutive_homomorphism((x, y, _) in triple()) {
        let back = x.conjugate().conjugate();
        prop_assert_eq!(back.coeffs(), x.coeffs());
        prop_assert!((&x * &y).conjugate().equals_exact(&(&x.conjugate() * &y.conjugate())));
    }

    #[test]
    fn norm_is_real_and_nonnegative((x, _, _) in triple()) {
        let v = (&x * &x.conjugate()).eval_float();
        prop_assert!(v.value.re >= -v.error - 1e-9);
        prop_assert!(v.value.im.abs() <= v.error + 1e-9);
    }

    #[test]
    fn exact_equality_agrees_with_float((x, y, _) in triple()) {
        let (fx, fy) = (x.eval_float(), y.eval_float());
        let close = (fx.value - fy.value).norm() <= fx.error + fy.error + 1e-9;
        prop_assert_eq!(x.equals_exact(&y), close);
        // A multiple of the sum of all L-th roots is zero when L > 1.
        let l = x.order();
        if l > 1 {
            let mut shifted = x.clone();
            for j in 0..l as u64 {
                shifted.add_term(j, 3);
            }
            prop_assert!(shifted.equals_exact(&x));
        }
    }

    #[test]
    fn reduction_preserves_value((x, _, _) in triple()) {
        prop_assert!(x.reduce().equals_exact(&x));
        let (a, b) = (x.eval_float(), x.reduce().eval_float());
        prop_assert!((a.value - b.value).norm() <= a.error + b.error + 1e-9);
    }

    #[test]
    fn discrete_log_round_trips(idx in 0usize..6, alpha in 1u32..=3, x in 1i64..10_000) {
        let p = [3u64, 5, 7, 11, 13, 17][idx];
        let pa = p.pow(alpha);
        prop_assume!(x as u64 % p != 0);
        let g = primitive_root(p, alpha).unwrap();
        let e = discrete_log(x, g, p, alpha).unwrap();
        prop_assert_eq!(pow_mod(g, e, pa), x as u64 % pa);
    }

    #[test]
    fn jacobi_is_multiplicative(a in -500i64..500, b in -500i64..500, n in (1u64..200).prop_map(|n| 2 * n + 1)) {
        prop_assert_eq!(jacobi(a, n).unwrap() * jacobi(b, n).unwrap(), jacobi(a * b, n).unwrap());
    }

    #[test]
    fn legendre_matches_euler(idx in 0usize..8, a in 1i64..1000) {
        let p = [3u64, 5, 7, 11, 13, 97, 101, 1009][idx];
        let l = legendre(a, p).unwrap();
        let e = pow_mod(a as u64 % p, (p - 1) / 2, p);
        let want = if a as u64 % p == 0 { 0 } else if e == 1 { 1 } else { -1 };
        prop_assert_eq!(l, want);
    }

    #[test]
    fn gauss_sum_magnitude_is_twist_invariant(qi in 0usize..4, ci in 0usize..100, t in 1i64..50) {
        let q = [9u64, 25, 27, 49][qi];
        let group = CharacterGroup::new(&factorize(q).unwrap()).unwrap();
        let chars = group.characters();
        let chi = &chars[ci % chars.len()];
        prop_assume!(group.modulus().is_coprime_to(t));
        let base = gauss_sum(1, chi).unwrap().abs_squared();
        let twisted = gauss_sum(t * t, chi).unwrap().abs_squared();
        prop_assert!(base.equals_exact(&twisted));
    }
}
