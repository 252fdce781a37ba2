//! Exact computation of generalized quadratic Gauss sums
//! `G(n, chi; q) = sum_a chi(a) e(n a^2 / q)` and of their power means over
//! all Dirichlet characters modulo odd `q`, together with brute-force
//! oracles for the closed-form identities those means satisfy.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: factorization, Legendre/Jacobi symbols, primitive roots.
//! * [`characters`]: the character group modulo `q`, with exact values.
//! * [`cyclo`]: exact arithmetic on sums of roots of unity.
//! * [`gauss`]: classical and generalized Gauss sums.
//! * [`closedform`]: every closed-form right-hand side.
//! * [`oracle`]: independent brute-force left-hand sides.
//! * [`verify`]: claims, reports and the self-test that pair the two.
//!
//! ```
//! use gauss_moments::{arith::factorize, closedform, oracle};
//!
//! let q = factorize(25)?;
//! let closed = closedform::power_mean_closed(&q, 2)?;
//! let brute = oracle::power_mean_brute(1, &q, 2, oracle::Backend::Exact)?;
//! assert_eq!(brute.as_integer(), Some(&closed));
//! # Ok::<(), gauss_moments::Error>(())
//! ```

pub mod arith;
pub mod characters;
pub mod closedform;
pub mod cyclo;
mod error;
pub mod gauss;
pub mod oracle;
pub mod verify;

pub use error::{Error, Result};

// The guide's code listings run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/arithmetic.md")]
    mod arithmetic {}
    #[doc = include_str!("../../../book/src/characters.md")]
    mod characters {}
    #[doc = include_str!("../../../book/src/cyclotomic.md")]
    mod cyclotomic {}
    #[doc = include_str!("../../../book/src/gauss-sums.md")]
    mod gauss_sums {}
    #[doc = include_str!("../../../book/src/power-means.md")]
    mod power_means {}
    #[doc = include_str!("../../../book/src/lemma-sums.md")]
    mod lemma_sums {}
    #[doc = include_str!("../../../book/src/prior-moments.md")]
    mod prior_moments {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
