//! Exact coefficient ring: rationals and sparse multivariate polynomials.
//!
//! Polynomials stand in for smooth functions on a single global chart. Every
//! operator used elsewhere in the crate (derivatives, contractions, brackets)
//! maps polynomial data to polynomial data, so zero tests are exact.

mod monomial;
mod polynomial;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use monomial::{monomials_up_to, Monomial};
pub use polynomial::Polynomial;

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator.
pub type Rational = malachite_q::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("dimension mismatch: {left} vs {right} variables")]
    DimensionMismatch { left: usize, right: usize },
    #[error("coordinate index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not divisible")]
    NotDivisible,
}

/// Generator for trial `t` of a seeded run: ChaCha8 seeded with
/// `seed + t` (wrapping), so trials are independent of scheduling.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64))
}

/// Dense random polynomial: every monomial of total degree `<= max_degree`
/// gets an integer coefficient drawn uniformly from
/// `[-max_abs_coeff, max_abs_coeff]`, in ascending graded-lex order.
pub fn sample_polynomial<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    max_degree: u32,
    max_abs_coeff: u32,
) -> Polynomial {
    let bound = i64::from(max_abs_coeff.max(1));
    let terms = monomials_up_to(nvars, max_degree)
        .into_iter()
        .map(|m| {
            let c = rng.gen_range(-bound..=bound);
            (m, Rational::from(c))
        })
        .collect::<Vec<_>>();
    Polynomial::from_terms(nvars, terms).expect("sampled monomials match nvars")
}
