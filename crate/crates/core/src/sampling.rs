//! Seeded random inputs for the randomized identity checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactpoly::{int, rat, Monomial, Poly, Rational, Var};

pub const DEFAULT_SEED: u64 = 20160817;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero integer in `-bound..=bound`.
pub fn nonzero_int(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    loop {
        let x = rng.gen_range(-bound..=bound);
        if x != 0 {
            return int(x);
        }
    }
}

/// Small nonzero rational `a/b`.
pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let a = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
    let b = rng.gen_range(1..=5);
    rat(a, b)
}

/// A polynomial with `terms` random terms of total degree at most `max_deg`.
pub fn random_poly(rng: &mut ChaCha8Rng, vars: &[Var], terms: usize, max_deg: u32) -> Poly {
    let mut p = Poly::zero();
    while p.num_terms() < terms {
        let deg = rng.gen_range(0..=max_deg);
        let m = Monomial::from_pairs((0..deg).map(|_| (vars[rng.gen_range(0..vars.len())], 1)));
        p.add_term(m, nonzero_int(rng, 5));
    }
    p
}
