//! Random unimodular coefficient vectors for tests and the `verify` command.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::ring::{gcd_all, Int};
use crate::solution::Coefficients;

const SMALL_PRIMES: [i64; 6] = [2, 3, 5, 7, 11, 13];

/// A product of small primes with absolute value at most `max`.
fn smooth<R: Rng + ?Sized>(rng: &mut R, max: i64) -> i64 {
    let mut x: i64 = 1;
    for _ in 0..rng.gen_range(1..=8) {
        let p = *SMALL_PRIMES.choose(rng).expect("nonempty");
        match x.checked_mul(p) {
            Some(y) if y <= max => x = y,
            _ => break,
        }
    }
    x
}

fn entry<R: Rng + ?Sized>(rng: &mut R, max: i64) -> i64 {
    let x = match rng.gen_range(0..10) {
        0 => 0,
        1..=4 => smooth(rng, max),
        _ => rng.gen_range(1..=max),
    };
    if rng.gen_bool(0.5) {
        -x
    } else {
        x
    }
}

/// A unimodular vector of length `n ≥ 2` with entries in `[−max, max]`.
/// About half the entries are products of small primes so that gcds are
/// nontrivial; zeros appear occasionally. Non-unimodular draws are retried.
pub fn random_unimodular<R: Rng + ?Sized>(rng: &mut R, n: usize, max_coeff: i64) -> Coefficients {
    assert!(n >= 2 && max_coeff >= 1, "need n ≥ 2 and a positive bound");
    loop {
        let a: Vec<Int> = (0..n).map(|_| Int::from(entry(rng, max_coeff))).collect();
        if gcd_all(&a).is_one() {
            return Coefficients::new(a).expect("checked gcd");
        }
    }
}

/// Like [`random_unimodular`] but with `a_1 ≠ 0`.
pub fn random_unimodular_nonzero_first<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_coeff: i64,
) -> Coefficients {
    loop {
        let c = random_unimodular(rng, n, max_coeff);
        if !c.get(1).is_zero() {
            return c;
        }
    }
}

/// A uniformly random ordering of `lo..=hi`.
pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, lo: usize, hi: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (lo..=hi).collect();
    v.shuffle(rng);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn draws_are_unimodular_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=6 {
            for _ in 0..50 {
                let c = random_unimodular(&mut rng, n, 1000);
                assert_eq!(c.n(), n);
                assert!(c
                    .as_slice()
                    .iter()
                    .all(|x| x <= &Int::from(1000) && x >= &Int::from(-1000)));
            }
        }
        let c = random_unimodular_nonzero_first(&mut rng, 4, 1);
        assert!(!c.get(1).is_zero());
        let mut p = random_permutation(&mut rng, 2, 6);
        p.sort();
        assert_eq!(p, vec![2, 3, 4, 5, 6]);
    }
}
