//! Integer arithmetic over ℤ viewed as a Euclidean domain.
//!
//! Everything here works on arbitrary-precision [`Int`] values. Gcds are
//! always normalized nonnegative and `gcd(0, 0) = 0`, which keeps
//! divisibility chains total.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn ints(vs: &[i64]) -> Vec<Int> {
    vs.iter().map(|&v| Int::from(v)).collect()
}

pub fn gcd(a: &Int, b: &Int) -> Int {
    a.gcd(b)
}

pub fn gcd_all<'a, I: IntoIterator<Item = &'a Int>>(xs: I) -> Int {
    xs.into_iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Nonnegative lcm; `lcm(0, x) = 0`.
pub fn lcm(a: &Int, b: &Int) -> Int {
    if a.is_zero() || b.is_zero() {
        return Int::zero();
    }
    a.lcm(b)
}

/// `true` iff `d` divides `x`. Zero divides only zero.
pub fn divides(d: &Int, x: &Int) -> bool {
    if d.is_zero() {
        x.is_zero()
    } else {
        (x % d).is_zero()
    }
}

/// Running gcds `gcd(a_1,…,a_i)` of a coefficient list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcdChain(Vec<Int>);

impl GcdChain {
    pub fn as_slice(&self) -> &[Int] {
        &self.0
    }

    /// 1-based: `prefix(i) = gcd(a_1,…,a_i)`, with `prefix(0) = 0`.
    pub fn prefix(&self, i: usize) -> Int {
        if i == 0 {
            Int::zero()
        } else {
            self.0[i - 1].clone()
        }
    }

    pub fn last(&self) -> Option<&Int> {
        self.0.last()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<Int> {
        self.0
    }
}

pub fn gcd_prefixes(a: &[Int]) -> GcdChain {
    let mut acc = Int::zero();
    GcdChain(
        a.iter()
            .map(|x| {
                acc = acc.gcd(x);
                acc.clone()
            })
            .collect(),
    )
}

/// Extended gcd of two integers: `(g, s, t)` with `s·a + t·b = g ≥ 0`.
pub fn xgcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    if a.is_zero() && b.is_zero() {
        return (Int::zero(), Int::zero(), Int::zero());
    }
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Bézout witness for a whole list: returns `(g, c)` with `Σ c_i·a_i = g`,
/// `g = gcd(a) ≥ 0`.
pub fn xgcd_multi(a: &[Int]) -> (Int, Vec<Int>) {
    let mut g = Int::zero();
    let mut coeffs: Vec<Int> = Vec::with_capacity(a.len());
    for x in a {
        // invariant: Σ coeffs·a[..k] = g
        let (h, s, t) = xgcd(&g, x);
        for c in coeffs.iter_mut() {
            *c *= &s;
        }
        coeffs.push(t);
        g = h;
    }
    (g, coeffs)
}

/// Solves `Σ coeffs_i·t_i ≡ target (mod modulus)`.
///
/// With a single coefficient the solution is the least nonnegative one;
/// otherwise each entry is reduced into `[0, |modulus|)`.
pub fn solve_linear_congruence(coeffs: &[Int], target: &Int, modulus: &Int) -> Result<Vec<Int>> {
    if modulus.is_zero() {
        return Err(Error::ZeroModulus);
    }
    let m = modulus.abs();
    let mut all = coeffs.to_vec();
    all.push(m.clone());
    let (g, bezout) = xgcd_multi(&all);
    if !divides(&g, target) {
        return Err(Error::Unsolvable);
    }
    let q = target / &g;
    let reduce_by = if coeffs.len() == 1 { &m / &g } else { m };
    Ok(bezout[..coeffs.len()]
        .iter()
        .map(|s| (s * &q).mod_floor(&reduce_by))
        .collect())
}

/// Exponent of the largest power of `p` dividing nonzero `x`.
pub fn valuation(x: &Int, p: &Int) -> u32 {
    debug_assert!(!x.is_zero() && *p > Int::one());
    let mut x = x.abs();
    let mut k = 0;
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        x = q;
        k += 1;
    }
}

/// The exact power of the prime `p` dividing `x`.
pub fn p_part(x: &Int, p: &Int) -> Result<Int> {
    if x.is_zero() {
        return Err(Error::ZeroPPart);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    let p = p.abs();
    Ok(num_traits::pow(p.clone(), valuation(x, &p) as usize))
}

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

// Miller–Rabin with the first 13 prime bases is exact below this bound.
const DETERMINISTIC_BOUND: &str = "3317044064679887385961981";

/// Primality test for `|n|`. Exact below ~3.3·10²⁴; above that the fixed set
/// of 25 prime bases makes it a (very strong) probable-prime test.
pub fn is_prime(n: &Int) -> bool {
    let n = n.abs();
    if n < Int::from(2) {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = Int::from(p);
        if n == p {
            return true;
        }
        if (&n % &p).is_zero() {
            return false;
        }
    }
    let one = Int::one();
    let n_minus_1 = &n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let bound: Int = DETERMINISTIC_BOUND.parse().expect("constant");
    let rounds = if n < bound { 13 } else { SMALL_PRIMES.len() };
    'witness: for &a in &SMALL_PRIMES[..rounds] {
        let mut x = Int::from(a).modpow(&d, &n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % &n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Pollard rho with Floyd cycle detection. Caller guarantees n is composite
// with no prime factor below 1000.
fn pollard_rho(n: &Int) -> Int {
    let one = Int::one();
    let mut c = Int::one();
    loop {
        let f = |x: &Int| (x * x + &c) % n;
        let mut x = Int::from(2);
        let mut y = x.clone();
        let mut d = one.clone();
        while d == one {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_into(n: Int, out: &mut BTreeMap<Int, u32>) {
    if n == Int::one() {
        return;
    }
    if is_prime(&n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let d = pollard_rho(&n);
    factor_into(&n / &d, out);
    factor_into(d, out);
}

/// Prime factorization of `|n|` as prime → exponent. Empty for `|n| ≤ 1`;
/// zero is rejected.
pub fn factorize(n: &Int) -> Result<BTreeMap<Int, u32>> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("cannot factor zero".into()));
    }
    let mut n = n.abs();
    let mut out = BTreeMap::new();
    // composite trial divisors never divide: their prime factors are gone
    for p in 2u32..1000 {
        let p = Int::from(p);
        if &p * &p > n {
            break;
        }
        let mut k = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            k += 1;
        }
        if k > 0 {
            out.insert(p, k);
        }
    }
    factor_into(n, &mut out);
    Ok(out)
}

pub fn prime_divisors(n: &Int) -> Result<Vec<Int>> {
    Ok(factorize(n)?.into_keys().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefixes_match_examples() {
        assert_eq!(
            gcd_prefixes(&ints(&[12, 4, 2, 3])).into_vec(),
            ints(&[12, 4, 2, 1])
        );
        assert_eq!(gcd_prefixes(&ints(&[0, 0, 5])).into_vec(), ints(&[0, 0, 5]));
        assert_eq!(
            gcd_prefixes(&ints(&[6, 10, 15])).into_vec(),
            ints(&[6, 2, 1])
        );
        assert_eq!(gcd_prefixes(&ints(&[-12, 8])).into_vec(), ints(&[12, 4]));
    }

    #[test]
    fn xgcd_multi_examples() {
        let a = ints(&[12, 4, 2, 3]);
        let (g, c) = xgcd_multi(&a);
        assert_eq!(g, int(1));
        let s: Int = a.iter().zip(&c).map(|(x, y)| x * y).sum();
        assert_eq!(s, int(1));

        assert_eq!(xgcd_multi(&ints(&[5])), (int(5), ints(&[1])));
        assert_eq!(xgcd_multi(&ints(&[0, 0])), (int(0), ints(&[0, 0])));
        let (g, c) = xgcd_multi(&ints(&[-4]));
        assert_eq!((g, c), (int(4), ints(&[-1])));
    }

    #[test]
    fn congruence_examples() {
        let t = solve_linear_congruence(&ints(&[4]), &int(-4), &int(12)).unwrap();
        assert_eq!(t, ints(&[2]));

        let t = solve_linear_congruence(&ints(&[4, 2]), &int(-6), &int(12)).unwrap();
        let lhs = int(4) * &t[0] + int(2) * &t[1];
        assert!(divides(&int(12), &(lhs + 6)));
        assert!(t.iter().all(|x| *x >= int(0) && *x < int(12)));

        assert_eq!(
            solve_linear_congruence(&ints(&[2]), &int(1), &int(4)),
            Err(Error::Unsolvable)
        );
        assert_eq!(
            solve_linear_congruence(&ints(&[2]), &int(1), &int(0)),
            Err(Error::ZeroModulus)
        );
        // negative modulus behaves like its absolute value
        let t = solve_linear_congruence(&ints(&[7]), &int(1), &int(-4)).unwrap();
        assert_eq!(t, ints(&[3]));
    }

    #[test]
    fn p_part_examples() {
        assert_eq!(p_part(&int(12), &int(2)).unwrap(), int(4));
        assert_eq!(p_part(&int(12), &int(5)).unwrap(), int(1));
        assert_eq!(p_part(&int(720), &int(3)).unwrap(), int(9));
        assert_eq!(p_part(&int(-720), &int(2)).unwrap(), int(16));
        assert_eq!(p_part(&int(0), &int(2)), Err(Error::ZeroPPart));
        assert!(matches!(p_part(&int(12), &int(4)), Err(Error::NotPrime(_))));
    }

    #[test]
    fn primes_and_factoring() {
        let primes: Vec<u32> = (0..60).filter(|&k| is_prime(&Int::from(k))).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        // Carmichael number and a strong pseudoprime to base 2
        assert!(!is_prime(&int(561)));
        assert!(!is_prime(&int(2047)));
        assert!(is_prime(&int(1_000_003)));

        let f = factorize(&int(720)).unwrap();
        assert_eq!(f, BTreeMap::from([(int(2), 4), (int(3), 2), (int(5), 1)]));
        // two large primes forces the rho path
        let n = int(1_000_003) * int(999_983);
        let f = factorize(&n).unwrap();
        assert_eq!(f, BTreeMap::from([(int(999_983), 1), (int(1_000_003), 1)]));
        assert!(factorize(&int(1)).unwrap().is_empty());
        assert!(factorize(&int(0)).is_err());
    }
}
