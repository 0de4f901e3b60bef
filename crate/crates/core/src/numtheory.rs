//! Integer number theory at desk scale: factorization by trial division,
//! valuations, square parts, exact divisors and the unit-group functions
//! φ and λ.
//!
//! Exact divisors of `n` form an elementary abelian 2-group under
//! `(μ, ν) ↦ μν / gcd(μ, ν)²`, isomorphic to `{±1}` raised to the set of
//! primes dividing `n`. [`PrimeComponents`] is the prime-set view of that
//! group, used for the projection onto the primes of a divisor.

use crate::error::{Error, Result};

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_i64(a: i64, b: i64) -> u64 {
    gcd(a.unsigned_abs(), b.unsigned_abs())
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Prime factorization `n = ∏ p^e`, primes ascending. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    for p in [2u64, 3, 5] {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    // wheel mod 30
    const STEPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut p = 7u64;
    let mut i = 0;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += STEPS[i];
        i = (i + 1) % STEPS.len();
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    matches!(factorize(n).as_slice(), [(_, 1)])
}

/// Distinct primes dividing `n`, ascending.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// Valuation without argument checks; `valuation(p, 0)` is not meaningful.
pub(crate) fn valuation(p: u64, mut m: u64) -> u32 {
    debug_assert!(p > 1 && m > 0);
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    k
}

/// The p-adic valuation `v_p(m)`.
pub fn vp(p: u64, m: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::Zero);
    }
    Ok(valuation(p, m))
}

/// `m = s² · t` with `t` squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SquarePart {
    pub s: u64,
    pub t: u64,
}

pub fn square_part(m: u64) -> Result<SquarePart> {
    if m == 0 {
        return Err(Error::Zero);
    }
    let mut s = 1;
    let mut t = 1;
    for (p, e) in factorize(m) {
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            t *= p;
        }
    }
    Ok(SquarePart { s, t })
}

/// Shorthand for `square_part(m).s` on a known-positive argument.
pub(crate) fn sqrt_of_square_part(m: u64) -> u64 {
    square_part(m).map(|sp| sp.s).unwrap_or(1)
}

/// An exact divisor `μ` of `n`, i.e. `μ | n` and `gcd(μ, n/μ) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactDivisor {
    n: u64,
    mu: u64,
}

impl ExactDivisor {
    pub fn new(n: u64, mu: u64) -> Result<Self> {
        if n == 0 || mu == 0 {
            return Err(Error::Zero);
        }
        if n % mu != 0 || gcd(mu, n / mu) != 1 {
            return Err(Error::NotExactDivisor { n, mu });
        }
        Ok(ExactDivisor { n, mu })
    }

    pub fn trivial(n: u64) -> Self {
        ExactDivisor { n, mu: 1 }
    }

    /// The ambient level.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn mu(&self) -> u64 {
        self.mu
    }

    /// `n / μ`, itself an exact divisor.
    pub fn complement(&self) -> u64 {
        self.n / self.mu
    }

    /// Primes dividing `μ`.
    pub fn components(&self) -> PrimeComponents {
        PrimeComponents {
            primes: prime_divisors(self.mu),
        }
    }
}

/// All exact divisors of `n`, ascending; there are `2^ω(n)` of them.
pub fn exact_divisors(n: u64) -> Result<Vec<ExactDivisor>> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let mut mus = vec![1u64];
    for (p, e) in factorize(n) {
        let pe = p.pow(e);
        let extra: Vec<u64> = mus.iter().map(|m| m * pe).collect();
        mus.extend(extra);
    }
    mus.sort_unstable();
    Ok(mus.into_iter().map(|mu| ExactDivisor { n, mu }).collect())
}

/// The group law `κ = μν / gcd(μ, ν)²` on exact divisors of a common level.
pub fn exact_divisor_product(mu: ExactDivisor, nu: ExactDivisor) -> Result<ExactDivisor> {
    if mu.n != nu.n {
        return Err(Error::LevelMismatch {
            left: mu.n,
            right: nu.n,
        });
    }
    let d = gcd(mu.mu, nu.mu);
    Ok(ExactDivisor {
        n: mu.n,
        mu: (mu.mu / d) * (nu.mu / d),
    })
}

/// An element of `{±1}^{p | d}`, recorded as the set of primes carrying `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PrimeComponents {
    pub primes: Vec<u64>,
}

impl PrimeComponents {
    pub fn is_trivial(&self) -> bool {
        self.primes.is_empty()
    }

    /// Componentwise product (symmetric difference of the prime sets).
    pub fn combine(&self, other: &PrimeComponents) -> PrimeComponents {
        let mut primes: Vec<u64> = self
            .primes
            .iter()
            .filter(|p| !other.primes.contains(p))
            .chain(other.primes.iter().filter(|p| !self.primes.contains(p)))
            .copied()
            .collect();
        primes.sort_unstable();
        PrimeComponents { primes }
    }
}

/// The canonical projection `{±1}^{p|N} → {±1}^{p|d}` for `d | N`: keep the
/// components of `μ` at primes dividing `d`.
///
/// The result is a prime set, not an exact divisor of `d`.
pub fn exact_divisor_project(mu: ExactDivisor, d: u64) -> Result<PrimeComponents> {
    if d == 0 {
        return Err(Error::Zero);
    }
    if mu.n % d != 0 {
        return Err(Error::NotADivisor { d, n: mu.n });
    }
    Ok(PrimeComponents {
        primes: prime_divisors(mu.mu)
            .into_iter()
            .filter(|p| d % p == 0)
            .collect(),
    })
}

pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Zero);
    }
    Ok(factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1)))
}

/// Carmichael's function: the exponent of `(Z/nZ)^×`.
pub fn carmichael_lambda(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Zero);
    }
    Ok(factorize(n).into_iter().fold(1, |acc, (p, e)| {
        let phi = p.pow(e - 1) * (p - 1);
        let local = if p == 2 && e >= 3 { phi / 2 } else { phi };
        lcm(acc, local)
    }))
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `n`, if it exists. Modulo 1 everything is `0`.
pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % n as i128, n as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(n as i128) as u64)
}

/// Extended Euclid on signed integers: returns `(g, x, y)` with `ax + by = g`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// The unique `x` mod `m1·m2` with `x ≡ r1 (m1)`, `x ≡ r2 (m2)`, for coprime moduli.
pub fn crt(r1: u64, m1: u64, r2: u64, m2: u64) -> u64 {
    debug_assert_eq!(gcd(m1, m2), 1);
    let m = m1 as u128 * m2 as u128;
    if m == 1 {
        return 0;
    }
    // x = r1 + m1 * ((r2 - r1) * m1^{-1} mod m2)
    let inv = mod_inverse(m1 % m2.max(1), m2).unwrap_or(0) as u128;
    let diff = ((r2 % m2) as i128 - (r1 % m2) as i128).rem_euclid(m2 as i128) as u128;
    let k = diff * inv % m2 as u128;
    ((r1 as u128 % m1 as u128 + m1 as u128 * k) % m) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_units(n: u64) -> Vec<u64> {
        (0..n).filter(|&x| gcd(x, n) == 1).collect()
    }

    // smallest k dividing the group order with x^k = 1 for every unit x
    fn brute_exponent(n: u64) -> u64 {
        let units = brute_units(n);
        let order = units.len() as u64;
        (1..=order)
            .filter(|k| order % k == 0)
            .find(|&k| units.iter().all(|&x| mod_pow(x, k, n) == 1 % n))
            .unwrap()
    }

    #[test]
    fn valuations() {
        assert_eq!(vp(2, 12).unwrap(), 2);
        assert_eq!(vp(3, 12).unwrap(), 1);
        assert_eq!(vp(5, 12).unwrap(), 0);
        assert_eq!(vp(4, 12), Err(Error::NotPrime(4)));
        assert_eq!(vp(2, 0), Err(Error::Zero));
    }

    #[test]
    fn square_parts() {
        assert_eq!(square_part(12).unwrap(), SquarePart { s: 2, t: 3 });
        assert_eq!(square_part(1).unwrap(), SquarePart { s: 1, t: 1 });
        assert_eq!(square_part(720).unwrap(), SquarePart { s: 12, t: 5 });
        assert_eq!(square_part(0), Err(Error::Zero));
    }

    #[test]
    fn square_part_exhaustive() {
        for m in 1..=10_000u64 {
            let SquarePart { s, t } = square_part(m).unwrap();
            assert_eq!(s * s * t, m);
            // squarefree by trial division
            let mut d = 2;
            while d * d <= t {
                assert_ne!(t % (d * d), 0, "t={t} for m={m}");
                d += 1;
            }
        }
    }

    #[test]
    fn exact_divisor_lists() {
        let mus = |n| {
            exact_divisors(n)
                .unwrap()
                .iter()
                .map(|d| d.mu())
                .collect::<Vec<_>>()
        };
        assert_eq!(mus(12), vec![1, 3, 4, 12]);
        assert_eq!(mus(1), vec![1]);
        let brute: Vec<u64> = (1..=30u64)
            .filter(|d| 30 % d == 0 && gcd(*d, 30 / d) == 1)
            .collect();
        assert_eq!(mus(30), brute);
        assert_eq!(brute, vec![1, 2, 3, 5, 6, 10, 15, 30]);
        assert_eq!(exact_divisors(0), Err(Error::Zero));
        assert!(ExactDivisor::new(12, 2).is_err());
    }

    #[test]
    fn exact_divisor_products() {
        let e = |n, mu| ExactDivisor::new(n, mu).unwrap();
        assert_eq!(exact_divisor_product(e(12, 4), e(12, 3)).unwrap().mu(), 12);
        assert_eq!(exact_divisor_product(e(12, 4), e(12, 4)).unwrap().mu(), 1);
        assert_eq!(exact_divisor_product(e(12, 4), e(12, 12)).unwrap().mu(), 3);
        assert!(matches!(
            exact_divisor_product(e(12, 4), e(24, 3)),
            Err(Error::LevelMismatch { .. })
        ));
    }

    #[test]
    fn exact_divisor_group_is_elementary_abelian() {
        for n in 1..=1000u64 {
            let all = exact_divisors(n).unwrap();
            assert_eq!(all.len(), 1 << prime_divisors(n).len());
            for &x in &all {
                assert_eq!(exact_divisor_product(x, x).unwrap().mu(), 1);
                for &y in &all {
                    let xy = exact_divisor_product(x, y).unwrap();
                    assert_eq!(xy, exact_divisor_product(y, x).unwrap());
                    assert!(all.contains(&xy));
                    for &z in &all {
                        let l = exact_divisor_product(xy, z).unwrap();
                        let r =
                            exact_divisor_product(x, exact_divisor_product(y, z).unwrap()).unwrap();
                        assert_eq!(l, r);
                    }
                }
            }
        }
    }

    #[test]
    fn projections() {
        let e = |n, mu| ExactDivisor::new(n, mu).unwrap();
        assert_eq!(exact_divisor_project(e(12, 12), 4).unwrap().primes, vec![2]);
        assert!(exact_divisor_project(e(12, 3), 4).unwrap().is_trivial());
        assert_eq!(exact_divisor_project(e(30, 15), 6).unwrap().primes, vec![3]);
        assert!(matches!(
            exact_divisor_project(e(12, 3), 5),
            Err(Error::NotADivisor { .. })
        ));
    }

    #[test]
    fn projection_is_homomorphism_with_coprime_kernel() {
        for n in 1..=1000u64 {
            let all = exact_divisors(n).unwrap();
            for d in divisors(n) {
                for &x in &all {
                    let px = exact_divisor_project(x, d).unwrap();
                    assert_eq!(px.is_trivial(), gcd(x.mu(), d) == 1);
                    for &y in &all {
                        let xy = exact_divisor_product(x, y).unwrap();
                        let py = exact_divisor_project(y, d).unwrap();
                        assert_eq!(exact_divisor_project(xy, d).unwrap(), px.combine(&py));
                    }
                }
            }
        }
    }

    #[test]
    fn phi_and_lambda_values() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(carmichael_lambda(1).unwrap(), 1);
        assert_eq!(carmichael_lambda(8).unwrap(), 2);
        assert_eq!(brute_exponent(68), 16);
        assert_eq!(carmichael_lambda(68).unwrap(), 16);
        assert_eq!(euler_phi(0), Err(Error::Zero));
        assert_eq!(carmichael_lambda(0), Err(Error::Zero));
    }

    #[test]
    fn phi_and_lambda_against_brute_force() {
        for n in 1..=2000u64 {
            assert_eq!(
                euler_phi(n).unwrap(),
                brute_units(n).len() as u64,
                "phi({n})"
            );
            assert_eq!(
                carmichael_lambda(n).unwrap(),
                brute_exponent(n),
                "lambda({n})"
            );
        }
    }

    #[test]
    fn crt_and_inverse() {
        assert_eq!(crt(5, 7, 2, 13), 54);
        assert_eq!(mod_inverse(80, 91).map(|x| x % 7), Some(5));
        assert_eq!(mod_inverse(6, 9), None);
        assert_eq!(crt(0, 1, 3, 5), 3);
        assert_eq!(crt(0, 1, 0, 1), 0);
    }

    #[test]
    fn divisor_listing() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(factorize(1467), vec![(3, 2), (163, 1)]);
    }
}
