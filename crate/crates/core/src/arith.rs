//! Factorization and exact one-variable arithmetic functions, classical and
//! unitary.
//!
//! Factorization uses trial division by the primes below 2^16, then a
//! deterministic Miller-Rabin test and Brent's variant of Pollard rho for any
//! cofactor that survives. Every function that can overflow 128-bit exact
//! arithmetic returns [`Error::Overflow`].

use std::sync::OnceLock;

use crate::{Error, Result};

/// Inputs must be below this bound.
pub const MAX_INPUT: u64 = 1 << 63;

const TRIAL_LIMIT: u32 = 1 << 16;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut composite = vec![false; n];
        let mut primes = Vec::new();
        for i in 2..n {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j < n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b)).checked_mul(b).ok_or(Error::Overflow("lcm"))
}

pub fn gcd_all(values: &[u64]) -> u64 {
    values.iter().fold(0, |g, &v| gcd(g, v))
}

pub fn lcm_all(values: &[u64]) -> Result<u64> {
    values.iter().try_fold(1, |l, &v| lcm(l, v))
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A nontrivial factor of an odd composite `n` (Brent's cycle detection).
fn pollard_brent(n: u64) -> u64 {
    const BATCH: u64 = 128;
    for c in 1..n {
        let step = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
        let (mut x, mut ys) = (0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = step(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = step(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = step(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("pollard rho exhausted all increments for {n}")
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// Canonical prime-power factorization. The empty list represents 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    n: u64,
    pairs: Vec<(u64, u32)>,
}

/// A prime power `p^e` with `e >= 1`; what the von Mangoldt functions return
/// instead of a logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    pub p: u64,
    pub e: u32,
}

impl PrimePower {
    /// `log p`, the value of the classical von Mangoldt function.
    pub fn log_p(&self) -> f64 {
        (self.p as f64).ln()
    }

    /// `e log p`, the value of the unitary von Mangoldt function.
    pub fn nu_log_p(&self) -> f64 {
        self.e as f64 * self.log_p()
    }
}

fn checked_pow(base: u64, exp: u32) -> Result<i128> {
    (base as i128)
        .checked_pow(exp)
        .ok_or(Error::Overflow("prime power"))
}

pub(crate) fn binomial(n: u64, k: u64) -> Result<i128> {
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as i128)
            .ok_or(Error::Overflow("binomial coefficient"))?
            / (i as i128 + 1);
    }
    Ok(acc)
}

impl Factorization {
    /// Builds a factorization from `(p, e)` pairs, validating the invariants.
    pub fn from_pairs(mut pairs: Vec<(u64, u32)>) -> Result<Self> {
        pairs.sort_unstable();
        let mut n: u64 = 1;
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::domain("repeated prime in factorization"));
            }
        }
        for &(p, e) in &pairs {
            if e == 0 || !is_prime(p) {
                return Err(Error::domain(format!("invalid prime power {p}^{e}")));
            }
            let pe = p
                .checked_pow(e)
                .ok_or(Error::Overflow("factorization product"))?;
            n = n
                .checked_mul(pe)
                .ok_or(Error::Overflow("factorization product"))?;
        }
        Ok(Factorization { n, pairs })
    }

    pub(crate) fn from_sorted_unchecked(n: u64, pairs: Vec<(u64, u32)>) -> Self {
        Factorization { n, pairs }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    /// `nu_p(n)`, zero when `p` does not divide `n`.
    pub fn nu(&self, p: u64) -> u32 {
        self.pairs
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn omega(&self) -> u32 {
        self.pairs.len() as u32
    }

    pub fn big_omega(&self) -> u32 {
        self.pairs.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.pairs.iter().all(|&(_, e)| e == 1)
    }

    pub fn is_prime_power(&self) -> Option<PrimePower> {
        match self.pairs.as_slice() {
            &[(p, e)] => Some(PrimePower { p, e }),
            _ => None,
        }
    }

    /// All divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.pairs {
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

    /// Unitary divisors, ascending; there are exactly `2^omega(n)`.
    pub fn unitary_divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.pairs {
            let pe = p.pow(e);
            let len = divs.len();
            for i in 0..len {
                divs.push(divs[i] * pe);
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Squarefree divisors paired with their Moebius sign, unsorted.
    pub fn squarefree_divisors(&self) -> Vec<(u64, i8)> {
        let mut divs = vec![(1u64, 1i8)];
        for &(p, _) in &self.pairs {
            let len = divs.len();
            for i in 0..len {
                let (d, s) = divs[i];
                divs.push((d * p, -s));
            }
        }
        divs
    }

    pub fn mobius(&self) -> i128 {
        if self.is_squarefree() {
            if self.omega() % 2 == 0 {
                1
            } else {
                -1
            }
        } else {
            0
        }
    }

    pub fn liouville(&self) -> i128 {
        if self.big_omega() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn mu_star(&self) -> i128 {
        if self.omega() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn jordan_phi(&self, s: u32) -> Result<i128> {
        if s == 0 {
            return Err(Error::domain("jordan_phi requires s >= 1"));
        }
        self.pairs.iter().try_fold(1i128, |acc, &(p, e)| {
            let ps = checked_pow(p, s)?;
            let local = checked_pow(p, s * (e - 1))?
                .checked_mul(ps - 1)
                .ok_or(Error::Overflow("jordan_phi"))?;
            acc.checked_mul(local).ok_or(Error::Overflow("jordan_phi"))
        })
    }

    pub fn euler_phi(&self) -> i128 {
        // phi(n) <= n < 2^63 cannot overflow
        self.jordan_phi(1).expect("phi fits in 128 bits")
    }

    pub fn sigma(&self, s: u32) -> Result<i128> {
        self.pairs.iter().try_fold(1i128, |acc, &(p, e)| {
            let ps = checked_pow(p, s)?;
            let mut local: i128 = 1;
            let mut term: i128 = 1;
            for _ in 0..e {
                term = term.checked_mul(ps).ok_or(Error::Overflow("sigma_s"))?;
                local = local.checked_add(term).ok_or(Error::Overflow("sigma_s"))?;
            }
            acc.checked_mul(local).ok_or(Error::Overflow("sigma_s"))
        })
    }

    pub fn tau(&self) -> i128 {
        self.pairs.iter().map(|&(_, e)| e as i128 + 1).product()
    }

    /// Number of ordered factorizations into `m` factors:
    /// `tau_m(p^e) = binomial(e + m - 1, m - 1)`.
    pub fn piltz_tau(&self, m: u32) -> Result<i128> {
        if m == 0 {
            return Err(Error::domain("piltz_tau requires m >= 1"));
        }
        self.pairs.iter().try_fold(1i128, |acc, &(_, e)| {
            let local = binomial((e + m - 1) as u64, (m - 1) as u64)?;
            acc.checked_mul(local).ok_or(Error::Overflow("piltz_tau"))
        })
    }

    pub fn sigma_star(&self) -> Result<i128> {
        self.pairs.iter().try_fold(1i128, |acc, &(p, e)| {
            let local = checked_pow(p, e)? + 1;
            acc.checked_mul(local).ok_or(Error::Overflow("sigma_star"))
        })
    }

    pub fn tau_star(&self) -> i128 {
        1i128 << self.omega()
    }

    pub fn phi_star(&self) -> i128 {
        self.pairs
            .iter()
            .map(|&(p, e)| (p as i128).pow(e) - 1)
            .product()
    }

    /// Unitary gcd `(k, n)_*` where `self` factors `n`.
    pub fn unitary_gcd_with(&self, k: u64) -> u64 {
        self.pairs
            .iter()
            .map(|&(p, e)| p.pow(e))
            .filter(|&pe| k % pe == 0)
            .product()
    }

    /// `r(n) = 4 * sum_{d | n} chi_4(d)`.
    pub fn sum_of_two_squares(&self) -> i128 {
        let mut acc: i128 = 4;
        for &(p, e) in &self.pairs {
            match p % 4 {
                1 => acc *= e as i128 + 1,
                3 if e % 2 == 1 => return 0,
                _ => {}
            }
        }
        acc
    }
}

/// Canonical factorization of `1 <= n < 2^63`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::domain("cannot factorize 0"));
    }
    if n >= MAX_INPUT {
        return Err(Error::domain(format!("{n} is not below 2^63")));
    }
    let mut m = n;
    let mut pairs = Vec::new();
    for &p in small_primes() {
        let p = p as u64;
        if p * p > m {
            break;
        }
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            pairs.push((p, e));
        }
    }
    if m > 1 {
        let bound = TRIAL_LIMIT as u64;
        if m < bound * bound {
            pairs.push((m, 1));
        } else {
            let mut large = Vec::new();
            split_large(m, &mut large);
            large.sort_unstable();
            for p in large {
                match pairs.last_mut() {
                    Some((q, e)) if *q == p => *e += 1,
                    _ => pairs.push((p, 1)),
                }
            }
        }
    }
    Ok(Factorization::from_sorted_unchecked(n, pairs))
}

/// Smallest-prime-factor table for fast factorization of every `n <= limit`.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: u64) -> Self {
        let limit = limit.max(1) as usize;
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        SpfSieve { spf }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Factorization of `n`; falls back to [`factorize`] above the table.
    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 || n > self.limit() {
            return factorize(n);
        }
        let mut m = n as usize;
        let mut pairs: Vec<(u64, u32)> = Vec::new();
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            pairs.push((p as u64, e));
        }
        Ok(Factorization::from_sorted_unchecked(n, pairs))
    }

    pub fn mobius_table(&self) -> Vec<i8> {
        (0..=self.limit())
            .map(|n| {
                if n == 0 {
                    0
                } else {
                    self.factorize(n).map_or(0, |f| f.mobius() as i8)
                }
            })
            .collect()
    }
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.divisors())
}

pub fn unitary_divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.unitary_divisors())
}

/// `d || n`: `d` divides `n` and `gcd(d, n/d) = 1`.
pub fn is_unitary_divisor(d: u64, n: u64) -> bool {
    d != 0 && n % d == 0 && gcd(d, n / d) == 1
}

/// `(k, n)_*`, the largest divisor of `k` that is a unitary divisor of `n`.
pub fn unitary_gcd(k: u64, n: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::domain("unitary_gcd requires k >= 1"));
    }
    Ok(factorize(n)?.unitary_gcd_with(k))
}

pub fn mobius(n: u64) -> Result<i128> {
    Ok(factorize(n)?.mobius())
}

pub fn omega(n: u64) -> Result<u32> {
    Ok(factorize(n)?.omega())
}

pub fn big_omega(n: u64) -> Result<u32> {
    Ok(factorize(n)?.big_omega())
}

pub fn liouville(n: u64) -> Result<i128> {
    Ok(factorize(n)?.liouville())
}

pub fn euler_phi(n: u64) -> Result<i128> {
    Ok(factorize(n)?.euler_phi())
}

pub fn jordan_phi(s: u32, n: u64) -> Result<i128> {
    factorize(n)?.jordan_phi(s)
}

pub fn sigma_s(s: u32, n: u64) -> Result<i128> {
    factorize(n)?.sigma(s)
}

pub fn tau(n: u64) -> Result<i128> {
    Ok(factorize(n)?.tau())
}

pub fn piltz_tau(m: u32, n: u64) -> Result<i128> {
    factorize(n)?.piltz_tau(m)
}

/// `Some(p^e)` when `n = p^e`; `Lambda(n) = log p`.
pub fn mangoldt(n: u64) -> Result<Option<PrimePower>> {
    Ok(factorize(n)?.is_prime_power())
}

pub fn mu_star(n: u64) -> Result<i128> {
    Ok(factorize(n)?.mu_star())
}

pub fn sigma_star(n: u64) -> Result<i128> {
    factorize(n)?.sigma_star()
}

pub fn tau_star(n: u64) -> Result<i128> {
    Ok(factorize(n)?.tau_star())
}

pub fn phi_star(n: u64) -> Result<i128> {
    Ok(factorize(n)?.phi_star())
}

/// `Some(p^e)` when `n = p^e`; `Lambda*(n) = e log p`.
pub fn mangoldt_star(n: u64) -> Result<Option<PrimePower>> {
    mangoldt(n)
}

pub fn sum_of_two_squares_r(n: u64) -> Result<i128> {
    Ok(factorize(n)?.sum_of_two_squares())
}

/// The nonprincipal character mod 4.
pub fn chi4(n: u64) -> i128 {
    match n % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().pairs().is_empty());
        assert_eq!(factorize(12).unwrap().pairs(), &[(2, 2), (3, 1)]);
        assert_eq!(factorize(360).unwrap().pairs(), &[(2, 3), (3, 2), (5, 1)]);
        assert!(matches!(factorize(0), Err(Error::Domain(_))));
        assert!(factorize(1 << 63).is_err());
    }

    #[test]
    fn factorize_large_semiprimes_and_prime_powers() {
        let p = 4_294_967_291u64; // largest prime below 2^32
        let q = 2_147_483_647u64;
        let f = factorize(p * q).unwrap();
        assert_eq!(f.pairs(), &[(q, 1), (p, 1)]);
        let r = 3_037_000_493u64; // largest prime below 2^31.5
        let f = factorize(r * r).unwrap();
        assert_eq!(f.pairs(), &[(r, 2)]);
        let big_prime = 9_223_372_036_854_775_783u64; // largest prime below 2^63
        assert_eq!(factorize(big_prime).unwrap().pairs(), &[(big_prime, 1)]);
        let f = factorize(3 * 5 * 65_537 * 1_000_003).unwrap();
        assert_eq!(f.pairs(), &[(3, 1), (5, 1), (65_537, 1), (1_000_003, 1)]);
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(unitary_divisors(12).unwrap(), vec![1, 3, 4, 12]);
        assert_eq!(unitary_divisors(1).unwrap(), vec![1]);
    }

    #[test]
    fn unitary_gcd_examples() {
        // brute force: max unitary divisor of n that divides k
        let brute = |k: u64, n: u64| {
            (1..=n)
                .filter(|&d| is_unitary_divisor(d, n) && k % d == 0)
                .max()
                .unwrap()
        };
        assert_eq!(unitary_gcd(2, 4).unwrap(), 1);
        assert_eq!(brute(2, 4), 1);
        assert_eq!(unitary_gcd(12, 12).unwrap(), 12);
        assert_eq!(unitary_gcd(4, 12).unwrap(), 4);
        assert_eq!(brute(4, 12), 4);
    }

    #[test]
    fn classical_function_examples() {
        assert_eq!(jordan_phi(2, 6).unwrap(), 24);
        assert_eq!(piltz_tau(3, 4).unwrap(), 6);
        assert_eq!(liouville(12).unwrap(), -1);
        assert_eq!(sigma_s(1, 12).unwrap(), 28);
        assert_eq!(sigma_s(0, 12).unwrap(), 6);
        assert_eq!(sigma_s(2, 6).unwrap(), 50);
        assert_eq!(mobius(30).unwrap(), -1);
        assert_eq!(mobius(12).unwrap(), 0);
        assert_eq!(mangoldt(8).unwrap(), Some(PrimePower { p: 2, e: 3 }));
        assert_eq!(mangoldt(12).unwrap(), None);
        assert!(jordan_phi(0, 5).is_err());
    }

    #[test]
    fn unitary_function_examples() {
        let brute_phi_star =
            |n: u64| (1..=n).filter(|&k| unitary_gcd(k, n).unwrap() == 1).count() as i128;
        assert_eq!(phi_star(12).unwrap(), 6);
        assert_eq!(brute_phi_star(12), 6);
        assert_eq!(mu_star(12).unwrap(), 1);
        assert_eq!(mangoldt_star(12).unwrap(), None);
        let pp = mangoldt_star(9).unwrap().unwrap();
        assert!((pp.nu_log_p() - 2.0 * 3f64.ln()).abs() < 1e-15);
        for n in 1..=200 {
            assert_eq!(phi_star(n).unwrap(), brute_phi_star(n), "n = {n}");
        }
    }

    #[test]
    fn sum_of_two_squares_examples_and_brute_force() {
        assert_eq!(sum_of_two_squares_r(5).unwrap(), 8);
        assert_eq!(sum_of_two_squares_r(3).unwrap(), 0);
        assert_eq!(sum_of_two_squares_r(25).unwrap(), 12);
        for n in 1..=2000i64 {
            let r = (n as f64).sqrt() as i64 + 1;
            let mut count = 0;
            for x in -r..=r {
                for y in -r..=r {
                    if x * x + y * y == n {
                        count += 1;
                    }
                }
            }
            assert_eq!(sum_of_two_squares_r(n as u64).unwrap(), count, "n = {n}");
        }
    }

    #[test]
    fn factorization_invariants_up_to_ten_thousand() {
        for n in 1..=10_000u64 {
            let f = factorize(n).unwrap();
            let product: u64 = f.pairs().iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(product, n);
            assert!(f.pairs().windows(2).all(|w| w[0].0 < w[1].0));
            assert!(f.pairs().iter().all(|&(p, e)| e >= 1 && is_prime(p)));
            assert_eq!(f.omega() as usize, f.pairs().len());
            assert_eq!(f.big_omega(), f.pairs().iter().map(|&(_, e)| e).sum());
            let ud = f.unitary_divisors();
            assert_eq!(ud.len() as i128, 1i128 << f.omega());
            assert_eq!(ud.len() as i128, f.tau_star());
            assert!(ud.iter().all(|&d| is_unitary_divisor(d, n)));
            assert_eq!(f.jordan_phi(1).unwrap(), f.euler_phi());
        }
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let sieve = SpfSieve::new(5000);
        for n in 1..=5000 {
            assert_eq!(sieve.factorize(n).unwrap(), factorize(n).unwrap());
        }
        assert_eq!(sieve.factorize(5003).unwrap(), factorize(5003).unwrap());
    }

    #[test]
    fn unitary_gcd_characterization() {
        for k in 1..=300u64 {
            for n in 1..=300u64 {
                let g = unitary_gcd(k, n).unwrap();
                assert_eq!(k % g, 0);
                assert!(is_unitary_divisor(g, n));
                for d in unitary_divisors(n).unwrap() {
                    if k % d == 0 {
                        assert!(is_unitary_divisor(d, g), "d={d} k={k} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicative_spot_checks() {
        type F = fn(u64) -> i128;
        let funcs: [(&str, F); 11] = [
            ("mu", |n| mobius(n).unwrap()),
            ("mu*", |n| mu_star(n).unwrap()),
            ("phi", |n| euler_phi(n).unwrap()),
            ("phi_2", |n| jordan_phi(2, n).unwrap()),
            ("sigma_2", |n| sigma_s(2, n).unwrap()),
            ("tau", |n| tau(n).unwrap()),
            ("tau_3", |n| piltz_tau(3, n).unwrap()),
            ("phi*", |n| phi_star(n).unwrap()),
            ("sigma*", |n| sigma_star(n).unwrap()),
            ("tau*", |n| tau_star(n).unwrap()),
            ("lambda", |n| liouville(n).unwrap()),
        ];
        for m in (1..=500u64).step_by(7) {
            for n in (1..=500u64).step_by(11) {
                if gcd(m, n) != 1 {
                    continue;
                }
                for (name, f) in &funcs {
                    assert_eq!(f(m * n), f(m) * f(n), "{name} at {m}, {n}");
                }
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        let p = 9_223_372_036_854_775_783u64;
        assert!(matches!(sigma_s(3, p), Err(Error::Overflow(_))));
        assert!(matches!(jordan_phi(3, p), Err(Error::Overflow(_))));
    }

    proptest! {
        #[test]
        fn factorization_product_is_n(n in 1u64..(1u64 << 62)) {
            let f = factorize(n).unwrap();
            let product = f.pairs().iter().fold(1u64, |acc, &(p, e)| acc * p.pow(e));
            prop_assert_eq!(product, n);
            prop_assert!(f.pairs().iter().all(|&(p, _)| is_prime(p)));
        }
    }
}
