//! Classical Ramanujan sums `c_q(n)` and unitary Ramanujan sums `c*_q(n)`.
//!
//! Both are computed arithmetically from their prime-power values, using
//! multiplicativity in `q`:
//!
//! * `c_{p^e}(n)` is `p^e - p^(e-1)` if `p^e | n`, `-p^(e-1)` if exactly
//!   `p^(e-1) || n`, and 0 otherwise;
//! * `c*_{p^e}(n)` is `p^e - 1` if `p^e | n` and `-1` otherwise.
//!
//! Exponential sums are only used as test oracles.

use std::fmt;

use crate::arith::{factorize, gcd, Factorization, SpfSieve};
use crate::summation::CompensatedSum;
use crate::{Error, Result};

/// Which family of Ramanujan sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SumKind {
    Classical,
    Unitary,
}

impl fmt::Display for SumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SumKind::Classical => "classical",
            SumKind::Unitary => "unitary",
        })
    }
}

impl std::str::FromStr for SumKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(SumKind::Classical),
            "unitary" => Ok(SumKind::Unitary),
            other => Err(Error::domain(format!(
                "unknown kind '{other}', expected classical or unitary"
            ))),
        }
    }
}

/// `c_{p^e}(n)`.
#[inline]
pub fn classical_prime_power(p: u64, e: u32, n: u64) -> i128 {
    if e == 0 {
        return 1;
    }
    let lower = (p as i128).pow(e - 1);
    if n % (lower as u64) != 0 {
        0
    } else if (n / lower as u64) % p == 0 {
        lower * (p as i128 - 1)
    } else {
        -lower
    }
}

/// `c*_{p^e}(n)`.
#[inline]
pub fn unitary_prime_power(p: u64, e: u32, n: u64) -> i128 {
    if e == 0 {
        return 1;
    }
    let pe = (p as i128).pow(e);
    if n % (pe as u64) == 0 {
        pe - 1
    } else {
        -1
    }
}

/// `c_{p^e}(n)` or `c*_{p^e}(n)`.
#[inline]
pub fn prime_power_sum(kind: SumKind, p: u64, e: u32, n: u64) -> i128 {
    match kind {
        SumKind::Classical => classical_prime_power(p, e, n),
        SumKind::Unitary => unitary_prime_power(p, e, n),
    }
}

/// Ramanujan sum of `kind` from a pre-computed factorization of `q`.
pub fn sum_factored(kind: SumKind, q: &Factorization, n: u64) -> i128 {
    let mut acc = 1i128;
    for &(p, e) in q.pairs() {
        let local = prime_power_sum(kind, p, e, n);
        if local == 0 {
            return 0;
        }
        acc *= local;
    }
    acc
}

fn check_args(q: u64, n: u64) -> Result<()> {
    if q == 0 || n == 0 {
        return Err(Error::domain("Ramanujan sums need q, n >= 1"));
    }
    Ok(())
}

/// Classical Ramanujan sum `c_q(n)`.
pub fn ramanujan_c(q: u64, n: u64) -> Result<i128> {
    check_args(q, n)?;
    Ok(sum_factored(SumKind::Classical, &factorize(q)?, n))
}

/// Unitary Ramanujan sum `c*_q(n)`.
pub fn unitary_c(q: u64, n: u64) -> Result<i128> {
    check_args(q, n)?;
    Ok(sum_factored(SumKind::Unitary, &factorize(q)?, n))
}

pub fn ramanujan_sum(kind: SumKind, q: u64, n: u64) -> Result<i128> {
    match kind {
        SumKind::Classical => ramanujan_c(q, n),
        SumKind::Unitary => unitary_c(q, n),
    }
}

/// `c_q(n) = sum_{d | gcd(n, q)} d mu(q/d)`, the divisor form.
pub fn ramanujan_c_divisor_form(q: u64, n: u64) -> Result<i128> {
    check_args(q, n)?;
    factorize(gcd(n, q))?
        .divisors()
        .into_iter()
        .try_fold(0i128, |acc, d| {
            Ok(acc + d as i128 * factorize(q / d)?.mobius())
        })
}

/// `c*_q(n) = sum_{d || (n, q)_*} d mu*(q/d)`.
pub fn unitary_c_divisor_form(q: u64, n: u64) -> Result<i128> {
    check_args(q, n)?;
    let ug = factorize(q)?.unitary_gcd_with(n);
    factorize(ug)?
        .unitary_divisors()
        .into_iter()
        .try_fold(0i128, |acc, d| {
            Ok(acc + d as i128 * factorize(q / d)?.mu_star())
        })
}

/// Values `c_q(n)` (or `c*_q(n)`) for fixed `n` and `q = 1..=q_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamanujanTable {
    kind: SumKind,
    n: u64,
    values: Vec<i64>,
}

impl RamanujanTable {
    pub fn new(kind: SumKind, n: u64, q_max: u64) -> Result<Self> {
        Self::with_sieve(kind, n, &SpfSieve::new(q_max), q_max)
    }

    /// Builds the table reusing a sieve covering `q_max`.
    pub fn with_sieve(kind: SumKind, n: u64, sieve: &SpfSieve, q_max: u64) -> Result<Self> {
        check_args(1, n)?;
        let values = (1..=q_max)
            .map(|q| {
                let v = sum_factored(kind, &sieve.factorize(q)?, n);
                i64::try_from(v).map_err(|_| Error::Overflow("Ramanujan table entry"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RamanujanTable { kind, n, values })
    }

    pub fn kind(&self) -> SumKind {
        self.kind
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn q_max(&self) -> u64 {
        self.values.len() as u64
    }

    /// Entry for `q` (1-based); panics outside `1..=q_max`.
    #[inline]
    pub fn get(&self, q: u64) -> i64 {
        self.values[(q - 1) as usize]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

/// The identities checked by [`identity_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `sum_{d || q} c*_d(n) = q` if `q | n`, else 0.
    UnitaryDivisorSum,
    /// `sum_{d || q} |c*_d(n)| = 2^omega(q/(n,q)_*) (n,q)_*`.
    UnitaryAbsoluteSum,
    /// `sum_{d || q} |c*_d(n)| <= 2^omega(q) n`.
    UnitaryAbsoluteBound,
    /// `sum_{d | q} |c_d(n)| = 2^omega(q/(n,q)) (n,q)`.
    ClassicalAbsoluteSum,
    /// `sum_{d | q} |c_d(n)| <= 2^omega(q) n`.
    ClassicalAbsoluteBound,
    /// `c*_q(q) = phi*(q)`.
    UnitaryAtQ,
    /// `c*_q(1) = mu*(q)`.
    UnitaryAtOne,
    /// `c_q(1) = mu(q)`.
    ClassicalAtOne,
    /// `c*_q(n) = c_q(n)` for squarefree `q`.
    SquarefreeAgreement,
}

impl Identity {
    pub const ALL: [Identity; 9] = [
        Identity::UnitaryDivisorSum,
        Identity::UnitaryAbsoluteSum,
        Identity::UnitaryAbsoluteBound,
        Identity::ClassicalAbsoluteSum,
        Identity::ClassicalAbsoluteBound,
        Identity::UnitaryAtQ,
        Identity::UnitaryAtOne,
        Identity::ClassicalAtOne,
        Identity::SquarefreeAgreement,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Identity::UnitaryDivisorSum => "unitary-divisor-sum",
            Identity::UnitaryAbsoluteSum => "unitary-absolute-sum",
            Identity::UnitaryAbsoluteBound => "unitary-absolute-bound",
            Identity::ClassicalAbsoluteSum => "classical-absolute-sum",
            Identity::ClassicalAbsoluteBound => "classical-absolute-bound",
            Identity::UnitaryAtQ => "unitary-at-q",
            Identity::UnitaryAtOne => "unitary-at-one",
            Identity::ClassicalAtOne => "classical-at-one",
            Identity::SquarefreeAgreement => "squarefree-agreement",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityResult {
    pub identity: Identity,
    pub checked: u64,
    /// `(q, n)` pairs where the identity failed.
    pub failures: Vec<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub max_q: u64,
    pub max_n: u64,
    pub results: Vec<IdentityResult>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.failures.is_empty())
    }

    pub fn failure_count(&self) -> usize {
        self.results.iter().map(|r| r.failures.len()).sum()
    }
}

/// Checks every [`Identity`] exactly for `1 <= q <= max_q`, `1 <= n <= max_n`.
pub fn identity_suite(max_q: u64, max_n: u64) -> Result<IdentityReport> {
    if max_q == 0 || max_n == 0 {
        return Err(Error::domain("identity suite bounds must be >= 1"));
    }
    let sieve = SpfSieve::new(max_q);
    let factorizations = (1..=max_q)
        .map(|q| sieve.factorize(q))
        .collect::<Result<Vec<_>>>()?;
    let mut results: Vec<IdentityResult> = Identity::ALL
        .iter()
        .map(|&identity| IdentityResult {
            identity,
            checked: 0,
            failures: Vec::new(),
        })
        .collect();
    let mut record = |id: Identity, ok: bool, q: u64, n: u64| {
        let r = &mut results[Identity::ALL.iter().position(|&x| x == id).unwrap()];
        r.checked += 1;
        if !ok {
            r.failures.push((q, n));
        }
    };

    for n in 1..=max_n {
        let classical = RamanujanTable::with_sieve(SumKind::Classical, n, &sieve, max_q)?;
        let unitary = RamanujanTable::with_sieve(SumKind::Unitary, n, &sieve, max_q)?;
        for q in 1..=max_q {
            let fq = &factorizations[(q - 1) as usize];
            let two_omega_q = 1i128 << fq.omega();

            let udivs = fq.unitary_divisors();
            let usum: i128 = udivs.iter().map(|&d| unitary.get(d) as i128).sum();
            let expected = if n % q == 0 { q as i128 } else { 0 };
            record(Identity::UnitaryDivisorSum, usum == expected, q, n);

            let uabs: i128 = udivs.iter().map(|&d| (unitary.get(d) as i128).abs()).sum();
            let ug = fq.unitary_gcd_with(n);
            let rhs = (1i128 << sieve.factorize(q / ug)?.omega()) * ug as i128;
            record(Identity::UnitaryAbsoluteSum, uabs == rhs, q, n);
            record(
                Identity::UnitaryAbsoluteBound,
                uabs <= two_omega_q * n as i128,
                q,
                n,
            );

            let cabs: i128 = fq
                .divisors()
                .iter()
                .map(|&d| (classical.get(d) as i128).abs())
                .sum();
            let g = gcd(n, q);
            let rhs = (1i128 << sieve.factorize(q / g)?.omega()) * g as i128;
            record(Identity::ClassicalAbsoluteSum, cabs == rhs, q, n);
            record(
                Identity::ClassicalAbsoluteBound,
                cabs <= two_omega_q * n as i128,
                q,
                n,
            );

            if fq.is_squarefree() {
                record(
                    Identity::SquarefreeAgreement,
                    classical.get(q) == unitary.get(q),
                    q,
                    n,
                );
            }
            if n == 1 {
                record(
                    Identity::UnitaryAtOne,
                    unitary.get(q) as i128 == fq.mu_star(),
                    q,
                    n,
                );
                record(
                    Identity::ClassicalAtOne,
                    classical.get(q) as i128 == fq.mobius(),
                    q,
                    n,
                );
            }
        }
    }
    for q in 1..=max_q {
        let fq = &factorizations[(q - 1) as usize];
        record(
            Identity::UnitaryAtQ,
            sum_factored(SumKind::Unitary, fq, q) == fq.phi_star(),
            q,
            q,
        );
    }
    Ok(IdentityReport {
        max_q,
        max_n,
        results,
    })
}

/// `sum_{k=1}^{p^2} c*_p(k) c*_{p^2}(k)`, which equals `p^2 (p - 1)` rather
/// than vanishing as classical orthogonality would suggest.
pub fn orthogonality_counterexample(p: u64) -> Result<i128> {
    if !crate::arith::is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let p2 = p.checked_mul(p).ok_or(Error::Overflow("p^2"))?;
    Ok((1..=p2)
        .map(|k| unitary_prime_power(p, 1, k) * unitary_prime_power(p, 2, k))
        .sum())
}

/// One checkpoint of the partial sums `sum_{n <= N} c*_q(n)/n` and
/// `sum_{n <= N} c_q(n)/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaStarRow {
    pub n: u64,
    pub unitary_partial: f64,
    /// `-Lambda*(q)`.
    pub unitary_target: f64,
    pub classical_partial: f64,
    /// `-Lambda(q)`.
    pub classical_target: f64,
}

/// Checkpointed partial sums of `c*_q(n)/n` and `c_q(n)/n` over `n`.
///
/// These series converge slowly and only conditionally; no limit is asserted.
pub fn lambda_star_partial_sums(q: u64, checkpoints: &[u64]) -> Result<Vec<LambdaStarRow>> {
    if q < 2 {
        return Err(Error::domain("lambda-star series requires q >= 2"));
    }
    let fq = factorize(q)?;
    let (unitary_target, classical_target) = match fq.is_prime_power() {
        Some(pp) => (-pp.nu_log_p(), -pp.log_p()),
        None => (0.0, 0.0),
    };
    let mut sorted: Vec<u64> = checkpoints.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut unitary = CompensatedSum::new();
    let mut classical = CompensatedSum::new();
    let mut rows = Vec::with_capacity(sorted.len());
    let mut n = 0u64;
    for &stop in &sorted {
        while n < stop {
            n += 1;
            unitary.add(sum_factored(SumKind::Unitary, &fq, n) as f64 / n as f64);
            classical.add(sum_factored(SumKind::Classical, &fq, n) as f64 / n as f64);
        }
        rows.push(LambdaStarRow {
            n: stop,
            unitary_partial: unitary.value(),
            unitary_target,
            classical_partial: classical.value(),
            classical_target,
        });
    }
    Ok(rows)
}
