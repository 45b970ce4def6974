//! Index tuples and the lcm-grouped weights
//! `T_Q(n) = sum over tuples with lcm(q_1..q_k) = Q of prod c_{q_i}(n_i)`.

use crate::arith::{lcm_all, Factorization};
use crate::ramanujan::{prime_power_sum, SumKind};
use crate::{Error, Result};

/// A tuple `(q_1..q_k)` with its lcm.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TupleIndex {
    q: Vec<u64>,
    lcm: u64,
}

impl TupleIndex {
    pub fn new(q: Vec<u64>) -> Result<Self> {
        if q.is_empty() || q.contains(&0) {
            return Err(Error::domain("a tuple index needs k >= 1 positive entries"));
        }
        let lcm = lcm_all(&q)?;
        Ok(TupleIndex { q, lcm })
    }

    pub fn k(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self) -> &[u64] {
        &self.q
    }

    pub fn lcm(&self) -> u64 {
        self.lcm
    }

    /// Whether every `q_i` is a unitary divisor of the lcm.
    pub fn is_compatible(&self) -> bool {
        self.q
            .iter()
            .all(|&qi| crate::arith::gcd(qi, self.lcm / qi) == 1)
    }
}

/// Whether every entry is a unitary divisor of the lcm of the tuple.
pub fn is_compatible(q: &[u64]) -> bool {
    match lcm_all(q) {
        Ok(l) => q.iter().all(|&qi| crate::arith::gcd(qi, l / qi) == 1),
        Err(_) => false,
    }
}

fn check(ns: &[u64]) -> Result<()> {
    if ns.is_empty() || ns.contains(&0) {
        return Err(Error::domain("weights need k >= 1 positive arguments"));
    }
    Ok(())
}

fn checked_product(mut values: impl Iterator<Item = i128>) -> Result<i128> {
    values.try_fold(1i128, |acc, v| {
        acc.checked_mul(v)
            .ok_or(Error::Overflow("lcm-grouped weight"))
    })
}

/// Local factor of `T_Q(n)` at `p^e || Q`: the sum over exponent tuples in
/// `[0, e]^k` with maximum `e`, which is `prod_i S_i(e) - prod_i S_i(e-1)`
/// with `S_i(j) = sum_{v <= j} c_{p^v}(n_i)`.
pub fn local_grouped_weight(kind: SumKind, p: u64, e: u32, ns: &[u64]) -> Result<i128> {
    let partial =
        |n: u64, j: u32| -> i128 { (0..=j).map(|v| prime_power_sum(kind, p, v, n)).sum() };
    let full = checked_product(ns.iter().map(|&n| partial(n, e)))?;
    let below = checked_product(ns.iter().map(|&n| partial(n, e - 1)))?;
    full.checked_sub(below)
        .ok_or(Error::Overflow("lcm-grouped weight"))
}

/// Local factor of the grouped weight restricted to compatible tuples: each
/// exponent is 0 or `e`, not all 0.
pub fn local_compatible_weight(p: u64, e: u32, ns: &[u64]) -> Result<i128> {
    let prod = checked_product(
        ns.iter()
            .map(|&n| 1 + prime_power_sum(SumKind::Unitary, p, e, n)),
    )?;
    Ok(prod - 1)
}

/// `T_Q(n)` from the factorization of `Q`.
pub fn grouped_weight_factored(kind: SumKind, q: &Factorization, ns: &[u64]) -> Result<i128> {
    check(ns)?;
    let mut acc = 1i128;
    for &(p, e) in q.pairs() {
        let w = local_grouped_weight(kind, p, e, ns)?;
        if w == 0 {
            return Ok(0);
        }
        acc = acc
            .checked_mul(w)
            .ok_or(Error::Overflow("lcm-grouped weight"))?;
    }
    Ok(acc)
}

/// The compatible-tuple unitary weight from the factorization of `Q`.
pub fn compatible_weight_factored(q: &Factorization, ns: &[u64]) -> Result<i128> {
    check(ns)?;
    let mut acc = 1i128;
    for &(p, e) in q.pairs() {
        let w = local_compatible_weight(p, e, ns)?;
        if w == 0 {
            return Ok(0);
        }
        acc = acc
            .checked_mul(w)
            .ok_or(Error::Overflow("lcm-grouped weight"))?;
    }
    Ok(acc)
}

/// `T_Q(n) = sum over (q_1..q_k) with lcm = Q of prod c_{q_i}(n_i)`.
pub fn lcm_grouped_weight(kind: SumKind, q: u64, ns: &[u64]) -> Result<i128> {
    if q == 0 {
        return Err(Error::domain("Q must be positive"));
    }
    grouped_weight_factored(kind, &crate::arith::factorize(q)?, ns)
}

/// `T*_Q(n)` restricted to tuples whose entries are unitary divisors of `Q`.
pub fn compatible_unitary_weight(q: u64, ns: &[u64]) -> Result<i128> {
    if q == 0 {
        return Err(Error::domain("Q must be positive"));
    }
    compatible_weight_factored(&crate::arith::factorize(q)?, ns)
}
