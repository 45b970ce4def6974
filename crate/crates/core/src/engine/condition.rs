//! Partial sums of the absolute-convergence condition
//! `sum_n 2^(k omega(n)) |t(n)| / n^k`.

use crate::arith::SpfSieve;
use crate::convolve::{MultiVariableFunction, MultiplicativeFunction};
use crate::summation::CompensatedSum;
use crate::{Error, Result};

/// Relative increment from `N/2` to `N` above which the sum counts as growing.
pub const GROWTH_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionDiagnostic {
    pub n: u64,
    pub partial: f64,
    /// Partial sum at `N / 2`.
    pub half_partial: f64,
    /// Whether the last doubling still added more than
    /// `GROWTH_THRESHOLD * max(1, partial)`.
    pub growing: bool,
}

fn diagnostic(n: u64, partial: f64, half_partial: f64) -> ConditionDiagnostic {
    ConditionDiagnostic {
        n,
        partial,
        half_partial,
        growing: (partial - half_partial).abs() > GROWTH_THRESHOLD * partial.abs().max(1.0),
    }
}

/// The condition for `g(gcd(n_1..n_k))` with `t = mu * g`.
pub fn check_condition(
    t: &MultiplicativeFunction,
    k: usize,
    n: u64,
) -> Result<ConditionDiagnostic> {
    if n == 0 || k == 0 {
        return Err(Error::domain("check_condition needs N >= 1 and k >= 1"));
    }
    let sieve = SpfSieve::new(n);
    let mut sum = CompensatedSum::new();
    let mut half = 0.0;
    for m in 1..=n {
        let f = sieve.factorize(m)?;
        let v = t.eval_factored(&f)?.to_f64();
        if v != 0.0 {
            let weight = 2f64.powi((k as u32 * f.omega()) as i32);
            sum.add(weight * v.abs() / (m as f64).powi(k as i32));
        }
        if m == n / 2 {
            half = sum.value();
        }
    }
    Ok(diagnostic(n, sum.value(), half))
}

/// The general condition
/// `sum over n in [1, N]^k of 2^(omega(n_1)+..+omega(n_k)) |(mu_k * f)(n)| / (n_1..n_k)`.
pub fn check_condition_k(f: &MultiVariableFunction, n: u64) -> Result<ConditionDiagnostic> {
    if n == 0 {
        return Err(Error::domain("check_condition needs N >= 1"));
    }
    let k = f.k();
    let sieve = SpfSieve::new(n);
    let facts = (1..=n)
        .map(|m| sieve.factorize(m))
        .collect::<Result<Vec<_>>>()?;
    let mut idx = vec![0usize; k];
    let mut sum = CompensatedSum::new();
    let mut half = CompensatedSum::new();
    let mut args = Vec::with_capacity(k);
    loop {
        args.clear();
        args.extend(idx.iter().map(|&i| facts[i].clone()));
        let v = f.transform_factored(&args)?.to_f64();
        if v != 0.0 {
            let omega: u32 = args.iter().map(|a| a.omega()).sum();
            let denom: f64 = args.iter().map(|a| a.n() as f64).product();
            let term = 2f64.powi(omega as i32) * v.abs() / denom;
            sum.add(term);
            if idx.iter().all(|&i| (i as u64) < n / 2) {
                half.add(term);
            }
        }
        let mut i = 0;
        loop {
            if i == k {
                return Ok(diagnostic(n, sum.value(), half.value()));
            }
            idx[i] += 1;
            if (idx[i] as u64) < n {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}
