//! Mean values `x^-k sum_{n in [1, x]^k} g(gcd(n))`.

use crate::arith::SpfSieve;
use crate::engine::coeff::coeff_closed;
use crate::engine::family::CoefficientFamily;
use crate::summation::CompensatedSum;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanValueReport {
    pub x: u64,
    pub estimate: f64,
    /// The coefficient at `(1, .., 1)`.
    pub target: f64,
}

impl MeanValueReport {
    pub fn relative_error(&self) -> f64 {
        ((self.estimate - self.target) / self.target).abs()
    }
}

/// Counts tuples by their gcd: `#{n in [1, x]^k : gcd(n) = d}` is
/// `sum_j mu(j) floor(x / dj)^k`, so the whole average costs `O(x log x)`.
pub fn mean_value_estimate(family: &CoefficientFamily, x: u64) -> Result<MeanValueReport> {
    if x == 0 {
        return Err(Error::domain("x must be >= 1"));
    }
    let k = i32::try_from(family.k()).map_err(|_| Error::domain("k too large"))?;
    let sieve = SpfSieve::new(x);
    let mu = sieve.mobius_table();
    let mut total = CompensatedSum::new();
    for d in 1..=x {
        let top = x / d;
        let count: f64 = (1..=top)
            .filter(|&j| mu[j as usize] != 0)
            .map(|j| f64::from(mu[j as usize]) * ((top / j) as f64).powi(k))
            .sum();
        if count != 0.0 {
            total.add(family.g_real(&sieve.factorize(d)?)? * count);
        }
    }
    let ones = vec![1u64; family.k()];
    Ok(MeanValueReport {
        x,
        estimate: total.value() / (x as f64).powi(k),
        target: coeff_closed(family, &ones)?.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factorize, gcd};
    use crate::engine::family::FamilyKind;
    use crate::ramanujan::SumKind;

    #[test]
    fn matches_direct_double_sum() {
        let fam =
            CoefficientFamily::new(FamilyKind::Sigma { s: 1.0 }, SumKind::Classical, 2).unwrap();
        let x = 120u64;
        let mut direct = 0.0;
        for a in 1..=x {
            for b in 1..=x {
                direct += fam.g_real(&factorize(gcd(a, b)).unwrap()).unwrap();
            }
        }
        direct /= (x * x) as f64;
        let fast = mean_value_estimate(&fam, x).unwrap();
        assert!((fast.estimate - direct).abs() < 1e-12);
    }

    #[test]
    fn constant_one_has_mean_one() {
        for k in 1..=3 {
            let fam = CoefficientFamily::new(FamilyKind::One, SumKind::Classical, k).unwrap();
            for x in [1, 7, 50] {
                let r = mean_value_estimate(&fam, x).unwrap();
                assert!((r.estimate - 1.0).abs() < 1e-12);
                assert_eq!(r.target, 1.0);
            }
        }
    }
}
