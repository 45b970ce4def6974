//! Dirichlet, unitary and k-variable Dirichlet convolution, and multiplicative
//! functions described by their values on prime powers.

use std::fmt;
use std::sync::Arc;

use crate::arith::{binomial, factorize, Factorization, SpfSieve};
use crate::exact::{ExactValue, Rational, Value};
use crate::{Error, Result};

/// `(p, e) -> f(p^e)` for `e >= 1`.
pub type LocalRule = Arc<dyn Fn(u64, u32) -> Result<Value> + Send + Sync>;

/// `(p, (nu_1..nu_k)) -> f(p^nu_1, .., p^nu_k)`, called with at least one
/// nonzero exponent.
pub type TupleLocalRule = Arc<dyn Fn(u64, &[u32]) -> Result<Value> + Send + Sync>;

type TupleEvaluator = Arc<dyn Fn(&[u64]) -> Result<Value> + Send + Sync>;

/// `p^exp` as an exact rational for a signed exponent.
pub fn prime_power_value(p: u64, exp: i64) -> Result<Value> {
    let pow = (p as i128)
        .checked_pow(exp.unsigned_abs() as u32)
        .filter(|_| exp.unsigned_abs() <= u32::MAX as u64)
        .ok_or(Error::Overflow("prime power"))?;
    if exp >= 0 {
        Ok(Value::int(pow))
    } else {
        Ok(Value::Exact(ExactValue::from_rational(Rational::new(
            1, pow,
        )?)))
    }
}

/// A one-variable multiplicative function: `f(1) = 1` and
/// `f(n) = prod f(p^e)` over the factorization of `n`.
#[derive(Clone)]
pub struct MultiplicativeFunction {
    label: String,
    rule: LocalRule,
}

impl fmt::Debug for MultiplicativeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplicativeFunction")
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

impl MultiplicativeFunction {
    pub fn new<F>(label: impl Into<String>, rule: F) -> Self
    where
        F: Fn(u64, u32) -> Result<Value> + Send + Sync + 'static,
    {
        MultiplicativeFunction {
            label: label.into(),
            rule: Arc::new(rule),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `f(p^e)`, with `f(p^0) = 1`.
    pub fn local(&self, p: u64, e: u32) -> Result<Value> {
        if e == 0 {
            Ok(Value::ONE)
        } else {
            (self.rule)(p, e)
        }
    }

    pub fn eval_factored(&self, f: &Factorization) -> Result<Value> {
        f.pairs().iter().try_fold(Value::ONE, |acc, &(p, e)| {
            acc.checked_mul(self.local(p, e)?)
        })
    }

    pub fn eval(&self, n: u64) -> Result<Value> {
        self.eval_factored(&factorize(n)?)
    }

    pub fn eval_real(&self, n: u64) -> Result<f64> {
        Ok(self.eval(n)?.to_f64())
    }

    /// Dense table of real values for `0..=n_max` (index 0 holds 0).
    pub fn tabulate_real(&self, n_max: u64) -> Result<Vec<f64>> {
        let sieve = SpfSieve::new(n_max);
        let mut out = Vec::with_capacity(n_max as usize + 1);
        out.push(0.0);
        for n in 1..=n_max {
            out.push(self.eval_factored(&sieve.factorize(n)?)?.to_f64());
        }
        Ok(out)
    }

    pub fn one() -> Self {
        Self::new("1", |_, _| Ok(Value::ONE))
    }

    pub fn mobius() -> Self {
        Self::new("mu", |_, e| Ok(Value::int(if e == 1 { -1 } else { 0 })))
    }

    pub fn mu_star() -> Self {
        Self::new("mu*", |_, _| Ok(Value::int(-1)))
    }

    pub fn liouville() -> Self {
        Self::new("lambda", |_, e| {
            Ok(Value::int(if e % 2 == 0 { 1 } else { -1 }))
        })
    }

    /// `n^s` for integer `s` of either sign.
    pub fn power(s: i64) -> Self {
        Self::new(format!("id_{s}"), move |p, e| {
            prime_power_value(p, s * e as i64)
        })
    }

    pub fn sigma(s: u32) -> Self {
        Self::new(format!("sigma_{s}"), move |p, e| {
            (0..=e).try_fold(Value::ZERO, |acc, j| {
                acc.checked_add(prime_power_value(p, (s * j) as i64)?)
            })
        })
    }

    pub fn tau() -> Self {
        Self::new("tau", |_, e| Ok(Value::int(e as i128 + 1)))
    }

    pub fn piltz(m: u32) -> Self {
        Self::new(format!("tau_{m}"), move |_, e| {
            if m == 0 {
                return Err(Error::domain("piltz_tau requires m >= 1"));
            }
            Ok(Value::int(binomial((e + m - 1) as u64, (m - 1) as u64)?))
        })
    }

    pub fn jordan_phi(s: u32) -> Self {
        Self::new(format!("phi_{s}"), move |p, e| {
            if s == 0 {
                return Err(Error::domain("jordan_phi requires s >= 1"));
            }
            let top = prime_power_value(p, (s * e) as i64)?;
            top.checked_sub(prime_power_value(p, (s * (e - 1)) as i64)?)
        })
    }

    pub fn euler_phi() -> Self {
        Self::jordan_phi(1)
    }

    pub fn sigma_star() -> Self {
        Self::new("sigma*", |p, e| {
            prime_power_value(p, e as i64)?.checked_add(Value::ONE)
        })
    }

    pub fn tau_star() -> Self {
        Self::new("tau*", |_, _| Ok(Value::int(2)))
    }

    pub fn phi_star() -> Self {
        Self::new("phi*", |p, e| {
            prime_power_value(p, e as i64)?.checked_sub(Value::ONE)
        })
    }

    /// The nonprincipal character mod 4 (completely multiplicative).
    pub fn chi4() -> Self {
        Self::new("chi_4", |p, e| {
            Ok(Value::int(match p % 4 {
                1 => 1,
                3 if e % 2 == 1 => -1,
                3 => 1,
                _ => 0,
            }))
        })
    }

    /// Pointwise product `f * h` in the multiplicative sense: `f(n)h(n)`.
    pub fn pointwise(&self, other: &MultiplicativeFunction) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(format!("{}.{}", a.label, b.label), move |p, e| {
            a.local(p, e)?.checked_mul(b.local(p, e)?)
        })
    }

    /// Dirichlet convolution of two multiplicative functions, again
    /// multiplicative with local rule `sum_{j=0}^{e} f(p^j) g(p^{e-j})`.
    pub fn dirichlet(&self, other: &MultiplicativeFunction) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(format!("({} * {})", a.label, b.label), move |p, e| {
            (0..=e).try_fold(Value::ZERO, |acc, j| {
                acc.checked_add(a.local(p, j)?.checked_mul(b.local(p, e - j)?)?)
            })
        })
    }

    /// Unitary convolution: the local rule is `f(p^e) + g(p^e)`.
    pub fn unitary(&self, other: &MultiplicativeFunction) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(format!("({} x {})", a.label, b.label), move |p, e| {
            a.local(p, e)?.checked_add(b.local(p, e)?)
        })
    }

    /// `mu * self`, the function appearing in every expansion coefficient.
    pub fn mobius_transform(&self) -> Self {
        let g = self.clone();
        Self::new(format!("(mu * {})", g.label), move |p, e| {
            g.local(p, e)?.checked_sub(g.local(p, e - 1)?)
        })
    }
}

/// `(f * g)(n) = sum_{d | n} f(d) g(n/d)`.
pub fn dirichlet_convolve<F, G>(f: F, g: G, n: u64) -> Result<Value>
where
    F: Fn(u64) -> Result<Value>,
    G: Fn(u64) -> Result<Value>,
{
    factorize(n)?
        .divisors()
        .into_iter()
        .try_fold(Value::ZERO, |acc, d| {
            acc.checked_add(f(d)?.checked_mul(g(n / d)?)?)
        })
}

/// `(f x g)(n) = sum_{d || n} f(d) g(n/d)`.
pub fn unitary_convolve<F, G>(f: F, g: G, n: u64) -> Result<Value>
where
    F: Fn(u64) -> Result<Value>,
    G: Fn(u64) -> Result<Value>,
{
    factorize(n)?
        .unitary_divisors()
        .into_iter()
        .try_fold(Value::ZERO, |acc, d| {
            acc.checked_add(f(d)?.checked_mul(g(n / d)?)?)
        })
}

/// `(mu * g)(p^e)` for `e = 0..=e_max`; entry 0 is `g(1) = 1`.
pub fn local_factors_of_transform(
    g: &MultiplicativeFunction,
    p: u64,
    e_max: u32,
) -> Result<Vec<Value>> {
    let t = g.mobius_transform();
    (0..=e_max).map(|e| t.local(p, e)).collect()
}

/// An arithmetic function of `k` variables.
///
/// When built from a local rule the function is multiplicative in the
/// k-variable sense and its value is the product of the local rule over the
/// primes dividing any argument.
#[derive(Clone)]
pub struct MultiVariableFunction {
    k: usize,
    label: String,
    evaluator: TupleEvaluator,
    local: Option<TupleLocalRule>,
}

impl fmt::Debug for MultiVariableFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiVariableFunction")
            .field("k", &self.k)
            .field("label", &self.label)
            .field("multiplicative", &self.local.is_some())
            .finish_non_exhaustive()
    }
}

fn merged_primes(factorizations: &[Factorization]) -> Vec<u64> {
    let mut primes: Vec<u64> = factorizations.iter().flat_map(|f| f.primes()).collect();
    primes.sort_unstable();
    primes.dedup();
    primes
}

fn product_over_primes(rule: &TupleLocalRule, factorizations: &[Factorization]) -> Result<Value> {
    let mut nus = vec![0u32; factorizations.len()];
    merged_primes(factorizations)
        .into_iter()
        .try_fold(Value::ONE, |acc, p| {
            for (nu, f) in nus.iter_mut().zip(factorizations) {
                *nu = f.nu(p);
            }
            acc.checked_mul(rule(p, &nus)?)
        })
}

impl MultiVariableFunction {
    pub fn new<F>(k: usize, label: impl Into<String>, evaluator: F) -> Result<Self>
    where
        F: Fn(&[u64]) -> Result<Value> + Send + Sync + 'static,
    {
        if k == 0 {
            return Err(Error::domain("dimension k must be at least 1"));
        }
        Ok(MultiVariableFunction {
            k,
            label: label.into(),
            evaluator: Arc::new(evaluator),
            local: None,
        })
    }

    /// A multiplicative function given by its values on prime-power tuples.
    pub fn multiplicative<F>(k: usize, label: impl Into<String>, local: F) -> Result<Self>
    where
        F: Fn(u64, &[u32]) -> Result<Value> + Send + Sync + 'static,
    {
        if k == 0 {
            return Err(Error::domain("dimension k must be at least 1"));
        }
        let local: TupleLocalRule = Arc::new(local);
        let rule = local.clone();
        let evaluator: TupleEvaluator = Arc::new(move |ns: &[u64]| {
            let fs = ns
                .iter()
                .map(|&n| factorize(n))
                .collect::<Result<Vec<_>>>()?;
            product_over_primes(&rule, &fs)
        });
        Ok(MultiVariableFunction {
            k,
            label: label.into(),
            evaluator,
            local: Some(local),
        })
    }

    /// `f(n_1..n_k) = g(gcd(n_1..n_k))`.
    pub fn of_gcd(k: usize, g: MultiplicativeFunction) -> Result<Self> {
        let label = format!("{}(gcd)", g.label());
        Self::multiplicative(k, label, move |p, nus| {
            g.local(p, nus.iter().copied().min().unwrap_or(0))
        })
    }

    pub fn constant_one(k: usize) -> Result<Self> {
        Self::multiplicative(k, "1", |_, _| Ok(Value::ONE))
    }

    /// The identity of k-variable Dirichlet convolution.
    pub fn delta(k: usize) -> Result<Self> {
        Self::multiplicative(k, format!("delta_{k}"), |_, _| Ok(Value::ZERO))
    }

    /// `mu_k(n_1..n_k) = mu(n_1) ... mu(n_k)`.
    pub fn mu_k(k: usize) -> Result<Self> {
        Self::multiplicative(k, format!("mu_{k}"), |_, nus| {
            Ok(Value::int(
                nus.iter()
                    .try_fold(1i128, |acc, &nu| match nu {
                        0 => Some(acc),
                        1 => Some(-acc),
                        _ => None,
                    })
                    .unwrap_or(0),
            ))
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_multiplicative(&self) -> bool {
        self.local.is_some()
    }

    fn check_arity(&self, ns: &[u64]) -> Result<()> {
        if ns.len() != self.k {
            return Err(Error::domain(format!(
                "expected a {}-tuple, got {} entries",
                self.k,
                ns.len()
            )));
        }
        if ns.contains(&0) {
            return Err(Error::domain("tuple entries must be positive"));
        }
        Ok(())
    }

    pub fn eval(&self, ns: &[u64]) -> Result<Value> {
        self.check_arity(ns)?;
        (self.evaluator)(ns)
    }

    /// Value through the prime-product formula; requires a local rule.
    pub fn eval_by_primes(&self, ns: &[u64]) -> Result<Value> {
        self.check_arity(ns)?;
        let rule = self
            .local
            .as_ref()
            .ok_or_else(|| Error::domain(format!("{} has no local rule", self.label)))?;
        let fs = ns
            .iter()
            .map(|&n| factorize(n))
            .collect::<Result<Vec<_>>>()?;
        product_over_primes(rule, &fs)
    }

    /// Local value `f(p^nu_1..p^nu_k)`; the all-zero tuple gives 1.
    pub fn local(&self, p: u64, nus: &[u32]) -> Result<Option<Value>> {
        match &self.local {
            None => Ok(None),
            Some(_) if nus.iter().all(|&nu| nu == 0) => Ok(Some(Value::ONE)),
            Some(rule) => rule(p, nus).map(Some),
        }
    }

    /// Local factor of `mu_k * f` at `p`:
    /// `sum over eps in {0,1}^k, eps <= nu of (-1)^|eps| f(p^(nu - eps))`.
    pub fn local_transform(&self, p: u64, nus: &[u32]) -> Result<Option<Value>> {
        if self.local.is_none() {
            return Ok(None);
        }
        let k = nus.len();
        let mut shifted = nus.to_vec();
        let mut acc = Value::ZERO;
        for mask in 0u32..(1 << k) {
            if (0..k).any(|i| mask & (1 << i) != 0 && nus[i] == 0) {
                continue;
            }
            for i in 0..k {
                shifted[i] = nus[i] - ((mask >> i) & 1);
            }
            let v = self.local(p, &shifted)?.expect("local rule present");
            acc = if mask.count_ones() % 2 == 0 {
                acc.checked_add(v)?
            } else {
                acc.checked_sub(v)?
            };
        }
        Ok(Some(acc))
    }

    /// `(mu_k * f)` evaluated on pre-factored arguments, using the local
    /// rule when present and the divisor-tuple sum otherwise.
    pub fn transform_factored(&self, factorizations: &[Factorization]) -> Result<Value> {
        if self.local.is_some() {
            let mut nus = vec![0u32; factorizations.len()];
            merged_primes(factorizations)
                .into_iter()
                .try_fold(Value::ONE, |acc, p| {
                    for (nu, f) in nus.iter_mut().zip(factorizations) {
                        *nu = f.nu(p);
                    }
                    let t = self.local_transform(p, &nus)?.expect("local rule present");
                    acc.checked_mul(t)
                })
        } else {
            let ns: Vec<u64> = factorizations.iter().map(|f| f.n()).collect();
            mobius_transform_k(self, &ns)
        }
    }
}

/// `(mu_k * f)(n_1..n_k) = sum over d_i | n_i of mu(n_1/d_1)..mu(n_k/d_k) f(d_1..d_k)`.
///
/// Only squarefree cofactors `n_i/d_i` contribute, so the sum runs over
/// `prod 2^omega(n_i)` terms.
pub fn mobius_transform_k(f: &MultiVariableFunction, ns: &[u64]) -> Result<Value> {
    f.check_arity(ns)?;
    let choices = ns
        .iter()
        .map(|&n| Ok(factorize(n)?.squarefree_divisors()))
        .collect::<Result<Vec<_>>>()?;
    let mut idx = vec![0usize; ns.len()];
    let mut args = vec![0u64; ns.len()];
    let mut acc = Value::ZERO;
    loop {
        let mut sign = 1i8;
        for i in 0..ns.len() {
            let (e, s) = choices[i][idx[i]];
            args[i] = ns[i] / e;
            sign *= s;
        }
        let v = f.eval(&args)?;
        acc = if sign > 0 {
            acc.checked_add(v)?
        } else {
            acc.checked_sub(v)?
        };
        // odometer
        let mut i = 0;
        loop {
            if i == ns.len() {
                return Ok(acc);
            }
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}
