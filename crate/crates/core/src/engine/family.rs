//! The closed-form expansion families `g(gcd(n_1..n_k))`.
//!
//! Every family is described by the multiplicative transform `t = mu * g`
//! (up to a constant scale for `r`), from which both the coefficient series and
//! the Euler-product closed forms follow.  Closed forms are stored as a
//! prefactor (a product of `zeta` and `L(chi_4, .)` values) times local factors
//! `h(p, e)` over the prime powers `p^e || Q`.

use std::fmt;

use crate::arith::{binomial, chi4, factorize, gcd_all, Factorization};
use crate::convolve::{prime_power_value, MultiVariableFunction, MultiplicativeFunction};
use crate::engine::coeff::{Atom, Symbolic};
use crate::exact::{Rational, Value};
use crate::ramanujan::SumKind;
use crate::{Error, Result};

/// Which arithmetic function is expanded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyKind {
    /// `sigma_s(n) / n^s`.
    Sigma { s: f64 },
    /// `tau(n) = sigma_0(n)`.
    Tau,
    /// `phi_s(n) / n^s`.
    Phi { s: f64 },
    /// Piltz divisor function `tau_m(n)`.
    Piltz { m: u32 },
    /// `r(n)`, the number of representations as a sum of two squares.
    R,
    /// `beta_s(n) / n^s` with `beta_s(n) = sum_{d | n} d^s lambda(n/d)`.
    Beta { s: f64 },
    /// `psi_s(n) / n^s`, the generalized Dedekind function.
    Psi { s: f64 },
    /// The constant function 1.
    One,
}

impl FamilyKind {
    pub const NAMES: [&'static str; 8] =
        ["sigma", "tau", "phi", "piltz", "r", "beta", "psi", "one"];

    /// Parses a family name; `s` defaults to 1, `m` is required for `piltz`.
    pub fn from_name(name: &str, s: Option<f64>, m: Option<u32>) -> Result<Self> {
        let s = s.unwrap_or(1.0);
        Ok(match name {
            "sigma" => FamilyKind::Sigma { s },
            "tau" => FamilyKind::Tau,
            "phi" => FamilyKind::Phi { s },
            "piltz" => FamilyKind::Piltz {
                m: m.ok_or_else(|| Error::domain("the piltz family needs a parameter m"))?,
            },
            "r" => FamilyKind::R,
            "beta" => FamilyKind::Beta { s },
            "psi" => FamilyKind::Psi { s },
            "one" => FamilyKind::One,
            other => {
                return Err(Error::domain(format!(
                    "unknown family '{other}', expected one of {}",
                    Self::NAMES.join(", ")
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Sigma { .. } => "sigma",
            FamilyKind::Tau => "tau",
            FamilyKind::Phi { .. } => "phi",
            FamilyKind::Piltz { .. } => "piltz",
            FamilyKind::R => "r",
            FamilyKind::Beta { .. } => "beta",
            FamilyKind::Psi { .. } => "psi",
            FamilyKind::One => "one",
        }
    }

    fn s(&self) -> Option<f64> {
        match *self {
            FamilyKind::Sigma { s }
            | FamilyKind::Phi { s }
            | FamilyKind::Beta { s }
            | FamilyKind::Psi { s } => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Piltz { m } => write!(f, "piltz_{m}"),
            other => match other.s() {
                Some(s) => write!(f, "{}_{s}", other.name()),
                None => f.write_str(other.name()),
            },
        }
    }
}

/// A bound `|t(n)| <= c * n^alpha` on the transform (scale included).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Majorant {
    pub c: f64,
    pub alpha: f64,
}

/// A family together with the sum kind and the number of variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientFamily {
    family: FamilyKind,
    kind: SumKind,
    k: usize,
}

fn integral(x: f64) -> Option<i64> {
    (x.fract() == 0.0 && x.abs() < 1e6).then_some(x as i64)
}

/// `p^x` as an exact value when `x` is an integer, otherwise as a real.
fn pow_value(p: u64, x: f64) -> Result<Value> {
    match integral(x) {
        Some(e) => prime_power_value(p, e),
        None => Ok(Value::Real((p as f64).powf(x))),
    }
}

fn rat_pow(p: u64, exp: i64) -> Option<Rational> {
    Rational::from_int(p as i128)
        .checked_pow(i32::try_from(exp).ok()?)
        .ok()
}

fn rat_one_minus(x: Rational) -> Option<Rational> {
    Rational::ONE.checked_sub(x).ok()
}

impl CoefficientFamily {
    pub fn new(family: FamilyKind, kind: SumKind, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("dimension k must be at least 1"));
        }
        if let Some(s) = family.s() {
            if !s.is_finite() {
                return Err(Error::domain("parameter s must be finite"));
            }
            if s + k as f64 <= 1.0 {
                return Err(Error::domain(format!(
                    "{family} needs s + k > 1 (got s = {s}, k = {k})"
                )));
            }
        }
        match family {
            FamilyKind::Tau if k < 2 => {
                return Err(Error::domain("the tau family needs k >= 2"));
            }
            FamilyKind::Piltz { m } if m < 2 => {
                return Err(Error::domain("the piltz family needs m >= 2"));
            }
            FamilyKind::Piltz { .. } if k < 2 => {
                return Err(Error::domain("the piltz family needs k >= 2"));
            }
            _ => {}
        }
        Ok(CoefficientFamily { family, kind, k })
    }

    pub fn family(&self) -> FamilyKind {
        self.family
    }

    pub fn kind(&self) -> SumKind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The same family with the other sum kind.
    pub fn with_kind(&self, kind: SumKind) -> Self {
        CoefficientFamily { kind, ..*self }
    }

    /// `s + k` for the families with a parameter `s`, `k` otherwise.
    fn t(&self) -> f64 {
        self.family.s().unwrap_or(0.0) + self.k as f64
    }

    /// `r = 4 (1 * chi_4)`; every other family has scale 1.
    pub fn scale(&self) -> i128 {
        match self.family {
            FamilyKind::R => 4,
            _ => 1,
        }
    }

    /// `g(p^e)` for `e >= 1`, without the scale.
    pub fn g_local(&self, p: u64, e: u32) -> Result<Value> {
        match self.family {
            FamilyKind::Sigma { s } => (0..=e).try_fold(Value::ZERO, |acc, i| {
                acc.checked_add(pow_value(p, -s * f64::from(i))?)
            }),
            FamilyKind::Tau => Ok(Value::int(i128::from(e) + 1)),
            FamilyKind::Phi { s } => Value::ONE.checked_sub(pow_value(p, -s)?),
            FamilyKind::Piltz { m } => Ok(Value::int(binomial(
                u64::from(e + m - 1),
                u64::from(m - 1),
            )?)),
            FamilyKind::R => Ok(Value::int((0..=e).map(|i| chi4(p).pow(i)).sum::<i128>())),
            FamilyKind::Beta { s } => (0..=e).try_fold(Value::ZERO, |acc, i| {
                let term = pow_value(p, -s * f64::from(i))?;
                if i % 2 == 0 {
                    acc.checked_add(term)
                } else {
                    acc.checked_sub(term)
                }
            }),
            FamilyKind::Psi { s } => Value::ONE.checked_add(pow_value(p, -s)?),
            FamilyKind::One => Ok(Value::ONE),
        }
    }

    /// `g` as a multiplicative function (without the scale).
    pub fn g(&self) -> MultiplicativeFunction {
        let this = *self;
        MultiplicativeFunction::new(format!("{}", self.family), move |p, e| this.g_local(p, e))
    }

    /// `t(p^e) = (mu * g)(p^e)` for `e >= 1`, without the scale.
    pub fn transform_local(&self, p: u64, e: u32) -> Result<Value> {
        let e_f = f64::from(e);
        match self.family {
            FamilyKind::Sigma { s } => pow_value(p, -s * e_f),
            FamilyKind::Tau => Ok(Value::ONE),
            FamilyKind::R => Ok(Value::int(chi4(p).pow(e))),
            FamilyKind::Phi { s } if e == 1 => pow_value(p, -s)?.checked_neg(),
            FamilyKind::Psi { s } if e == 1 => pow_value(p, -s),
            FamilyKind::Phi { .. } | FamilyKind::Psi { .. } => Ok(Value::ZERO),
            FamilyKind::Piltz { m } => Ok(Value::int(binomial(
                u64::from(e + m - 2),
                u64::from(m - 2),
            )?)),
            FamilyKind::Beta { s } => {
                let v = pow_value(p, -s * e_f)?;
                if e % 2 == 0 {
                    Ok(v)
                } else {
                    v.checked_neg()
                }
            }
            FamilyKind::One => Ok(Value::ZERO),
        }
    }

    /// Real version of [`transform_local`](Self::transform_local).
    pub fn transform_local_real(&self, p: u64, e: u32) -> f64 {
        let pf = p as f64;
        let e_f = f64::from(e);
        match self.family {
            FamilyKind::Sigma { s } => pf.powf(-s * e_f),
            FamilyKind::Tau => 1.0,
            FamilyKind::R => chi4(p).pow(e) as f64,
            FamilyKind::Phi { s } if e == 1 => -pf.powf(-s),
            FamilyKind::Psi { s } if e == 1 => pf.powf(-s),
            FamilyKind::Phi { .. } | FamilyKind::Psi { .. } => 0.0,
            FamilyKind::Piltz { m } => binomial_f64(e + m - 2, m - 2),
            FamilyKind::Beta { s } => {
                let v = pf.powf(-s * e_f);
                if e % 2 == 0 {
                    v
                } else {
                    -v
                }
            }
            FamilyKind::One => 0.0,
        }
    }

    /// `mu * g` as a multiplicative function (without the scale).
    pub fn transform(&self) -> MultiplicativeFunction {
        let this = *self;
        MultiplicativeFunction::new(format!("mu*{}", self.family), move |p, e| {
            this.transform_local(p, e)
        })
    }

    /// `scale * t(n)` in floating point.
    pub fn transform_real(&self, n: &Factorization) -> f64 {
        let mut acc = self.scale() as f64;
        for &(p, e) in n.pairs() {
            acc *= self.transform_local_real(p, e);
            if acc == 0.0 {
                break;
            }
        }
        acc
    }

    /// The exact left-hand side `g(gcd(n_1..n_k))`.
    pub fn lhs(&self, ns: &[u64]) -> Result<Value> {
        self.check_tuple(ns)?;
        let d = factorize(gcd_all(ns))?;
        d.pairs()
            .iter()
            .try_fold(Value::int(self.scale()), |acc, &(p, e)| {
                acc.checked_mul(self.g_local(p, e)?)
            })
    }

    /// `g` at `d` in floating point (scale included).
    pub fn g_real(&self, d: &Factorization) -> Result<f64> {
        d.pairs()
            .iter()
            .try_fold(self.scale() as f64, |acc, &(p, e)| {
                Ok(acc * self.g_local(p, e)?.to_f64())
            })
    }

    /// `n |-> g(gcd(n))` as a k-variable function (without the scale).
    pub fn as_multivariable(&self) -> Result<MultiVariableFunction> {
        MultiVariableFunction::of_gcd(self.k, self.g())
    }

    pub(crate) fn check_tuple(&self, ns: &[u64]) -> Result<()> {
        if ns.len() != self.k {
            return Err(Error::domain(format!(
                "expected {} arguments, got {}",
                self.k,
                ns.len()
            )));
        }
        if ns.contains(&0) {
            return Err(Error::domain("arguments must be positive"));
        }
        Ok(())
    }

    pub fn majorant(&self) -> Majorant {
        match self.family {
            FamilyKind::Sigma { s }
            | FamilyKind::Phi { s }
            | FamilyKind::Beta { s }
            | FamilyKind::Psi { s } => Majorant { c: 1.0, alpha: -s },
            FamilyKind::Tau => Majorant { c: 1.0, alpha: 0.0 },
            // tau_j(n) <= tau(n)^(j-1) and tau(n) <= 2 sqrt(n)
            FamilyKind::Piltz { m } => Majorant {
                c: 2f64.powi(m as i32 - 2),
                alpha: f64::from(m - 2) / 2.0,
            },
            FamilyKind::R => Majorant { c: 4.0, alpha: 0.0 },
            FamilyKind::One => Majorant { c: 0.0, alpha: 0.0 },
        }
    }

    /// Bound on `Q^-k sum_{m > M} |t(mQ)| / m^k`, when the majorant makes
    /// the tail summable (`alpha - k < -1`).
    pub fn tail_bound(&self, q_lcm: u64, m: u64) -> Option<f64> {
        let Majorant { c, alpha } = self.majorant();
        if c == 0.0 {
            return Some(0.0);
        }
        let beta = alpha - self.k as f64;
        if beta >= -1.0 {
            return None;
        }
        Some(c * (q_lcm as f64).powf(beta) * (m as f64).powf(beta + 1.0) / (-beta - 1.0))
    }

    /// The prefactor `prod_p sum_j t(p^j) p^(-jk)` in symbolic form, when the
    /// exponents involved are integers.
    pub fn prefactor_symbolic(&self) -> Option<Symbolic> {
        let t = integral(self.t()).and_then(|t| u32::try_from(t).ok())?;
        let k = self.k as u32;
        let (rational, atoms) = match self.family {
            FamilyKind::Sigma { .. } => (Rational::ONE, vec![(Atom::Zeta(t), 1)]),
            FamilyKind::Tau => (Rational::ONE, vec![(Atom::Zeta(k), 1)]),
            FamilyKind::Phi { .. } => (Rational::ONE, vec![(Atom::Zeta(t), -1)]),
            FamilyKind::Piltz { m } => (Rational::ONE, vec![(Atom::Zeta(k), m as i32 - 1)]),
            FamilyKind::R => (Rational::from_int(4), vec![(Atom::LChi4(k), 1)]),
            FamilyKind::Beta { .. } => (
                Rational::ONE,
                vec![(Atom::Zeta(2 * t), 1), (Atom::Zeta(t), -1)],
            ),
            FamilyKind::Psi { .. } => (
                Rational::ONE,
                vec![(Atom::Zeta(t), 1), (Atom::Zeta(2 * t), -1)],
            ),
            FamilyKind::One => (Rational::ONE, vec![]),
        };
        Some(Symbolic::new(rational, atoms))
    }

    pub fn prefactor_real(&self) -> Result<f64> {
        let t = self.t();
        let k = self.k as f64;
        Ok(match self.family {
            FamilyKind::Sigma { .. } => super::zeta(t)?,
            FamilyKind::Tau => super::zeta(k)?,
            FamilyKind::Phi { .. } => 1.0 / super::zeta(t)?,
            FamilyKind::Piltz { m } => super::zeta(k)?.powi(m as i32 - 1),
            FamilyKind::R => 4.0 * super::dirichlet_l_chi4(self.k as u32)?,
            FamilyKind::Beta { .. } => super::zeta(2.0 * t)? / super::zeta(t)?,
            FamilyKind::Psi { .. } => super::zeta(t)? / super::zeta(2.0 * t)?,
            FamilyKind::One => 1.0,
        })
    }

    /// Local factor `h(p, e)` of the coefficient at `p^e || Q`, `e >= 1`.
    pub fn local_h_real(&self, p: u64, e: u32) -> f64 {
        let pf = p as f64;
        let e_f = f64::from(e);
        let t = self.t();
        let unitary = self.kind == SumKind::Unitary;
        match self.family {
            FamilyKind::Sigma { .. } | FamilyKind::Tau => {
                let v = pf.powf(-e_f * t);
                if unitary {
                    v * (1.0 - pf.powf(-t))
                } else {
                    v
                }
            }
            FamilyKind::Phi { .. } if e == 1 => -1.0 / (pf.powf(t) - 1.0),
            FamilyKind::Psi { .. } if e == 1 => 1.0 / (pf.powf(t) + 1.0),
            FamilyKind::Phi { .. } | FamilyKind::Psi { .. } => 0.0,
            FamilyKind::Piltz { m } => {
                let x = pf.powf(-t);
                let lead = (1.0 - x).powi(m as i32 - 1);
                if unitary {
                    binomial_f64(e + m - 2, m - 2) * lead * x.powi(e as i32)
                } else {
                    // (1-x)^(m-1) sum_{i >= e} C(i+m-2, m-2) x^i
                    let mut sum = 0.0;
                    let mut i = e;
                    loop {
                        let term = binomial_f64(i + m - 2, m - 2) * x.powi(i as i32);
                        sum += term;
                        if term <= 1e-18 * sum || term == 0.0 {
                            break;
                        }
                        i += 1;
                    }
                    lead * sum
                }
            }
            FamilyKind::R => {
                if p == 2 {
                    return 0.0;
                }
                let chi = chi4(p) as f64;
                let x = pf.powf(-t);
                let v = (chi * x).powi(e as i32);
                if unitary {
                    v * (1.0 - chi * x)
                } else {
                    v
                }
            }
            FamilyKind::Beta { .. } => {
                let v = pf.powf(-e_f * t) * if e % 2 == 0 { 1.0 } else { -1.0 };
                if unitary {
                    v * (1.0 + pf.powf(-t))
                } else {
                    v
                }
            }
            FamilyKind::One => 0.0,
        }
    }

    /// Exact local factor; `None` when `s + k` is not an integer or the
    /// rational arithmetic overflows.
    pub fn local_h_exact(&self, p: u64, e: u32) -> Option<Rational> {
        let t = integral(self.t())?;
        let e_i = i64::from(e);
        let unitary = self.kind == SumKind::Unitary;
        match self.family {
            FamilyKind::Sigma { .. } | FamilyKind::Tau => {
                let v = rat_pow(p, -e_i * t)?;
                if unitary {
                    v.checked_mul(rat_one_minus(rat_pow(p, -t)?)?).ok()
                } else {
                    Some(v)
                }
            }
            FamilyKind::Phi { .. } if e == 1 => {
                Rational::new(-1, rat_pow(p, t)?.numer().checked_sub(1)?).ok()
            }
            FamilyKind::Psi { .. } if e == 1 => {
                Rational::new(1, rat_pow(p, t)?.numer().checked_add(1)?).ok()
            }
            FamilyKind::Phi { .. } | FamilyKind::Psi { .. } | FamilyKind::One => {
                Some(Rational::ZERO)
            }
            FamilyKind::Piltz { m } => {
                let x = rat_pow(p, -t)?;
                let lead = rat_one_minus(x)?.checked_pow(m as i32 - 1).ok()?;
                let tau = |i: u32| -> Option<Rational> {
                    Some(Rational::from_int(
                        binomial(u64::from(i + m - 2), u64::from(m - 2)).ok()?,
                    ))
                };
                if unitary {
                    tau(e)?
                        .checked_mul(lead)
                        .ok()?
                        .checked_mul(x.checked_pow(e as i32).ok()?)
                        .ok()
                } else {
                    let mut partial = Rational::ZERO;
                    for i in 0..e {
                        let term = tau(i)?.checked_mul(x.checked_pow(i as i32).ok()?).ok()?;
                        partial = partial.checked_add(term).ok()?;
                    }
                    rat_one_minus(lead.checked_mul(partial).ok()?)
                }
            }
            FamilyKind::R => {
                if p == 2 {
                    return Some(Rational::ZERO);
                }
                let chi = Rational::from_int(chi4(p));
                let x = rat_pow(p, -t)?;
                let v = chi.checked_mul(x).ok()?.checked_pow(e as i32).ok()?;
                if unitary {
                    v.checked_mul(rat_one_minus(chi.checked_mul(x).ok()?)?).ok()
                } else {
                    Some(v)
                }
            }
            FamilyKind::Beta { .. } => {
                let mut v = rat_pow(p, -e_i * t)?;
                if e % 2 == 1 {
                    v = v.checked_neg().ok()?;
                }
                if unitary {
                    v.checked_mul(Rational::ONE.checked_add(rat_pow(p, -t)?).ok()?)
                        .ok()
                } else {
                    Some(v)
                }
            }
        }
    }
}

impl fmt::Display for CoefficientFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} k={}", self.family, self.kind, self.k)
    }
}

fn binomial_f64(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{divisors, liouville, mobius, sum_of_two_squares_r};
    use crate::convolve::dirichlet_convolve;

    fn fam(f: FamilyKind, kind: SumKind, k: usize) -> CoefficientFamily {
        CoefficientFamily::new(f, kind, k).unwrap()
    }

    #[test]
    fn domain_checks() {
        use FamilyKind::*;
        let c = SumKind::Classical;
        assert!(CoefficientFamily::new(Tau, c, 1).is_err());
        assert!(CoefficientFamily::new(Piltz { m: 3 }, c, 1).is_err());
        assert!(CoefficientFamily::new(Piltz { m: 1 }, c, 2).is_err());
        assert!(CoefficientFamily::new(Sigma { s: 0.0 }, c, 1).is_err());
        assert!(CoefficientFamily::new(Sigma { s: -0.5 }, c, 2).is_ok());
        assert!(CoefficientFamily::new(Sigma { s: 1.0 }, c, 0).is_err());
        assert!(CoefficientFamily::new(R, c, 1).is_ok());
        assert!(FamilyKind::from_name("piltz", None, None).is_err());
        assert_eq!(
            FamilyKind::from_name("sigma", None, None).unwrap(),
            Sigma { s: 1.0 }
        );
        assert!(FamilyKind::from_name("zeta", None, None).is_err());
    }

    #[test]
    fn lhs_values() {
        use FamilyKind::*;
        let c = SumKind::Classical;
        assert_eq!(
            fam(Sigma { s: 1.0 }, c, 2).lhs(&[4, 6]).unwrap(),
            Value::ratio(3, 2).unwrap()
        );
        assert_eq!(fam(Tau, c, 2).lhs(&[12, 18]).unwrap(), Value::int(4));
        assert_eq!(fam(R, c, 1).lhs(&[25]).unwrap(), Value::int(12));
        assert_eq!(
            fam(Piltz { m: 3 }, c, 2).lhs(&[4, 8]).unwrap(),
            Value::int(6)
        );
        assert_eq!(
            fam(Phi { s: 1.0 }, c, 1).lhs(&[12]).unwrap(),
            Value::ratio(1, 3).unwrap()
        );
        assert_eq!(fam(Psi { s: 1.0 }, c, 1).lhs(&[12]).unwrap(), Value::int(2));
        // beta_1(4)/4 = (4 - 2 + 1)/4
        assert_eq!(
            fam(Beta { s: 1.0 }, c, 1).lhs(&[4]).unwrap(),
            Value::ratio(3, 4).unwrap()
        );
        assert!(fam(Tau, c, 2).lhs(&[1]).is_err());
        let real = fam(Sigma { s: 0.5 }, c, 1).lhs(&[4]).unwrap();
        assert!((real.to_f64() - (1.0 + 0.5f64.sqrt() + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn r_lhs_matches_sum_of_two_squares() {
        let f = fam(FamilyKind::R, SumKind::Classical, 1);
        for n in 1..=500 {
            assert_eq!(
                f.lhs(&[n]).unwrap(),
                Value::int(sum_of_two_squares_r(n).unwrap())
            );
        }
    }

    #[test]
    fn transforms_match_mobius_of_g() {
        use FamilyKind::*;
        let families = [
            Sigma { s: 1.0 },
            Sigma { s: 2.0 },
            Tau,
            Phi { s: 1.0 },
            Piltz { m: 3 },
            Piltz { m: 4 },
            R,
            Beta { s: 1.0 },
            Psi { s: 2.0 },
            One,
        ];
        let mu = MultiplicativeFunction::mobius();
        for f in families {
            let fam = fam(f, SumKind::Classical, 2);
            let g = fam.g();
            let t = fam.transform();
            for n in 1..=120u64 {
                let direct = dirichlet_convolve(|d| mu.eval(d), |d| g.eval(d), n).unwrap();
                assert_eq!(t.eval(n).unwrap(), direct, "{f} at {n}");
                let real = fam.transform_real(&factorize(n).unwrap());
                assert!((real - fam.scale() as f64 * direct.to_f64()).abs() < 1e-12);
            }
        }
        // the stated transforms
        let beta = fam(Beta { s: 1.0 }, SumKind::Classical, 1).transform();
        let psi = fam(Psi { s: 1.0 }, SumKind::Classical, 1).transform();
        for n in 1..=100u64 {
            let lam = liouville(n).unwrap() as f64 / n as f64;
            assert!((beta.eval_real(n).unwrap() - lam).abs() < 1e-15);
            let mu2 = mobius(n).unwrap().pow(2) as f64 / n as f64;
            assert!((psi.eval_real(n).unwrap() - mu2).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_and_real_local_factors_agree() {
        use FamilyKind::*;
        for kind in [SumKind::Classical, SumKind::Unitary] {
            for f in [
                Sigma { s: 1.0 },
                Tau,
                Phi { s: 2.0 },
                Piltz { m: 3 },
                Piltz { m: 5 },
                R,
                Beta { s: 1.0 },
                Psi { s: 1.0 },
            ] {
                let fam = fam(f, kind, 2);
                for p in [2u64, 3, 5, 7] {
                    for e in 1..=4 {
                        let exact = fam.local_h_exact(p, e).unwrap().to_f64();
                        let real = fam.local_h_real(p, e);
                        assert!(
                            (exact - real).abs() <= 1e-14 * exact.abs().max(1e-300),
                            "{fam} p={p} e={e}: {exact} vs {real}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn local_factor_is_normalized_series_ratio() {
        // h(p, e) = p^(-ek) sum_j t(p^(e+j)) p^(-jk) / sum_j t(p^j) p^(-jk)
        use FamilyKind::*;
        for f in [
            Sigma { s: 1.0 },
            Tau,
            Phi { s: 1.0 },
            Piltz { m: 3 },
            R,
            Beta { s: 2.0 },
            Psi { s: 1.0 },
        ] {
            for kind in [SumKind::Classical, SumKind::Unitary] {
                let fam = fam(f, kind, 2);
                for p in [2u64, 3, 5] {
                    let x = (p as f64).powi(-2);
                    let t = |e: u32| {
                        if e == 0 {
                            1.0
                        } else {
                            fam.transform_local_real(p, e)
                        }
                    };
                    let series =
                        |e: u32| (0..200).map(|j| t(e + j) * x.powi(j as i32)).sum::<f64>();
                    let l0 = series(0);
                    for e in 1..=3 {
                        let expected = match kind {
                            SumKind::Classical => x.powi(e as i32) * series(e) / l0,
                            SumKind::Unitary => x.powi(e as i32) * t(e) / l0,
                        };
                        let h = fam.local_h_real(p, e);
                        assert!((h - expected).abs() < 1e-15, "{fam} p={p} e={e}");
                    }
                }
            }
        }
    }

    #[test]
    fn majorants_hold() {
        use FamilyKind::*;
        for f in [
            Sigma { s: 1.0 },
            Tau,
            Phi { s: 1.0 },
            Piltz { m: 3 },
            Piltz { m: 4 },
            R,
            Beta { s: 1.0 },
            Psi { s: 1.0 },
        ] {
            let fam = fam(f, SumKind::Classical, 2);
            let Majorant { c, alpha } = fam.majorant();
            for n in 1..=5000u64 {
                let t = fam.transform_real(&factorize(n).unwrap()).abs();
                assert!(
                    t <= c * (n as f64).powf(alpha) * (1.0 + 1e-12),
                    "{fam} n={n}"
                );
            }
        }
    }

    #[test]
    fn g_matches_direct_definitions() {
        let f = fam(FamilyKind::Sigma { s: 2.0 }, SumKind::Classical, 1);
        for n in 1..=60u64 {
            let direct: f64 = divisors(n)
                .unwrap()
                .iter()
                .map(|&d| (d * d) as f64)
                .sum::<f64>()
                / (n * n) as f64;
            assert!((f.g().eval_real(n).unwrap() - direct).abs() < 1e-14);
        }
    }
}
