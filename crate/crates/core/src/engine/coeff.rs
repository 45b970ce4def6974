//! Expansion coefficients: closed forms, the gcd-specialized series and the
//! generic k-variable series.

use std::fmt;

use crate::arith::{factorize, gcd, lcm_all, Factorization, SpfSieve};
use crate::convolve::MultiVariableFunction;
use crate::engine::family::CoefficientFamily;
use crate::engine::lattice::is_compatible;
use crate::exact::Rational;
use crate::ramanujan::SumKind;
use crate::summation::CompensatedSum;
use crate::{Error, Result};

/// A transcendental constant appearing in closed-form coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Zeta(u32),
    LChi4(u32),
}

impl Atom {
    pub fn value(&self) -> Result<f64> {
        match *self {
            Atom::Zeta(s) => super::zeta(f64::from(s)),
            Atom::LChi4(k) => super::dirichlet_l_chi4(k),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Zeta(s) => write!(f, "zeta({s})"),
            Atom::LChi4(k) => write!(f, "L(chi4,{k})"),
        }
    }
}

/// `rational * prod atom^power`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbolic {
    rational: Rational,
    atoms: Vec<(Atom, i32)>,
}

impl Symbolic {
    /// Merges repeated atoms and drops zero powers.
    pub fn new(rational: Rational, mut atoms: Vec<(Atom, i32)>) -> Self {
        atoms.sort_by_key(|&(a, _)| a);
        let mut merged: Vec<(Atom, i32)> = Vec::with_capacity(atoms.len());
        for (a, pw) in atoms {
            match merged.last_mut() {
                Some((b, acc)) if *b == a => *acc += pw,
                _ => merged.push((a, pw)),
            }
        }
        merged.retain(|&(_, pw)| pw != 0);
        if rational.is_zero() {
            merged.clear();
        }
        Symbolic {
            rational,
            atoms: merged,
        }
    }

    pub fn zero() -> Self {
        Symbolic::new(Rational::ZERO, vec![])
    }

    pub fn rational(&self) -> Rational {
        self.rational
    }

    pub fn atoms(&self) -> &[(Atom, i32)] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero()
    }

    pub fn times(&self, r: Rational) -> Option<Symbolic> {
        let rational = self.rational.checked_mul(r).ok()?;
        Some(Symbolic::new(rational, self.atoms.clone()))
    }

    pub fn value(&self) -> Result<f64> {
        self.atoms
            .iter()
            .try_fold(self.rational.to_f64(), |acc, &(a, pw)| {
                Ok(acc * a.value()?.powi(pw))
            })
    }
}

impl fmt::Display for Symbolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let has_num = self.atoms.iter().any(|&(_, pw)| pw > 0);
        let mut first = true;
        if self.rational != Rational::ONE || !has_num {
            write!(f, "{}", self.rational)?;
            first = false;
        }
        for &(a, pw) in self.atoms.iter().filter(|&&(_, pw)| pw > 0) {
            if !first {
                f.write_str(" * ")?;
            }
            first = false;
            write!(f, "{a}")?;
            if pw > 1 {
                write!(f, "^{pw}")?;
            }
        }
        for &(a, pw) in self.atoms.iter().filter(|&&(_, pw)| pw < 0) {
            write!(f, " / {a}")?;
            if pw < -1 {
                write!(f, "^{}", -pw)?;
            }
        }
        Ok(())
    }
}

/// Which tuples carry a nonzero unitary coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitarySupport {
    /// Only tuples whose entries are all unitary divisors of their lcm; this
    /// is what the k-variable coefficient formula with coprimality
    /// constraints yields.
    #[default]
    Compatible,
    /// Every tuple gets the lcm-based coefficient, as in the closed forms
    /// written purely in terms of the lcm.  Kept for comparison; for `k >= 2`
    /// the resulting series does not converge to the left-hand side.
    LcmOnly,
}

/// A closed-form coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficient {
    pub q: Vec<u64>,
    pub lcm: u64,
    /// `None` when `s + k` is not an integer or the rational part overflows.
    pub symbolic: Option<Symbolic>,
    pub value: f64,
}

fn check_q(family: &CoefficientFamily, q: &[u64]) -> Result<u64> {
    if q.len() != family.k() {
        return Err(Error::domain(format!(
            "expected {} indices, got {}",
            family.k(),
            q.len()
        )));
    }
    if q.contains(&0) {
        return Err(Error::domain("indices must be positive"));
    }
    lcm_all(q)
}

fn vanishes(family: &CoefficientFamily, q: &[u64], support: UnitarySupport) -> bool {
    family.kind() == SumKind::Unitary && support == UnitarySupport::Compatible && !is_compatible(q)
}

/// `prod_{p^e || Q} h(p, e)` in floating point.
pub(crate) fn local_product_real(family: &CoefficientFamily, q_lcm: &Factorization) -> f64 {
    let mut acc = 1.0;
    for &(p, e) in q_lcm.pairs() {
        acc *= family.local_h_real(p, e);
        if acc == 0.0 {
            break;
        }
    }
    acc
}

/// The closed-form coefficient of `g(gcd(n))` at the tuple `q`, with
/// compatible unitary support.
pub fn coeff_closed(family: &CoefficientFamily, q: &[u64]) -> Result<Coefficient> {
    coeff_closed_with(family, q, UnitarySupport::Compatible)
}

pub fn coeff_closed_with(
    family: &CoefficientFamily,
    q: &[u64],
    support: UnitarySupport,
) -> Result<Coefficient> {
    let lcm = check_q(family, q)?;
    if vanishes(family, q, support) {
        return Ok(Coefficient {
            q: q.to_vec(),
            lcm,
            symbolic: Some(Symbolic::zero()),
            value: 0.0,
        });
    }
    let fq = factorize(lcm)?;
    let value = family.prefactor_real()? * local_product_real(family, &fq);
    let symbolic = family.prefactor_symbolic().and_then(|pre| {
        let r = fq.pairs().iter().try_fold(Rational::ONE, |acc, &(p, e)| {
            acc.checked_mul(family.local_h_exact(p, e)?).ok()
        })?;
        pre.times(r)
    });
    Ok(Coefficient {
        q: q.to_vec(),
        lcm,
        symbolic,
        value,
    })
}

/// A coefficient computed as a truncated series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCoefficient {
    pub q: Vec<u64>,
    pub lcm: u64,
    pub m: u64,
    pub value: f64,
    /// Rigorous bound on the omitted tail, when the majorant allows one.
    pub tail_bound: Option<f64>,
    /// `|S(M) - S(M/2)|`; heuristic.
    pub doubling_estimate: f64,
    /// A bound on the floating-point rounding of the partial sum.
    pub rounding: f64,
}

fn transform_of_product(family: &CoefficientFamily, a: &Factorization, b: &Factorization) -> f64 {
    let (xs, ys) = (a.pairs(), b.pairs());
    let (mut i, mut j) = (0, 0);
    let mut acc = family.scale() as f64;
    while acc != 0.0 && (i < xs.len() || j < ys.len()) {
        let (p, e) = match (xs.get(i), ys.get(j)) {
            (Some(&(p, e)), Some(&(r, f))) if p == r => {
                i += 1;
                j += 1;
                (p, e + f)
            }
            (Some(&(p, e)), Some(&(r, _))) if p < r => {
                i += 1;
                (p, e)
            }
            (Some(&(p, e)), None) => {
                i += 1;
                (p, e)
            }
            (_, Some(&(r, f))) => {
                j += 1;
                (r, f)
            }
            (None, None) => unreachable!(),
        };
        acc *= family.transform_local_real(p, e);
    }
    acc
}

/// The gcd-specialized series `Q^-k sum_{m <= M} t(mQ) / m^k` (unitary:
/// only `(m, Q) = 1`), with compatible unitary support.
pub fn coeff_gcd(family: &CoefficientFamily, q: &[u64], m: u64) -> Result<SeriesCoefficient> {
    coeff_gcd_with(family, q, m, UnitarySupport::Compatible, None)
}

/// As [`coeff_gcd`], optionally reusing a sieve that covers `1..=m`.
pub fn coeff_gcd_with(
    family: &CoefficientFamily,
    q: &[u64],
    m: u64,
    support: UnitarySupport,
    sieve: Option<&SpfSieve>,
) -> Result<SeriesCoefficient> {
    if m == 0 {
        return Err(Error::domain("truncation bound M must be >= 1"));
    }
    let lcm = check_q(family, q)?;
    let tail_bound = family.tail_bound(lcm, m);
    if vanishes(family, q, support) {
        return Ok(SeriesCoefficient {
            q: q.to_vec(),
            lcm,
            m,
            value: 0.0,
            tail_bound: Some(0.0),
            doubling_estimate: 0.0,
            rounding: 0.0,
        });
    }
    let owned;
    let sieve = match sieve {
        Some(s) if s.limit() >= m => s,
        _ => {
            owned = SpfSieve::new(m);
            &owned
        }
    };
    let fq = factorize(lcm)?;
    let k = family.k() as i32;
    let unitary = family.kind() == SumKind::Unitary;
    let mut sum = CompensatedSum::new();
    let mut half = 0.0;
    let mut abs_total = 0.0;
    for j in 1..=m {
        if !(unitary && gcd(j, lcm) != 1) {
            let term = transform_of_product(family, &sieve.factorize(j)?, &fq) / (j as f64).powi(k);
            sum.add(term);
            abs_total += term.abs();
        }
        if j == m / 2 {
            half = sum.value();
        }
    }
    let norm = (lcm as f64).powi(-k);
    let value = sum.value() * norm;
    Ok(SeriesCoefficient {
        q: q.to_vec(),
        lcm,
        m,
        value,
        tail_bound,
        doubling_estimate: (value - half * norm).abs(),
        rounding: 8.0 * f64::EPSILON * abs_total * norm,
    })
}

/// A coefficient of a general k-variable function.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericCoefficient {
    pub q: Vec<u64>,
    pub m: u64,
    pub value: f64,
    /// `|S(M) - S(M/2)|` over the boxes `[1, M]^k` and `[1, M/2]^k`.
    pub doubling_estimate: f64,
    pub terms: u64,
}

/// `sum over m in [1, M]^k of (mu_k * f)(m_1 q_1, .., m_k q_k) / (m_1 q_1 .. m_k q_k)`;
/// the unitary variant keeps only `(m_i, q_i) = 1`.
pub fn coeff_generic(
    f: &MultiVariableFunction,
    kind: SumKind,
    q: &[u64],
    m: u64,
) -> Result<GenericCoefficient> {
    let k = f.k();
    if q.len() != k {
        return Err(Error::domain(format!(
            "expected {k} indices, got {}",
            q.len()
        )));
    }
    if q.contains(&0) || m == 0 {
        return Err(Error::domain("indices and M must be positive"));
    }
    let q_max = *q.iter().max().expect("k >= 1");
    let limit = m.checked_mul(q_max).ok_or(Error::Overflow("m * q"))?;
    let sieve = SpfSieve::new(limit);
    let unitary = kind == SumKind::Unitary;
    let admissible: Vec<Vec<u64>> = q
        .iter()
        .map(|&qi| (1..=m).filter(|&j| !unitary || gcd(j, qi) == 1).collect())
        .collect();
    if admissible.iter().any(|a| a.is_empty()) {
        return Err(Error::domain("no admissible multipliers"));
    }
    let mut idx = vec![0usize; k];
    let mut facts = Vec::with_capacity(k);
    let mut sum = CompensatedSum::new();
    let mut half = CompensatedSum::new();
    let mut terms = 0u64;
    loop {
        facts.clear();
        let mut denom = 1.0;
        let mut in_half = true;
        for i in 0..k {
            let mi = admissible[i][idx[i]];
            in_half &= mi <= m / 2;
            let n = mi * q[i];
            denom *= n as f64;
            facts.push(sieve.factorize(n)?);
        }
        let v = f.transform_factored(&facts)?.to_f64();
        if v != 0.0 {
            terms += 1;
            sum.add(v / denom);
            if in_half {
                half.add(v / denom);
            }
        }
        let mut i = 0;
        loop {
            if i == k {
                let value = sum.value();
                return Ok(GenericCoefficient {
                    q: q.to_vec(),
                    m,
                    value,
                    doubling_estimate: (value - half.value()).abs(),
                    terms,
                });
            }
            idx[i] += 1;
            if idx[i] < admissible[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}
