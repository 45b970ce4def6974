//! Truncated evaluation of `g(gcd(n)) = sum_q a_q c_{q_1}(n_1) .. c_{q_k}(n_k)`.
//!
//! Work is cut into fixed blocks that never straddle a checkpoint.  Workers
//! pull blocks from a shared counter; in deterministic mode the per-block
//! compensated sums are merged in block order, so the result does not depend
//! on the number of threads.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::arith::{Factorization, SpfSieve};
use crate::engine::coeff::{local_product_real, UnitarySupport};
use crate::engine::family::CoefficientFamily;
use crate::engine::lattice::{compatible_weight_factored, grouped_weight_factored};
use crate::exact::ExactValue;
use crate::ramanujan::{RamanujanTable, SumKind};
use crate::summation::CompensatedSum;
use crate::{Error, Result};

/// Default cap on the number of lattice points visited.
pub const DEFAULT_BUDGET: u128 = 1 << 32;

const BLOCK_TERMS: u64 = 4096;

/// How the infinite lattice is exhausted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Truncation {
    /// All tuples with every `q_i <= Q_max`.
    Box,
    /// All tuples with `lcm(q) <= Q_max`, grouped by the lcm.
    #[default]
    Lcm,
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truncation::Box => "box",
            Truncation::Lcm => "lcm",
        })
    }
}

impl std::str::FromStr for Truncation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "box" => Ok(Truncation::Box),
            "lcm" => Ok(Truncation::Lcm),
            other => Err(Error::domain(format!("unknown truncation mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpansionOptions {
    pub mode: Truncation,
    pub support: UnitarySupport,
    /// Worker count; `None` reads `RKIT_THREADS`, then the available
    /// parallelism.
    pub threads: Option<usize>,
    /// Merge block sums in a fixed order.
    pub deterministic: bool,
    pub budget: u128,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        ExpansionOptions {
            mode: Truncation::Lcm,
            support: UnitarySupport::Compatible,
            threads: None,
            deterministic: true,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub q_max: u64,
    pub partial: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncationReport {
    pub family: CoefficientFamily,
    pub n: Vec<u64>,
    pub mode: Truncation,
    pub support: UnitarySupport,
    pub q_max: u64,
    pub partial: f64,
    pub lhs: f64,
    /// The left-hand side as an exact value, when `s` is integral.
    pub lhs_exact: Option<ExactValue>,
    /// `|S(Q_max) - S(Q_max / 2)|`.
    pub doubling_estimate: f64,
    pub nonzero_terms: u64,
    /// Lattice points visited: `Q_max` (lcm) or `Q_max^k` (box).
    pub terms: u128,
    pub elapsed: Duration,
    /// Partial sums at `Q_max/8, Q_max/4, Q_max/2, Q_max`.
    pub checkpoints: Vec<Checkpoint>,
}

impl TruncationReport {
    pub fn abs_error(&self) -> f64 {
        (self.partial - self.lhs).abs()
    }

    pub fn checkpoint_errors(&self) -> Vec<(u64, f64)> {
        self.checkpoints
            .iter()
            .map(|c| (c.q_max, (c.partial - self.lhs).abs()))
            .collect()
    }
}

/// `Q_max/8, Q_max/4, Q_max/2, Q_max`, without zeros or repeats.
pub fn checkpoints(q_max: u64) -> Vec<u64> {
    let mut cps: Vec<u64> = [q_max / 8, q_max / 4, q_max / 2, q_max]
        .into_iter()
        .filter(|&c| c > 0)
        .collect();
    cps.dedup();
    cps
}

fn worker_count(requested: Option<usize>) -> usize {
    requested
        .or_else(|| std::env::var("RKIT_THREADS").ok()?.parse().ok())
        .or_else(|| std::thread::available_parallelism().ok().map(|n| n.get()))
        .unwrap_or(1)
        .max(1)
}

/// A half-open range of lcm values or box shells within one checkpoint
/// segment.
#[derive(Debug, Clone, Copy)]
struct Block {
    start: u64,
    end: u64,
    segment: usize,
}

fn make_blocks(cps: &[u64], cost: impl Fn(u64) -> u64) -> Vec<Block> {
    let mut blocks = Vec::new();
    let mut lo = 1;
    for (segment, &hi) in cps.iter().enumerate() {
        let mut start = lo;
        let mut acc = 0;
        for r in lo..=hi {
            acc += cost(r);
            if acc >= BLOCK_TERMS || r == hi {
                blocks.push(Block {
                    start,
                    end: r + 1,
                    segment,
                });
                start = r + 1;
                acc = 0;
            }
        }
        lo = hi + 1;
    }
    blocks
}

#[derive(Debug, Clone, Default)]
struct Partial {
    sum: CompensatedSum,
    nonzero: u64,
}

impl Partial {
    fn merge(&mut self, other: &Partial) {
        self.sum.merge(&other.sum);
        self.nonzero += other.nonzero;
    }
}

/// Runs every block and returns one partial per checkpoint segment.
fn run_blocks<F>(
    blocks: &[Block],
    segments: usize,
    threads: usize,
    deterministic: bool,
    eval: F,
) -> Result<Vec<Partial>>
where
    F: Fn(&Block) -> Result<Partial> + Sync,
{
    let next = AtomicUsize::new(0);
    let threads = threads.min(blocks.len()).max(1);
    let slots: Mutex<Vec<Option<Partial>>> = Mutex::new(vec![None; blocks.len()]);
    let finished: Mutex<Vec<Vec<Partial>>> = Mutex::new(Vec::new());
    let failure: Mutex<Option<Error>> = Mutex::new(None);

    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| {
                let mut local = vec![Partial::default(); segments];
                loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= blocks.len() || failure.lock().unwrap().is_some() {
                        break;
                    }
                    match eval(&blocks[i]) {
                        Ok(p) if deterministic => slots.lock().unwrap()[i] = Some(p),
                        Ok(p) => local[blocks[i].segment].merge(&p),
                        Err(e) => {
                            failure.lock().unwrap().get_or_insert(e);
                            break;
                        }
                    }
                }
                if !deterministic {
                    finished.lock().unwrap().push(local);
                }
            });
        }
    });

    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let mut out = vec![Partial::default(); segments];
    if deterministic {
        for (block, slot) in blocks.iter().zip(slots.into_inner().unwrap()) {
            out[block.segment].merge(&slot.expect("every block evaluated"));
        }
    } else {
        for worker in finished.into_inner().unwrap() {
            for (o, p) in out.iter_mut().zip(&worker) {
                o.merge(p);
            }
        }
    }
    Ok(out)
}

/// The lcm-grouped coefficient `A(Q)` and weight for one `Q`.
struct LcmTerm<'a> {
    family: &'a CoefficientFamily,
    ns: &'a [u64],
    support: UnitarySupport,
    prefactor: f64,
}

impl LcmTerm<'_> {
    fn term(&self, fq: &Factorization) -> Result<f64> {
        let w = match (self.family.kind(), self.support) {
            (SumKind::Unitary, UnitarySupport::Compatible) => {
                compatible_weight_factored(fq, self.ns)?
            }
            (kind, _) => grouped_weight_factored(kind, fq, self.ns)?,
        };
        if w == 0 {
            return Ok(0.0);
        }
        Ok(self.prefactor * local_product_real(self.family, fq) * w as f64)
    }
}

fn lattice_size(mode: Truncation, q_max: u64, k: usize) -> u128 {
    match mode {
        Truncation::Lcm => q_max as u128,
        Truncation::Box => u32::try_from(k)
            .ok()
            .and_then(|k| (q_max as u128).checked_pow(k))
            .unwrap_or(u128::MAX),
    }
}

/// Evaluates the truncated expansion of `family` at `ns`.
pub fn evaluate_expansion(
    family: &CoefficientFamily,
    ns: &[u64],
    q_max: u64,
    options: &ExpansionOptions,
) -> Result<TruncationReport> {
    let started = Instant::now();
    family.check_tuple(ns)?;
    if q_max == 0 {
        return Err(Error::domain("Q_max must be >= 1"));
    }
    let terms = lattice_size(options.mode, q_max, family.k());
    if terms > options.budget {
        return Err(Error::Budget {
            terms,
            budget: options.budget,
        });
    }
    let lhs_value = family.lhs(ns)?;
    let prefactor = family.prefactor_real()?;
    let cps = checkpoints(q_max);
    let sieve = SpfSieve::new(q_max);
    let threads = worker_count(options.threads);

    let segments = match options.mode {
        Truncation::Lcm => {
            let blocks = make_blocks(&cps, |_| 1);
            let lcm_term = LcmTerm {
                family,
                ns,
                support: options.support,
                prefactor,
            };
            run_blocks(&blocks, cps.len(), threads, options.deterministic, |b| {
                let mut p = Partial::default();
                for q in b.start..b.end {
                    let t = lcm_term.term(&sieve.factorize(q)?)?;
                    if t != 0.0 {
                        p.sum.add(t);
                        p.nonzero += 1;
                    }
                }
                Ok(p)
            })?
        }
        Truncation::Box => {
            let k = family.k();
            let tables = ns
                .iter()
                .map(|&n| RamanujanTable::with_sieve(family.kind(), n, &sieve, q_max))
                .collect::<Result<Vec<_>>>()?;
            let facts = (1..=q_max)
                .map(|q| sieve.factorize(q))
                .collect::<Result<Vec<_>>>()?;
            let boxes = BoxTerms {
                family,
                support: options.support,
                prefactor,
                tables: &tables,
                facts: &facts,
            };
            let blocks = make_blocks(&cps, |r| shell_size(r, k));
            run_blocks(&blocks, cps.len(), threads, options.deterministic, |b| {
                let mut p = Partial::default();
                for r in b.start..b.end {
                    boxes.shell(r, &mut p);
                }
                Ok(p)
            })?
        }
    };

    let mut running = CompensatedSum::new();
    let mut nonzero = 0;
    let checkpoints: Vec<Checkpoint> = cps
        .iter()
        .zip(&segments)
        .map(|(&q, seg)| {
            running.merge(&seg.sum);
            nonzero += seg.nonzero;
            Checkpoint {
                q_max: q,
                partial: running.value(),
            }
        })
        .collect();
    let partial = running.value();
    let half = checkpoints
        .iter()
        .find(|c| c.q_max == q_max / 2)
        .map_or(0.0, |c| c.partial);
    Ok(TruncationReport {
        family: *family,
        n: ns.to_vec(),
        mode: options.mode,
        support: options.support,
        q_max,
        partial,
        lhs: lhs_value.to_f64(),
        lhs_exact: lhs_value.exact(),
        doubling_estimate: (partial - half).abs(),
        nonzero_terms: nonzero,
        terms,
        elapsed: started.elapsed(),
        checkpoints,
    })
}

/// Number of tuples in `[1, r]^k` with maximum exactly `r`.
fn shell_size(r: u64, k: usize) -> u64 {
    let k = k as u32;
    r.saturating_pow(k)
        .saturating_sub((r - 1).saturating_pow(k))
}

struct BoxTerms<'a> {
    family: &'a CoefficientFamily,
    support: UnitarySupport,
    prefactor: f64,
    tables: &'a [RamanujanTable],
    facts: &'a [Factorization],
}

impl BoxTerms<'_> {
    /// Adds every tuple with `max q_i = r`, in lexicographic order.
    fn shell(&self, r: u64, out: &mut Partial) {
        let k = self.tables.len();
        let mut q = vec![1u64; k];
        let mut merged: Vec<(u64, u32)> = Vec::new();
        let check_compat =
            self.family.kind() == SumKind::Unitary && self.support == UnitarySupport::Compatible;
        loop {
            if q.contains(&r) {
                let prod: f64 = q
                    .iter()
                    .zip(self.tables)
                    .map(|(&qi, t)| t.get(qi) as f64)
                    .product();
                if prod != 0.0 {
                    merged.clear();
                    for &qi in &q {
                        merged.extend_from_slice(self.facts[(qi - 1) as usize].pairs());
                    }
                    merged.sort_unstable();
                    let coeff = self.coefficient(&merged, check_compat);
                    if coeff != 0.0 {
                        out.sum.add(coeff * prod);
                        out.nonzero += 1;
                    }
                }
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if q[i] < r {
                    q[i] += 1;
                    break;
                }
                q[i] = 1;
            }
        }
    }

    /// Coefficient from the sorted multiset of prime powers of the entries.
    fn coefficient(&self, merged: &[(u64, u32)], check_compat: bool) -> f64 {
        let mut acc = self.prefactor;
        let mut i = 0;
        while i < merged.len() {
            let p = merged[i].0;
            let mut j = i;
            while j < merged.len() && merged[j].0 == p {
                j += 1;
            }
            // sorted, so the last entry for p carries the maximal exponent
            let e = merged[j - 1].1;
            if check_compat && merged[i..j].iter().any(|&(_, f)| f != e) {
                return 0.0;
            }
            acc *= self.family.local_h_real(p, e);
            if acc == 0.0 {
                return 0.0;
            }
            i = j;
        }
        acc
    }
}

/// Partial sums after every `Q = 1..=Q_max` in lcm mode (serial).
pub fn lcm_partial_sums(
    family: &CoefficientFamily,
    ns: &[u64],
    q_max: u64,
    support: UnitarySupport,
) -> Result<Vec<f64>> {
    family.check_tuple(ns)?;
    if q_max == 0 {
        return Err(Error::domain("Q_max must be >= 1"));
    }
    let sieve = SpfSieve::new(q_max);
    let lcm_term = LcmTerm {
        family,
        ns,
        support,
        prefactor: family.prefactor_real()?,
    };
    let mut sum = CompensatedSum::new();
    (1..=q_max)
        .map(|q| {
            sum.add(lcm_term.term(&sieve.factorize(q)?)?);
            Ok(sum.value())
        })
        .collect()
}
