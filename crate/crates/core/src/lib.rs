//! Classical sums `c_q(n)`, unitary sums `c*_q(n)`, and expansions of
//! gcd-type functions of k variables in terms of products of them.
//!
//! The crate is layered bottom-up:
//!
//! * [`arith`]: factorization and exact one-variable arithmetic functions,
//! * [`exact`]: exact integer/rational values and the exact/real value union,
//! * [`convolve`]: Dirichlet, unitary and k-variable convolution over
//!   multiplicative functions given by their prime-power local rules,
//! * [`ramanujan`]: classical and unitary Ramanujan sums and their identities,
//! * [`engine`]: zeta and `L(chi_4, k)` constants, expansion coefficients,
//!   truncated expansion evaluation, mean values and convergence diagnostics.
//!
//! ```
//! use rkit::engine::{coeff_closed, evaluate_expansion, CoefficientFamily, ExpansionOptions, FamilyKind};
//! use rkit::ramanujan::SumKind;
//!
//! let sigma = CoefficientFamily::new(FamilyKind::Sigma { s: 1.0 }, SumKind::Unitary, 2)?;
//! let a = coeff_closed(&sigma, &[2, 2])?;
//! assert_eq!(a.symbolic.unwrap().to_string(), "7/64 * zeta(3)");
//!
//! let classical = sigma.with_kind(SumKind::Classical);
//! let report = evaluate_expansion(&classical, &[4, 6], 4096, &ExpansionOptions::default())?;
//! assert!(report.abs_error() < 1e-6); // sigma(2)/2 = 3/2
//! # Ok::<(), rkit::Error>(())
//! ```

pub mod arith;
pub mod convolve;
pub mod engine;
pub mod exact;
pub mod ramanujan;
pub mod summation;

mod error;

pub use error::{Error, Result};

/// Library version, echoed into reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
