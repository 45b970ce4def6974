//! Expansion coefficients and truncated expansions of `g(gcd(n_1..n_k))`.

pub mod coeff;
pub mod condition;
pub mod constants;
pub mod expand;
pub mod family;
pub mod lattice;
pub mod mean;

pub use coeff::{
    coeff_closed, coeff_closed_with, coeff_gcd, coeff_gcd_with, coeff_generic, Atom, Coefficient,
    GenericCoefficient, SeriesCoefficient, Symbolic, UnitarySupport,
};
pub use condition::{check_condition, check_condition_k, ConditionDiagnostic};
pub use constants::{dirichlet_l_chi4, zeta};
pub use expand::{
    checkpoints, evaluate_expansion, lcm_partial_sums, Checkpoint, ExpansionOptions, Truncation,
    TruncationReport,
};
pub use family::{CoefficientFamily, FamilyKind, Majorant};
pub use lattice::{compatible_unitary_weight, is_compatible, lcm_grouped_weight, TupleIndex};
pub use mean::{mean_value_estimate, MeanValueReport};
