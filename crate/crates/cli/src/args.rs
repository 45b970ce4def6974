use clap::{Args, Parser, Subcommand, ValueEnum};

use rkit::engine::{FamilyKind, Truncation, UnitarySupport};
use rkit::ramanujan::SumKind;

#[derive(Debug, Parser)]
#[command(
    name = "rkit",
    version,
    about = "Classical and unitary Ramanujan sums, expansion coefficients and truncated expansions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    pub json: bool,

    /// Fixed merge order and no timings, so repeated runs print identical bytes.
    #[arg(long, global = true)]
    pub deterministic: bool,

    /// Maximum number of lattice points an expansion may visit.
    #[arg(long, global = true, value_name = "MAX_TERMS")]
    pub budget: Option<u128>,
}

impl Cli {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an arithmetic function or a Ramanujan sum exactly.
    Eval(EvalArgs),
    /// Expansion coefficient of a gcd-type family at an index tuple.
    Coeff(CoeffArgs),
    /// Truncated Ramanujan expansion against its exact left-hand side.
    Expand(ExpandArgs),
    /// Run an identity or consistency suite; exits with status 2 on failure.
    Check(CheckArgs),
    /// Mean value of g(gcd(n)) over a box against the coefficient at (1, .., 1).
    Meanvalue(MeanValueArgs),
    /// Partial sums of c*_q(n)/n and c_q(n)/n against -Lambda*(q) and -Lambda(q).
    LambdaStar(LambdaStarArgs),
    /// Re-render a saved JSON report (from a file or stdin) in another format.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalFunction {
    Mobius,
    Omega,
    BigOmega,
    Liouville,
    Phi,
    JordanPhi,
    Sigma,
    Tau,
    Piltz,
    Mangoldt,
    MuStar,
    SigmaStar,
    TauStar,
    PhiStar,
    MangoldtStar,
    /// Number of representations as a sum of two squares.
    R,
    Chi4,
    Divisors,
    UnitaryDivisors,
    /// (k, n)_*: takes two arguments.
    UnitaryGcd,
    /// c_q(n) or c*_q(n): takes q and n.
    Rsum,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub function: EvalFunction,
    /// Arguments; one-argument functions are evaluated at each.
    #[arg(required = true)]
    pub args: Vec<u64>,
    /// Exponent for sigma and jordan-phi.
    #[arg(long)]
    pub s: Option<u32>,
    /// Order of the Piltz divisor function.
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long, value_enum, default_value_t = KindArg::Classical)]
    pub kind: KindArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Classical,
    Unitary,
}

impl From<KindArg> for SumKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Classical => SumKind::Classical,
            KindArg::Unitary => SumKind::Unitary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SupportArg {
    Compatible,
    LcmOnly,
}

impl From<SupportArg> for UnitarySupport {
    fn from(s: SupportArg) -> Self {
        match s {
            SupportArg::Compatible => UnitarySupport::Compatible,
            SupportArg::LcmOnly => UnitarySupport::LcmOnly,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Box,
    Lcm,
}

impl From<ModeArg> for Truncation {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Box => Truncation::Box,
            ModeArg::Lcm => Truncation::Lcm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoeffMode {
    Closed,
    Series,
}

/// Selects a member of one of the gcd-type families.
#[derive(Debug, Args)]
pub struct FamilyOpts {
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(FamilyKind::NAMES))]
    pub family: String,
    /// Exponent s of sigma_s, phi_s, beta_s, psi_s (default 1).
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// Order m of the Piltz function tau_m.
    #[arg(long)]
    pub m: Option<u32>,
    /// Number of variables.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t = KindArg::Classical)]
    pub kind: KindArg,
    /// Which unitary tuples carry coefficients.
    #[arg(long, value_enum, default_value_t = SupportArg::Compatible)]
    pub support: SupportArg,
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    #[command(flatten)]
    pub family: FamilyOpts,
    /// The index tuple (q_1, .., q_k).
    #[arg(long, num_args = 1.., required = true)]
    pub q: Vec<u64>,
    #[arg(long, value_enum, default_value_t = CoeffMode::Closed)]
    pub mode: CoeffMode,
    /// Series truncation for `--mode series`.
    #[arg(long = "M", default_value_t = 10_000)]
    pub m_terms: u64,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[command(flatten)]
    pub family: FamilyOpts,
    /// The arguments (n_1, .., n_k).
    #[arg(long, num_args = 1.., required = true)]
    pub n: Vec<u64>,
    #[arg(long)]
    pub qmax: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Lcm)]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    RamanujanIdentities,
    ClosedVsSeries,
    OrthogonalityCounterexample,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Bound on q and n for the identity suite.
    #[arg(long, default_value_t = 300)]
    pub max: u64,
    /// Bound on each q_i for closed-vs-series.
    #[arg(long, default_value_t = 6)]
    pub qmax: u64,
    /// Series truncation for closed-vs-series.
    #[arg(long = "M", default_value_t = 10_000)]
    pub m_terms: u64,
    /// Prime for the orthogonality counterexample.
    #[arg(long, default_value_t = 2)]
    pub p: u64,
}

#[derive(Debug, Args)]
pub struct MeanValueArgs {
    #[command(flatten)]
    pub family: FamilyOpts,
    /// Box side; several values give several rows.
    #[arg(long, num_args = 1.., required = true)]
    pub x: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct LambdaStarArgs {
    #[arg(long)]
    pub q: u64,
    /// Checkpoints; a single value N expands to N/8, N/4, N/2, N.
    #[arg(long = "N", num_args = 1.., required = true)]
    pub n: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// JSON report; reads stdin when omitted.
    pub path: Option<std::path::PathBuf>,
}
