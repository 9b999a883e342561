use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use skat_core::FixtureId;

/// Secret-correlation analysis: information measures, intrinsic
/// information, key-distillation protocols and bound-information
/// certificates for finite joint distributions.
///
/// Distributions are read with --dist, which takes a JSON file path,
/// `fixture:<id>` (p1, p2, p3, pmix) or `-` for standard input. The
/// environment variable SKAT_BUDGET overrides the enumeration budget.
///
/// Exit codes: 0 success, 1 usage error, 2 invalid input, 3 budget exceeded.
#[derive(Debug, Parser)]
#[command(name = "skat", version)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate entropies and (conditional) mutual informations.
    ///
    /// A measure is written `X1,X2:Y1|Z1`: I(X:Y|Z) with the conditioning
    /// part optional. A bare set `X1,X2` is the joint entropy H(X).
    Analyze(AnalyzeArgs),
    /// Upper-bound the intrinsic information I(X:Y↓E) and print the witness
    /// channel.
    Intrinsic(IntrinsicArgs),
    /// Run a key-distillation protocol.
    #[command(subcommand)]
    Simulate(Simulate),
    /// Decide whether the distribution carries bound information.
    Certify(CertifyArgs),
    /// Print a built-in distribution in the canonical JSON format.
    Fixture {
        #[arg(value_parser = parse_fixture)]
        id: FixtureId,
    },
}

#[derive(Debug, Args)]
pub struct DistArg {
    /// Distribution source: a path, `fixture:<id>` or `-` for stdin.
    #[arg(long, value_name = "SOURCE")]
    pub dist: String,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("measures").required(true).multiple(true)))]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub dist: DistArg,

    /// Any measure in the `X:Y|Z` grammar. Repeatable.
    #[arg(long, value_name = "EXPR", group = "measures")]
    pub measure: Vec<String>,

    /// Conditional mutual information `X:Y|Z`. Repeatable.
    #[arg(long, value_name = "X:Y|Z", group = "measures")]
    pub cmi: Vec<String>,

    /// Mutual information `X:Y`. Repeatable.
    #[arg(long, value_name = "X:Y", group = "measures")]
    pub mi: Vec<String>,

    /// Joint entropy of a set of variables. Repeatable.
    #[arg(long, value_name = "X", group = "measures")]
    pub entropy: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Best of the deterministic and continuous searches.
    Auto,
    /// Every deterministic map of Eve's alphabet.
    Exhaustive,
    /// Random-restart coordinate descent over stochastic channels.
    Local,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Random restarts of the continuous search.
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Maximum coordinate-descent sweeps per restart.
    #[arg(long, default_value_t = 500)]
    pub max_iters: usize,

    /// Output alphabet size of candidate channels [default: Eve's alphabet size].
    #[arg(long, value_name = "M")]
    pub max_output: Option<usize>,
}

#[derive(Debug, Args)]
pub struct IntrinsicArgs {
    #[command(flatten)]
    pub dist: DistArg,

    /// Comma-separated variables on one side.
    #[arg(long, value_name = "VARS")]
    pub x: String,

    /// Comma-separated variables on the other side.
    #[arg(long, value_name = "VARS")]
    pub y: String,

    /// Eavesdropper variable [default: the distribution's eve variable].
    #[arg(long, value_name = "VAR")]
    pub eve: Option<String>,

    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,

    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Subcommand)]
pub enum Simulate {
    /// Repeated-code protocol: the first honest party broadcasts its block
    /// masked by a random bit, the others accept on consistent decoding.
    RepeatedCode(RepeatedCodeArgs),
    /// Publicly compare two honest symbols and keep the equal cases.
    EqualityFilter(EqualityFilterArgs),
}

#[derive(Debug, Args)]
pub struct RepeatedCodeArgs {
    #[command(flatten)]
    pub dist: DistArg,

    /// Block length.
    #[arg(long)]
    pub n: usize,

    /// Enumerate exactly; falls back to Monte Carlo when over budget.
    #[arg(long)]
    pub exact: bool,

    /// With --exact, fail instead of falling back.
    #[arg(long, requires = "exact")]
    pub strict: bool,

    /// Monte Carlo trials.
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct EqualityFilterArgs {
    #[command(flatten)]
    pub dist: DistArg,

    #[arg(long, value_name = "VAR")]
    pub p: String,

    #[arg(long, value_name = "VAR")]
    pub q: String,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub dist: DistArg,

    /// Random restarts of the continuous search.
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Maximum coordinate-descent sweeps per restart.
    #[arg(long, default_value_t = 500)]
    pub max_iters: usize,

    /// Largest block length tried when looking for a distillation protocol.
    #[arg(long, default_value_t = 8)]
    pub max_n: usize,
}

fn parse_fixture(s: &str) -> Result<FixtureId, String> {
    s.parse::<FixtureId>().map_err(|e| e.to_string())
}
