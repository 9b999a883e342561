use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::Serialize;
use skat_core::fixtures;
use skat_core::intrinsic::{intrinsic_info, local_search, min_over_deterministic};
use skat_core::protocols::{
    certify, equality_filter, repeated_code_exact, repeated_code_monte_carlo,
};
use skat_core::{
    Bits, Budget, Certificate, CertifyConfig, Error, FilterResult, FixtureId, IntrinsicConfig,
    IntrinsicResult, JointDistribution, ProtocolStats,
};

use crate::args::{
    AnalyzeArgs, CertifyArgs, Cli, Command, EqualityFilterArgs, Format, IntrinsicArgs, Method,
    RepeatedCodeArgs, Simulate,
};
use crate::error::CliError;
use crate::measure::{Kind, Measure};

pub const BUDGET_VAR: &str = "SKAT_BUDGET";

/// Everything a run may read besides its arguments.
pub struct Env<'a> {
    pub stdin: &'a mut dyn Read,
    pub stderr: &'a mut dyn Write,
    pub budget: Option<u64>,
}

pub fn parse_budget(raw: Option<&str>) -> Result<Option<u64>, CliError> {
    raw.map(|s| {
        s.trim().parse::<u64>().map_err(|_| {
            CliError::Usage(format!(
                "{BUDGET_VAR} must be a nonnegative integer, got {s:?}"
            ))
        })
    })
    .transpose()
}

pub fn run(cli: &Cli, env: &mut Env<'_>, out: &mut dyn Write) -> Result<(), CliError> {
    let text = match &cli.command {
        Command::Analyze(args) => analyze(args, cli.format, env)?,
        Command::Intrinsic(args) => intrinsic(args, cli.format, env)?,
        Command::Simulate(Simulate::RepeatedCode(args)) => repeated_code(args, cli.format, env)?,
        Command::Simulate(Simulate::EqualityFilter(args)) => filter(args, cli.format, env)?,
        Command::Certify(args) => certificate(args, cli.format, env)?,
        Command::Fixture { id } => render(cli.format, &fixtures::build(*id), |d| d.to_string()),
    };
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn load(source: &str, env: &mut Env<'_>) -> Result<JointDistribution, CliError> {
    if let Some(id) = source.strip_prefix("fixture:") {
        return Ok(fixtures::build(id.parse::<FixtureId>()?));
    }
    let mut text = String::new();
    if source == "-" {
        env.stdin
            .read_to_string(&mut text)
            .map_err(|e| CliError::Read {
                path: "standard input".into(),
                source: e,
            })?;
    } else {
        text = std::fs::read_to_string(source).map_err(|e| CliError::Read {
            path: source.to_string(),
            source: e,
        })?;
    }
    JointDistribution::from_json(&text).map_err(|e| match e {
        Error::Json(e) => CliError::Invalid(format!("{source}: {e}")),
        other => other.into(),
    })
}

fn render<T: Serialize>(format: Format, value: &T, table: impl Fn(&T) -> String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("report serializes"),
        Format::Table => table(value),
    }
}

fn names(list: &str) -> Vec<&str> {
    list.split(',').map(str::trim).collect()
}

#[derive(Serialize)]
struct MeasureReport {
    expression: String,
    #[serde(flatten)]
    measure: Measure,
    value: Bits,
}

#[derive(Serialize)]
struct AnalyzeReport {
    measures: Vec<MeasureReport>,
}

fn analyze(args: &AnalyzeArgs, format: Format, env: &mut Env<'_>) -> Result<String, CliError> {
    let mut measures = Vec::new();
    for expr in &args.measure {
        measures.push(Measure::parse(expr)?);
    }
    for (exprs, kind) in [
        (&args.cmi, Kind::ConditionalMutualInformation),
        (&args.mi, Kind::MutualInformation),
        (&args.entropy, Kind::Entropy),
    ] {
        for expr in exprs {
            measures.push(Measure::parse_as(expr, kind)?);
        }
    }
    let d = load(&args.dist.dist, env)?;
    let measures = measures
        .into_iter()
        .map(|m| {
            let value = m.evaluate(&d)?;
            Ok(MeasureReport {
                expression: m.to_string(),
                measure: m,
                value,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(render(format, &AnalyzeReport { measures }, |r| {
        let width = r
            .measures
            .iter()
            .map(|m| m.expression.len())
            .max()
            .unwrap_or(0);
        r.measures
            .iter()
            .map(|m| format!("{:<width$}  {}\n", m.expression, m.value))
            .collect()
    }))
}

fn intrinsic(args: &IntrinsicArgs, format: Format, env: &mut Env<'_>) -> Result<String, CliError> {
    let d = load(&args.dist.dist, env)?;
    let eve = match &args.eve {
        Some(e) => e.clone(),
        None => d.eve().ok_or(Error::NoEavesdropper)?.name.clone(),
    };
    let mut config = IntrinsicConfig {
        max_output_size: args.search.max_output,
        restarts: args.search.restarts,
        seed: args.search.seed,
        max_iters: args.search.max_iters,
        ..IntrinsicConfig::default()
    };
    if let Some(b) = env.budget {
        config.deterministic_budget = b;
    }
    let (x, y) = (names(&args.x), names(&args.y));
    let search = match args.method {
        Method::Auto => intrinsic_info,
        Method::Exhaustive => min_over_deterministic,
        Method::Local => local_search,
    };
    let result = search(&d, &x, &y, &eve, &config)?;
    Ok(render(format, &result, intrinsic_table))
}

fn intrinsic_table(r: &IntrinsicResult) -> String {
    let mut s = String::new();
    let method = serde_json::to_value(r.method).expect("enum serializes");
    let bound = serde_json::to_value(r.bound).expect("enum serializes");
    writeln!(s, "splitting      {}", r.splitting).unwrap();
    writeln!(s, "value          {}", r.value).unwrap();
    writeln!(s, "bound          {}", bound.as_str().unwrap_or_default()).unwrap();
    writeln!(s, "method         {}", method.as_str().unwrap_or_default()).unwrap();
    writeln!(s, "restarts       {}", r.restarts_used).unwrap();
    writeln!(s, "converged      {}", r.converged).unwrap();
    writeln!(
        s,
        "witness        {} -> {}",
        r.witness.input_size(),
        r.witness.output_size()
    )
    .unwrap();
    for (e, row) in r.witness.rows().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|p| format!("{p:.6}")).collect();
        writeln!(s, "  {e:>3}  {}", cells.join(" ")).unwrap();
    }
    s
}

fn repeated_code(
    args: &RepeatedCodeArgs,
    format: Format,
    env: &mut Env<'_>,
) -> Result<String, CliError> {
    let d = load(&args.dist.dist, env)?;
    let budget = env.budget.map_or(Budget::DEFAULT, Budget);
    let monte_carlo =
        |d: &JointDistribution| repeated_code_monte_carlo(d, args.n, args.trials, args.seed);
    let stats = if args.exact {
        match repeated_code_exact(&d, args.n, budget) {
            Err(e @ Error::BudgetExceeded { .. }) if !args.strict => {
                writeln!(
                    env.stderr,
                    "warning: {e}; falling back to Monte Carlo with {} trials",
                    args.trials
                )?;
                monte_carlo(&d)?
            }
            other => other?,
        }
    } else {
        monte_carlo(&d)?
    };
    Ok(render(format, &stats, stats_table))
}

fn stats_table(s: &ProtocolStats) -> String {
    let exact = |e: &Option<String>| e.as_ref().map(|r| format!(" ({r})")).unwrap_or_default();
    let method = serde_json::to_value(s.method).expect("enum serializes");
    let mut t = String::new();
    writeln!(
        t,
        "method           {}",
        method.as_str().unwrap_or_default()
    )
    .unwrap();
    writeln!(t, "block length     {}", s.block_length).unwrap();
    writeln!(t, "broadcaster      {}", s.broadcaster).unwrap();
    writeln!(t, "receivers        {}", s.receivers.join(",")).unwrap();
    writeln!(
        t,
        "accept           {:.12}{}",
        s.accept_probability,
        exact(&s.accept_probability_exact)
    )
    .unwrap();
    writeln!(
        t,
        "agree | accept   {:.12}{}",
        s.agree_probability_given_accept,
        exact(&s.agree_probability_exact)
    )
    .unwrap();
    for (r, e) in s.receivers.iter().zip(&s.receiver_error_probabilities) {
        writeln!(t, "error {r:<10} {e:.12}").unwrap();
    }
    writeln!(t, "eve information  {}", s.eve_key_information).unwrap();
    writeln!(t, "key rate bound   {:.12}", s.key_rate_lower_bound()).unwrap();
    if s.trials > 0 {
        writeln!(
            t,
            "trials           {} ({} accepted)",
            s.trials, s.accepted_trials
        )
        .unwrap();
        writeln!(
            t,
            "std errors       {:.3e} {:.3e} {:.3e}",
            s.std_error, s.agree_std_error, s.eve_std_error
        )
        .unwrap();
    }
    t
}

fn filter(
    args: &EqualityFilterArgs,
    format: Format,
    env: &mut Env<'_>,
) -> Result<String, CliError> {
    let d = load(&args.dist.dist, env)?;
    let result = equality_filter(&d, &args.p, &args.q)?;
    Ok(render(format, &result, |r: &FilterResult| {
        format!("survival {}\n{}", r.survival_probability, r.filtered)
    }))
}

fn certificate(args: &CertifyArgs, format: Format, env: &mut Env<'_>) -> Result<String, CliError> {
    let d = load(&args.dist.dist, env)?;
    let defaults = CertifyConfig::default();
    let mut config = CertifyConfig {
        intrinsic: IntrinsicConfig {
            restarts: args.restarts,
            seed: args.seed,
            max_iters: args.max_iters,
            ..defaults.intrinsic.clone()
        },
        max_block_length: args.max_n,
        ..defaults
    };
    if let Some(b) = env.budget {
        config.budget = Budget(b);
        config.intrinsic.deterministic_budget = b;
    }
    let cert = certify(&d, &config)?;
    Ok(render(format, &cert, certificate_table))
}

fn certificate_table(c: &Certificate) -> String {
    let verdict = serde_json::to_value(c.verdict).expect("enum serializes");
    let mut t = String::new();
    writeln!(t, "bound information  {}", c.bound_information).unwrap();
    writeln!(
        t,
        "verdict            {}",
        verdict.as_str().unwrap_or_default()
    )
    .unwrap();
    writeln!(t, "reason             {}", c.reason).unwrap();
    for s in &c.splittings_without_key {
        writeln!(
            t,
            "cut {:<14} {} (recheck {}, zero rate {})",
            s.intrinsic.splitting.to_string(),
            s.intrinsic.value,
            s.recheck,
            s.zero_key_rate
        )
        .unwrap();
    }
    let pc = &c.private_channel;
    writeln!(
        t,
        "cut {:<14} {}",
        pc.intrinsic.splitting.to_string(),
        pc.intrinsic.value
    )
    .unwrap();
    writeln!(
        t,
        "filter {}={}         survival {:.12}, key rate {}",
        pc.filter_pair[0], pc.filter_pair[1], pc.survival_probability, pc.key_rate
    )
    .unwrap();
    if let Some(act) = &c.activation {
        for (s, r) in act.stats.iter().zip(&act.key_rate_lower_bounds) {
            writeln!(
                t,
                "repeated code N={:<2} accept {:.6} agree {:.6} eve {:.6} rate {}",
                s.block_length,
                s.accept_probability,
                s.agree_probability_given_accept,
                s.eve_key_information.0,
                r
            )
            .unwrap();
        }
    }
    t
}
