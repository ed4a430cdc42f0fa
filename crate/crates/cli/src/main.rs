//! `univalent` command-line front end.
//!
//! Exit codes: 0 success (or `member`), 1 error, 2 `not_member` or a
//! violated theorem case, 3 `inconclusive`.

mod render;

use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use univalent::harness::{self, CaseParams, CaseStatus, SearchReport, SuiteReport, Theorem};
use univalent::membership::{check_class, class_ratio_field, NamedClass, NamedParams, Verdict};
use univalent::operators::{verify_identity_3, verify_identity_4, verify_identity_6, OperatorSpec};
use univalent::zoo::ZooName;
use univalent::{DiskGrid, Error, NormalizedSeries, TruncatedSeries};

use render::Output;

const IDENTITY_TOL: f64 = 1e-12;

#[derive(Parser, Debug)]
#[command(
    name = "univalent",
    version,
    about = "Coefficient operators and class checks for normalized power series"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Truncation order for named series.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u32).range(8..))]
    order: u32,
    /// Outer radius of the sampling grid.
    #[arg(long, global = true, default_value_t = 0.95)]
    rmax: f64,
    #[arg(long, global = true, default_value_t = 24, value_parser = clap::value_parser!(u32).range(4..))]
    radii: u32,
    #[arg(long, global = true, default_value_t = 256, value_parser = clap::value_parser!(u32).range(4..))]
    angles: u32,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    output: Option<Output>,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
}

impl GlobalArgs {
    fn grid(&self) -> Result<DiskGrid, Error> {
        DiskGrid::new(self.rmax, self.radii as usize, self.angles as usize)
    }

    fn order(&self) -> usize {
        self.order as usize
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply an operator to a series and print its coefficients.
    Apply(ApplyArgs),
    /// Check membership of a series in a named class.
    Check(CheckArgs),
    /// Run theorem suites.
    Suite(SuiteArgs),
    /// Randomized counterexample search.
    Search(SearchArgs),
    /// Export the real part of a class ratio over the grid.
    Fieldmap(CheckArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OperatorName {
    Salagean,
    Jks,
    #[value(name = "L")]
    L,
    Bernardi,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum IdentityName {
    Id3,
    Id4,
    Id6,
}

#[derive(Args, Debug)]
struct ApplyArgs {
    #[arg(value_enum)]
    operator: OperatorName,
    /// Zoo name or path to a `k,re,im` CSV file.
    input: String,
    #[arg(long, default_value_t = 0)]
    n: u32,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    sigma: f64,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    /// Also check an operator identity on the input.
    #[arg(long, value_enum)]
    verify: Option<IdentityName>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    class: String,
    /// Zoo name or CSV path of the subject.
    subject: String,
    #[arg(long)]
    witness: Option<String>,
    #[arg(long, default_value_t = 0)]
    n: u32,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    sigma: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    /// T1 to T6, or `all`.
    theorem: String,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// T1 to T6, or `all`.
    theorem: String,
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<(String, u8), Error> {
    let g = &cli.global;
    match &cli.command {
        Command::Apply(args) => apply(g, args),
        Command::Check(args) => check(g, args),
        Command::Suite(args) => suite(g, args),
        Command::Search(args) => search(g, args),
        Command::Fieldmap(args) => fieldmap(g, args),
    }
}

/// A zoo name, or failing that, an existing CSV file.
fn load_series(input: &str, order: usize) -> Result<NormalizedSeries, Error> {
    match input.parse::<ZooName>() {
        Ok(name) => name.build(order),
        Err(Error::UnknownName(_)) if Path::new(input).is_file() => {
            let text = std::fs::read_to_string(input)
                .map_err(|e| Error::Domain(format!("cannot read {input}: {e}")))?;
            NormalizedSeries::new(TruncatedSeries::from_csv(&text)?)
        }
        Err(e) => Err(e),
    }
}

fn apply(g: &GlobalArgs, args: &ApplyArgs) -> Result<(String, u8), Error> {
    let f = load_series(&args.input, g.order())?;
    let spec = match args.operator {
        OperatorName::Salagean => OperatorSpec::salagean(args.n),
        OperatorName::Jks => OperatorSpec::jks(args.sigma),
        OperatorName::L => OperatorSpec::composite(args.n, args.sigma),
        OperatorName::Bernardi => {
            let c = args
                .c
                .ok_or_else(|| Error::Parameter("bernardi needs --c".into()))?;
            OperatorSpec::bernardi(c)?
        }
    };
    let out = spec.apply(&f)?;
    let mut code = 0;
    if let Some(id) = args.verify {
        let (label, residual) = match id {
            IdentityName::Id3 => ("id3", verify_identity_3(&f, args.sigma)),
            IdentityName::Id4 => ("id4", verify_identity_4(&f, args.n, args.sigma)),
            IdentityName::Id6 => {
                let c = args
                    .c
                    .ok_or_else(|| Error::Parameter("id6 needs --c".into()))?;
                ("id6", verify_identity_6(&f, c)?)
            }
        };
        let pass = residual <= IDENTITY_TOL;
        eprintln!(
            "residual {label} {residual:e} {}",
            if pass { "ok" } else { "FAILED" }
        );
        if !pass {
            code = 1;
        }
    }
    let text = match g.output.unwrap_or(Output::Csv) {
        Output::Json => render::json(&render::SeriesJson::new(&spec, &out))?,
        Output::Csv | Output::Pretty => out.to_csv(),
    };
    Ok((text, code))
}

fn named_inputs(
    g: &GlobalArgs,
    args: &CheckArgs,
) -> Result<
    (
        NamedClass,
        NormalizedSeries,
        Option<NormalizedSeries>,
        NamedParams,
    ),
    Error,
> {
    let class: NamedClass = args.class.parse()?;
    if class.needs_witness() && args.witness.is_none() {
        return Err(Error::Parameter(format!("{class} requires --witness")));
    }
    let f = load_series(&args.subject, g.order())?;
    let witness = args
        .witness
        .as_deref()
        .map(|w| load_series(w, g.order()))
        .transpose()?;
    let params = NamedParams {
        n: args.n,
        sigma: args.sigma,
        gamma: args.gamma,
        beta: args.beta,
    };
    Ok((class, f, witness, params))
}

fn check(g: &GlobalArgs, args: &CheckArgs) -> Result<(String, u8), Error> {
    let grid = g.grid()?;
    let (class, f, witness, params) = named_inputs(g, args)?;
    let report = check_class(&f, witness.as_ref(), class, &params, &grid)?;
    let code = match report.verdict {
        Verdict::Member => 0,
        Verdict::NotMember => 2,
        Verdict::Inconclusive => 3,
    };
    let text = match g.output.unwrap_or(Output::Json) {
        Output::Json => render::json(&report)?,
        Output::Csv => render::check_csv(&report),
        Output::Pretty => render::check_pretty(&report),
    };
    Ok((text, code))
}

fn fieldmap(g: &GlobalArgs, args: &CheckArgs) -> Result<(String, u8), Error> {
    let grid = g.grid()?;
    let (class, f, witness, params) = named_inputs(g, args)?;
    let spec = class.spec(&params)?;
    let samples = class_ratio_field(&f, witness.as_ref(), &spec, &grid)?;
    let text = match g.output.unwrap_or(Output::Csv) {
        Output::Json => render::json(&samples)?,
        Output::Csv | Output::Pretty => {
            let mut out = String::from("r,theta,re\n");
            for s in &samples {
                let _ = writeln!(out, "{},{},{}", s.r, s.theta, s.re);
            }
            out
        }
    };
    Ok((text, 0))
}

fn theorems(selector: &str) -> Result<Vec<Theorem>, Error> {
    if selector.eq_ignore_ascii_case("all") {
        Ok(Theorem::ALL.to_vec())
    } else {
        Ok(vec![selector.parse()?])
    }
}

/// Parameters for a theorem when any were given on the command line. Open
/// ones default to zero, except `c`, which defaults to 1.
fn suite_params(args: &SuiteArgs, theorem: Theorem) -> Option<CaseParams> {
    let given = args.n.is_some()
        || args.sigma.is_some()
        || args.gamma.is_some()
        || args.beta.is_some()
        || args.c.is_some();
    if !given {
        return None;
    }
    let n = args.n.unwrap_or(0);
    let sigma = args.sigma.unwrap_or(0.0);
    let gamma = args.gamma.unwrap_or(0.0);
    let mut params = if theorem.is_k_theorem() {
        CaseParams::k(n, sigma, args.beta.unwrap_or(0.0), gamma)
    } else {
        CaseParams::b(n, sigma, gamma)
    };
    if theorem.uses_bernardi() {
        params = params.with_c(args.c.unwrap_or(1.0));
    }
    Some(params)
}

fn suite(g: &GlobalArgs, args: &SuiteArgs) -> Result<(String, u8), Error> {
    let grid = g.grid()?;
    let selected = theorems(&args.theorem)?;
    // Validate every selected theorem's parameters before running any.
    for &t in &selected {
        if let Some(p) = suite_params(args, t) {
            if let Some(c) = p.c {
                harness::check_bernardi_parameter(c, p.gamma)?;
            }
        }
    }
    let reports = selected
        .iter()
        .map(|&t| match suite_params(args, t) {
            Some(p) => harness::run_with_params(t, &p, g.order(), &grid, g.seed),
            None => harness::run_battery(t, g.order(), &grid, g.seed),
        })
        .collect::<Result<Vec<SuiteReport>, Error>>()?;
    let violated = reports.iter().any(|r| r.status == CaseStatus::Violated);
    let text = match g.output.unwrap_or(Output::Json) {
        Output::Json if reports.len() == 1 => render::json(&reports[0])?,
        Output::Json => render::json(&reports)?,
        Output::Csv => render::suite_csv(&reports),
        Output::Pretty => render::suite_pretty(&reports),
    };
    Ok((text, if violated { 2 } else { 0 }))
}

fn search(g: &GlobalArgs, args: &SearchArgs) -> Result<(String, u8), Error> {
    let grid = g.grid()?;
    let reports = theorems(&args.theorem)?
        .into_iter()
        .map(|t| harness::counterexample_search(g.seed, args.trials as usize, t, g.order(), &grid))
        .collect::<Result<Vec<SearchReport>, Error>>()?;
    let violated = reports.iter().any(|r| r.summary.violated > 0);
    let text = match g.output.unwrap_or(Output::Json) {
        Output::Json if reports.len() == 1 => render::json(&reports[0])?,
        Output::Json => render::json(&reports)?,
        Output::Csv => render::search_csv(&reports),
        Output::Pretty => render::search_pretty(&reports),
    };
    Ok((text, if violated { 2 } else { 0 }))
}
