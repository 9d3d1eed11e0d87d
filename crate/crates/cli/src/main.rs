//! `spinner` — evaluate exact spinner probabilities, inspect truncated
//! Levi-Civita numbers, and run the verification checks from the shell.

use clap::{Args, Parser, Subcommand, ValueEnum};
use spinner_core::circle::{parse_event_scaled, Angle, CircleEvent};
use spinner_core::gen::ValueGen;
use spinner_core::lc::{self, LcNumber};
use spinner_core::models::{
    additivity_defect, compatibility_report, grid_coherence_report, pruss_transform,
    coherence_report, regularity_report, symmetry_report, pruss_order_report, FiniteGrid,
    HyperfiniteModel, PrussAlpha, SubsetSample,
};
use spinner_core::parse::{Cursor, ParseError};
use spinner_core::report::{CheckRecord, Report};
use spinner_core::scalar::Rat;
use spinner_core::{suite, HyperRat};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "spinner",
    about = "Exact spinner probabilities over a symbolic hyperfinite grid",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format for values and reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for the random sweeps; the flag wins over the environment.
    #[arg(long, global = true, env = "SPINNER_SEED", default_value_t = 42)]
    seed: u64,
    /// Unit in which angle literals are read (output is always in turns).
    #[arg(long, global = true, value_enum, default_value_t = Unit::Turns)]
    unit: Unit,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Clone, Copy, ValueEnum)]
enum Unit {
    /// Fractions of a full turn.
    Turns,
    /// Rational multiples of pi radians.
    RadiansPi,
    /// Rational degrees.
    Degrees,
}

impl Unit {
    /// Factor converting an input literal to turns.
    fn to_turns(self) -> Rat {
        match self {
            Unit::Turns => Rat::new(1.into(), 1.into()),
            Unit::RadiansPi => Rat::new(1.into(), 2.into()),
            Unit::Degrees => Rat::new(1.into(), 360.into()),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    /// Uniform measure on the grid of 2n points (requires -n).
    Finite,
    /// Normalized length measure.
    Lebesgue,
    /// Hyperfinite measure on the symbolic grid of 2N points.
    Hyper,
    /// Hyperfinite measure of the angle-doubling spinner.
    #[value(alias = "hyper-Q")]
    HyperQ,
    /// Alpha-transformed hyperfinite measure (requires --alpha).
    Pruss,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an event expression under a model.
    Eval {
        #[arg(long, value_enum)]
        model: Model,
        /// Grid parameter for the finite model.
        #[arg(short)]
        n: Option<u64>,
        /// Scale factor for the infinitesimal part (pruss model).
        #[arg(long, value_parser = parse_rat_arg)]
        alpha: Option<Rat>,
        /// Event expression, e.g. "arc(0,1/2) - point(1/4)".
        expr: String,
    },
    /// Canonicalize a Levi-Civita number given in term syntax.
    Lc {
        /// Truncate the result to this knowledge order.
        #[arg(long, value_parser = parse_rat_arg)]
        order: Option<Rat>,
        /// Term syntax, e.g. "1 - d + 2*d^2" or "1/2*d^-1 + O(d>4)".
        expr: String,
    },
    /// Expand a rational function of N as a series in d = 1/N.
    Expand {
        /// Exponent cutoff of the expansion (default 10).
        #[arg(long, value_parser = parse_rat_arg)]
        order: Option<Rat>,
        /// Rational function of N, e.g. "N/(N+1)".
        expr: String,
    },
    /// Run one family of property checks.
    Check {
        #[command(subcommand)]
        which: CheckCmd,
    },
    /// Run the whole verification suite.
    Suite,
}

#[derive(Args)]
struct SweepArgs {
    /// Number of seeded random cases when no explicit input is given.
    #[arg(long, default_value_t = 50)]
    cases: u32,
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Grid refinement keeps probabilities (needs n | m).
    Compatibility {
        #[arg(short)]
        n: u64,
        #[arg(short)]
        m: u64,
        /// Sample this many random subsets instead of exhausting them.
        #[arg(long)]
        cases: Option<u32>,
    },
    /// Hyperfinite probability is infinitely close to the length measure;
    /// with -n, grid/length coherence over all index pairs of that grid.
    Coherence {
        expr: Option<String>,
        #[arg(short)]
        n: Option<u64>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Rational rotations preserve the hyperfinite probability.
    Symmetry {
        expr: Option<String>,
        /// Rotation angle (in the selected unit).
        #[arg(long, value_parser = parse_rat_arg)]
        theta: Option<Rat>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Only the empty event gets probability zero.
    Regularity {
        expr: Option<String>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// The alpha transform: order preservation, infinite closeness, and the
    /// additivity defect alpha - 1.
    Pruss {
        #[arg(long, value_parser = parse_rat_arg)]
        alpha: Rat,
        /// Optional pair of event expressions.
        exprs: Vec<String>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
}

fn parse_rat_arg(src: &str) -> Result<Rat, String> {
    let mut cur = Cursor::new(src);
    let value = cur.parse_rat().map_err(|e| e.to_string())?;
    cur.expect_end().map_err(|e| e.to_string())?;
    Ok(value)
}

/// Usage or input error: message plus exit status 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, UsageError> {
    match &cli.command {
        Command::Eval { model, n, alpha, expr } => run_eval(cli, *model, *n, alpha.as_ref(), expr),
        Command::Lc { order, expr } => {
            let value = lc::parse_lc(expr)?;
            let value = match order {
                Some(order) => value.truncated(order),
                None => value,
            };
            print_value(cli, "lc", expr, &value.to_string());
            Ok(true)
        }
        Command::Expand { order, expr } => {
            let x: HyperRat = expr.parse()?;
            let order = order.clone().unwrap_or_else(lc::default_order);
            if order.numer().magnitude() > &4096u32.into() {
                return Err(UsageError("expansion order is unreasonably large".into()));
            }
            print_value(cli, "expand", expr, &x.expand_in_d(&order).to_string());
            Ok(true)
        }
        Command::Check { which } => {
            let report = run_check(cli, which)?;
            print_report(cli, &report);
            Ok(report.passed())
        }
        Command::Suite => {
            let reports = suite::run_all(cli.seed);
            let all_pass = reports.iter().all(Report::passed);
            match cli.format {
                Format::Text => {
                    println!("# {}", HyperfiniteModel::ASSUMPTION);
                    for report in &reports {
                        println!("{}", report.summary_line());
                    }
                    println!(
                        "suite: {} ({}/{} criteria, seed {})",
                        if all_pass { "PASS" } else { "FAIL" },
                        reports.iter().filter(|r| r.passed()).count(),
                        reports.len(),
                        cli.seed
                    );
                }
                Format::JsonLines => {
                    for report in &reports {
                        print!("{}", report.to_json_lines());
                    }
                }
            }
            Ok(all_pass)
        }
    }
}

fn parse_event_arg(cli: &Cli, expr: &str) -> Result<CircleEvent, ParseError> {
    Ok(parse_event_scaled(expr, &cli.unit.to_turns())?.to_event())
}

fn run_eval(
    cli: &Cli,
    model: Model,
    n: Option<u64>,
    alpha: Option<&Rat>,
    expr: &str,
) -> Result<bool, UsageError> {
    let event = parse_event_arg(cli, expr)?;
    let hyper = HyperfiniteModel;
    match model {
        Model::Finite => {
            let n = n.ok_or_else(|| UsageError("model 'finite' requires -n".into()))?;
            let grid = FiniteGrid::new(n)?;
            print_value(cli, "eval finite", expr, &grid.restrict(&event).probability().to_string());
        }
        Model::Lebesgue => {
            print_value(cli, "eval lebesgue", expr, &event.lebesgue().to_string());
        }
        Model::Hyper => {
            print_value(cli, "eval hyper", expr, &hyper.probability(&event).to_string());
            eprintln!("# {}", HyperfiniteModel::ASSUMPTION);
        }
        Model::HyperQ => {
            print_value(cli, "eval hyper-q", expr, &hyper.doubled_probability(&event).to_string());
            eprintln!("# {}", HyperfiniteModel::ASSUMPTION);
        }
        Model::Pruss => {
            let alpha = alpha.ok_or_else(|| UsageError("model 'pruss' requires --alpha".into()))?;
            let alpha = PrussAlpha::new(alpha.clone())?;
            let value = pruss_transform(&hyper.probability(&event), &alpha)?;
            print_value(cli, "eval pruss", expr, &value.to_string());
            let defect = additivity_defect(&alpha);
            match cli.format {
                Format::Text => println!("additivity defect = {defect}"),
                Format::JsonLines => print_record(&CheckRecord::new(
                    "additivity defect",
                    format!("alpha = {}", alpha.value()),
                    defect.to_string(),
                    "",
                    true,
                )),
            }
            eprintln!("# {}", HyperfiniteModel::ASSUMPTION);
        }
    }
    Ok(true)
}

fn run_check(cli: &Cli, which: &CheckCmd) -> Result<Report, UsageError> {
    let model = HyperfiniteModel;
    match which {
        CheckCmd::Compatibility { n, m, cases } => {
            let sample = match cases {
                Some(cases) => SubsetSample::Random { cases: *cases, seed: cli.seed },
                None => SubsetSample::Exhaustive,
            };
            Ok(compatibility_report(*n, *m, sample)?)
        }
        CheckCmd::Coherence { expr, n, sweep } => {
            if let Some(n) = n {
                let grid = FiniteGrid::new(*n)?;
                let mut report = Report::new(format!("grid-coherence n={n}"));
                for h in 0..grid.size() {
                    for k in h + 1..=grid.size() {
                        let sub = grid_coherence_report(*n, h, k)?;
                        for check in sub.checks {
                            report.push(check);
                        }
                    }
                }
                return Ok(report);
            }
            let events = events_arg(cli, expr.as_deref(), sweep.cases)?;
            Ok(coherence_report(&model, &events))
        }
        CheckCmd::Symmetry { expr, theta, sweep } => {
            let mut gen = ValueGen::new(cli.seed);
            let events = events_arg(cli, expr.as_deref(), sweep.cases)?;
            let cases: Vec<(CircleEvent, Angle)> = events
                .into_iter()
                .map(|event| {
                    let angle = match theta {
                        Some(theta) => Angle::new(theta * &cli.unit.to_turns()),
                        None => gen.angle(30),
                    };
                    (event, angle)
                })
                .collect();
            Ok(symmetry_report(&model, &cases))
        }
        CheckCmd::Regularity { expr, sweep } => {
            let events = events_arg(cli, expr.as_deref(), sweep.cases)?;
            Ok(regularity_report(&model, &events))
        }
        CheckCmd::Pruss { alpha, exprs, sweep } => {
            let alpha = PrussAlpha::new(alpha.clone())?;
            let pairs: Vec<(CircleEvent, CircleEvent)> = match exprs.len() {
                0 => {
                    let mut gen = ValueGen::new(cli.seed);
                    (0..sweep.cases).map(|_| (gen.event(), gen.event())).collect()
                }
                2 => vec![(parse_event_arg(cli, &exprs[0])?, parse_event_arg(cli, &exprs[1])?)],
                _ => return Err(UsageError("give exactly two event expressions, or none".into())),
            };
            let mut report = pruss_order_report(&model, &alpha, &pairs);
            let defect = additivity_defect(&alpha);
            let expected = alpha.value() - Rat::new(1.into(), 1.into());
            report.push(CheckRecord::new(
                "additivity defect equals alpha - 1",
                format!("alpha = {}", alpha.value()),
                defect.to_string(),
                expected.to_string(),
                defect == expected,
            ));
            Ok(report)
        }
    }
}

fn events_arg(cli: &Cli, expr: Option<&str>, cases: u32) -> Result<Vec<CircleEvent>, UsageError> {
    match expr {
        Some(expr) => Ok(vec![parse_event_arg(cli, expr)?]),
        None => {
            let mut gen = ValueGen::new(cli.seed);
            Ok((0..cases).map(|_| gen.event()).collect())
        }
    }
}

fn print_value(cli: &Cli, check: &str, inputs: &str, value: &str) {
    match cli.format {
        Format::Text => println!("{value}"),
        Format::JsonLines => print_record(&CheckRecord::new(check, inputs, value, "", true)),
    }
}

fn print_record(record: &CheckRecord) {
    let mut report = Report::new("value");
    report.push(record.clone());
    print!("{}", report.to_json_lines());
}

fn print_report(cli: &Cli, report: &Report) {
    match cli.format {
        Format::Text => print!("{}", report.to_text()),
        Format::JsonLines => print!("{}", report.to_json_lines()),
    }
}

// Keep the unused-import lint honest about LcNumber being used in a type
// position only through the parser's return value.
#[allow(dead_code)]
type ParsedLc = LcNumber<Rat>;
