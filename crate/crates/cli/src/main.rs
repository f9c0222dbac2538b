use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cartdiff::commands;
use cartdiff::laws::{LawReport, RunConfig};
use cartdiff::mutants::MUTANTS;
use cartdiff::suites::{checks, ModelId, Selection, Suite};

/// Differential and linearizing combinators: apply them to expressions and
/// check their axioms.
#[derive(Parser)]
#[command(name = "cartdiff", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the derivative D[f]; direction variables follow the inputs.
    Diff {
        #[arg(long, default_value = "poly")]
        model: ModelId,
        expr: String,
    },
    /// Print the total linearization L[f].
    Lin {
        #[arg(long, default_value = "poly")]
        model: ModelId,
        expr: String,
    },
    /// Print the partial linearization L^C[f], holding the --ctx variables fixed.
    Plin {
        #[arg(long, default_value = "poly")]
        model: ModelId,
        /// Context variables, comma separated or repeated.
        #[arg(long, value_delimiter = ',')]
        ctx: Vec<String>,
        expr: String,
    },
    /// Print the entries f, D[f], ..., D^k[f] of a polynomial's tower.
    Tower {
        #[arg(long, default_value_t = 3)]
        depth: usize,
        expr: String,
    },
    /// Evaluate a closed combinator term such as "D(f)" at a point.
    Closed {
        /// A named smooth map, as name=expr. Repeatable.
        #[arg(long = "def")]
        defs: Vec<String>,
        /// Comma separated coordinates of the input.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        at: Vec<f64>,
        term: String,
    },
    /// Run law suites and report one line per law.
    Laws(LawsArgs),
    /// Print a worked example.
    Demo { name: Demo },
    /// List the broken combinators available to --mutant.
    Mutants,
}

#[derive(clap::Args)]
struct LawsArgs {
    #[arg(long, default_value = "poly")]
    model: ModelId,
    #[arg(long, default_value = "all")]
    suite: Suite,
    #[arg(long, env = "CARTDIFF_SEED", default_value_t = 42)]
    seed: u64,
    /// Generated cases per law.
    #[arg(long, default_value_t = 500)]
    budget: usize,
    /// Sampled-equality tolerance (smooth and closed models).
    #[arg(long)]
    tol: Option<f64>,
    /// Sample points per comparison (smooth and closed models).
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Swap in a broken combinator; see `cartdiff mutants`.
    #[arg(long)]
    mutant: Option<String>,
    /// Report counterexamples as found instead of minimizing them.
    #[arg(long)]
    no_shrink: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    Interchange,
    C1,
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn print_or_usage(out: cartdiff::Result<String>) -> ExitCode {
    match out {
        Ok(s) => {
            println!("{s}");
            ExitCode::SUCCESS
        }
        Err(e) => usage(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Diff { model, expr } => print_or_usage(commands::diff(model, &expr)),
        Command::Lin { model, expr } => print_or_usage(commands::lin(model, &expr)),
        Command::Plin { model, ctx, expr } => print_or_usage(commands::plin(model, &expr, &ctx)),
        Command::Tower { depth, expr } => print_or_usage(commands::tower(&expr, depth).map(|l| l.join("\n"))),
        Command::Closed { defs, at, term } => print_or_usage(commands::closed_eval(&defs, &term, &at)),
        Command::Laws(args) => laws(&args),
        Command::Demo { name } => match name {
            Demo::Interchange => match commands::interchange_report() {
                Ok(s) => {
                    print!("{s}");
                    ExitCode::SUCCESS
                }
                Err(e) => usage(e),
            },
            Demo::C1 => {
                print!("{}", commands::c1_report());
                ExitCode::SUCCESS
            }
        },
        Command::Mutants => {
            for m in MUTANTS {
                println!("{:<20} {:<10} {}", m.name, m.suite, m.summary);
            }
            ExitCode::SUCCESS
        }
    }
}

fn selection(args: &LawsArgs) -> cartdiff::Result<Selection> {
    let mut sel = Selection::new(args.model, args.suite);
    if let Some(name) = &args.mutant {
        sel = sel.with_mutant(name)?;
    }
    if (args.tol.is_some() || args.points.is_some()) && !args.model.is_sampled() {
        return Err(cartdiff::Error::Invalid(format!(
            "--tol and --points apply to sampled models; {} compares exactly",
            args.model
        )));
    }
    if args.tol.is_some_and(|t| !(t.is_finite() && t >= 0.0)) {
        return Err(cartdiff::Error::Invalid("--tol must be a finite non-negative number".into()));
    }
    if args.points == Some(0) {
        return Err(cartdiff::Error::Invalid("--points must be positive".into()));
    }
    sel.tolerance = args.tol;
    sel.points = args.points;
    Ok(sel)
}

fn laws(args: &LawsArgs) -> ExitCode {
    let checks = match selection(args).and_then(|sel| checks(&sel)) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let cfg = RunConfig {
        seed: args.seed,
        budget: args.budget,
        shrink: !args.no_shrink,
    };
    let mut reports: Vec<LawReport> = checks.iter().map(|c| c.run(&cfg)).collect();
    reports.sort_by(|a, b| a.law.cmp(&b.law).then(a.case.cmp(&b.case)));

    let mut out = io::stdout().lock();
    let written = match args.format {
        Format::Structured => reports.iter().try_for_each(|r| writeln!(out, "{r}")),
        Format::Text => write_table(&mut out, args, &reports),
    };
    if written.is_err() {
        return ExitCode::from(EXIT_FAIL);
    }
    if reports.iter().any(|r| !r.passed()) {
        ExitCode::from(EXIT_FAIL)
    } else {
        ExitCode::SUCCESS
    }
}

fn write_table(out: &mut impl Write, args: &LawsArgs, reports: &[LawReport]) -> io::Result<()> {
    let mutant = args.mutant.as_deref().map(|m| format!(" mutant={m}")).unwrap_or_default();
    writeln!(
        out,
        "model={} suite={} seed={} budget={}{mutant}",
        args.model, args.suite, args.seed, args.budget
    )?;
    let width = reports.iter().map(|r| r.law.len()).max().unwrap_or(0);
    for r in reports {
        writeln!(out, "{:<4}  {:<width$}  {:>5} cases  {}", r.status.as_str().to_uppercase(), r.law, r.cases, r.eq)?;
        if let (Some(case), Some(cx)) = (r.case, &r.counterexample) {
            writeln!(out, "      case {case}: {cx}")?;
        }
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    writeln!(out, "{passed}/{} laws pass", reports.len())
}
