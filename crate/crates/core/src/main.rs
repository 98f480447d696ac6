//! Command-line driver: batch experiment tables, ad-hoc solves on the
//! integral problem, and symbol analysis.

use clap::{Parser, ValueEnum};

use symgrid::analysis::{check_tgm, check_vcycle_pair, equivalence_audit};
use symgrid::cycles::CycleKind;
use symgrid::experiments::{parse_symbol, run_integral, run_table2, run_table3, run_table4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExperimentName {
    Table2,
    Table3,
    Table4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CycleArg {
    Tgm,
    V,
    W,
}

impl From<CycleArg> for CycleKind {
    fn from(c: CycleArg) -> Self {
        match c {
            CycleArg::Tgm => CycleKind::Tgm,
            CycleArg::V => CycleKind::V,
            CycleArg::W => CycleKind::W,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SmootherArg {
    Richardson,
    Gs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AnalyzeMode {
    Tgm,
    Vcycle,
    Equivalence,
}

/// Symbol-driven multigrid solver and optimality analyzer for banded
/// Toeplitz/circulant systems.
#[derive(Parser, Debug)]
#[command(name = "symgrid", version)]
struct Args {
    /// Run a full reference experiment table.
    #[arg(long, value_enum)]
    experiment: Option<ExperimentName>,

    /// Analyze transfer symbols instead of solving.
    #[arg(long)]
    analyze_only: bool,

    /// System symbol (named family or JSON file) for analysis or a custom
    /// integral-problem solve. Defaults to (2+2cos)^2.
    #[arg(long, short = 'f')]
    f: Option<String>,

    /// Restriction symbol for analysis.
    #[arg(long)]
    r: Option<String>,

    /// Prolongation symbol for analysis.
    #[arg(long)]
    p: Option<String>,

    /// Analysis mode.
    #[arg(long, value_enum, default_value = "tgm")]
    mode: AnalyzeMode,

    /// Problem size for a custom solve.
    #[arg(long)]
    n: Option<usize>,

    /// Restriction order delta_r for a custom integral solve.
    #[arg(long, default_value_t = 2)]
    dr: usize,

    /// Prolongation order delta_p for a custom integral solve.
    #[arg(long, default_value_t = 2)]
    dp: usize,

    #[arg(long, value_enum, default_value = "tgm")]
    cycle: CycleArg,

    /// Smoother for custom solves (experiment tables fix their own).
    #[arg(long, value_enum, default_value = "richardson")]
    smoother: SmootherArg,

    /// Relative residual stopping threshold.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,

    #[arg(long, default_value_t = 2000)]
    max_iter: usize,

    #[arg(long, value_enum, default_value = "json")]
    out: OutFormat,
}

fn run(args: &Args) -> symgrid::Result<i32> {
    if args.analyze_only {
        let f = parse_symbol(args.f.as_deref().ok_or_else(|| {
            symgrid::Error::ParseError("--analyze-only requires --f".into())
        })?)?;
        let r = parse_symbol(args.r.as_deref().unwrap_or("1"))?;
        let p = parse_symbol(args.p.as_deref().unwrap_or("1"))?;
        let text = match args.mode {
            AnalyzeMode::Tgm => serde_json::to_string_pretty(&check_tgm(&f, &r, &p)?)?,
            AnalyzeMode::Vcycle => {
                serde_json::to_string_pretty(&check_vcycle_pair(&f, &r, &p)?)?
            }
            AnalyzeMode::Equivalence => {
                serde_json::to_string_pretty(&equivalence_audit(&f, &r, &p)?)?
            }
        };
        println!("{text}");
        return Ok(0);
    }

    if let Some(experiment) = args.experiment {
        let report = match experiment {
            ExperimentName::Table2 => run_table2()?,
            ExperimentName::Table3 => run_table3()?,
            ExperimentName::Table4 => run_table4()?,
        };
        match args.out {
            OutFormat::Json => println!("{}", report.to_json()),
            OutFormat::Csv => print!("{}", report.to_csv()),
        }
        return Ok(if report.any_nonconverged() { 2 } else { 0 });
    }

    if let Some(n) = args.n {
        if args.smoother == SmootherArg::Gs {
            return Err(symgrid::Error::ParseError(
                "custom Gauss-Seidel solves are exposed through --experiment table4".into(),
            ));
        }
        let z = match args.f.as_deref() {
            Some(name) => parse_symbol(name)?,
            None => parse_symbol("(2+2cos)^2")?,
        };
        let report = run_integral(
            &z,
            n,
            args.dr,
            args.dp,
            args.cycle.into(),
            args.tol,
            args.max_iter,
        )?;
        match args.out {
            OutFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
            OutFormat::Csv => {
                println!("n,cycle,iterations,converged");
                println!(
                    "{},{:?},{},{}",
                    n,
                    args.cycle,
                    report.iterations,
                    report.converged
                );
            }
        }
        return Ok(if report.converged { 0 } else { 2 });
    }

    Err(symgrid::Error::ParseError(
        "nothing to do: pass --experiment, --n, or --analyze-only (see --help)".into(),
    ))
}

fn main() {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}
