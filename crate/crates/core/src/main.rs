use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use qforms::artifact::{render_latex, render_text, CompiledArtifact, InputSpec};
use qforms::error::Error;
use qforms::form_one::{BandExponent, Form1Options};
use qforms::semantics::{
    bundled, compile_set, growth_csv, growth_report, growth_text, run_equivalence_suite, CompiledSet,
    FormSelection, SuiteConfig,
};

#[derive(Parser)]
#[command(name = "qforms", version, about = "Compile Diophantine representations into forms (1) and (2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a source equation R(a, h1..hδ) = 0.
    Compile(CompileArgs),
    /// Check a compiled artifact against the brute-force oracle.
    Verify(VerifyArgs),
    /// Degree, term and coefficient statistics for compiled artifacts.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Json,
    Latex,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum BandArg {
    Next,
    Previous,
}

#[derive(clap::Args)]
struct CompileArgs {
    /// Set name; a bundled name (even, squares, composites, full) also
    /// supplies --delta and --expr.
    #[arg(long)]
    set: Option<String>,
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long)]
    expr: Option<String>,
    /// JSON file holding an input spec or a compiled artifact.
    #[arg(long, conflicts_with_all = ["set", "delta", "expr"])]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "both")]
    form: FormArg,
    #[arg(long, value_enum, default_value = "json")]
    emit: Emit,
    /// Divisor exponent of the digit bands. `previous` exists to exercise
    /// the verifier.
    #[arg(long, value_enum, default_value = "next")]
    band_exponent: BandArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long)]
    artifact: PathBuf,
    #[arg(long, default_value_t = 50)]
    a_max: u64,
    #[arg(long, default_value_t = 25)]
    h_bound: u64,
    #[arg(long, default_value_t = 16)]
    bc_samples: usize,
    #[arg(long, default_value = "1000000")]
    naive_cap: BigInt,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
    /// Print the membership table.
    #[arg(long)]
    verbose: bool,
    /// Write the report as JSON here instead of printing text.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Csv,
    Json,
}

#[derive(clap::Args)]
struct ReportArgs {
    #[arg(long, num_args = 0..)]
    artifact: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
}

/// Failure of a command, with the exit status it maps to.
enum Failure {
    Input(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_artifact(path: &Path) -> Result<CompiledSet, Failure> {
    let art = CompiledArtifact::from_json(&read(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    art.into_set().map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn input_spec(args: &CompileArgs) -> Result<InputSpec, Failure> {
    if let Some(path) = &args.input {
        let text = read(path)?;
        if let Ok(art) = serde_json::from_str::<CompiledArtifact>(&text) {
            return Ok(art.input);
        }
        return serde_json::from_str::<InputSpec>(&text)
            .map_err(|e| Failure::Input(format!("{}: not an input spec or artifact: {e}", path.display())));
    }
    let known = args.set.as_deref().and_then(bundled);
    let set_name = args.set.clone().unwrap_or_else(|| "unnamed".into());
    let delta = args.delta.or(known.map(|k| k.delta));
    let expression = args.expr.clone().or(known.map(|k| k.expression.to_string()));
    match (delta, expression) {
        (Some(delta), Some(expression)) => Ok(InputSpec { set_name, delta, expression }),
        _ => Err(Failure::Input("need --delta and --expr, a bundled --set, or --input".into())),
    }
}

fn compile(args: CompileArgs) -> Result<(), Failure> {
    let spec = input_spec(&args)?;
    let forms = match args.form {
        FormArg::One => FormSelection::One,
        FormArg::Two => FormSelection::Two,
        FormArg::Both => FormSelection::Both,
    };
    let band_exponent = match args.band_exponent {
        BandArg::Next => BandExponent::Next,
        BandArg::Previous => BandExponent::Previous,
    };
    let set = compile_set(&spec.set_name, spec.delta, &spec.expression, forms, Form1Options { band_exponent })?;
    let text = match args.emit {
        Emit::Json => CompiledArtifact::from_set(&set).to_json(),
        Emit::Latex => render_latex(&set),
        Emit::Text => render_text(&set),
    };
    write_out(args.out.as_deref(), &text)
}

fn verify(args: VerifyArgs) -> Result<(), Failure> {
    let set = load_artifact(&args.artifact)?;
    let config = SuiteConfig {
        a_max: args.a_max,
        h_bound: args.h_bound,
        bc_samples: args.bc_samples,
        naive_cap: args.naive_cap,
        seed: args.seed,
        jobs: args.jobs,
    };
    let report = run_equivalence_suite(&set, &config);
    match &args.out {
        Some(path) => {
            let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            write_out(Some(path), &json)?;
            println!("{} {}", if report.passed() { "PASS" } else { "FAIL" }, report.set_name);
        }
        None => {
            print!("{}", report.to_text());
            if args.verbose {
                println!("  a  oracle  form1  form2");
                let show = |v: Option<bool>| v.map_or("-".to_string(), |b| b.to_string());
                for row in &report.membership {
                    println!("  {:<3}{:<8}{:<7}{}", row.a, row.oracle, show(row.form1), show(row.form2));
                }
            }
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn report(args: ReportArgs) -> Result<(), Failure> {
    let sets = args.artifact.iter().map(|p| load_artifact(p)).collect::<Result<Vec<_>, _>>()?;
    let rows = growth_report(&sets);
    let text = match args.format {
        ReportFormat::Text => growth_text(&rows),
        ReportFormat::Csv => growth_csv(&rows),
        ReportFormat::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
    };
    write_out(None, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compile(args) => compile(args),
        Command::Verify(args) => verify(args),
        Command::Report(args) => report(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
