use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use zetascope::pipeline::{analyze, Analysis, PipelineOptions};
use zetascope::problem::Problem;
use zetascope::rational::parse_rational;
use zetascope::report;
use zetascope::verify::{verify, Verification};
use zetascope::Error;

#[derive(Parser)]
#[command(name = "zetascope", version, about = "Poles and leading coefficients of local zeta functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis: polyhedron, fan, poles, certificates and deepest coefficients.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Also run the numerical oracle.
        #[arg(long)]
        verify: bool,
    },
    /// Candidate poles with profiles and vanishing certificates only.
    Poles {
        #[command(flatten)]
        common: Common,
    },
    /// Deepest coefficients of a single pole.
    Coeff {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        pole: usize,
    },
    /// Numerical verification of one pole, or of the first few.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        pole: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Problem file (JSON).
    file: PathBuf,
    /// Enumeration depth as a rational `p/q`.
    #[arg(long)]
    depth: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    seed: Option<u64>,
    /// Quadrature tolerance for verification.
    #[arg(long)]
    tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Error(Error),
    Io(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Error(Error::Precondition { .. }) => 2,
        Failure::Verification(_) => 3,
        _ => 1,
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("ZETASCOPE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn load(common: &Common) -> Result<Problem, Failure> {
    let text = std::fs::read_to_string(&common.file)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", common.file.display())))?;
    Ok(Problem::parse(&text)?)
}

fn emit(common: &Common, analysis: &Analysis, verification: Option<&Verification>) -> Result<(), Failure> {
    let body = match common.format {
        Format::Json => report::to_json(&report::build(analysis, verification)),
        Format::Text => report::to_text(analysis, verification),
    };
    match &common.out {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (common, skip_coefficients, pole, check, verify_pole) = match &cli.command {
        Command::Analyze { common, verify } => (common, false, None, *verify, None),
        Command::Poles { common } => (common, true, None, false, None),
        Command::Coeff { common, pole } => (common, false, Some(*pole), false, None),
        Command::Verify { common, pole } => (common, false, None, true, *pole),
    };
    let problem = load(common)?;
    let opts = PipelineOptions {
        depth: common.depth.as_deref().map(parse_rational).transpose()?,
        seed: common.seed,
        skip_coefficients,
        pole,
    };
    let analysis = analyze(&problem, &opts)?;
    let wants_verify = check || problem.spec.options.verify && matches!(cli.command, Command::Analyze { .. });
    let verification = if wants_verify {
        let tol = common.tol.unwrap_or(problem.spec.options.tolerance);
        Some(verify(&analysis, verify_pole, tol)?)
    } else {
        None
    };
    emit(common, &analysis, verification.as_ref())?;
    if let Some(v) = &verification {
        if !v.passed() {
            let failed: Vec<&str> = v.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            return Err(Failure::Verification(failed.join(", ")));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Error(e) => eprintln!("error: {e}"),
                Failure::Io(m) => eprintln!("error: {m}"),
                Failure::Verification(m) => eprintln!("verification failed: {m}"),
            }
            ExitCode::from(exit_code(&f))
        }
    }
}
