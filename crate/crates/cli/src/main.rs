use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use semifree::invariants::Statement;
use semifree_cli::job::{parse_job, parse_module, parse_switching, Command};
use semifree_cli::report::Report;
use semifree_cli::run::{is_failure, run, Overrides, RunError};

const USAGE: u8 = 1;
const COMPUTATION: u8 = 2;
const VERIFICATION_FAILED: u8 = 3;

/// Exact models, deviations and Betti numbers of connected-graded dg-algebras.
#[derive(Parser, Debug)]
#[command(name = "semifree", version)]
struct Cli {
    /// Also write the report as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Worker threads for bidegree computations.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug)]
struct JobArg {
    /// Job file.
    job: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run the task named in the job's [task] block.
    Run(JobArg),
    /// Deviations eps_{i,j} of the residue field.
    Deviations(JobArg),
    /// Variables of the acyclic closure.
    AcyclicClosure(JobArg),
    /// Minimal model of the cover (rings) or of the unit map.
    MinimalModel {
        #[command(flatten)]
        job: JobArg,
        /// Switching degree: an integer, or `inf` for a minimal model.
        #[arg(long = "switch", value_name = "S", value_parser = parse_switching)]
        switching: Option<semifree::model::Switching>,
    },
    /// Betti numbers of the residue field or of a presented module.
    Betti {
        #[command(flatten)]
        job: JobArg,
        /// File with a [module] block over the job's base.
        #[arg(long, value_name = "PATH")]
        module: Option<PathBuf>,
    },
    /// Poincare series of the residue field.
    Poincare {
        #[command(flatten)]
        job: JobArg,
        #[arg(long, value_name = "N")]
        order: Option<usize>,
    },
    /// Growth of the Betti numbers of the residue field.
    Classify(JobArg),
    /// Check one comparison or vanishing statement on the job's algebra.
    Verify {
        #[command(flatten)]
        job: JobArg,
        #[arg(long, value_name = "ID", value_parser = |s: &str| s.parse::<Statement>().map_err(|e| e.to_string()))]
        statement: Option<Statement>,
        /// Switching degree for switching-compare.
        #[arg(long = "switch", value_name = "S", value_parser = parse_switching)]
        switching: Option<semifree::model::Switching>,
        /// Base variable used by koszul-shift.
        #[arg(long, value_name = "NAME")]
        koszul_variable: Option<String>,
    },
}

fn job_name(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn execute(cli: Cli) -> Result<Report, (u8, String)> {
    let usage = |m: String| (USAGE, m);
    let mut overrides = Overrides::default();
    let (path, command, module) = match cli.command {
        Cmd::Run(j) => (j.job, None, None),
        Cmd::Deviations(j) => (j.job, Some(Command::Deviations), None),
        Cmd::AcyclicClosure(j) => (j.job, Some(Command::AcyclicClosure), None),
        Cmd::Classify(j) => (j.job, Some(Command::Classify), None),
        Cmd::MinimalModel { job, switching } => {
            overrides.switching = switching;
            (job.job, Some(Command::MinimalModel), None)
        }
        Cmd::Betti { job, module } => (job.job, Some(Command::Betti), module),
        Cmd::Poincare { job, order } => {
            overrides.order = order;
            (job.job, Some(Command::Poincare), None)
        }
        Cmd::Verify {
            job,
            statement,
            switching,
            koszul_variable,
        } => {
            overrides.statement = statement;
            overrides.switching = switching;
            overrides.koszul_variable = koszul_variable;
            (job.job, Some(Command::Verify), None)
        }
    };
    let job = parse_job(&path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if let Some(m) = module {
        overrides.module = Some(parse_module(&m, job.base().clone()).map_err(|e| usage(format!("{}: {e}", m.display())))?);
    }
    let command = command
        .or(job.task.command)
        .ok_or_else(|| usage(format!("{}: no command given and no `command =` in [task]", path.display())))?;
    run(&job, &job_name(&path), command, overrides).map_err(|e| match e {
        RunError::Usage(m) => (USAGE, m),
        RunError::Kernel(k) => (COMPUTATION, k.to_string()),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            return fail(USAGE, "--threads must be at least 1");
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return fail(USAGE, e);
        }
    }
    let json = cli.json.clone();
    let report = match execute(cli) {
        Ok(r) => r,
        Err((code, m)) => return fail(code, m),
    };
    print!("{}", report.to_text());
    if let Some(path) = json {
        if let Err(e) = std::fs::write(&path, report.to_json()) {
            return fail(COMPUTATION, format!("{}: {e}", path.display()));
        }
    }
    if is_failure(&report) {
        ExitCode::from(VERIFICATION_FAILED)
    } else {
        ExitCode::SUCCESS
    }
}
