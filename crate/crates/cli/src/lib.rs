//! Command-line front end: parses JSON documents, runs the law checks and
//! searches from `regcat-core`, and writes reports and catalogs.
//!
//! Exit codes: 0 when every law holds, 1 on a law violation, 2 on malformed
//! input, 3 when a search exceeds its bound.

pub mod commands;
pub mod report;
pub mod schema;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use regcat_core::{Backend, RegularityMode};

pub use commands::{CliError, CommandKind, Overrides};
pub use report::{Format, Report};

#[derive(Debug, Parser)]
#[command(name = "regcat", version, about = "Check regularity laws on finite categorical data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every law that applies to the input.
    Check(RunArgs),
    /// Enumerate solutions (YBE braidings, generalized inverses, regular
    /// cycles, transition maps) and write a catalog.
    Search(RunArgs),
    /// Build the regularization 2-category of a category.
    Regularize {
        #[command(flatten)]
        args: RunArgs,
        /// Cycle length.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Rewrite a document in canonical form.
    Fmt {
        /// Input file, or `-` for stdin.
        input: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Input file, or `-` for stdin.
    pub input: PathBuf,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Maximum number of candidates any search may visit.
    #[arg(long)]
    pub bound: Option<u64>,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<RegularityMode>,
    /// Expected backend; a document with another backend is rejected.
    #[arg(long, value_parser = parse_backend)]
    pub backend: Option<Backend>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Report destination; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Catalog destination; defaults to `<output>.catalog.json`.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<RegularityMode, String> {
    match s {
        "stated" => Ok(RegularityMode::Stated),
        "all-rotations" | "all_rotations" => Ok(RegularityMode::AllRotations),
        _ => Err(format!("unknown mode {s:?}; expected stated or all-rotations")),
    }
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    match s {
        "finmap" => Ok(Backend::FinMap),
        "rat" => Ok(Backend::Rat),
        "super" => Ok(Backend::Super),
        _ => Err(format!("unknown backend {s:?}; expected finmap, rat or super")),
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    let io = |e: std::io::Error| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map_err(io)?;
        Ok(buf)
    } else {
        std::fs::read(path).map_err(io)
    }
}

/// Writes through a temporary file in the target directory so readers never
/// see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn catalog_path(args: &RunArgs) -> Option<PathBuf> {
    args.catalog.clone().or_else(|| {
        args.output.as_ref().map(|o| {
            let mut s = o.as_os_str().to_owned();
            s.push(".catalog.json");
            PathBuf::from(s)
        })
    })
}

fn execute(command: CommandKind, args: &RunArgs, n: Option<usize>, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let bytes = read_input(&args.input)?;
    let over = Overrides {
        n_max: n.or(args.n_max),
        bound: args.bound,
        mode: args.mode,
        backend: args.backend,
        seed: args.seed,
    };
    let outcome = commands::run(command, &bytes, &over)?;
    if let (Some(text), Some(path)) = (&outcome.artifact, catalog_path(args)) {
        write_atomic(&path, text.as_bytes())?;
    }
    let rendered = outcome.report.render(args.format);
    match &args.output {
        Some(path) => write_atomic(path, rendered.as_bytes())?,
        None => stdout.write_all(rendered.as_bytes()).map_err(|e| CliError::Io {
            path: "stdout".into(),
            message: e.to_string(),
        })?,
    }
    Ok(if outcome.report.passed() { 0 } else { 1 })
}

fn format_document(input: &Path, output: Option<&Path>, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let bytes = read_input(input)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| CliError::Input(format!("input is not UTF-8: {e}")))?;
    let canonical = schema::parse(text)?.to_canonical();
    match output {
        Some(p) => write_atomic(p, canonical.as_bytes())?,
        None => stdout.write_all(canonical.as_bytes()).map_err(|e| CliError::Io {
            path: "stdout".into(),
            message: e.to_string(),
        })?,
    }
    Ok(0)
}

/// Runs a parsed command line and returns the process exit code. Errors are
/// written to `stderr`.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Check(a) => execute(CommandKind::Check, a, None, stdout),
        Command::Search(a) => execute(CommandKind::Search, a, None, stdout),
        Command::Regularize { args, n } => execute(CommandKind::Regularize, args, *n, stdout),
        Command::Fmt { input, output } => format_document(input, output.as_deref(), stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "regcat: {e}");
            e.exit_code()
        }
    }
}
