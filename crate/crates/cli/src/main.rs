mod args;
mod commands;
mod config;
mod error;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};

use args::Cli;
use commands::{command_name, run, Output};
use error::{CliError, CliResult};

/// Environment variable naming the default output directory.
const OUT_DIR_ENV: &str = "ZIGZAG_OUT_DIR";

fn parse_args() -> CliResult<Cli> {
    let argv: Vec<OsString> = std::env::args_os().collect();
    let argv = match config::find_config(&argv) {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|source| CliError::Input {
                path: path.clone(),
                source,
            })?;
            let entries = config::parse_config(&path, &text)?;
            config::inject(argv, &entries, &path)?
        }
        None => argv,
    };
    let matches = command().try_get_matches_from(argv).map_err(|e| {
        if e.use_stderr() {
            CliError::Usage(e.render().to_string())
        } else {
            // Help and version requests.
            let _ = e.print();
            std::process::exit(0);
        }
    })?;
    Cli::from_arg_matches(&matches).map_err(|e| CliError::Usage(e.render().to_string()))
}

/// Every subcommand accepts negative numbers, and a repeated flag keeps
/// its last value so command-line flags override config entries.
fn command() -> clap::Command {
    Cli::command().mut_subcommands(|s| s.allow_negative_numbers(true).args_override_self(true))
}

fn destination(cli: &Cli, ext: &str) -> Option<PathBuf> {
    let dir = cli
        .out_dir
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from));
    match (&cli.output, dir) {
        (Some(file), Some(dir)) => Some(dir.join(file)),
        (Some(file), None) => Some(file.clone()),
        (None, Some(dir)) => Some(dir.join(format!("{}.{ext}", command_name(&cli.command)))),
        (None, None) => None,
    }
}

fn emit(cli: &Cli, out: &Output) -> CliResult<()> {
    match destination(cli, out.extension) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|source| CliError::Output {
                    path: path.clone(),
                    source,
                })?;
            }
            std::fs::write(&path, &out.body).map_err(|source| CliError::Output { path, source })
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(out.body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Output {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn execute() -> CliResult<()> {
    let cli = parse_args()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(CliError::Usage("--workers must be at least 1".to_string()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let out = pool.install(|| run(&cli.command))?;
    emit(&cli, &out)
}

fn main() -> ExitCode {
    match execute() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string();
            let msg = msg.trim_end();
            if msg.starts_with("error:") {
                eprintln!("{msg}");
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
