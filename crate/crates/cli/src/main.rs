use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use clalg::gb::DEFAULT_SPAIR_BUDGET;
use clalg_cli::{exit_code, run_script, to_json, to_text, Flags, DEFAULT_EMAX};

/// Runs a session script and prints one report per command.
///
/// Exit codes: 0 all verdicts delivered, 1 unreadable or invalid script,
/// 2 some verdict UNKNOWN, 3 a resource budget ran out.
#[derive(Parser, Debug)]
#[command(name = "clalg", version)]
struct Cli {
    /// Script file; reads standard input when omitted or `-`.
    script: Option<PathBuf>,
    /// Frobenius bound for tight closures without an explicit `e_max`.
    #[arg(long, default_value_t = DEFAULT_EMAX)]
    emax: u32,
    /// S-pair budget per command.
    #[arg(long, env = "CLALG_BUDGET", default_value_t = DEFAULT_SPAIR_BUDGET)]
    budget: u64,
    /// Base seed for randomized instances.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Run independent commands concurrently; report order is unchanged.
    #[arg(long)]
    parallel: bool,
    /// Include wall-clock time per command.
    #[arg(long)]
    timing: bool,
    /// Print the parsed script in canonical form and exit.
    #[arg(long)]
    print: bool,
}

fn read_script(path: &Option<PathBuf>) -> std::io::Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match read_script(&cli.script) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("clalg: cannot read script: {e}");
            return ExitCode::from(1);
        }
    };
    if cli.print {
        return match clalg_cli::parse(&text) {
            Ok(s) => {
                print!("{s}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("clalg: {e}");
                ExitCode::from(1)
            }
        };
    }
    let flags = Flags {
        emax: cli.emax,
        budget: cli.budget,
        seed: cli.seed,
        parallel: cli.parallel,
        timing: cli.timing,
    };
    let reports = match run_script(&text, &flags) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("clalg: {e}");
            return ExitCode::from(1);
        }
    };
    let out = if cli.json {
        to_json(&reports)
    } else {
        to_text(&reports)
    };
    print!("{out}");
    ExitCode::from(exit_code(&reports) as u8)
}
