use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hyperbound::verifier::{export_triangulation, run_pipeline, Options, Selector, CHECKS};

#[derive(Parser)]
#[command(
    name = "hyperbound",
    version,
    about = "Exact combinatorial verifier for a 24-cell manifold construction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check and print the report.
    Verify {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write a triangulation (large, small or example-doubled) to a file.
        #[arg(long, num_args = 2, value_names = ["SELECTOR", "PATH"])]
        export: Option<Vec<String>>,
        /// List check ids and claims without running them.
        #[arg(long)]
        list_checks: bool,
        /// Remove the named map from the pairing rule.
        #[arg(long, hide = true, value_name = "MAP")]
        corrupt_drop_pairing: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

const USAGE_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let Command::Verify {
        format,
        export,
        list_checks,
        corrupt_drop_pairing,
    } = cli.command;

    if list_checks {
        let mut listing = String::new();
        for c in CHECKS {
            let criterion = c.criterion.map_or_else(|| "-".to_string(), |n| n.to_string());
            listing.push_str(&format!("{:<24} {:>2}  {}\n", c.id, criterion, c.claim));
        }
        emit(&listing);
        return ExitCode::SUCCESS;
    }

    if let Some(args) = export {
        let selector: Selector = match args[0].parse() {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(USAGE_ERROR);
            }
        };
        let path = PathBuf::from(&args[1]);
        if let Err(e) = export_triangulation(selector, &path) {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
        eprintln!("wrote {}", path.display());
    }

    let report = run_pipeline(&Options {
        drop_pairing: corrupt_drop_pairing,
    });
    match format {
        Format::Text => emit(&report.to_text()),
        Format::Json => emit(&report.to_json()),
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

/// Writes to stdout, tolerating a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}
