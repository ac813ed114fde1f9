use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kamforge::cli::{render, run_scenario, selftest_report, summary, write_atomic, SelftestOptions};

#[derive(Parser)]
#[command(name = "kamforge", version, about = "KAM normal forms, small denominators and Lie iterations")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a JSON scenario file and emit its report.
    Run {
        scenario: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Negate every bracket the suite computes (mutation fixture).
        #[arg(long, hide = true)]
        mutate_bracket_sign: bool,
    },
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match args.command {
        Command::Run { scenario, out } => match run_scenario(&scenario, out.as_deref()) {
            Ok(outcome) => {
                if out.is_some() {
                    eprint!("{}", summary(&outcome.report));
                } else {
                    print!("{}", render(&outcome.report));
                }
                code(outcome.exit_code())
            }
            Err(e) => {
                eprintln!("kamforge: {e}");
                code(e.exit_code())
            }
        },
        Command::Selftest { seed, out, mutate_bracket_sign } => {
            let report = selftest_report(&SelftestOptions { seed, mutate_bracket_sign });
            let ok = report["status"] == "ok";
            match out {
                Some(path) => {
                    if let Err(e) = write_atomic(&path, &render(&report)) {
                        eprintln!("kamforge: {e}");
                        return code(e.exit_code());
                    }
                    eprint!("{}", summary(&report));
                }
                None => print!("{}", render(&report)),
            }
            code(if ok { 0 } else { 1 })
        }
    }
}
