use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

mod args;
mod run;

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(run::USAGE),
            };
        }
    };
    match run::run(&cli) {
        Ok(out) => {
            print!("{}", out.report);
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(run::USAGE)
        }
    }
}
