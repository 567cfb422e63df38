use clap::error::ErrorKind;
use clap::Parser;

use demistack::cli::{self, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => cli::EXIT_INPUT_ERROR,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    std::process::exit(cli::dispatch(cli));
}
