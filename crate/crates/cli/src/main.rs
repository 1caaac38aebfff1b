use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use etale_cli::{run_cli, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version requests are not errors
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let (text, code) = run_cli(&cli);
    let _ = std::io::stdout().write_all(text.as_bytes());
    ExitCode::from(code as u8)
}
