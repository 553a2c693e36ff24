use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qj_cli::{configure_threads, execute, exit_code, render, Cli, Format};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = configure_threads(std::env::var("QJ_THREADS").ok().as_deref()).and_then(|_| execute(&cli));
    let code = exit_code(&outcome);
    if let (Err(d), Format::Text) = (&outcome, cli.format) {
        eprintln!("error [{}]: {}", d.kind, d.message);
    } else {
        let _ = std::io::stdout().write_all(render(&outcome, cli.format).as_bytes());
    }
    ExitCode::from(code as u8)
}
