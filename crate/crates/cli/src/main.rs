use std::io::Write;
use std::process::ExitCode;

use catlab::args::Cli;
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = catlab::dispatch(&cli, &mut out, &mut err);
    let _ = out.flush();
    ExitCode::from(code as u8)
}
