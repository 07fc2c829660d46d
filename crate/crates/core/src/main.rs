use std::io;
use std::process::ExitCode;

use clap::Parser;
use fourcsp::cli::{run, RunConfig, EXIT_ERROR};

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(config) => config,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR as u8 } else { 0 });
        }
    };
    let code = run(&config, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
