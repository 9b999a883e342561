mod args;
mod error;
mod measure;
mod run;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::error::CliError;
use crate::run::{parse_budget, Env, BUDGET_VAR};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let budget = match parse_budget(std::env::var(BUDGET_VAR).ok().as_deref()) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let (mut stdin, mut stderr) = (io::stdin().lock(), io::stderr().lock());
    let mut env = Env {
        stdin: &mut stdin,
        stderr: &mut stderr,
        budget,
    };
    let mut out = io::stdout().lock();
    match run::run(&cli, &mut env, &mut out).and_then(|()| Ok(out.flush()?)) {
        Ok(()) => ExitCode::SUCCESS,
        // output piped into something like `head`
        Err(CliError::Write(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
