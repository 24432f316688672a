use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use sgad_cli::{run, Args, CliError};

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&args).and_then(|r| emit(&args, &r.text).map(|_| r.certified)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("sgad: one or more values failed certification (see certified column)");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("sgad: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn emit(args: &Args, text: &str) -> Result<(), CliError> {
    match &args.opts.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
