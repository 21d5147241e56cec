use std::fs::File;
use std::io::{self, BufWriter};
use std::process::ExitCode;

use clap::Parser;
use crossnorm_cli::{
    configure_threads, runner, Args, Report, SuiteConfig, EXIT_IO, EXIT_USAGE, EXIT_VIOLATION,
};

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let cfg = match SuiteConfig::from_args(args).and_then(|c| configure_threads().map(|_| c)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let records = match runner::run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let format = cfg.format;
    let out = cfg.out.clone();
    let report = Report::new(cfg, records);
    let written = match &out {
        Some(path) => File::create(path).and_then(|f| report.write(BufWriter::new(f), format)),
        None => report.write(io::stdout().lock(), format),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_IO as u8);
    }
    for line in report.summary_lines() {
        eprintln!("{line}");
    }
    if report.gating_violations() > 0 {
        ExitCode::from(EXIT_VIOLATION as u8)
    } else {
        ExitCode::SUCCESS
    }
}
