use std::process::ExitCode;

use clap::Parser;
use su3sp::args::Cli;

fn main() -> ExitCode {
    let cfg = Cli::parse().into_config();
    let (report, status) = su3sp::run(&cfg);
    if let Err(e) = su3sp::emit(&report, cfg.out.as_deref()) {
        eprintln!("su3sp: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(status.exit_code())
}
