use clap::Parser;
use lietrace_cli::{emit, exit_code, run, Cli, ERROR_EXIT};

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { ERROR_EXIT } else { 0 });
        }
    };
    let code = match run(&cli, argv).and_then(|report| {
        emit(&report, cli.format, cli.output.as_deref())?;
        Ok(report.verdict)
    }) {
        Ok(verdict) => exit_code(verdict),
        Err(e) => {
            eprintln!("error: {e}");
            ERROR_EXIT
        }
    };
    std::process::exit(code);
}
