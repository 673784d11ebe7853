use std::io::Write;
use std::process::ExitCode;

use digraph_shapley_cli::{configure_threads, parse_args, run, THREADS_ENV};

fn main() -> ExitCode {
    let config = match parse_args(std::env::args_os()) {
        Ok(config) => config,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let threads = std::env::var(THREADS_ENV).ok();
    let result = configure_threads(threads.as_deref()).and_then(|()| run(&config));
    match result {
        Ok(report) => {
            let _ = std::io::stdout().write_all(report.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
