use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(qgauge::cli::run(std::env::args_os()))
}
