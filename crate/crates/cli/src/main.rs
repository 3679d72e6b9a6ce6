use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(opilab_cli::run())
}
